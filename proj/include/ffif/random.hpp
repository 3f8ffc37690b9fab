#pragma once

#include <random>

#include "ffif/fuzzy_number.hpp"

namespace ffif {

using Rng = std::mt19937_64;

/// Random fuzzy number with core center in [-magnitude, magnitude] and spreads up
/// to `magnitude`. Alternates trapezoids and irregular nested level families.
FuzzyNumber random_fuzzy_number(Rng& rng, const GridPtr& grid, double magnitude);

}  // namespace ffif
