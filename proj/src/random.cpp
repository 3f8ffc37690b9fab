#include "ffif/random.hpp"

#include <vector>

namespace ffif {

FuzzyNumber random_fuzzy_number(Rng& rng, const GridPtr& grid, double magnitude) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t m = grid->size();
  const double center = magnitude * (2.0 * unit(rng) - 1.0);
  const double core = 0.25 * magnitude * unit(rng);
  std::vector<double> lo(m), hi(m);

  if (unit(rng) < 0.5) {
    const double left = magnitude * unit(rng);
    const double right = magnitude * unit(rng);
    for (std::size_t k = 0; k < m; ++k) {
      const double lam = (*grid)[k];
      lo[k] = center - core - (1.0 - lam) * left;
      hi[k] = center + core + (1.0 - lam) * right;
    }
  } else {
    // Irregular shape: random nonnegative steps accumulated from the core outwards.
    lo[m - 1] = center - core;
    hi[m - 1] = center + core;
    const double step = magnitude / static_cast<double>(m);
    for (std::size_t k = m - 1; k-- > 0;) {
      lo[k] = lo[k + 1] - step * 2.0 * unit(rng);
      hi[k] = hi[k + 1] + step * 2.0 * unit(rng);
    }
  }
  return FuzzyNumber(grid, std::move(lo), std::move(hi));
}

}  // namespace ffif
