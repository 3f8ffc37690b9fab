#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "ffif/fuzzy_number.hpp"

namespace ffif {

// Input descriptions of fuzzy numbers. Each kind converts to a FuzzyNumber on a
// given LevelGrid; conversion validates normality, convexity and bounded support.

struct Triangular {
  double a = 0.0, b = 0.0, c = 0.0;
  bool operator==(const Triangular&) const = default;
};

struct Trapezoidal {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
  bool operator==(const Trapezoidal&) const = default;
};

/// μ(y) = exp(-((y - center)/width)²) on [support_lo, support_hi], 0 elsewhere.
struct TruncatedGaussian {
  double center = 0.0, width = 1.0, support_lo = 0.0, support_hi = 0.0;
  bool operator==(const TruncatedGaussian&) const = default;
};

enum class FlankShape {
  Convex,   // μ = ((y-a)/(peak-a))² rising, ((b-y)/(b-peak))² falling
  Concave,  // μ = 1 - ((peak-y)/(peak-a))² rising, 1 - ((y-peak)/(b-peak))² falling
};

struct QuadraticFlank {
  double a = 0.0, peak = 0.0, b = 0.0;
  FlankShape shape = FlankShape::Convex;
  bool operator==(const QuadraticFlank&) const = default;
};

/// Endpoints given directly on an arbitrary level list; resampled linearly in λ
/// when that list differs from the target grid.
struct LevelTable {
  std::vector<double> levels, lower, upper;
  bool operator==(const LevelTable&) const = default;
};

/// μ(y) = Σ_k coeffs[k]·y^k on [from, to].
struct PolynomialPiece {
  double from = 0.0, to = 0.0;
  std::vector<double> coeffs;
  bool operator==(const PolynomialPiece&) const = default;
};

/// Contiguous polynomial pieces, μ = 0 outside; inverted numerically.
struct PiecewiseAnalytic {
  std::vector<PolynomialPiece> pieces;
  bool operator==(const PiecewiseAnalytic&) const = default;
};

using MembershipSpec = std::variant<Triangular, Trapezoidal, TruncatedGaussian, QuadraticFlank,
                                    LevelTable, PiecewiseAnalytic>;

/// Membership degree μ(y). LevelTable specs are evaluated from their level intervals.
double membership(const MembershipSpec& spec, double y);

/// Tightest level intervals {y : μ(y) ≥ λ_k}; the closure of the support at λ = 0.
FuzzyNumber from_membership(const MembershipSpec& spec, const GridPtr& grid);

/// Same construction for an arbitrary membership function supported in [lo, hi],
/// by bisection on the monotone flanks.
FuzzyNumber invert_membership(const std::function<double(double)>& mu, double lo, double hi,
                              const GridPtr& grid);

/// Normality tolerance: max μ ≥ 1 - kNormalityTolerance counts as normal.
inline constexpr double kNormalityTolerance = 1e-9;

}  // namespace ffif
