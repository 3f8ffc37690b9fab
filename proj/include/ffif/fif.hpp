#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "ffif/fuzzy_number.hpp"
#include "ffif/ifs.hpp"

namespace ffif {

/// Sample abscissae on [x_0, x_n]: each interval gets a uniform sub-grid with a
/// number of steps proportional to its length, so every knot is a grid point.
struct EvaluationGrid {
  std::vector<double> xs;
  /// knot_index[i] is the position of x_i in xs.
  std::vector<std::size_t> knot_index;
};

EvaluationGrid make_evaluation_grid(std::span<const double> knots, std::size_t steps);

/// Position of t within sorted xs: cell c and weight w with t = (1-w)·xs[c] + w·xs[c+1].
/// Weights within 1e-9 of a grid point snap to it (w == 0).
std::pair<std::size_t, double> locate_cell(std::span<const double> xs, double t);

struct RbOptions {
  double tol = 1e-8;
  std::size_t max_depth = 2000;
  std::size_t grid_steps = 1024;
  /// Refuse to iterate when check_matching fails.
  bool require_matching = true;
  double matching_tol = 1e-9;
  /// Upper bound on the address depth used by eval_fif.
  std::size_t eval_depth = 400;
  unsigned workers = 0;
};

/// Sampled fixed point f of the RB operator (Tφ)(x) = s_k·φ(l_k⁻¹(x)) ⊕ q_k(x).
class FuzzyFif {
 public:
  const IfsSystem& system() const noexcept { return *sys_; }
  std::shared_ptr<const IfsSystem> system_ptr() const noexcept { return sys_; }
  const RbOptions& options() const noexcept { return options_; }
  const GridPtr& grid() const noexcept { return sys_->grid(); }

  std::span<const double> xs() const noexcept { return grid_.xs; }
  std::span<const std::size_t> knot_index() const noexcept { return grid_.knot_index; }
  std::size_t sample_count() const noexcept { return grid_.xs.size(); }
  std::span<const double> lower(std::size_t j) const noexcept;
  std::span<const double> upper(std::size_t j) const noexcept;
  FuzzyNumber sample(std::size_t j) const;

  /// Level-wise linear interpolation between neighbouring samples.
  FuzzyNumber sample_at(double x) const;
  void sample_at_into(double x, std::span<double> lo, std::span<double> hi) const;

  /// Iterations m performed and the final displacement D(φ_m, φ_{m-1}).
  std::size_t depth() const noexcept { return displacements_.size(); }
  double residual() const noexcept { return displacements_.empty() ? 0.0 : displacements_.back(); }
  /// D(φ_k, φ_{k-1}) for k = 1..m.
  std::span<const double> displacements() const noexcept { return displacements_; }
  /// A-posteriori bound s/(1-s)·D(φ_m, φ_{m-1}) on D(φ_m, f).
  double error_bound() const noexcept;
  const MatchingReport& matching() const noexcept { return matching_; }
  /// Largest |endpoint| over all samples.
  double magnitude() const noexcept { return magnitude_; }

 private:
  friend FuzzyFif iterate_rb(std::shared_ptr<const IfsSystem>, const RbOptions&,
                             std::optional<std::vector<FuzzyNumber>>);

  std::shared_ptr<const IfsSystem> sys_;
  RbOptions options_;
  EvaluationGrid grid_;
  std::size_t levels_ = 0;
  std::vector<double> lo_, hi_;
  std::vector<double> displacements_;
  MatchingReport matching_;
  double magnitude_ = 0.0;
};

/// Iterates T from `initial` (default: the fuzzy piecewise-linear interpolant of
/// the data) until D(φ_m, φ_{m-1}) ≤ tol·(1-s)/s with s = max s_k.
///
/// Throws MatchingNotVerified when options.require_matching and check_matching
/// fails, NoConvergence when max_depth is exhausted first.
FuzzyFif iterate_rb(std::shared_ptr<const IfsSystem> sys, const RbOptions& options = {},
                    std::optional<std::vector<FuzzyNumber>> initial = std::nullopt);

/// f(x) by unrolling f(x) = s_k·f(l_k⁻¹(x)) ⊕ q_k(x) along the address of x and
/// closing the recursion with the interpolated samples once the accumulated
/// scale makes the remainder negligible.
FuzzyNumber eval_fif(const FuzzyFif& fif, double x);

/// λ-slice of every sample.
struct LevelCurvePair {
  double lambda = 0.0;
  std::vector<double> xs;
  std::vector<double> lower;
  std::vector<double> upper;
};

LevelCurvePair extract_level(const FuzzyFif& fif, double lambda);

}  // namespace ffif
