#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ffif {

/// q_k(x) for interval k (0-based) and x ∈ [x_k, x_{k+1}].
using ScalarQ = std::function<double(std::size_t, double)>;

struct ScalarFifOptions {
  double tol = 1e-8;
  std::size_t max_depth = 2000;
  std::size_t grid_steps = 1024;
  /// Enforce q_k(x_k) = y_k - s_k·y_0 and q_k(x_{k+1}) = y_{k+1} - s_k·y_n.
  bool require_matching = true;
  double matching_tol = 1e-9;
};

/// Classical real-valued fractal interpolation function
/// f(x) = s_k·f(l_k⁻¹(x)) + q_k(x) on [x_k, x_{k+1}), sampled on a uniform
/// per-interval grid and computed by RB iteration from the piecewise-linear
/// interpolant. Uses no fuzzy arithmetic.
class ScalarFif {
 public:
  ScalarFif(std::vector<double> knots, std::vector<double> y, std::vector<double> scales,
            ScalarQ q, const ScalarFifOptions& options = {});

  std::span<const double> knots() const noexcept { return knots_; }
  std::span<const double> data() const noexcept { return y_; }
  std::span<const double> xs() const noexcept { return xs_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t depth() const noexcept { return depth_; }
  double residual() const noexcept { return residual_; }
  /// max |q-side matching residual| over both endpoints of every interval.
  double matching_residual() const noexcept { return matching_residual_; }

  /// Linear interpolation of the samples.
  double operator()(double x) const;

 private:
  std::vector<double> knots_;
  std::vector<double> y_;
  std::vector<double> scales_;
  ScalarQ q_;
  std::vector<double> xs_;
  std::vector<double> values_;
  std::size_t depth_ = 0;
  double residual_ = 0.0;
  double matching_residual_ = 0.0;
};

ScalarFif scalar_fif(std::vector<double> knots, std::vector<double> y, std::vector<double> scales,
                     ScalarQ q, const ScalarFifOptions& options = {});

}  // namespace ffif
