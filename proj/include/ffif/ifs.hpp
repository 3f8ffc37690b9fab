#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "ffif/fuzzy_number.hpp"

namespace ffif {

/// Knots x_0 < ... < x_n with fuzzy values u_0..u_n on one level grid (n ≥ 2).
class FuzzyDataSet {
 public:
  FuzzyDataSet(std::vector<double> knots, std::vector<FuzzyNumber> values);

  std::span<const double> knots() const noexcept { return knots_; }
  std::span<const FuzzyNumber> values() const noexcept { return values_; }
  /// Number of intervals n.
  std::size_t intervals() const noexcept { return knots_.size() - 1; }
  const GridPtr& grid() const noexcept { return values_.front().grid(); }
  double domain_lo() const noexcept { return knots_.front(); }
  double domain_hi() const noexcept { return knots_.back(); }

 private:
  std::vector<double> knots_;
  std::vector<FuzzyNumber> values_;
};

/// x ↦ slope·x + intercept, mapping [x_0, x_n] onto one sub-interval.
struct AffineMap {
  double slope = 0.0;
  double intercept = 0.0;

  double operator()(double x) const noexcept { return slope * x + intercept; }
  double inverse(double y) const noexcept { return (y - intercept) / slope; }
  double ratio() const noexcept { return slope < 0.0 ? -slope : slope; }
};

/// Maps l_k with l_k(x_0) = x_k and l_k(x_n) = x_{k+1}, k = 0..n-1.
std::vector<AffineMap> build_maps(std::span<const double> knots);

class IfsSystem;

/// The fuzzy-valued maps q_k : [x_k, x_{k+1}] → R_F of the construction.
class QFunction {
 public:
  virtual ~QFunction() = default;

  /// Writes q_k(x) level-wise into lo/hi (one entry per grid level).
  virtual void evaluate(const IfsSystem& sys, std::size_t k, double x, std::span<double> lo,
                        std::span<double> hi) const = 0;
};

/// Default recipe: q_k(x) = b_k(x) ∨_g s_k·g(l_k⁻¹(x)), with b_k the fuzzy linear
/// interpolant of (x_k, u_k), (x_{k+1}, u_{k+1}) and g the one of (x_0, u_0), (x_n, u_n).
class LinearBlendQ final : public QFunction {
 public:
  void evaluate(const IfsSystem& sys, std::size_t k, double x, std::span<double> lo,
                std::span<double> hi) const override;
};

/// User-supplied q_k: fuzzy samples on each interval, linear in x between samples.
class TabulatedQ final : public QFunction {
 public:
  struct Table {
    std::vector<double> xs;
    std::vector<FuzzyNumber> values;
  };

  explicit TabulatedQ(std::vector<Table> tables);

  void evaluate(const IfsSystem& sys, std::size_t k, double x, std::span<double> lo,
                std::span<double> hi) const override;

 private:
  std::vector<Table> tables_;
};

struct IfsOptions {
  std::size_t lipschitz_samples = 1024;
  double lipschitz_safety = 1.25;
};

/// The iterated function system {I × R_F; w_k = (l_k, F_k)} with
/// F_k(x, u) = s_k·u ⊕ q_k(l_k(x)). Immutable once built.
///
/// Interval k (0-based) is [x_k, x_{k+1}); the last one also owns x_n.
class IfsSystem {
 public:
  IfsSystem(FuzzyDataSet data, std::vector<double> scales,
            std::shared_ptr<const QFunction> q = std::make_shared<LinearBlendQ>(),
            IfsOptions options = {});

  const FuzzyDataSet& data() const noexcept { return data_; }
  const GridPtr& grid() const noexcept { return data_.grid(); }
  std::size_t intervals() const noexcept { return maps_.size(); }
  std::span<const AffineMap> maps() const noexcept { return maps_; }
  std::span<const double> scales() const noexcept { return scales_; }
  double domain_lo() const noexcept { return data_.domain_lo(); }
  double domain_hi() const noexcept { return data_.domain_hi(); }
  double domain_length() const noexcept { return domain_hi() - domain_lo(); }

  double s_max() const noexcept { return s_max_; }
  double c_min() const noexcept { return c_min_; }
  double c_max() const noexcept { return c_max_; }

  /// Numerical Lipschitz estimates of each q_k (lower bounds).
  std::span<const double> lipschitz_estimates() const noexcept { return lipschitz_; }
  /// Lipschitz cap ρ = safety · max_k estimate.
  double rho() const noexcept { return rho_; }
  const IfsOptions& options() const noexcept { return options_; }

  /// Interval owning x; throws OutOfDomain outside [x_0, x_n].
  std::size_t interval_of(double x) const;

  void q_into(std::size_t k, double x, std::span<double> lo, std::span<double> hi) const;
  FuzzyNumber q(std::size_t k, double x) const;

  /// F_k(x, u) = s_k·u ⊕ q_k(l_k(x)) for x in [x_0, x_n].
  FuzzyNumber apply_F(std::size_t k, double x, const FuzzyNumber& u) const;

  /// s_k·(u ∨_g g(x)) ⊕ b_k(l_k(x)), the rearranged form of F_k for the
  /// default recipe; exposed for diagnostics only.
  FuzzyNumber apply_F_rearranged(std::size_t k, double x, const FuzzyNumber& u) const;

  /// The same IFS with one vertical scaling factor replaced.
  IfsSystem with_scale(std::size_t k, double s) const;

 private:
  FuzzyDataSet data_;
  std::vector<double> scales_;
  std::shared_ptr<const QFunction> q_;
  IfsOptions options_;
  std::vector<AffineMap> maps_;
  double s_max_ = 0.0;
  double c_min_ = 0.0;
  double c_max_ = 0.0;
  std::vector<double> lipschitz_;
  double rho_ = 0.0;
};

/// Fuzzy linear interpolant of (x_a, u_a), (x_b, u_b) evaluated at x ∈ [x_a, x_b].
void blend_into(double x, double xa, const FuzzyNumber& ua, double xb, const FuzzyNumber& ub,
                std::span<double> lo, std::span<double> hi);

struct MatchingReport {
  double tolerance = 0.0;
  /// d_∞(F_k(x_0, u_0), u_k) per interval.
  std::vector<double> left;
  /// d_∞(F_k(x_n, u_n), u_{k+1}) per interval.
  std::vector<double> right;
  bool pass = false;

  double worst() const noexcept;
};

MatchingReport check_matching(const IfsSystem& sys, double tol = 1e-9);

/// max over adjacent samples of d_∞(q_k(x), q_k(x'))/|x - x'| on [x_k, x_{k+1}].
double estimate_lipschitz(const IfsSystem& sys, std::size_t k, std::size_t samples);

/// θ with d_θ((x,u),(x',u')) = |x - x'| + θ·d_∞(u, u'), and the resulting
/// contraction factors c_{w_k} = max{c_k + θ·L_k·c_k, s_k}.
struct ThetaMetricParams {
  double theta = 0.0;
  std::vector<double> lipschitz;
  std::vector<double> factors;
};

/// Supremum of admissible θ: min over k of (1 - c_k)/(L_k·c_k) with L_k the
/// safety-inflated estimate; +inf when every q_k is constant.
double theta_upper_bound(const IfsSystem& sys);

/// Builds the metric parameters; throws InvalidArgument unless every c_{w_k} < 1.
ThetaMetricParams make_theta_params(const IfsSystem& sys, double theta);

/// θ at the midpoint of the admissible range (θ = 1 when unbounded).
ThetaMetricParams midpoint_theta_params(const IfsSystem& sys);

struct ContractionReport {
  std::size_t trials = 0;
  std::size_t violations = 0;
  std::size_t sandwich_violations = 0;
  /// Largest observed d_θ(w(p), w(p')) - c_w·d_θ(p, p').
  double worst_excess = -1.0;
  bool pass = false;
};

/// Monte-Carlo check that each w_k contracts d_θ with factor c_{w_k}, plus the
/// equivalence sandwich between d_θ and d_max.
ContractionReport verify_theta_contraction(const IfsSystem& sys, const ThetaMetricParams& params,
                                           std::size_t trials, std::uint64_t seed);

double d_theta(double theta, double x, const FuzzyNumber& u, double xp, const FuzzyNumber& up);
double d_max(double x, const FuzzyNumber& u, double xp, const FuzzyNumber& up);

}  // namespace ffif
