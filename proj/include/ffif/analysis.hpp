#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "ffif/fif.hpp"
#include "ffif/ifs.hpp"
#include "ffif/scalar_fif.hpp"

namespace ffif {

/// A = max over data of |u_i^-(0)|, |u_i^+(0)|; bounds every level endpoint.
double data_bound(const FuzzyDataSet& data);

enum class HoelderCase { DeltaLt1, DeltaEq1, DeltaGt1 };

std::string_view to_string(HoelderCase c) noexcept;

/// Certified Hölder constants of the fuzzy FIF derived from the IFS geometry.
struct HoelderReport {
  double A = 0.0;
  double rho = 0.0;
  double c_min = 0.0;
  double c_max = 0.0;
  double s = 0.0;
  double delta = 0.0;
  double alpha = 0.0;
  double M = 0.0;
  double tau = 1.0;
  double Q = 0.0;
  double K = 0.0;
  double H_f = 0.0;
  HoelderCase regime = HoelderCase::DeltaLt1;
};

/// |δ - 1| at or below this counts as the boundary case δ = 1.
inline constexpr double kDeltaEqualityTolerance = 1e-12;

/// Constants for s = max s_k, δ = s/c_min:
///   α = (ρ·c_max·|I| + (1+s)·A)/(1-s),  M = max{2α/(c_min·|I|), ρ},
///   δ < 1: τ = 1, Q = M/(1-δ)
///   δ = 1: τ = tau_for_boundary, Q = M·(1 + 1/(|ln c_max|·(1-τ)·e))·max{1, |I|}
///   δ > 1: τ = 1 + ln δ / ln c_max, Q = M·δ/(δ-1)·max{1, |I|}
/// and K = H_f = 2nQ.
///
/// Throws ScaleOutOfRange (s ≥ 1), InvalidTauChoice (boundary case with τ ∉ (0,1))
/// and NonPositiveExponent when the δ > 1 formula gives τ ≤ 0.
HoelderReport hoelder_constants(const IfsSystem& sys, double A, double rho,
                                double tau_for_boundary = 0.9);

struct HoelderVerdict {
  std::size_t pairs = 0;
  std::size_t violations = 0;
  /// max d_∞(f(x), f(x'))/|x - x'|^τ over the checked pairs.
  double max_ratio = 0.0;
  double worst_x = 0.0;
  double worst_xp = 0.0;
  bool pass = false;
};

/// Checks d_∞(f(x), f(x')) ≤ H_f·|x - x'|^τ + 2·tol on seeded random pairs plus
/// adversarial ones: dyadic neighbours at every scale and pairs straddling knots.
HoelderVerdict verify_hoelder_bound(const FuzzyFif& fif, const HoelderReport& report,
                                    std::size_t pairs, std::uint64_t seed);

struct EmpiricalHoelder {
  std::vector<double> scales;
  std::vector<double> oscillations;
  double fitted_exponent = 0.0;
  /// Root-mean-square residual of the log-log fit.
  double fit_residual = 0.0;
};

/// Oscillation ω(h) = max_x d_∞(f(x), f(x+h)) over the samples for
/// h = |I|·2^-j, j = 3..3+num_scales, and the least-squares slope of log ω vs log h.
EmpiricalHoelder estimate_exponent(const FuzzyFif& fif, std::size_t num_scales);

struct LevelGap {
  double lambda = 0.0;
  double gap_lower = 0.0;
  double gap_upper = 0.0;
  /// Scalar matching residual of the level data with q^∓(λ).
  double matching_lower = 0.0;
  double matching_upper = 0.0;
  bool matching_ok = false;

  double gap() const noexcept { return gap_lower > gap_upper ? gap_lower : gap_upper; }
};

struct LevelEquivalenceOptions {
  double gap_tolerance = 1e-6;
  /// Build the scalar FIFs even when the level data break scalar matching and
  /// report the gap anyway (the verdict still fails).
  bool allow_unmatched = false;
};

struct LevelEquivalenceReport {
  std::vector<LevelGap> levels;
  double tolerance = 0.0;
  bool pass = false;

  double worst_gap() const noexcept;
};

/// Scalar FIFs over P_λ^- and P_λ^+ with q = (q_k(·))^∓(λ), built without
/// fuzzy arithmetic on the same grid size and tolerance as `fif`.
struct ScalarLevelPair {
  ScalarFif lower;
  ScalarFif upper;
};

ScalarLevelPair scalar_level_fifs(const FuzzyFif& fif, double lambda, bool require_matching = true);

/// For each λ, builds scalar FIFs over P_λ^- and P_λ^+ with q = (q_k(·))^∓(λ)
/// independently of the fuzzy engine and measures the sup-norm gap to
/// extract_level(fif, λ). Throws MatchingNotVerified on inconsistent level data
/// unless options.allow_unmatched.
LevelEquivalenceReport check_level_equivalence(const FuzzyFif& fif, std::span<const double> lambdas,
                                               const LevelEquivalenceOptions& options = {});

}  // namespace ffif
