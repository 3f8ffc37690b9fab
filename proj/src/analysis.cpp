#include "ffif/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "ffif/error.hpp"
#include "ffif/random.hpp"
#include "ffif/scalar_fif.hpp"

namespace ffif {

double data_bound(const FuzzyDataSet& data) {
  double a = 0.0;
  for (const auto& u : data.values()) {
    a = std::max({a, std::abs(u.support().lo), std::abs(u.support().hi)});
  }
  return a;
}

std::string_view to_string(HoelderCase c) noexcept {
  switch (c) {
    case HoelderCase::DeltaLt1: return "delta_lt_1";
    case HoelderCase::DeltaEq1: return "delta_eq_1";
    case HoelderCase::DeltaGt1: return "delta_gt_1";
  }
  return "unknown";
}

HoelderReport hoelder_constants(const IfsSystem& sys, double A, double rho,
                                double tau_for_boundary) {
  HoelderReport r;
  r.A = A;
  r.rho = rho;
  r.c_min = sys.c_min();
  r.c_max = sys.c_max();
  r.s = sys.s_max();
  if (!(r.s < 1.0)) throw Error(ErrorCode::ScaleOutOfRange, "max scaling factor must be < 1");

  const double length = sys.domain_length();
  const double span_factor = std::max(1.0, length);
  const auto n = static_cast<double>(sys.intervals());

  r.delta = r.s / r.c_min;
  r.alpha = (rho * r.c_max * length + (1.0 + r.s) * A) / (1.0 - r.s);
  r.M = std::max(2.0 * r.alpha / (r.c_min * length), rho);

  if (std::abs(r.delta - 1.0) <= kDeltaEqualityTolerance) {
    if (!(tau_for_boundary > 0.0 && tau_for_boundary < 1.0)) {
      throw Error(ErrorCode::InvalidTauChoice,
                  "boundary case needs tau in (0,1), got " + std::to_string(tau_for_boundary));
    }
    r.regime = HoelderCase::DeltaEq1;
    r.tau = tau_for_boundary;
    r.Q = r.M * (1.0 + 1.0 / (std::abs(std::log(r.c_max)) * (1.0 - r.tau) * std::numbers::e)) *
          span_factor;
  } else if (r.delta < 1.0) {
    r.regime = HoelderCase::DeltaLt1;
    r.tau = 1.0;
    r.Q = r.M / (1.0 - r.delta);
  } else {
    r.regime = HoelderCase::DeltaGt1;
    r.tau = 1.0 + std::log(r.delta) / std::log(r.c_max);
    if (!(r.tau > 0.0)) {
      throw Error(ErrorCode::NonPositiveExponent,
                  "exponent 1 + ln(delta)/ln(c_max) = " + std::to_string(r.tau) + " is not positive");
    }
    r.Q = r.M * r.delta / (r.delta - 1.0) * span_factor;
  }
  r.K = 2.0 * n * r.Q;
  r.H_f = r.K;
  return r;
}

HoelderVerdict verify_hoelder_bound(const FuzzyFif& fif, const HoelderReport& report,
                                    std::size_t pairs, std::uint64_t seed) {
  const IfsSystem& sys = fif.system();
  const double x0 = sys.domain_lo();
  const double xn = sys.domain_hi();
  const double length = xn - x0;
  const double slack = 2.0 * fif.options().tol;

  std::vector<std::pair<double, double>> candidates;
  Rng rng(seed);
  std::uniform_real_distribution<double> in_domain(x0, xn);
  for (std::size_t p = 0; p < pairs; ++p) candidates.emplace_back(in_domain(rng), in_domain(rng));

  // Dyadic neighbours at each scale, at the domain ends and at random offsets.
  for (int j = 1; j <= 24; ++j) {
    const double cells = std::ldexp(1.0, j);
    const double h = length / cells;
    std::uniform_int_distribution<long long> pick(0, static_cast<long long>(cells) - 1);
    candidates.emplace_back(x0, x0 + h);
    candidates.emplace_back(xn - h, xn);
    for (int r = 0; r < 8; ++r) {
      const double a = x0 + h * static_cast<double>(pick(rng));
      candidates.emplace_back(a, std::min(a + h, xn));
    }
  }
  // Pairs straddling interior knots.
  const auto knots = sys.data().knots();
  for (std::size_t i = 1; i + 1 < knots.size(); ++i) {
    for (int j = 4; j <= 24; ++j) {
      const double h = std::ldexp(length, -j);
      candidates.emplace_back(knots[i] - h, knots[i] + h);
      candidates.emplace_back(knots[i] - h, knots[i]);
    }
  }

  HoelderVerdict v;
  for (const auto& [x, xp] : candidates) {
    const double dist = std::abs(x - xp);
    const double d = d_infty(eval_fif(fif, x), eval_fif(fif, xp));
    const double bound = report.H_f * std::pow(dist, report.tau);
    if (d > bound + slack) ++v.violations;
    if (dist > 0.0) {
      const double ratio = d / std::pow(dist, report.tau);
      if (ratio > v.max_ratio) {
        v.max_ratio = ratio;
        v.worst_x = x;
        v.worst_xp = xp;
      }
    }
    ++v.pairs;
  }
  v.pass = v.violations == 0;
  return v;
}

EmpiricalHoelder estimate_exponent(const FuzzyFif& fif, std::size_t num_scales) {
  if (num_scales < 4) throw Error(ErrorCode::InvalidArgument, "need at least four scales");
  const auto xs = fif.xs();
  const double length = xs.back() - xs.front();
  double spacing = 0.0;
  for (std::size_t j = 1; j < xs.size(); ++j) spacing = std::max(spacing, xs[j] - xs[j - 1]);

  const std::size_t levels = fif.grid()->size();
  std::vector<double> lo(levels), hi(levels);
  EmpiricalHoelder out;
  for (std::size_t j = 3; j <= 3 + num_scales; ++j) {
    const double h = std::ldexp(length, -static_cast<int>(j));
    if (h < spacing * (1.0 - 1e-12)) {
      throw Error(ErrorCode::InsufficientResolution,
                  "step " + std::to_string(h) + " is below the evaluation grid spacing");
    }
    double omega = 0.0;
    for (std::size_t p = 0; p < xs.size() && xs[p] + h <= xs.back() + 1e-12 * length; ++p) {
      fif.sample_at_into(std::min(xs[p] + h, xs.back()), lo, hi);
      omega = std::max(omega, levelwise::distance(fif.lower(p), fif.upper(p), lo, hi));
    }
    out.scales.push_back(h);
    out.oscillations.push_back(omega);
  }

  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < out.scales.size(); ++i) {
    if (out.oscillations[i] > 0.0) {
      lx.push_back(std::log(out.scales[i]));
      ly.push_back(std::log(out.oscillations[i]));
    }
  }
  if (lx.size() < 2) {
    // Constant function: no oscillation at any scale.
    out.fitted_exponent = 1.0;
    return out;
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(lx.size());
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(ly.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  out.fitted_exponent = sxy / sxx;
  double ss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double e = ly[i] - (my + out.fitted_exponent * (lx[i] - mx));
    ss += e * e;
  }
  out.fit_residual = std::sqrt(ss / static_cast<double>(lx.size()));
  return out;
}

double LevelEquivalenceReport::worst_gap() const noexcept {
  double g = 0.0;
  for (const auto& l : levels) g = std::max(g, l.gap());
  return g;
}

ScalarLevelPair scalar_level_fifs(const FuzzyFif& fif, double lambda, bool require_matching) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::OutOfDomain, "level " + std::to_string(lambda) + " outside [0,1]");
  }
  const IfsSystem& sys = fif.system();
  const auto knots = sys.data().knots();
  const auto values = sys.data().values();

  ScalarFifOptions options;
  options.tol = fif.options().tol;
  options.max_depth = fif.options().max_depth;
  options.grid_steps = fif.options().grid_steps;
  options.matching_tol = fif.options().matching_tol;
  options.require_matching = require_matching;

  auto build = [&](bool upper) {
    std::vector<double> y;
    for (const auto& u : values) {
      const Interval iv = u.at_level(lambda);
      y.push_back(upper ? iv.hi : iv.lo);
    }
    const ScalarQ q = [&sys, lambda, upper](std::size_t k, double x) {
      const Interval iv = sys.q(k, x).at_level(lambda);
      return upper ? iv.hi : iv.lo;
    };
    return scalar_fif({knots.begin(), knots.end()}, std::move(y),
                      {sys.scales().begin(), sys.scales().end()}, q, options);
  };
  return {build(false), build(true)};
}

LevelEquivalenceReport check_level_equivalence(const FuzzyFif& fif, std::span<const double> lambdas,
                                               const LevelEquivalenceOptions& options) {
  LevelEquivalenceReport report;
  report.tolerance = options.gap_tolerance;
  report.pass = true;
  const double matching_tol = fif.options().matching_tol;
  for (const double lambda : lambdas) {
    const LevelCurvePair curves = extract_level(fif, lambda);
    const ScalarLevelPair scalar = scalar_level_fifs(fif, lambda, !options.allow_unmatched);
    LevelGap gap;
    gap.lambda = lambda;
    for (std::size_t j = 0; j < curves.xs.size(); ++j) {
      gap.gap_lower = std::max(gap.gap_lower, std::abs(curves.lower[j] - scalar.lower(curves.xs[j])));
      gap.gap_upper = std::max(gap.gap_upper, std::abs(curves.upper[j] - scalar.upper(curves.xs[j])));
    }
    gap.matching_lower = scalar.lower.matching_residual();
    gap.matching_upper = scalar.upper.matching_residual();
    gap.matching_ok = std::max(gap.matching_lower, gap.matching_upper) <= matching_tol;
    report.pass = report.pass && gap.matching_ok && gap.gap() <= options.gap_tolerance;
    report.levels.push_back(gap);
  }
  return report;
}

}  // namespace ffif
