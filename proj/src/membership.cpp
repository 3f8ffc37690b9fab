#include "ffif/membership.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ffif/error.hpp"

namespace ffif {

namespace {

void require_finite(std::initializer_list<double> values) {
  for (const double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::UnboundedSupport, "membership support must be bounded");
  }
}

void validate(const Trapezoidal& t) {
  require_finite({t.a, t.b, t.c, t.d});
  if (!(t.a <= t.b && t.b <= t.c && t.c <= t.d)) {
    throw Error(ErrorCode::InvalidMembership, "trapezoid breakpoints must satisfy a <= b <= c <= d");
  }
}

Trapezoidal as_trapezoid(const Triangular& t) { return {t.a, t.b, t.b, t.c}; }

void validate(const TruncatedGaussian& g) {
  require_finite({g.center, g.width, g.support_lo, g.support_hi});
  if (!(g.width > 0.0) || !(g.support_lo <= g.support_hi)) {
    throw Error(ErrorCode::InvalidMembership, "gaussian needs width > 0 and lo <= hi");
  }
  const double gap = std::max({0.0, g.support_lo - g.center, g.center - g.support_hi});
  if (std::exp(-(gap / g.width) * (gap / g.width)) < 1.0 - kNormalityTolerance) {
    throw Error(ErrorCode::NonNormal, "gaussian center lies outside its support");
  }
}

void validate(const QuadraticFlank& q) {
  require_finite({q.a, q.peak, q.b});
  if (!(q.a <= q.peak && q.peak <= q.b)) {
    throw Error(ErrorCode::InvalidMembership, "quadratic flank needs a <= peak <= b");
  }
}

void validate(const LevelTable& t) {
  if (t.levels.size() < 2 || t.lower.size() != t.levels.size() ||
      t.upper.size() != t.levels.size()) {
    throw Error(ErrorCode::InvalidLevels, "level table arrays must have equal length >= 2");
  }
  if (t.levels.front() != 0.0 || t.levels.back() != 1.0) {
    throw Error(ErrorCode::InvalidLevels, "level table must span levels 0 and 1");
  }
  for (std::size_t k = 1; k < t.levels.size(); ++k) {
    if (!(t.levels[k] > t.levels[k - 1])) {
      throw Error(ErrorCode::InvalidLevels, "level table levels must be strictly increasing");
    }
  }
  for (std::size_t k = 0; k < t.levels.size(); ++k) require_finite({t.lower[k], t.upper[k]});
  if (const auto k = find_level_violation(t.lower, t.upper); k >= 0) {
    throw Error(ErrorCode::NonConvexLevels,
                "level table intervals are not nested at index " + std::to_string(k));
  }
}

void validate(const PiecewiseAnalytic& p) {
  if (p.pieces.empty()) throw Error(ErrorCode::InvalidMembership, "no membership pieces");
  for (std::size_t k = 0; k < p.pieces.size(); ++k) {
    const auto& piece = p.pieces[k];
    require_finite({piece.from, piece.to});
    if (!(piece.from <= piece.to) || piece.coeffs.empty()) {
      throw Error(ErrorCode::InvalidMembership, "membership piece needs from <= to and coefficients");
    }
    if (k > 0 && piece.from < p.pieces[k - 1].to) {
      throw Error(ErrorCode::InvalidMembership, "membership pieces must be sorted and disjoint");
    }
  }
}

double mu_trapezoid(const Trapezoidal& t, double y) {
  if (y < t.a || y > t.d) return 0.0;
  if (y < t.b) return (y - t.a) / (t.b - t.a);
  if (y <= t.c) return 1.0;
  return (t.d - y) / (t.d - t.c);
}

double mu_gaussian(const TruncatedGaussian& g, double y) {
  if (y < g.support_lo || y > g.support_hi) return 0.0;
  const double z = (y - g.center) / g.width;
  return std::exp(-z * z);
}

double mu_quadratic(const QuadraticFlank& q, double y) {
  if (y < q.a || y > q.b) return 0.0;
  if (y == q.peak) return 1.0;
  const double r = y < q.peak ? (q.peak - y) / (q.peak - q.a) : (y - q.peak) / (q.b - q.peak);
  return q.shape == FlankShape::Convex ? (1.0 - r) * (1.0 - r) : 1.0 - r * r;
}

double mu_table(const LevelTable& t, double y) {
  if (y < t.lower.front() || y > t.upper.front()) return 0.0;
  // Highest level whose interval still contains y, then interpolate the crossing.
  std::size_t k = 0;
  while (k + 1 < t.levels.size() && t.lower[k + 1] <= y && y <= t.upper[k + 1]) ++k;
  if (k + 1 == t.levels.size()) return 1.0;
  const bool left = y < t.lower[k + 1];
  const double e0 = left ? t.lower[k] : t.upper[k];
  const double e1 = left ? t.lower[k + 1] : t.upper[k + 1];
  const double w = e1 == e0 ? 0.0 : (y - e0) / (e1 - e0);
  return t.levels[k] + w * (t.levels[k + 1] - t.levels[k]);
}

double mu_piecewise(const PiecewiseAnalytic& p, double y) {
  for (const auto& piece : p.pieces) {
    if (y >= piece.from && y <= piece.to) {
      double acc = 0.0;
      for (auto it = piece.coeffs.rbegin(); it != piece.coeffs.rend(); ++it) acc = acc * y + *it;
      return acc;
    }
  }
  return 0.0;
}

FuzzyNumber trapezoid_levels(const Trapezoidal& t, const GridPtr& grid) {
  std::vector<double> lo(grid->size()), hi(grid->size());
  for (std::size_t k = 0; k < grid->size(); ++k) {
    const double lam = (*grid)[k];
    // Convex-combination form is exact at both ends; the clamps keep rounding
    // from breaking monotonicity in λ.
    lo[k] = std::min((1.0 - lam) * t.a + lam * t.b, t.b);
    hi[k] = std::max((1.0 - lam) * t.d + lam * t.c, t.c);
    if (k > 0) {
      lo[k] = std::max(lo[k], lo[k - 1]);
      hi[k] = std::min(hi[k], hi[k - 1]);
    }
  }
  return FuzzyNumber(grid, std::move(lo), std::move(hi));
}

FuzzyNumber gaussian_levels(const TruncatedGaussian& g, const GridPtr& grid) {
  const double center = std::clamp(g.center, g.support_lo, g.support_hi);
  std::vector<double> lo(grid->size()), hi(grid->size());
  for (std::size_t k = 0; k < grid->size(); ++k) {
    const double lam = (*grid)[k];
    if (lam == 0.0) {
      lo[k] = g.support_lo;
      hi[k] = g.support_hi;
      continue;
    }
    const double half = g.width * std::sqrt(-std::log(lam));
    lo[k] = std::max(g.support_lo, center - half);
    hi[k] = std::min(g.support_hi, center + half);
  }
  return FuzzyNumber(grid, std::move(lo), std::move(hi));
}

FuzzyNumber quadratic_levels(const QuadraticFlank& q, const GridPtr& grid) {
  std::vector<double> lo(grid->size()), hi(grid->size());
  for (std::size_t k = 0; k < grid->size(); ++k) {
    const double lam = (*grid)[k];
    const double r = q.shape == FlankShape::Convex ? 1.0 - std::sqrt(lam) : std::sqrt(1.0 - lam);
    lo[k] = (1.0 - r) * q.peak + r * q.a;
    hi[k] = (1.0 - r) * q.peak + r * q.b;
  }
  return FuzzyNumber(grid, std::move(lo), std::move(hi));
}

FuzzyNumber table_levels(const LevelTable& t, const GridPtr& grid) {
  if (std::equal(t.levels.begin(), t.levels.end(), grid->levels().begin(), grid->levels().end())) {
    return FuzzyNumber(grid, t.lower, t.upper);
  }
  const auto table_grid = LevelGrid::from_levels(t.levels);
  const FuzzyNumber source(table_grid, t.lower, t.upper);
  std::vector<double> lo(grid->size()), hi(grid->size());
  for (std::size_t k = 0; k < grid->size(); ++k) {
    const Interval iv = source.at_level((*grid)[k]);
    lo[k] = iv.lo;
    hi[k] = iv.hi;
  }
  return FuzzyNumber(grid, std::move(lo), std::move(hi));
}

// Smallest y in [a, b] with pred(y), given pred monotone false -> true and pred(b).
template <typename Pred>
double first_true(double a, double b, Pred pred) {
  if (pred(a)) return a;
  while (true) {
    const double m = a + 0.5 * (b - a);
    if (m <= a || m >= b) return b;
    (pred(m) ? b : a) = m;
  }
}

// Largest y in [a, b] with pred(y), given pred monotone true -> false and pred(a).
template <typename Pred>
double last_true(double a, double b, Pred pred) {
  if (pred(b)) return b;
  while (true) {
    const double m = a + 0.5 * (b - a);
    if (m <= a || m >= b) return a;
    (pred(m) ? a : b) = m;
  }
}

}  // namespace

double membership(const MembershipSpec& spec, double y) {
  return std::visit(
      [y](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Triangular>) return mu_trapezoid(as_trapezoid(s), y);
        if constexpr (std::is_same_v<T, Trapezoidal>) return mu_trapezoid(s, y);
        if constexpr (std::is_same_v<T, TruncatedGaussian>) return mu_gaussian(s, y);
        if constexpr (std::is_same_v<T, QuadraticFlank>) return mu_quadratic(s, y);
        if constexpr (std::is_same_v<T, LevelTable>) return mu_table(s, y);
        if constexpr (std::is_same_v<T, PiecewiseAnalytic>) return mu_piecewise(s, y);
      },
      spec);
}

FuzzyNumber from_membership(const MembershipSpec& spec, const GridPtr& grid) {
  if (!grid) throw Error(ErrorCode::InvalidArgument, "missing level grid");
  return std::visit(
      [&grid](const auto& s) -> FuzzyNumber {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Triangular>) {
          const auto t = as_trapezoid(s);
          validate(t);
          return trapezoid_levels(t, grid);
        } else if constexpr (std::is_same_v<T, Trapezoidal>) {
          validate(s);
          return trapezoid_levels(s, grid);
        } else if constexpr (std::is_same_v<T, TruncatedGaussian>) {
          validate(s);
          return gaussian_levels(s, grid);
        } else if constexpr (std::is_same_v<T, QuadraticFlank>) {
          validate(s);
          return quadratic_levels(s, grid);
        } else if constexpr (std::is_same_v<T, LevelTable>) {
          validate(s);
          return table_levels(s, grid);
        } else {
          validate(s);
          return invert_membership([&s](double y) { return mu_piecewise(s, y); },
                                   s.pieces.front().from, s.pieces.back().to, grid);
        }
      },
      spec);
}

FuzzyNumber invert_membership(const std::function<double(double)>& mu, double lo, double hi,
                              const GridPtr& grid) {
  if (!grid) throw Error(ErrorCode::InvalidArgument, "missing level grid");
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(ErrorCode::UnboundedSupport, "membership support must be bounded");
  }
  if (!(lo <= hi)) throw Error(ErrorCode::InvalidMembership, "empty membership support");

  constexpr std::size_t kSamples = 4096;
  std::vector<double> ys(kSamples + 1), mus(kSamples + 1);
  for (std::size_t j = 0; j <= kSamples; ++j) {
    ys[j] = j == kSamples ? hi : lo + (hi - lo) * static_cast<double>(j) / kSamples;
    mus[j] = mu(ys[j]);
    if (!std::isfinite(mus[j]) || mus[j] < 0.0 || mus[j] > 1.0 + kNormalityTolerance) {
      throw Error(ErrorCode::InvalidMembership,
                  "membership value outside [0,1] at y = " + std::to_string(ys[j]));
    }
  }
  const auto p = static_cast<std::size_t>(std::max_element(mus.begin(), mus.end()) - mus.begin());

  // Golden-section refinement of the peak between neighbouring samples.
  double peak_y = ys[p];
  double peak_mu = mus[p];
  {
    double a = ys[p == 0 ? 0 : p - 1];
    double b = ys[std::min(p + 1, kSamples)];
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 200 && b - a > 0.0; ++it) {
      const double c = b - g * (b - a);
      const double d = a + g * (b - a);
      if (mu(c) >= mu(d)) b = d; else a = c;
    }
    const double m = 0.5 * (a + b);
    if (mu(m) > peak_mu) {
      peak_y = m;
      peak_mu = mu(m);
    }
  }
  if (peak_mu < 1.0 - kNormalityTolerance) {
    throw Error(ErrorCode::NonNormal, "membership maximum " + std::to_string(peak_mu) + " < 1");
  }

  constexpr double kSlack = 1e-12;
  for (std::size_t j = 0; j < kSamples; ++j) {
    const bool rising = ys[j + 1] <= peak_y;
    const bool broken = rising ? mus[j + 1] < mus[j] - kSlack
                               : (ys[j] >= peak_y && mus[j + 1] > mus[j] + kSlack);
    if (broken) {
      throw Error(ErrorCode::NonConvexLevels,
                  "membership is not unimodal near y = " + std::to_string(ys[j]));
    }
  }

  std::vector<double> lower(grid->size()), upper(grid->size());
  for (std::size_t k = 0; k < grid->size(); ++k) {
    const double lam = (*grid)[k];
    if (lam == 0.0) {
      const auto positive = [&mu](double y) { return mu(y) > 0.0; };
      lower[k] = first_true(lo, peak_y, positive);
      upper[k] = last_true(peak_y, hi, positive);
    } else {
      const double t = std::min(lam, peak_mu);
      const auto above = [&mu, t](double y) { return mu(y) >= t; };
      lower[k] = first_true(lo, peak_y, above);
      upper[k] = last_true(peak_y, hi, above);
    }
  }
  // Flank sampling tolerates 1e-12 wiggles; restore exact nesting.
  for (std::size_t k = 1; k < grid->size(); ++k) {
    lower[k] = std::max(lower[k], lower[k - 1]);
    upper[k] = std::min(upper[k], upper[k - 1]);
  }
  return FuzzyNumber(grid, std::move(lower), std::move(upper));
}

}  // namespace ffif
