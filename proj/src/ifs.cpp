#include "ffif/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ffif/error.hpp"
#include "ffif/random.hpp"

namespace ffif {

namespace {

// Relative slack for points that land a rounding error outside [x_0, x_n].
constexpr double kDomainSlack = 1e-12;

struct Scratch {
  std::vector<double> a_lo, a_hi, b_lo, b_hi;

  void resize(std::size_t m) {
    a_lo.resize(m);
    a_hi.resize(m);
    b_lo.resize(m);
    b_hi.resize(m);
  }
};

Scratch& scratch(std::size_t m) {
  thread_local Scratch s;
  s.resize(m);
  return s;
}

}  // namespace

FuzzyDataSet::FuzzyDataSet(std::vector<double> knots, std::vector<FuzzyNumber> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
  if (knots_.size() < 3) {
    throw Error(ErrorCode::SchemaViolation, "a data set needs n >= 2 intervals");
  }
  if (values_.size() != knots_.size()) {
    throw Error(ErrorCode::SchemaViolation, "one fuzzy value per knot is required");
  }
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!std::isfinite(knots_[i])) throw Error(ErrorCode::SchemaViolation, "non-finite knot");
    if (i > 0 && !(knots_[i] > knots_[i - 1])) {
      throw Error(ErrorCode::DegenerateInterval, "knots must be strictly increasing");
    }
    if (!same_grid(values_[i].grid(), values_.front().grid())) {
      throw Error(ErrorCode::GridMismatch, "data values live on different level grids");
    }
  }
}

std::vector<AffineMap> build_maps(std::span<const double> knots) {
  if (knots.size() < 2) throw Error(ErrorCode::SchemaViolation, "need at least two knots");
  const double x0 = knots.front();
  const double length = knots.back() - x0;
  std::vector<AffineMap> maps;
  maps.reserve(knots.size() - 1);
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    if (!(knots[k + 1] > knots[k])) {
      throw Error(ErrorCode::DegenerateInterval,
                  "interval " + std::to_string(k) + " has zero or negative length");
    }
    const double slope = (knots[k + 1] - knots[k]) / length;
    maps.push_back({slope, knots[k] - slope * x0});
  }
  return maps;
}

void blend_into(double x, double xa, const FuzzyNumber& ua, double xb, const FuzzyNumber& ub,
                std::span<double> lo, std::span<double> hi) {
  const double w = (x - xa) / (xb - xa);
  levelwise::combine(1.0 - w, ua.lower(), ua.upper(), w, ub.lower(), ub.upper(), lo, hi);
  // Equal endpoints blend to themselves exactly.
  for (std::size_t l = 0; l < lo.size(); ++l) {
    if (ua.lower()[l] == ub.lower()[l]) lo[l] = ua.lower()[l];
    if (ua.upper()[l] == ub.upper()[l]) hi[l] = ua.upper()[l];
  }
}

void LinearBlendQ::evaluate(const IfsSystem& sys, std::size_t k, double x, std::span<double> lo,
                            std::span<double> hi) const {
  const auto& data = sys.data();
  const auto knots = data.knots();
  const auto values = data.values();
  const std::size_t n = sys.intervals();
  auto& tmp = scratch(lo.size());

  blend_into(x, knots[k], values[k], knots[k + 1], values[k + 1], tmp.a_lo, tmp.a_hi);

  const double t = std::clamp(sys.maps()[k].inverse(x), knots.front(), knots.back());
  blend_into(t, knots.front(), values.front(), knots.back(), values[n], tmp.b_lo, tmp.b_hi);
  const double s = sys.scales()[k];
  for (std::size_t l = 0; l < lo.size(); ++l) {
    tmp.b_lo[l] *= s;
    tmp.b_hi[l] *= s;
  }
  levelwise::g_difference(tmp.a_lo, tmp.a_hi, tmp.b_lo, tmp.b_hi, lo, hi);
}

TabulatedQ::TabulatedQ(std::vector<Table> tables) : tables_(std::move(tables)) {
  for (const auto& t : tables_) {
    if (t.xs.size() < 1 || t.xs.size() != t.values.size()) {
      throw Error(ErrorCode::SchemaViolation, "tabulated q needs matching x and value lists");
    }
    for (std::size_t j = 1; j < t.xs.size(); ++j) {
      if (!(t.xs[j] > t.xs[j - 1])) {
        throw Error(ErrorCode::SchemaViolation, "tabulated q abscissae must increase");
      }
    }
  }
}

void TabulatedQ::evaluate(const IfsSystem& sys, std::size_t k, double x, std::span<double> lo,
                          std::span<double> hi) const {
  if (k >= tables_.size()) {
    throw Error(ErrorCode::SchemaViolation, "no q table for interval " + std::to_string(k));
  }
  (void)sys;
  const Table& t = tables_[k];
  if (t.xs.size() == 1 || x <= t.xs.front()) {
    const auto& v = t.values.front();
    std::copy(v.lower().begin(), v.lower().end(), lo.begin());
    std::copy(v.upper().begin(), v.upper().end(), hi.begin());
    return;
  }
  if (x >= t.xs.back()) {
    const auto& v = t.values.back();
    std::copy(v.lower().begin(), v.lower().end(), lo.begin());
    std::copy(v.upper().begin(), v.upper().end(), hi.begin());
    return;
  }
  const auto j = static_cast<std::size_t>(std::upper_bound(t.xs.begin(), t.xs.end(), x) -
                                          t.xs.begin()) - 1;
  blend_into(x, t.xs[j], t.values[j], t.xs[j + 1], t.values[j + 1], lo, hi);
}

IfsSystem::IfsSystem(FuzzyDataSet data, std::vector<double> scales,
                     std::shared_ptr<const QFunction> q, IfsOptions options)
    : data_(std::move(data)),
      scales_(std::move(scales)),
      q_(std::move(q)),
      options_(options),
      maps_(build_maps(data_.knots())) {
  if (!q_) throw Error(ErrorCode::InvalidArgument, "missing q recipe");
  if (scales_.size() != maps_.size()) {
    throw Error(ErrorCode::SchemaViolation, "expected " + std::to_string(maps_.size()) +
                                                " vertical scaling factors, got " +
                                                std::to_string(scales_.size()));
  }
  for (std::size_t k = 0; k < scales_.size(); ++k) {
    if (!(scales_[k] >= 0.0 && scales_[k] < 1.0)) {
      throw Error(ErrorCode::ScaleOutOfRange,
                  "scaling factor s_" + std::to_string(k + 1) + " = " +
                      std::to_string(scales_[k]) + " is outside [0, 1)");
    }
  }
  s_max_ = *std::max_element(scales_.begin(), scales_.end());
  c_min_ = std::numeric_limits<double>::infinity();
  c_max_ = 0.0;
  for (const auto& m : maps_) {
    c_min_ = std::min(c_min_, m.ratio());
    c_max_ = std::max(c_max_, m.ratio());
  }
  lipschitz_.resize(maps_.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < maps_.size(); ++k) {
    lipschitz_[k] = estimate_lipschitz(*this, k, options_.lipschitz_samples);
    worst = std::max(worst, lipschitz_[k]);
  }
  rho_ = options_.lipschitz_safety * worst;
}

std::size_t IfsSystem::interval_of(double x) const {
  const auto knots = data_.knots();
  const double slack = kDomainSlack * domain_length();
  if (!(x >= knots.front() - slack && x <= knots.back() + slack)) {
    throw Error(ErrorCode::OutOfDomain, "x = " + std::to_string(x) + " outside the data range");
  }
  const auto it = std::upper_bound(knots.begin(), knots.end(), x);
  const auto idx = static_cast<std::ptrdiff_t>(it - knots.begin()) - 1;
  return static_cast<std::size_t>(
      std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(maps_.size()) - 1));
}

void IfsSystem::q_into(std::size_t k, double x, std::span<double> lo, std::span<double> hi) const {
  const auto knots = data_.knots();
  const double slack = kDomainSlack * domain_length();
  if (k >= maps_.size() || !(x >= knots[k] - slack && x <= knots[k + 1] + slack)) {
    throw Error(ErrorCode::OutOfInterval, "q_" + std::to_string(k + 1) + " evaluated at " +
                                              std::to_string(x) + " outside its interval");
  }
  q_->evaluate(*this, k, std::clamp(x, knots[k], knots[k + 1]), lo, hi);
}

FuzzyNumber IfsSystem::q(std::size_t k, double x) const {
  std::vector<double> lo(grid()->size()), hi(grid()->size());
  q_into(k, x, lo, hi);
  return FuzzyNumber(grid(), std::move(lo), std::move(hi));
}

FuzzyNumber IfsSystem::apply_F(std::size_t k, double x, const FuzzyNumber& u) const {
  const double slack = kDomainSlack * domain_length();
  if (!(x >= domain_lo() - slack && x <= domain_hi() + slack)) {
    throw Error(ErrorCode::OutOfDomain, "F applied outside the data range");
  }
  return add(scale(scales_[k], u), q(k, maps_[k](x)));
}

FuzzyNumber IfsSystem::apply_F_rearranged(std::size_t k, double x, const FuzzyNumber& u) const {
  const auto knots = data_.knots();
  const auto values = data_.values();
  const std::size_t m = grid()->size();
  std::vector<double> g_lo(m), g_hi(m), b_lo(m), b_hi(m);
  blend_into(x, knots.front(), values.front(), knots.back(), values.back(), g_lo, g_hi);
  const double y = std::clamp(maps_[k](x), knots[k], knots[k + 1]);
  blend_into(y, knots[k], values[k], knots[k + 1], values[k + 1], b_lo, b_hi);
  const FuzzyNumber diff = g_difference(u, FuzzyNumber(grid(), std::move(g_lo), std::move(g_hi)));
  return add(scale(scales_[k], diff), FuzzyNumber(grid(), std::move(b_lo), std::move(b_hi)));
}

IfsSystem IfsSystem::with_scale(std::size_t k, double s) const {
  auto scales = scales_;
  scales.at(k) = s;
  return IfsSystem(data_, std::move(scales), q_, options_);
}

double MatchingReport::worst() const noexcept {
  double w = 0.0;
  for (const double r : left) w = std::max(w, r);
  for (const double r : right) w = std::max(w, r);
  return w;
}

MatchingReport check_matching(const IfsSystem& sys, double tol) {
  MatchingReport report;
  report.tolerance = tol;
  const auto values = sys.data().values();
  const std::size_t n = sys.intervals();
  for (std::size_t k = 0; k < n; ++k) {
    report.left.push_back(d_infty(sys.apply_F(k, sys.domain_lo(), values.front()), values[k]));
    report.right.push_back(d_infty(sys.apply_F(k, sys.domain_hi(), values[n]), values[k + 1]));
  }
  report.pass = report.worst() <= tol;
  return report;
}

double estimate_lipschitz(const IfsSystem& sys, std::size_t k, std::size_t samples) {
  if (samples < 2) throw Error(ErrorCode::InvalidArgument, "need at least two samples");
  const auto knots = sys.data().knots();
  const double a = knots[k];
  const double b = knots[k + 1];
  const std::size_t m = sys.grid()->size();
  std::vector<double> prev_lo(m), prev_hi(m), cur_lo(m), cur_hi(m);
  sys.q_into(k, a, prev_lo, prev_hi);
  double prev_x = a;
  double best = 0.0;
  for (std::size_t j = 1; j < samples; ++j) {
    const double x = j + 1 == samples ? b : a + (b - a) * static_cast<double>(j) / (samples - 1);
    sys.q_into(k, x, cur_lo, cur_hi);
    best = std::max(best, levelwise::distance(prev_lo, prev_hi, cur_lo, cur_hi) / (x - prev_x));
    std::swap(prev_lo, cur_lo);
    std::swap(prev_hi, cur_hi);
    prev_x = x;
  }
  return best;
}

double theta_upper_bound(const IfsSystem& sys) {
  double bound = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < sys.intervals(); ++k) {
    const double c = sys.maps()[k].ratio();
    const double lip = sys.options().lipschitz_safety * sys.lipschitz_estimates()[k];
    if (lip > 0.0) bound = std::min(bound, (1.0 - c) / (lip * c));
  }
  return bound;
}

ThetaMetricParams make_theta_params(const IfsSystem& sys, double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw Error(ErrorCode::InvalidArgument, "theta must be positive and finite");
  }
  ThetaMetricParams p;
  p.theta = theta;
  for (std::size_t k = 0; k < sys.intervals(); ++k) {
    const double c = sys.maps()[k].ratio();
    const double lip = sys.options().lipschitz_safety * sys.lipschitz_estimates()[k];
    const double factor = std::max(c + theta * lip * c, sys.scales()[k]);
    if (!(factor < 1.0)) {
      throw Error(ErrorCode::InvalidArgument,
                  "theta = " + std::to_string(theta) + " makes w_" + std::to_string(k + 1) +
                      " non-contractive");
    }
    p.lipschitz.push_back(lip);
    p.factors.push_back(factor);
  }
  return p;
}

ThetaMetricParams midpoint_theta_params(const IfsSystem& sys) {
  const double bound = theta_upper_bound(sys);
  return make_theta_params(sys, std::isfinite(bound) ? 0.5 * bound : 1.0);
}

double d_theta(double theta, double x, const FuzzyNumber& u, double xp, const FuzzyNumber& up) {
  return std::abs(x - xp) + theta * d_infty(u, up);
}

double d_max(double x, const FuzzyNumber& u, double xp, const FuzzyNumber& up) {
  return std::max(std::abs(x - xp), d_infty(u, up));
}

ContractionReport verify_theta_contraction(const IfsSystem& sys, const ThetaMetricParams& params,
                                           std::size_t trials, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> in_domain(sys.domain_lo(), sys.domain_hi());
  double magnitude = 1.0;
  for (const auto& u : sys.data().values()) {
    magnitude = std::max({magnitude, std::abs(u.support().lo), std::abs(u.support().hi)});
  }

  constexpr double kContractionSlack = 1e-9;
  constexpr double kSandwichSlack = 1e-12;
  const double theta = params.theta;
  ContractionReport report;
  for (std::size_t k = 0; k < sys.intervals(); ++k) {
    const auto& map = sys.maps()[k];
    for (std::size_t t = 0; t < trials; ++t) {
      const double x = in_domain(rng);
      const double xp = t == 0 ? x : in_domain(rng);
      const FuzzyNumber u = random_fuzzy_number(rng, sys.grid(), magnitude);
      const FuzzyNumber up = t == 0 ? u : random_fuzzy_number(rng, sys.grid(), magnitude);

      const double before = d_theta(theta, x, u, xp, up);
      const double after =
          d_theta(theta, map(x), sys.apply_F(k, x, u), map(xp), sys.apply_F(k, xp, up));
      const double excess = after - params.factors[k] * before;
      report.worst_excess = report.trials == 0 ? excess : std::max(report.worst_excess, excess);
      if (excess > kContractionSlack) ++report.violations;

      const double dm = d_max(x, u, xp, up);
      const bool sandwich = theta < 1.0
                                ? theta * dm <= before + kSandwichSlack &&
                                      before <= 2.0 * dm + kSandwichSlack
                                : dm <= before + kSandwichSlack &&
                                      before <= 2.0 * theta * dm + kSandwichSlack;
      if (!sandwich) ++report.sandwich_violations;
      ++report.trials;
    }
  }
  report.pass = report.violations == 0 && report.sandwich_violations == 0;
  return report;
}

}  // namespace ffif
