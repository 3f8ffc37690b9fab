#include "ffif/scalar_fif.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ffif/error.hpp"

namespace ffif {

namespace {

double lerp_samples(std::span<const double> xs, std::span<const double> v, double t) {
  if (t <= xs.front()) return v.front();
  if (t >= xs.back()) return v.back();
  const auto c = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), t) - xs.begin()) - 1;
  const double w = (t - xs[c]) / (xs[c + 1] - xs[c]);
  if (w < 1e-9) return v[c];
  if (w > 1.0 - 1e-9) return v[c + 1];
  return (1.0 - w) * v[c] + w * v[c + 1];
}

}  // namespace

ScalarFif::ScalarFif(std::vector<double> knots, std::vector<double> y, std::vector<double> scales,
                     ScalarQ q, const ScalarFifOptions& options)
    : knots_(std::move(knots)), y_(std::move(y)), scales_(std::move(scales)), q_(std::move(q)) {
  const std::size_t n = knots_.size() - 1;
  if (knots_.size() < 3 || y_.size() != knots_.size() || scales_.size() != n) {
    throw Error(ErrorCode::SchemaViolation, "scalar FIF needs n+1 knots/values and n scales");
  }
  if (!q_) throw Error(ErrorCode::InvalidArgument, "missing scalar q");
  for (std::size_t k = 0; k < n; ++k) {
    if (!(knots_[k + 1] > knots_[k])) {
      throw Error(ErrorCode::DegenerateInterval, "knots must be strictly increasing");
    }
    if (!(std::abs(scales_[k]) < 1.0)) {
      throw Error(ErrorCode::ScaleOutOfRange, "scalar FIF needs |s_k| < 1");
    }
  }
  if (!(options.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");

  const double x0 = knots_.front();
  const double xn = knots_.back();
  const double length = xn - x0;

  for (std::size_t k = 0; k < n; ++k) {
    const double left = std::abs(q_(k, knots_[k]) - (y_[k] - scales_[k] * y_.front()));
    const double right = std::abs(q_(k, knots_[k + 1]) - (y_[k + 1] - scales_[k] * y_.back()));
    matching_residual_ = std::max({matching_residual_, left, right});
  }
  if (options.require_matching && matching_residual_ > options.matching_tol) {
    throw Error(ErrorCode::MatchingNotVerified,
                "scalar matching condition violated (residual " +
                    std::to_string(matching_residual_) + ")");
  }

  // Uniform sub-grid per interval, knots included.
  std::vector<std::size_t> owner;
  for (std::size_t k = 0; k < n; ++k) {
    const double len = knots_[k + 1] - knots_[k];
    const auto m = std::max<long long>(
        1, std::llround(static_cast<double>(options.grid_steps) * len / length));
    for (long long j = 0; j < m; ++j) {
      xs_.push_back(knots_[k] + len * static_cast<double>(j) / static_cast<double>(m));
      owner.push_back(k);
    }
  }
  xs_.push_back(xn);
  owner.push_back(n - 1);

  const std::size_t count = xs_.size();
  std::vector<double> pre(count), qv(count), cur(count), next(count);
  for (std::size_t j = 0; j < count; ++j) {
    const std::size_t k = owner[j];
    const double a = (knots_[k + 1] - knots_[k]) / length;
    const double b = knots_[k] - a * x0;
    pre[j] = std::clamp((xs_[j] - b) / a, x0, xn);
    qv[j] = q_(k, xs_[j]);
    const double w = (xs_[j] - knots_[k]) / (knots_[k + 1] - knots_[k]);
    cur[j] = (1.0 - w) * y_[k] + w * y_[k + 1];
  }

  double s = 0.0;
  for (const double sk : scales_) s = std::max(s, std::abs(sk));
  const double threshold =
      s > 0.0 ? options.tol * (1.0 - s) / s : std::numeric_limits<double>::infinity();
  for (depth_ = 1; depth_ <= options.max_depth; ++depth_) {
    double moved = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
      next[j] = scales_[owner[j]] * lerp_samples(xs_, cur, pre[j]) + qv[j];
      moved = std::max(moved, std::abs(next[j] - cur[j]));
    }
    std::swap(cur, next);
    residual_ = moved;
    if (moved <= threshold) break;
  }
  if (depth_ > options.max_depth) {
    throw Error(ErrorCode::NoConvergence, "scalar FIF did not converge within max_depth");
  }
  values_ = std::move(cur);
}

double ScalarFif::operator()(double x) const {
  if (!(x >= knots_.front() && x <= knots_.back())) {
    throw Error(ErrorCode::OutOfDomain, "x outside the scalar FIF domain");
  }
  return lerp_samples(xs_, values_, x);
}

ScalarFif scalar_fif(std::vector<double> knots, std::vector<double> y, std::vector<double> scales,
                     ScalarQ q, const ScalarFifOptions& options) {
  return ScalarFif(std::move(knots), std::move(y), std::move(scales), std::move(q), options);
}

}  // namespace ffif
