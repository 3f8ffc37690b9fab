#include "ffif/fif.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ffif/error.hpp"
#include "ffif/parallel.hpp"

namespace ffif {

namespace {

constexpr double kSnap = 1e-9;

}  // namespace

EvaluationGrid make_evaluation_grid(std::span<const double> knots, std::size_t steps) {
  if (knots.size() < 2) throw Error(ErrorCode::SchemaViolation, "need at least two knots");
  const std::size_t n = knots.size() - 1;
  if (steps < n) {
    throw Error(ErrorCode::InvalidArgument, "evaluation grid coarser than the knot set");
  }
  const double length = knots.back() - knots.front();
  EvaluationGrid grid;
  grid.xs.reserve(steps + 1);
  for (std::size_t k = 0; k < n; ++k) {
    const double len = knots[k + 1] - knots[k];
    const auto m = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(static_cast<double>(steps) * len / length)));
    grid.knot_index.push_back(grid.xs.size());
    for (std::size_t j = 0; j < m; ++j) {
      grid.xs.push_back(knots[k] + len * static_cast<double>(j) / static_cast<double>(m));
    }
  }
  grid.knot_index.push_back(grid.xs.size());
  grid.xs.push_back(knots.back());
  return grid;
}

std::pair<std::size_t, double> locate_cell(std::span<const double> xs, double t) {
  const std::size_t last = xs.size() - 1;
  if (t <= xs.front()) return {0, 0.0};
  if (t >= xs.back()) return {last, 0.0};
  const auto c = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), t) - xs.begin()) - 1;
  const double w = (t - xs[c]) / (xs[c + 1] - xs[c]);
  if (w < kSnap) return {c, 0.0};
  if (w > 1.0 - kSnap) return {c + 1, 0.0};
  return {c, w};
}

std::span<const double> FuzzyFif::lower(std::size_t j) const noexcept {
  return std::span<const double>(lo_).subspan(j * levels_, levels_);
}

std::span<const double> FuzzyFif::upper(std::size_t j) const noexcept {
  return std::span<const double>(hi_).subspan(j * levels_, levels_);
}

FuzzyNumber FuzzyFif::sample(std::size_t j) const {
  const auto l = lower(j);
  const auto u = upper(j);
  return FuzzyNumber(grid(), {l.begin(), l.end()}, {u.begin(), u.end()});
}

void FuzzyFif::sample_at_into(double x, std::span<double> lo, std::span<double> hi) const {
  const auto [c, w] = locate_cell(grid_.xs, x);
  const auto l0 = lower(c);
  const auto u0 = upper(c);
  if (w == 0.0) {
    std::copy(l0.begin(), l0.end(), lo.begin());
    std::copy(u0.begin(), u0.end(), hi.begin());
    return;
  }
  levelwise::combine(1.0 - w, l0, u0, w, lower(c + 1), upper(c + 1), lo, hi);
}

FuzzyNumber FuzzyFif::sample_at(double x) const {
  std::vector<double> lo(levels_), hi(levels_);
  sample_at_into(x, lo, hi);
  return FuzzyNumber(grid(), std::move(lo), std::move(hi));
}

double FuzzyFif::error_bound() const noexcept {
  const double s = sys_->s_max();
  return s == 0.0 ? 0.0 : s / (1.0 - s) * residual();
}

FuzzyFif iterate_rb(std::shared_ptr<const IfsSystem> sys, const RbOptions& options,
                    std::optional<std::vector<FuzzyNumber>> initial) {
  if (!sys) throw Error(ErrorCode::InvalidArgument, "missing IFS");
  if (!(options.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");

  FuzzyFif fif;
  fif.sys_ = sys;
  fif.options_ = options;
  fif.matching_ = check_matching(*sys, options.matching_tol);
  if (options.require_matching && !fif.matching_.pass) {
    throw Error(ErrorCode::MatchingNotVerified,
                "matching condition violated (worst residual " +
                    std::to_string(fif.matching_.worst()) + ")");
  }

  const auto knots = sys->data().knots();
  const auto values = sys->data().values();
  fif.grid_ = make_evaluation_grid(knots, options.grid_steps);
  const auto& xs = fif.grid_.xs;
  const std::size_t count = xs.size();
  const std::size_t levels = sys->grid()->size();
  fif.levels_ = levels;

  // Per sample: owning interval, preimage cell under l_k⁻¹, and q_k(x_j).
  std::vector<std::size_t> owner(count);
  std::vector<std::size_t> cell(count);
  std::vector<double> weight(count);
  std::vector<double> q_lo(count * levels), q_hi(count * levels);
  for (std::size_t k = 0; k < sys->intervals(); ++k) {
    const std::size_t end = k + 1 == sys->intervals() ? count : fif.grid_.knot_index[k + 1];
    for (std::size_t j = fif.grid_.knot_index[k]; j < end; ++j) owner[j] = k;
  }
  parallel_chunks(count, options.workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      const std::size_t k = owner[j];
      const double t = std::clamp(sys->maps()[k].inverse(xs[j]), knots.front(), knots.back());
      std::tie(cell[j], weight[j]) = locate_cell(xs, t);
      sys->q_into(k, xs[j], std::span<double>(q_lo).subspan(j * levels, levels),
                  std::span<double>(q_hi).subspan(j * levels, levels));
    }
  });

  std::vector<double> cur_lo(count * levels), cur_hi(count * levels);
  if (initial) {
    if (initial->size() != count) {
      throw Error(ErrorCode::LengthMismatch, "initial function must be sampled on the evaluation grid");
    }
    for (std::size_t j = 0; j < count; ++j) {
      const auto& v = (*initial)[j];
      if (!same_grid(v.grid(), sys->grid())) {
        throw Error(ErrorCode::GridMismatch, "initial samples use a different level grid");
      }
      std::copy(v.lower().begin(), v.lower().end(), cur_lo.begin() + j * levels);
      std::copy(v.upper().begin(), v.upper().end(), cur_hi.begin() + j * levels);
    }
  } else {
    for (std::size_t j = 0; j < count; ++j) {
      const std::size_t k = owner[j];
      blend_into(xs[j], knots[k], values[k], knots[k + 1], values[k + 1],
                 std::span<double>(cur_lo).subspan(j * levels, levels),
                 std::span<double>(cur_hi).subspan(j * levels, levels));
    }
  }

  const double s = sys->s_max();
  const double threshold =
      s > 0.0 ? options.tol * (1.0 - s) / s : std::numeric_limits<double>::infinity();
  std::vector<double> next_lo(count * levels), next_hi(count * levels);
  std::vector<double> moved(count);
  bool converged = false;
  for (std::size_t depth = 1; depth <= options.max_depth; ++depth) {
    parallel_chunks(count, options.workers, [&](std::size_t begin, std::size_t end) {
      for (std::size_t j = begin; j < end; ++j) {
        const double sk = sys->scales()[owner[j]];
        const double w = weight[j];
        const std::size_t a = cell[j] * levels;
        const std::size_t b = w == 0.0 ? a : a + levels;
        const std::size_t o = j * levels;
        double d = 0.0;
        for (std::size_t l = 0; l < levels; ++l) {
          const double plo = w == 0.0 ? cur_lo[a + l] : (1.0 - w) * cur_lo[a + l] + w * cur_lo[b + l];
          const double phi = w == 0.0 ? cur_hi[a + l] : (1.0 - w) * cur_hi[a + l] + w * cur_hi[b + l];
          next_lo[o + l] = sk * plo + q_lo[o + l];
          next_hi[o + l] = sk * phi + q_hi[o + l];
          d = std::max({d, std::abs(next_lo[o + l] - cur_lo[o + l]),
                        std::abs(next_hi[o + l] - cur_hi[o + l])});
        }
        moved[j] = d;
      }
    });
    const double displacement = *std::max_element(moved.begin(), moved.end());
    fif.displacements_.push_back(displacement);
    std::swap(cur_lo, next_lo);
    std::swap(cur_hi, next_hi);
    if (displacement <= threshold) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw Error(ErrorCode::NoConvergence,
                "no convergence within max_depth = " + std::to_string(options.max_depth) +
                    " iterations (last displacement " + std::to_string(fif.residual()) + ")");
  }

  fif.lo_ = std::move(cur_lo);
  fif.hi_ = std::move(cur_hi);
  for (std::size_t i = 0; i < fif.lo_.size(); ++i) {
    fif.magnitude_ = std::max({fif.magnitude_, std::abs(fif.lo_[i]), std::abs(fif.hi_[i])});
  }
  return fif;
}

FuzzyNumber eval_fif(const FuzzyFif& fif, double x) {
  const IfsSystem& sys = fif.system();
  const std::size_t levels = sys.grid()->size();
  const double x0 = sys.domain_lo();
  const double xn = sys.domain_hi();
  std::size_t k = sys.interval_of(x);

  std::vector<double> acc_lo(levels, 0.0), acc_hi(levels, 0.0);
  std::vector<double> tmp_lo(levels), tmp_hi(levels);
  // Remainder after closing is at most c·2·magnitude; stop once that is 1% of tol.
  const double cutoff = 0.01 * fif.options().tol / std::max(2.0 * fif.magnitude(), 1e-300);
  double c = 1.0;
  double t = std::clamp(x, x0, xn);
  for (std::size_t d = 0; d < fif.options().eval_depth; ++d) {
    sys.q_into(k, t, tmp_lo, tmp_hi);
    for (std::size_t l = 0; l < levels; ++l) {
      acc_lo[l] += c * tmp_lo[l];
      acc_hi[l] += c * tmp_hi[l];
    }
    c *= sys.scales()[k];
    t = std::clamp(sys.maps()[k].inverse(t), x0, xn);
    if (c <= cutoff) break;
    k = sys.interval_of(t);
  }
  if (c > 0.0) {
    fif.sample_at_into(t, tmp_lo, tmp_hi);
    for (std::size_t l = 0; l < levels; ++l) {
      acc_lo[l] += c * tmp_lo[l];
      acc_hi[l] += c * tmp_hi[l];
    }
  }
  return FuzzyNumber(sys.grid(), std::move(acc_lo), std::move(acc_hi));
}

LevelCurvePair extract_level(const FuzzyFif& fif, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::OutOfDomain, "level " + std::to_string(lambda) + " outside [0,1]");
  }
  const auto [k, w] = fif.grid()->locate(lambda);
  LevelCurvePair curves;
  curves.lambda = lambda;
  curves.xs.assign(fif.xs().begin(), fif.xs().end());
  curves.lower.resize(fif.sample_count());
  curves.upper.resize(fif.sample_count());
  for (std::size_t j = 0; j < fif.sample_count(); ++j) {
    const auto lo = fif.lower(j);
    const auto hi = fif.upper(j);
    curves.lower[j] = w == 0.0 ? lo[k] : (1.0 - w) * lo[k] + w * lo[k + 1];
    curves.upper[j] = w == 0.0 ? hi[k] : (1.0 - w) * hi[k] + w * hi[k + 1];
  }
  return curves;
}

}  // namespace ffif
