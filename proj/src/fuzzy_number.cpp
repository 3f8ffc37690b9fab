#include "ffif/fuzzy_number.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ffif/error.hpp"

namespace ffif {

std::shared_ptr<const LevelGrid> LevelGrid::uniform(std::size_t steps) {
  if (steps < 1) {
    throw Error(ErrorCode::InvalidArgument, "level grid needs at least one step");
  }
  std::vector<double> levels(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    levels[k] = static_cast<double>(k) / static_cast<double>(steps);
  }
  return std::shared_ptr<const LevelGrid>(new LevelGrid(std::move(levels)));
}

std::shared_ptr<const LevelGrid> LevelGrid::from_levels(std::vector<double> levels) {
  if (levels.size() < 2 || levels.front() != 0.0 || levels.back() != 1.0) {
    throw Error(ErrorCode::InvalidLevels, "level grid must start at 0 and end at 1");
  }
  for (std::size_t k = 1; k < levels.size(); ++k) {
    if (!(levels[k] > levels[k - 1])) {
      throw Error(ErrorCode::InvalidLevels, "level grid must be strictly increasing");
    }
  }
  return std::shared_ptr<const LevelGrid>(new LevelGrid(std::move(levels)));
}

std::pair<std::size_t, double> LevelGrid::locate(double lambda) const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::OutOfDomain, "level " + std::to_string(lambda) + " outside [0,1]");
  }
  const auto it = std::upper_bound(levels_.begin(), levels_.end(), lambda);
  if (it == levels_.end()) return {levels_.size() - 1, 0.0};
  const auto k = static_cast<std::size_t>(it - levels_.begin()) - 1;
  const double w = (lambda - levels_[k]) / (levels_[k + 1] - levels_[k]);
  return {k, w};
}

bool same_grid(const GridPtr& a, const GridPtr& b) noexcept {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

std::ptrdiff_t find_level_violation(std::span<const double> lower,
                                    std::span<const double> upper) noexcept {
  if (lower.size() != upper.size() || lower.empty()) return 0;
  for (std::size_t k = 0; k < lower.size(); ++k) {
    if (!std::isfinite(lower[k]) || !std::isfinite(upper[k]) || lower[k] > upper[k]) {
      return static_cast<std::ptrdiff_t>(k);
    }
    if (k > 0 && (lower[k] < lower[k - 1] || upper[k] > upper[k - 1])) {
      return static_cast<std::ptrdiff_t>(k);
    }
  }
  return -1;
}

FuzzyNumber::FuzzyNumber(GridPtr grid, std::vector<double> lower, std::vector<double> upper)
    : grid_(std::move(grid)), lower_(std::move(lower)), upper_(std::move(upper)) {
  if (!grid_) throw Error(ErrorCode::InvalidArgument, "fuzzy number without level grid");
  if (lower_.size() != grid_->size() || upper_.size() != grid_->size()) {
    throw Error(ErrorCode::LengthMismatch, "level arrays do not match the grid size");
  }
  if (const auto k = find_level_violation(lower_, upper_); k >= 0) {
    throw Error(ErrorCode::InvalidLevels,
                "level family is not nested at level index " + std::to_string(k));
  }
}

FuzzyNumber FuzzyNumber::crisp(GridPtr grid, double value) {
  const std::size_t m = grid ? grid->size() : 0;
  return FuzzyNumber(std::move(grid), std::vector<double>(m, value), std::vector<double>(m, value));
}

Interval FuzzyNumber::at_level(double lambda) const {
  const auto [k, w] = grid_->locate(lambda);
  if (w == 0.0) return level(k);
  return {(1.0 - w) * lower_[k] + w * lower_[k + 1], (1.0 - w) * upper_[k] + w * upper_[k + 1]};
}

bool FuzzyNumber::is_crisp() const noexcept {
  return lower_.front() == upper_.front();
}

bool FuzzyNumber::operator==(const FuzzyNumber& other) const {
  return same_grid(grid_, other.grid_) && lower_ == other.lower_ && upper_ == other.upper_;
}

namespace {

void require_same_grid(const FuzzyNumber& u, const FuzzyNumber& v) {
  if (!same_grid(u.grid(), v.grid())) {
    throw Error(ErrorCode::GridMismatch, "fuzzy numbers live on different level grids");
  }
}

}  // namespace

FuzzyNumber add(const FuzzyNumber& u, const FuzzyNumber& v) {
  require_same_grid(u, v);
  std::vector<double> lo(u.size()), hi(u.size());
  levelwise::add(u.lower(), u.upper(), v.lower(), v.upper(), lo, hi);
  return FuzzyNumber(u.grid(), std::move(lo), std::move(hi));
}

FuzzyNumber scale(double c, const FuzzyNumber& u) {
  std::vector<double> lo(u.size()), hi(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double a = c * u.lower()[k];
    const double b = c * u.upper()[k];
    lo[k] = c >= 0.0 ? a : b;
    hi[k] = c >= 0.0 ? b : a;
  }
  return FuzzyNumber(u.grid(), std::move(lo), std::move(hi));
}

FuzzyNumber g_difference(const FuzzyNumber& u, const FuzzyNumber& v) {
  require_same_grid(u, v);
  std::vector<double> lo(u.size()), hi(u.size());
  levelwise::g_difference(u.lower(), u.upper(), v.lower(), v.upper(), lo, hi);
  return FuzzyNumber(u.grid(), std::move(lo), std::move(hi));
}

double d_infty(const FuzzyNumber& u, const FuzzyNumber& v) {
  require_same_grid(u, v);
  return levelwise::distance(u.lower(), u.upper(), v.lower(), v.upper());
}

double sup_distance(std::span<const FuzzyNumber> f, std::span<const FuzzyNumber> g) {
  if (f.size() != g.size()) {
    throw Error(ErrorCode::LengthMismatch, "sample lists differ in length");
  }
  double d = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) d = std::max(d, d_infty(f[j], g[j]));
  return d;
}

namespace levelwise {

void add(std::span<const double> a_lo, std::span<const double> a_hi,
         std::span<const double> b_lo, std::span<const double> b_hi,
         std::span<double> out_lo, std::span<double> out_hi) noexcept {
  for (std::size_t k = 0; k < out_lo.size(); ++k) {
    out_lo[k] = a_lo[k] + b_lo[k];
    out_hi[k] = a_hi[k] + b_hi[k];
  }
}

void combine(double a, std::span<const double> x_lo, std::span<const double> x_hi,
             double b, std::span<const double> y_lo, std::span<const double> y_hi,
             std::span<double> out_lo, std::span<double> out_hi) noexcept {
  for (std::size_t k = 0; k < out_lo.size(); ++k) {
    out_lo[k] = a * x_lo[k] + b * y_lo[k];
    out_hi[k] = a * x_hi[k] + b * y_hi[k];
  }
}

void g_difference(std::span<const double> u_lo, std::span<const double> u_hi,
                  std::span<const double> v_lo, std::span<const double> v_hi,
                  std::span<double> out_lo, std::span<double> out_hi) noexcept {
  // Backward scan from λ = 1: each level's inf/sup over β ≥ λ is a running update.
  double run_lo = 0.0;
  double run_hi = 0.0;
  for (std::size_t k = out_lo.size(); k-- > 0;) {
    const double d_lo = u_lo[k] - v_lo[k];
    const double d_hi = u_hi[k] - v_hi[k];
    const double mn = std::min(d_lo, d_hi);
    const double mx = std::max(d_lo, d_hi);
    const bool top = k + 1 == out_lo.size();
    run_lo = top ? mn : std::min(run_lo, mn);
    run_hi = top ? mx : std::max(run_hi, mx);
    out_lo[k] = run_lo;
    out_hi[k] = run_hi;
  }
}

double distance(std::span<const double> a_lo, std::span<const double> a_hi,
                std::span<const double> b_lo, std::span<const double> b_hi) noexcept {
  double d = 0.0;
  for (std::size_t k = 0; k < a_lo.size(); ++k) {
    d = std::max({d, std::abs(a_lo[k] - b_lo[k]), std::abs(a_hi[k] - b_hi[k])});
  }
  return d;
}

}  // namespace levelwise

}  // namespace ffif
