#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace ffif {

/// Ordered membership levels 0 = λ_0 < λ_1 < ... < λ_M = 1 shared by every
/// fuzzy number taking part in one computation.
class LevelGrid {
 public:
  /// M+1 equally spaced levels.
  static std::shared_ptr<const LevelGrid> uniform(std::size_t steps);
  static std::shared_ptr<const LevelGrid> from_levels(std::vector<double> levels);

  std::span<const double> levels() const noexcept { return levels_; }
  std::size_t size() const noexcept { return levels_.size(); }
  double operator[](std::size_t k) const noexcept { return levels_[k]; }

  /// Cell index k and weight w with λ = (1-w)·λ_k + w·λ_{k+1}; w == 0 on grid points.
  std::pair<std::size_t, double> locate(double lambda) const;

  bool operator==(const LevelGrid& other) const = default;

 private:
  explicit LevelGrid(std::vector<double> levels) : levels_(std::move(levels)) {}

  std::vector<double> levels_;
};

using GridPtr = std::shared_ptr<const LevelGrid>;

bool same_grid(const GridPtr& a, const GridPtr& b) noexcept;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const noexcept { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

/// A fuzzy number stored as its family of λ-level intervals on a LevelGrid.
///
/// Construction validates lower ≤ upper at every level and the nesting
/// [u]^β ⊆ [u]^λ for β ≥ λ; every instance is therefore a valid fuzzy number
/// on the grid. Values are immutable.
class FuzzyNumber {
 public:
  FuzzyNumber(GridPtr grid, std::vector<double> lower, std::vector<double> upper);

  static FuzzyNumber crisp(GridPtr grid, double value);

  const GridPtr& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return lower_.size(); }
  std::span<const double> lower() const noexcept { return lower_; }
  std::span<const double> upper() const noexcept { return upper_; }

  Interval level(std::size_t k) const noexcept { return {lower_[k], upper_[k]}; }

  /// Level set at an arbitrary λ in [0,1]; endpoints are linear in λ between grid levels.
  Interval at_level(double lambda) const;

  Interval support() const noexcept { return level(0); }
  Interval core() const noexcept { return level(size() - 1); }
  bool is_crisp() const noexcept;

  /// Exact level-wise equality (grids must match).
  bool operator==(const FuzzyNumber& other) const;

 private:
  GridPtr grid_;
  std::vector<double> lower_;
  std::vector<double> upper_;
};

/// First level index at which lower/upper violate the fuzzy-number invariants,
/// or -1 when both arrays form a valid nested family.
std::ptrdiff_t find_level_violation(std::span<const double> lower,
                                    std::span<const double> upper) noexcept;

FuzzyNumber add(const FuzzyNumber& u, const FuzzyNumber& v);
FuzzyNumber scale(double c, const FuzzyNumber& u);

/// Generalized difference u ∨_g v: at level λ_k the envelope, over grid levels
/// β ≥ λ_k, of the endpoint differences u^∓(β) - v^∓(β).
FuzzyNumber g_difference(const FuzzyNumber& u, const FuzzyNumber& v);

/// Supremum metric: max over grid levels of the endpoint distances.
double d_infty(const FuzzyNumber& u, const FuzzyNumber& v);

/// D(f, g) over two sampled fuzzy functions: max of d_infty over sample index.
double sup_distance(std::span<const FuzzyNumber> f, std::span<const FuzzyNumber> g);

inline FuzzyNumber operator+(const FuzzyNumber& u, const FuzzyNumber& v) { return add(u, v); }
inline FuzzyNumber operator*(double c, const FuzzyNumber& u) { return scale(c, u); }

namespace levelwise {

// Raw-array kernels shared by the engines. All spans have one entry per level.

void add(std::span<const double> a_lo, std::span<const double> a_hi,
         std::span<const double> b_lo, std::span<const double> b_hi,
         std::span<double> out_lo, std::span<double> out_hi) noexcept;

/// out = a·x ⊕ b·y for a, b ≥ 0.
void combine(double a, std::span<const double> x_lo, std::span<const double> x_hi,
             double b, std::span<const double> y_lo, std::span<const double> y_hi,
             std::span<double> out_lo, std::span<double> out_hi) noexcept;

void g_difference(std::span<const double> u_lo, std::span<const double> u_hi,
                  std::span<const double> v_lo, std::span<const double> v_hi,
                  std::span<double> out_lo, std::span<double> out_hi) noexcept;

double distance(std::span<const double> a_lo, std::span<const double> a_hi,
                std::span<const double> b_lo, std::span<const double> b_hi) noexcept;

}  // namespace levelwise

}  // namespace ffif
