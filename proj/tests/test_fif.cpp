#include <gtest/gtest.h>

#include <cmath>

#include "ffif/analysis.hpp"
#include "ffif/config.hpp"
#include "ffif/error.hpp"
#include "ffif/fif.hpp"
#include "ffif/scalar_fif.hpp"
#include "oracles.hpp"

using namespace ffif;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no ffif::Error thrown";
  return ErrorCode::InvalidArgument;
}

FuzzyFif build(const RunConfig& c, unsigned workers = 0) {
  RbOptions o = make_rb_options(c);
  o.workers = workers;
  return iterate_rb(make_system(c), o);
}

}  // namespace

TEST(EvaluationGrid, KnotsAreGridPoints) {
  const std::vector<double> knots{0, 0.1, 0.5, 2};
  const auto g = make_evaluation_grid(knots, 40);
  ASSERT_EQ(g.knot_index.size(), knots.size());
  for (std::size_t i = 0; i < knots.size(); ++i) EXPECT_EQ(g.xs[g.knot_index[i]], knots[i]);
  EXPECT_TRUE(std::is_sorted(g.xs.begin(), g.xs.end()));
}

TEST(LocateCell, SnapsNearGridPoints) {
  const std::vector<double> xs{0, 1, 2, 3};
  EXPECT_EQ(locate_cell(xs, 1.5), (std::pair<std::size_t, double>{1, 0.5}));
  EXPECT_EQ(locate_cell(xs, 2 - 1e-12), (std::pair<std::size_t, double>{2, 0.0}));
  EXPECT_EQ(locate_cell(xs, 3.0), (std::pair<std::size_t, double>{3, 0.0}));
}

TEST(IterateRb, ZeroScalesGiveQInOneIteration) {
  auto c = oracle::triangular_config();
  c.scales = {0, 0, 0};
  const auto f = build(c);
  EXPECT_EQ(f.depth(), 1u);
  const auto& sys = f.system();
  for (std::size_t j = 0; j < f.sample_count(); j += 17) {
    const double x = f.xs()[j];
    EXPECT_EQ(f.sample(j), sys.q(sys.interval_of(x), x)) << "x = " << x;
  }
}

TEST(IterateRb, CrispDataCollapsesToScalarFif) {
  const std::vector<double> x{0, 0.25, 0.5, 0.75, 1};
  const std::vector<double> y{1, 3, 3, 2.5, 4};
  const std::vector<double> s{0.3, 0.7, 0.4, 0.8};
  const auto f = build(oracle::crisp_config(x, y, s));
  const ScalarFif ref(x, y, s, oracle::chord_q(x, y, s));
  for (std::size_t j = 0; j < f.sample_count(); ++j) {
    const double r = ref(f.xs()[j]);
    for (std::size_t l = 0; l < f.grid()->size(); ++l) {
      ASSERT_NEAR(f.lower(j)[l], r, 1e-8);
      ASSERT_NEAR(f.upper(j)[l], r, 1e-8);
    }
  }
}

TEST(IterateRb, DisplacementsContractAtRateS) {
  const auto c = oracle::example1_config();
  const auto f = build(c);
  const auto d = f.displacements();
  ASSERT_GE(d.size(), 2u);
  for (std::size_t k = 1; k < d.size(); ++k) {
    if (d[k - 1] == 0.0) break;
    EXPECT_LE(d[k] / d[k - 1], 0.8 + 1e-6) << "iteration " << k + 1;
  }
  const double predicted = std::ceil(std::log(c.tol * 0.2 / d[0]) / std::log(0.8));
  EXPECT_LE(static_cast<double>(f.depth()), predicted + 1);
  EXPECT_LE(f.residual(), c.tol * 0.2 / 0.8);
  EXPECT_DOUBLE_EQ(f.error_bound(), 0.8 / 0.2 * f.residual());
}

TEST(IterateRb, ContractsOnNonDyadicGrid) {
  // Knots that do not align preimages with grid points exercise the
  // interpolating branch and a geometric (not finite) convergence.
  auto c = oracle::triangular_config();
  c.knots = {0, 0.7, 1.9, 3};
  c.grid = 1000;
  const auto f = build(c);
  const auto d = f.displacements();
  EXPECT_GT(f.depth(), 5u);
  for (std::size_t k = 1; k < d.size(); ++k) {
    if (d[k - 1] < 1e-13) break;
    EXPECT_LE(d[k] / d[k - 1], 0.6 + 1e-6) << "iteration " << k + 1;
  }
}

TEST(IterateRb, WorkerCountDoesNotChangeResults) {
  const auto c = oracle::example1_config();
  const auto a = build(c, 1);
  const auto b = build(c, 4);
  ASSERT_EQ(a.sample_count(), b.sample_count());
  for (std::size_t j = 0; j < a.sample_count(); ++j) {
    ASSERT_TRUE(std::equal(a.lower(j).begin(), a.lower(j).end(), b.lower(j).begin()));
    ASSERT_TRUE(std::equal(a.upper(j).begin(), a.upper(j).end(), b.upper(j).begin()));
  }
  EXPECT_TRUE(std::equal(a.displacements().begin(), a.displacements().end(),
                         b.displacements().begin(), b.displacements().end()));
}

TEST(IterateRb, Errors) {
  auto c = oracle::example1_config();
  c.allow_unmatched = false;
  EXPECT_EQ(code_of([&] { build(c); }), ErrorCode::MatchingNotVerified);

  auto slow = oracle::triangular_config();
  slow.knots = {0, 0.7, 1.9, 3};
  slow.max_depth = 2;
  EXPECT_EQ(code_of([&] { build(slow); }), ErrorCode::NoConvergence);

  const auto sys = make_system(oracle::triangular_config());
  std::vector<FuzzyNumber> wrong(3, FuzzyNumber::crisp(sys->grid(), 0.0));
  EXPECT_EQ(code_of([&] { iterate_rb(sys, {}, wrong); }), ErrorCode::LengthMismatch);
}

TEST(IterateRb, FixedPointDoesNotDependOnStart) {
  const auto c = oracle::triangular_config();
  const auto sys = make_system(c);
  const auto from_default = iterate_rb(sys, make_rb_options(c));
  std::vector<FuzzyNumber> start(from_default.sample_count(),
                                 from_membership(Triangular{-10, 5, 12}, sys->grid()));
  const auto from_far = iterate_rb(sys, make_rb_options(c), start);
  for (std::size_t j = 0; j < from_default.sample_count(); ++j) {
    ASSERT_LE(d_infty(from_default.sample(j), from_far.sample(j)), 2 * c.tol);
  }
}

TEST(EvalFif, InterpolatesDataWhenMatchingHolds) {
  const auto f = build(oracle::triangular_config());
  const auto& sys = f.system();
  for (std::size_t i = 0; i < sys.data().knots().size(); ++i) {
    EXPECT_LE(d_infty(eval_fif(f, sys.data().knots()[i]), sys.data().values()[i]), 1e-8) << "knot " << i;
    EXPECT_LE(d_infty(f.sample(f.knot_index()[i]), sys.data().values()[i]), 1e-8) << "knot " << i;
  }
}

TEST(EvalFif, OneUnrollingOfTheFunctionalEquation) {
  const auto f = build(oracle::triangular_config());
  const auto& sys = f.system();
  for (std::size_t k = 0; k < sys.intervals(); ++k) {
    for (int m = 0; m <= 64; ++m) {
      const double xp = sys.domain_lo() + sys.domain_length() * m / 64.0;
      const auto lhs = eval_fif(f, sys.maps()[k](xp));
      const auto rhs = sys.apply_F(k, xp, eval_fif(f, xp));
      ASSERT_LE(d_infty(lhs, rhs), 1e-8) << "map " << k << " x' = " << xp;
    }
  }
}

TEST(EvalFif, CrispAgreesWithScalarEngine) {
  const std::vector<double> x{0, 0.25, 0.5, 0.75, 1};
  const std::vector<double> y{1, 3, 3, 2.5, 4};
  const std::vector<double> s{0.3, 0.7, 0.4, 0.8};
  const auto f = build(oracle::crisp_config(x, y, s));
  const ScalarFif ref(x, y, s, oracle::chord_q(x, y, s));
  for (int m = 0; m <= 256; ++m) {
    const double t = m / 256.0;
    const auto v = eval_fif(f, t);
    EXPECT_NEAR(v.core().lo, ref(t), 1e-8);
    EXPECT_NEAR(v.support().hi, ref(t), 1e-8);
  }
}

TEST(EvalFif, ZeroScalesGivePiecewiseQ) {
  auto c = oracle::triangular_config();
  c.scales = {0, 0, 0};
  const auto f = build(c);
  for (const double x : {0.0, 0.37, 1.0, 1.61, 2.999, 3.0}) {
    const auto& sys = f.system();
    EXPECT_EQ(eval_fif(f, x), sys.q(sys.interval_of(x), x));
  }
}

TEST(EvalFif, BarnsleyTriangleSeed) {
  const auto f = build(oracle::crisp_config({0, 0.5, 1}, {0, 1, 0}, {0.5, 0.5}));
  EXPECT_EQ(eval_fif(f, 0.0).core().lo, 0.0);
  EXPECT_EQ(eval_fif(f, 0.5).core().lo, 1.0);
  EXPECT_EQ(eval_fif(f, 1.0).core().lo, 0.0);
  EXPECT_EQ(f.sample(f.knot_index()[1]).core().lo, 1.0);
}

TEST(EvalFif, StraightLineIsTheFixedPoint) {
  // Data on y = 2x - 1: substituting the line into the functional equation with
  // the chord q gives back the line, so uniqueness makes it the FIF.
  const std::vector<double> x{0, 0.3, 0.45, 1};
  std::vector<double> y;
  for (const double t : x) y.push_back(2 * t - 1);
  const auto f = build(oracle::crisp_config(x, y, {0.6, 0.2, 0.7}));
  for (int m = 0; m <= 100; ++m) {
    const double t = m / 100.0;
    EXPECT_NEAR(eval_fif(f, t).core().lo, 2 * t - 1, 1e-8);
  }
  for (std::size_t j = 0; j < f.sample_count(); ++j) {
    ASSERT_NEAR(f.lower(j)[0], 2 * f.xs()[j] - 1, 1e-8);
  }
}

TEST(ExtractLevel, SupportAndCores) {
  const auto f = build(oracle::triangular_config());
  const auto zero = extract_level(f, 0.0);
  const auto one = extract_level(f, 1.0);
  for (std::size_t j = 0; j < f.sample_count(); ++j) {
    EXPECT_EQ(zero.lower[j], f.sample(j).support().lo);
    EXPECT_EQ(zero.upper[j], f.sample(j).support().hi);
    // Every datum has a singleton core, so the 1-level curves coincide.
    EXPECT_NEAR(one.lower[j], one.upper[j], 1e-8);
  }
  EXPECT_EQ(code_of([&] { extract_level(f, -0.1); }), ErrorCode::OutOfDomain);
}

TEST(ExtractLevel, Example1CoresCoincide) {
  const auto f = build(oracle::example1_config());
  const auto one = extract_level(f, 1.0);
  for (std::size_t j = 0; j < f.sample_count(); ++j) EXPECT_NEAR(one.lower[j], one.upper[j], 1e-8);
}

TEST(ExtractLevel, HalfLevelInterpolatesAtMatchedKnots) {
  const auto c = oracle::triangular_config();
  const auto f = build(c);
  const auto half = extract_level(f, 0.5);
  for (std::size_t i = 0; i < c.knots.size(); ++i) {
    const auto iv = f.system().data().values()[i].at_level(0.5);
    EXPECT_NEAR(half.lower[f.knot_index()[i]], iv.lo, 1e-8);
    EXPECT_NEAR(half.upper[f.knot_index()[i]], iv.hi, 1e-8);
  }
}

TEST(ScalarFif, ValidatesInputs) {
  const std::vector<double> x{0, 0.5, 1}, y{0, 1, 0.5};
  const auto q = oracle::chord_q(x, y, {0.5, 0.5});
  EXPECT_EQ(code_of([&] { ScalarFif(x, y, {0.5, 1.0}, q); }), ErrorCode::ScaleOutOfRange);
  EXPECT_EQ(code_of([&] { ScalarFif(x, y, {0.5}, q); }), ErrorCode::SchemaViolation);
  EXPECT_EQ(code_of([&] { ScalarFif(x, y, {0.3, 0.5}, q); }), ErrorCode::MatchingNotVerified);
  ScalarFifOptions loose;
  loose.require_matching = false;
  // q was built for s_1 = 0.5; at x_1 the mismatch is (0.5 - 0.3)·y_n.
  EXPECT_NEAR(ScalarFif(x, y, {0.3, 0.5}, q, loose).matching_residual(), 0.1, 1e-15);
  const ScalarFif ok(x, y, {0.5, 0.5}, q);
  EXPECT_EQ(code_of([&] { ok(1.5); }), ErrorCode::OutOfDomain);
}

TEST(ScalarFif, NegativeScalesAreAllowed) {
  const std::vector<double> x{0, 0.5, 1}, y{0, 1, 0}, s{-0.5, 0.4};
  const ScalarFif f(x, y, s, oracle::chord_q(x, y, s));
  EXPECT_NEAR(f(0.5), 1.0, 1e-12);
  EXPECT_NEAR(f(1.0), 0.0, 1e-12);
}
