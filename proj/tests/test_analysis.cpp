#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ffif/analysis.hpp"
#include "ffif/config.hpp"
#include "ffif/error.hpp"
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

FuzzyFif build(const RunConfig& c) { return iterate_rb(make_system(c), make_rb_options(c)); }

RunConfig quarter_config(std::vector<double> scales) {
  auto c = oracle::example1_config();
  c.scales = std::move(scales);
  return c;
}

}  // namespace

TEST(DataBound, Examples) {
  EXPECT_EQ(data_bound(make_system(oracle::example1_config())->data()), 7.0);
  const auto g = LevelGrid::uniform(10);
  EXPECT_EQ(data_bound(FuzzyDataSet({0, 1, 2}, {FuzzyNumber::crisp(g, -2), FuzzyNumber::crisp(g, 3),
                                                FuzzyNumber::crisp(g, 1)})),
            3.0);
  const auto t = from_membership(Triangular{0, 1, 2}, g);
  EXPECT_EQ(data_bound(FuzzyDataSet({0, 1, 2}, {t, t, t})), 2.0);
}

TEST(HoelderConstants, Example1IsDeltaGreaterThanOne) {
  const auto sys = make_system(oracle::example1_config());
  const auto r = hoelder_constants(*sys, data_bound(sys->data()), sys->rho());
  EXPECT_EQ(r.regime, HoelderCase::DeltaGt1);
  EXPECT_NEAR(r.delta, 3.2, 1e-15);
  EXPECT_NEAR(r.tau, oracle::kExample1Tau, 1e-15);

  // Constants transcribed from the printed formulas.
  const double L = 1.0, s = 0.8, c = 0.25, A = 7.0, rho = sys->rho();
  const double alpha = (rho * c * L + (1 + s) * A) / (1 - s);
  const double M = std::max(2 * alpha / (c * L), rho);
  const double Q = M * 3.2 / (3.2 - 1) * std::max(1.0, L);
  EXPECT_NEAR(r.alpha, alpha, 1e-12 * alpha);
  EXPECT_NEAR(r.M, M, 1e-12 * M);
  EXPECT_NEAR(r.Q, Q, 1e-12 * Q);
  EXPECT_NEAR(r.K, 2 * 4 * Q, 1e-12 * Q);
  EXPECT_EQ(r.H_f, r.K);
}

TEST(HoelderConstants, SmallScalesAreLipschitz) {
  const auto sys = make_system(quarter_config({0.1, 0.1, 0.1, 0.1}));
  const auto r = hoelder_constants(*sys, 7.0, sys->rho());
  EXPECT_EQ(r.regime, HoelderCase::DeltaLt1);
  EXPECT_EQ(r.tau, 1.0);
  EXPECT_NEAR(r.Q, r.M / (1 - 0.4), 1e-12 * r.Q);
}

TEST(HoelderConstants, ZeroScales) {
  const auto sys = make_system(quarter_config({0, 0, 0, 0}));
  const auto r = hoelder_constants(*sys, 7.0, sys->rho());
  EXPECT_EQ(r.delta, 0.0);
  EXPECT_EQ(r.tau, 1.0);
  EXPECT_EQ(r.regime, HoelderCase::DeltaLt1);
  EXPECT_TRUE(std::isfinite(r.H_f) && r.H_f > 0);
}

TEST(HoelderConstants, BoundaryCaseUsesChosenTau) {
  const auto sys = make_system(quarter_config({0.25, 0.25, 0.1, 0.25}));
  const auto r = hoelder_constants(*sys, 7.0, sys->rho());
  EXPECT_EQ(r.regime, HoelderCase::DeltaEq1);
  EXPECT_EQ(r.tau, 0.9);
  // Sign arrangement as printed: M(1 - 1/((1-τ)·e·ln c_max))·max{1, L}.
  const double Q = r.M * (1 - 1 / ((1 - 0.9) * std::numbers::e * std::log(0.25)));
  EXPECT_NEAR(r.Q, Q, 1e-12 * Q);
  EXPECT_EQ(hoelder_constants(*sys, 7.0, sys->rho(), 0.5).tau, 0.5);
  EXPECT_EQ(code_of([&] { hoelder_constants(*sys, 7.0, sys->rho(), 1.0); }), ErrorCode::InvalidTauChoice);
  EXPECT_EQ(code_of([&] { hoelder_constants(*sys, 7.0, sys->rho(), 0.0); }), ErrorCode::InvalidTauChoice);
}

TEST(HoelderConstants, NonPositiveExponentIsReported) {
  // c_max close to 1 makes ln δ / ln c_max very negative.
  auto c = oracle::triangular_config();
  c.knots = {0, 0.05, 0.1, 3};
  c.scales = {0.9, 0.1, 0.1};
  const auto sys = make_system(c);
  EXPECT_EQ(code_of([&] { hoelder_constants(*sys, 4.0, sys->rho()); }), ErrorCode::NonPositiveExponent);
}

TEST(HoelderConstants, TauTendsToOneAsScaleApproachesCMin) {
  double previous = 0.0;
  for (const double eps : {1e-1, 1e-2, 1e-3, 1e-4, 1e-6}) {
    const auto sys = make_system(quarter_config({0.1, 0.25 * (1 + eps), 0.1, 0.1}));
    const auto r = hoelder_constants(*sys, 7.0, sys->rho());
    EXPECT_EQ(r.regime, HoelderCase::DeltaGt1);
    EXPECT_GT(r.tau, previous);
    EXPECT_LT(r.tau, 1.0);
    previous = r.tau;
  }
  EXPECT_GT(previous, 1 - 1e-5);
}

TEST(HoelderConstants, ScaleCovariance) {
  const double kappa = 3.0;
  auto c = oracle::triangular_config();
  auto scaled = c;
  for (auto& v : scaled.values) {
    auto t = std::get<Triangular>(v);
    v = Triangular{kappa * t.a, kappa * t.b, kappa * t.c};
  }
  const auto a = make_system(c);
  const auto b = make_system(scaled);
  const auto ra = hoelder_constants(*a, data_bound(a->data()), a->rho());
  const auto rb = hoelder_constants(*b, data_bound(b->data()), b->rho());
  EXPECT_EQ(ra.tau, rb.tau);
  EXPECT_LE(rb.A, kappa * ra.A * (1 + 1e-12));
  EXPECT_LE(rb.alpha, kappa * ra.alpha * (1 + 1e-9));
  EXPECT_LE(rb.M, kappa * ra.M * (1 + 1e-9));
  EXPECT_LE(rb.Q, kappa * ra.Q * (1 + 1e-9));
  EXPECT_LE(rb.H_f, kappa * ra.H_f * (1 + 1e-9));
}

TEST(HoelderConstants, RejectsScaleAtOne) {
  // IfsSystem already refuses s = 1, so hoelder_constants sees it only through
  // a system built with the check bypassed; the report path is covered by the
  // config test for ScaleOutOfRange. Here: s just below 1 still works.
  const auto sys = make_system(quarter_config({0.1, 0.999, 0.1, 0.1}));
  EXPECT_NO_THROW(hoelder_constants(*sys, 7.0, sys->rho()));
}

TEST(VerifyHoelder, Example1HasNoViolations) {
  const auto c = oracle::example1_config();
  const auto f = build(c);
  const auto sys = f.system_ptr();
  const auto r = hoelder_constants(*sys, data_bound(sys->data()), sys->rho());
  const auto v = verify_hoelder_bound(f, r, 10000, c.seed);
  EXPECT_GE(v.pairs, 10000u);
  EXPECT_EQ(v.violations, 0u);
  EXPECT_TRUE(v.pass);
  EXPECT_LT(v.max_ratio, r.H_f);
}

TEST(VerifyHoelder, StraightLineRatioIsTheSlope) {
  const std::vector<double> x{0, 1.0 / 3, 2.0 / 3, 1};
  std::vector<double> y;
  for (const double t : x) y.push_back(2 * t - 1);
  const auto f = build(oracle::crisp_config(x, y, {0.2, 0.3, 0.25}));
  const auto sys = f.system_ptr();
  const auto r = hoelder_constants(*sys, data_bound(sys->data()), sys->rho());
  ASSERT_EQ(r.tau, 1.0);
  const auto v = verify_hoelder_bound(f, r, 2000, 5);
  EXPECT_TRUE(v.pass);
  EXPECT_LE(v.max_ratio, 2.0 * (1 + 1e-6));
  EXPECT_GE(v.max_ratio, 2.0 * (1 - 1e-6));
}

TEST(EstimateExponent, LinearCrispIsOne) {
  const std::vector<double> x{0, 0.25, 0.5, 0.75, 1};
  std::vector<double> y;
  for (const double t : x) y.push_back(3 * t + 1);
  const auto e = estimate_exponent(build(oracle::crisp_config(x, y, {0.3, 0.7, 0.4, 0.8})), 6);
  EXPECT_NEAR(e.fitted_exponent, 1.0, 0.02);
  EXPECT_EQ(e.scales.size(), 7u);
  for (std::size_t i = 1; i < e.oscillations.size(); ++i) {
    EXPECT_LE(e.oscillations[i], e.oscillations[i - 1] * (1 + 1e-9));
  }
}

TEST(EstimateExponent, ZeroScalesLookLipschitz) {
  auto c = oracle::triangular_config();
  c.scales = {0, 0, 0};
  EXPECT_NEAR(estimate_exponent(build(c), 6).fitted_exponent, 1.0, 0.05);
}

TEST(EstimateExponent, Example1AboveTheoreticalTau) {
  const auto f = build(oracle::example1_config());
  const auto e = estimate_exponent(f, 6);
  EXPECT_GE(e.fitted_exponent, oracle::kExample1Tau - 0.05);
}

TEST(EstimateExponent, Errors) {
  auto c = oracle::triangular_config();
  c.grid = 64;
  const auto f = build(c);
  EXPECT_EQ(code_of([&] { estimate_exponent(f, 6); }), ErrorCode::InsufficientResolution);
  EXPECT_EQ(code_of([&] { estimate_exponent(f, 3); }), ErrorCode::InvalidArgument);
}

TEST(LevelEquivalence, CrispDataHasNoGap) {
  const auto f = build(oracle::crisp_config({0, 0.25, 0.5, 0.75, 1}, {1, 3, 3, 2.5, 4}, {0.3, 0.7, 0.4, 0.8}));
  const std::vector<double> lambdas{0, 0.5, 1};
  const auto r = check_level_equivalence(f, lambdas);
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.worst_gap(), 1e-10);
}

TEST(LevelEquivalence, MatchedFuzzyDataAtFineGrid) {
  auto c = oracle::triangular_config();
  c.grid = 4096;
  const auto f = build(c);
  const std::vector<double> lambdas{0, 0.25, 0.5, 0.75, 1};
  const auto r = check_level_equivalence(f, lambdas);
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.worst_gap(), 1e-6);
  for (const auto& l : r.levels) EXPECT_TRUE(l.matching_ok);
}

TEST(LevelEquivalence, Example1LevelDataBreakScalarMatching) {
  auto c = oracle::example1_config();
  c.grid = 256;
  const auto f = build(c);
  const std::vector<double> lambdas{0, 0.5, 1};
  EXPECT_EQ(code_of([&] { check_level_equivalence(f, lambdas); }), ErrorCode::MatchingNotVerified);
  LevelEquivalenceOptions o;
  o.allow_unmatched = true;
  const auto r = check_level_equivalence(f, lambdas, o);
  EXPECT_FALSE(r.pass);
  ASSERT_EQ(r.levels.size(), 3u);
  EXPECT_FALSE(r.levels[0].matching_ok);
  EXPECT_FALSE(r.levels[1].matching_ok);
  EXPECT_TRUE(r.levels[2].matching_ok);
}

TEST(LevelEquivalence, PerturbedScalarQShowsAGap) {
  const auto c = oracle::triangular_config();
  const auto f = build(c);
  const auto& sys = f.system();
  std::vector<double> y;
  for (const auto& u : sys.data().values()) y.push_back(u.at_level(0.5).lo);
  ScalarFifOptions o;
  o.require_matching = false;
  const ScalarFif bumped(
      c.knots, y, c.scales,
      [&sys](std::size_t k, double x) { return sys.q(k, x).at_level(0.5).lo + (k == 1 ? 1e-3 : 0.0); },
      o);
  const auto curves = extract_level(f, 0.5);
  double gap = 0.0;
  for (std::size_t j = 0; j < curves.xs.size(); ++j) {
    gap = std::max(gap, std::abs(curves.lower[j] - bumped(curves.xs[j])));
  }
  EXPECT_GT(gap, 1e-6);
}
