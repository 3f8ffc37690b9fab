#include <gtest/gtest.h>

#include <cmath>

#include "ffif/error.hpp"
#include "ffif/fuzzy_number.hpp"
#include "ffif/membership.hpp"
#include "oracles.hpp"

using namespace ffif;

namespace {

GridPtr grid100() { return LevelGrid::uniform(100); }

FuzzyNumber tri(const GridPtr& g, double a, double b, double c) {
  return from_membership(Triangular{a, b, c}, g);
}

void expect_levels_near(const FuzzyNumber& u, const std::function<Interval(double)>& expected,
                        double tol) {
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double lambda = (*u.grid())[k];
    const Interval e = expected(lambda);
    EXPECT_NEAR(u.lower()[k], e.lo, tol) << "lambda " << lambda;
    EXPECT_NEAR(u.upper()[k], e.hi, tol) << "lambda " << lambda;
  }
}

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

}  // namespace

TEST(LevelGrid, UniformHasEndpointsAndStep) {
  const auto g = LevelGrid::uniform(4);
  ASSERT_EQ(g->size(), 5u);
  EXPECT_EQ((*g)[0], 0.0);
  EXPECT_EQ((*g)[4], 1.0);
  EXPECT_DOUBLE_EQ((*g)[1], 0.25);
}

TEST(LevelGrid, RejectsBadLevelLists) {
  EXPECT_EQ(code_of([] { LevelGrid::from_levels({0.1, 1.0}); }), ErrorCode::InvalidLevels);
  EXPECT_EQ(code_of([] { LevelGrid::from_levels({0.0, 0.5, 0.5, 1.0}); }), ErrorCode::InvalidLevels);
  EXPECT_EQ(code_of([] { LevelGrid::uniform(0); }), ErrorCode::InvalidArgument);
}

TEST(LevelGrid, LocateInterpolates) {
  const auto g = LevelGrid::uniform(4);
  const auto [k, w] = g->locate(0.375);
  EXPECT_EQ(k, 1u);
  EXPECT_NEAR(w, 0.5, 1e-15);
  EXPECT_EQ(g->locate(0.5).second, 0.0);
  EXPECT_EQ(code_of([&] { g->locate(1.5); }), ErrorCode::OutOfDomain);
}

TEST(FuzzyNumber, RejectsBrokenNesting) {
  const auto g = LevelGrid::uniform(2);
  EXPECT_EQ(code_of([&] { FuzzyNumber(g, {0, 1, 0.5}, {2, 1.5, 1}); }), ErrorCode::InvalidLevels);
  EXPECT_EQ(code_of([&] { FuzzyNumber(g, {0, 1, 2}, {2, 1.5, 1}); }), ErrorCode::InvalidLevels);
  EXPECT_EQ(code_of([&] { FuzzyNumber(g, {0, 1}, {2, 1}); }), ErrorCode::LengthMismatch);
  EXPECT_NO_THROW(FuzzyNumber(g, {0, 0.5, 1}, {2, 1.5, 1}));
}

TEST(FuzzyNumber, AtLevelIsLinearBetweenGridLevels) {
  const auto g = LevelGrid::uniform(2);
  const FuzzyNumber u(g, {0, 1, 1.5}, {4, 2, 1.5});
  const Interval i = u.at_level(0.25);
  EXPECT_DOUBLE_EQ(i.lo, 0.5);
  EXPECT_DOUBLE_EQ(i.hi, 3.0);
}

TEST(Membership, TriangularInvertsLinearFlanks) {
  const auto u = tri(grid100(), 0, 1, 2);
  expect_levels_near(u, [](double l) { return oracle::triangle_level(0, 1, 2, l); }, 1e-15);
}

TEST(Membership, GaussianHalfLevelMatchesClosedForm) {
  const auto g = LevelGrid::from_levels({0.0, 0.5, 1.0});
  const auto u = from_membership(TruncatedGaussian{3, 1, 0, 6}, g);
  EXPECT_NEAR(u.lower()[1], 3 - oracle::kSqrtLn2, 1e-9);
  EXPECT_NEAR(u.upper()[1], 3 + oracle::kSqrtLn2, 1e-9);
  // Independent bisection on the membership function itself.
  const auto mu = [](double y) { return std::exp(-(y - 3) * (y - 3)) - 0.5; };
  EXPECT_NEAR(u.lower()[1], oracle::bisect(mu, 0, 3), 1e-9);
  EXPECT_NEAR(u.upper()[1], oracle::bisect(mu, 3, 6), 1e-9);
  EXPECT_EQ(u.lower()[0], 0.0);
  EXPECT_EQ(u.upper()[0], 6.0);
}

TEST(Membership, QuadraticFlanksMatchClosedForm) {
  const auto g = grid100();
  const auto concave = from_membership(QuadraticFlank{1, 3, 5, FlankShape::Concave}, g);
  const auto convex = from_membership(QuadraticFlank{1, 4, 7, FlankShape::Convex}, g);
  expect_levels_near(concave,
                     [](double l) {
                       const double r = 2 * std::sqrt(1 - l);
                       return Interval{3 - r, 3 + r};
                     },
                     1e-12);
  expect_levels_near(convex,
                     [](double l) {
                       const double r = 3 * (1 - std::sqrt(l));
                       return Interval{4 - r, 4 + r};
                     },
                     1e-12);
}

TEST(Membership, NestedLevelTableUnchanged) {
  const auto g = LevelGrid::uniform(2);
  const LevelTable t{{0, 0.5, 1}, {-1, -0.25, 0}, {2, 1, 0.5}};
  const auto u = from_membership(t, g);
  EXPECT_EQ(std::vector<double>(u.lower().begin(), u.lower().end()), t.lower);
  EXPECT_EQ(std::vector<double>(u.upper().begin(), u.upper().end()), t.upper);
}

TEST(Membership, PiecewisePolynomialTent) {
  // μ = y on [0,1], 2 - y on [1,2]: the triangle (0,1,2).
  const PiecewiseAnalytic p{{{0, 1, {0, 1}}, {1, 2, {2, -1}}}};
  const auto u = from_membership(p, LevelGrid::uniform(10));
  expect_levels_near(u, [](double l) { return oracle::triangle_level(0, 1, 2, l); }, 1e-9);
}

TEST(Membership, ValidationErrors) {
  const auto g = grid100();
  EXPECT_EQ(code_of([&] { from_membership(Triangular{2, 1, 3}, g); }), ErrorCode::InvalidMembership);
  EXPECT_EQ(code_of([&] { from_membership(Triangular{0, 1, INFINITY}, g); }),
            ErrorCode::UnboundedSupport);
  EXPECT_EQ(code_of([&] { from_membership(TruncatedGaussian{5, 1, 0, 2}, g); }), ErrorCode::NonNormal);
  EXPECT_EQ(code_of([&] {
              invert_membership([](double y) { return 0.5 * std::max(0.0, 1 - std::abs(y)); }, -1, 1, g);
            }),
            ErrorCode::NonNormal);
  // Two separated bumps: not convex.
  EXPECT_EQ(code_of([&] {
              invert_membership(
                  [](double y) {
                    return std::max({0.0, 1 - 4 * std::abs(y - 0.25), 1 - 4 * std::abs(y - 1.0)});
                  },
                  0, 1.5, g);
            }),
            ErrorCode::NonConvexLevels);
  EXPECT_EQ(code_of([&] { from_membership(LevelTable{{0, 1}, {0, 2}, {3, 1}}, g); }),
            ErrorCode::NonConvexLevels);
}

TEST(Add, TriangularSumIsLevelwise) {
  const auto g = grid100();
  const auto s = add(tri(g, 0, 1, 2), tri(g, 2, 2.5, 3));
  expect_levels_near(s, [](double l) { return Interval{2 + 1.5 * l, 5 - 1.5 * l}; }, 1e-14);
}

TEST(Add, IdentityAndCrispHomomorphism) {
  const auto g = grid100();
  const auto u = tri(g, 0, 1, 2);
  EXPECT_EQ(u + FuzzyNumber::crisp(g, 0.0), u);
  EXPECT_EQ(add(FuzzyNumber::crisp(g, 1.5), FuzzyNumber::crisp(g, 2.25)), FuzzyNumber::crisp(g, 3.75));
}

TEST(Add, GridMismatchRejected) {
  const auto a = tri(LevelGrid::uniform(10), 0, 1, 2);
  const auto b = tri(LevelGrid::uniform(20), 0, 1, 2);
  EXPECT_EQ(code_of([&] { add(a, b); }), ErrorCode::GridMismatch);
  EXPECT_EQ(code_of([&] { d_infty(a, b); }), ErrorCode::GridMismatch);
}

TEST(Scale, PositiveZeroNegative) {
  const auto g = grid100();
  const auto u = tri(g, 0, 1, 2);
  expect_levels_near(scale(0.3, u), [](double l) { return oracle::triangle_level(0, 0.3, 0.6, l); },
                     1e-15);
  EXPECT_EQ(scale(0.0, u), FuzzyNumber::crisp(g, 0.0));
  const auto neg = -1.0 * u;
  expect_levels_near(neg, [](double l) { return oracle::triangle_level(-2, -1, 0, l); }, 1e-15);
  for (std::size_t k = 0; k < u.size(); ++k) {
    EXPECT_EQ(neg.lower()[k], -u.upper()[k]);
    EXPECT_EQ(neg.upper()[k], -u.lower()[k]);
  }
  EXPECT_EQ(find_level_violation(neg.lower(), neg.upper()), -1);
}

TEST(GDifference, SelfDifferenceIsCrispZero) {
  const auto g = grid100();
  const auto u = from_membership(TruncatedGaussian{3, 1, 0, 6}, g);
  EXPECT_EQ(g_difference(u, u), FuzzyNumber::crisp(g, 0.0));
}

TEST(GDifference, TriangularExample) {
  const auto g = grid100();
  const auto d = g_difference(tri(g, 0, 1, 2), tri(g, 0, 0.5, 1));
  expect_levels_near(d, [](double l) { return oracle::triangle_level(0, 0.5, 1, l); }, 1e-15);
}

TEST(GDifference, CrispReducesToSubtraction) {
  const auto g = grid100();
  EXPECT_EQ(g_difference(FuzzyNumber::crisp(g, 5.0), FuzzyNumber::crisp(g, 1.5)),
            FuzzyNumber::crisp(g, 3.5));
}

TEST(GDifference, EnvelopeRestoresNesting) {
  // u - v endpointwise is not nested here; the envelope over β ≥ λ is.
  const auto g = LevelGrid::uniform(2);
  const FuzzyNumber u(g, {0, 0, 0}, {4, 4, 4});
  const FuzzyNumber v(g, {-1, 0, 0}, {3, 3, 1});
  const auto d = g_difference(u, v);
  // lower diffs 1,0,0 -> running min from λ=1: 0,0,0; upper diffs 1,1,3 -> running max 3,3,3
  EXPECT_EQ(std::vector<double>(d.lower().begin(), d.lower().end()), (std::vector<double>{0, 0, 0}));
  EXPECT_EQ(std::vector<double>(d.upper().begin(), d.upper().end()), (std::vector<double>{3, 3, 3}));
}

TEST(Distance, Examples) {
  const auto g = grid100();
  const auto u = tri(g, 0, 1, 2);
  EXPECT_EQ(d_infty(u, u), 0.0);
  EXPECT_DOUBLE_EQ(d_infty(u, FuzzyNumber::crisp(g, 0.0)), 2.0);
  EXPECT_DOUBLE_EQ(d_infty(FuzzyNumber::crisp(g, -1.25), FuzzyNumber::crisp(g, 2.0)), 3.25);
}

TEST(SupDistance, Examples) {
  const auto g = grid100();
  const std::vector<FuzzyNumber> f{tri(g, 0, 1, 2), tri(g, 1, 2, 4)};
  std::vector<FuzzyNumber> shifted;
  for (const auto& u : f) shifted.push_back(u + FuzzyNumber::crisp(g, -0.75));
  EXPECT_EQ(sup_distance(f, f), 0.0);
  EXPECT_NEAR(sup_distance(f, shifted), 0.75, 1e-15);
  EXPECT_DOUBLE_EQ(sup_distance(std::span(f).first(1), std::span(shifted).first(1)),
                   d_infty(f[0], shifted[0]));
  EXPECT_EQ(code_of([&] { sup_distance(f, std::span(shifted).first(1)); }), ErrorCode::LengthMismatch);
}
