#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace crnext;
using namespace testing_support;

TEST(Lp, MaximizeBoundedVariable) {
  LinearProgram lp(1);
  lp.objective[0] = -1;
  lp.add_le({Rational(1)}, 3);
  auto out = solve(lp);
  ASSERT_EQ(out.status, LpStatus::Optimal);
  EXPECT_EQ(out.value, -3);
  EXPECT_EQ(out.point[0], 3);
}

TEST(Lp, Infeasible) {
  LinearProgram lp(1);
  lp.add_le({Rational(1)}, -1);
  EXPECT_EQ(solve(lp).status, LpStatus::Infeasible);
  EXPECT_FALSE(feasible(lp));
}

TEST(Lp, Unbounded) {
  LinearProgram lp(2);
  lp.objective = {Rational(-1), Rational(0)};
  lp.add_le({Rational(1), Rational(-1)}, 1);
  EXPECT_EQ(solve(lp).status, LpStatus::Unbounded);
}

TEST(Lp, EmptySystemIsFeasible) {
  LinearProgram lp(1);
  lp.upper[0] = Rational(1);
  EXPECT_TRUE(feasible(lp));
}

TEST(Lp, DimensionMismatch) {
  LinearProgram lp(2);
  lp.add_le({Rational(1)}, 1);
  EXPECT_THROW(solve(lp), DimensionError);
}

TEST(Lp, NegativeLowerBoundsAndEqualities) {
  LinearProgram lp(2);
  lp.objective = {Rational(1), Rational(1)};
  lp.lower = {Rational(-5), Rational(-5)};
  lp.add_eq({Rational(1), Rational(-1)}, Rational(1, 2));
  auto out = solve(lp);
  ASSERT_EQ(out.status, LpStatus::Optimal);
  EXPECT_EQ(out.point[1], -5);
  EXPECT_EQ(out.point[0], Rational(-9, 2));
  EXPECT_TRUE(satisfies(lp, out.point));
}

TEST(Lp, RedundantEqualitiesAreHandled) {
  LinearProgram lp(3);
  lp.objective = {Rational(1), Rational(2), Rational(3)};
  lp.add_eq({Rational(1), Rational(1), Rational(1)}, 3);
  lp.add_eq({Rational(2), Rational(2), Rational(2)}, 6);
  auto out = solve(lp);
  ASSERT_EQ(out.status, LpStatus::Optimal);
  EXPECT_EQ(out.value, 3);
}

TEST(Lp, BranchAndBound) {
  // max x + y s.t. 2x + 2y <= 3, integers: optimum 1.
  LinearProgram lp(2);
  lp.objective = {Rational(-1), Rational(-1)};
  lp.add_le({Rational(2), Rational(2)}, 3);
  auto relax = solve(lp);
  ASSERT_EQ(relax.status, LpStatus::Optimal);
  EXPECT_EQ(relax.value, Rational(-3, 2));
  lp.integer_vars = {0, 1};
  auto mip = solve(lp);
  ASSERT_EQ(mip.status, LpStatus::Optimal);
  EXPECT_EQ(mip.value, -1);
  EXPECT_TRUE(satisfies(lp, mip.point));
}

TEST(Lp, IntegerInfeasible) {
  LinearProgram lp(1);
  lp.lower[0] = Rational(1, 3);
  lp.upper[0] = Rational(2, 3);
  lp.integer_vars = {0};
  EXPECT_EQ(solve(lp).status, LpStatus::Infeasible);
}

TEST(Lp, RandomLpsMatchVertexEnumeration) {
  std::mt19937 rng(17);
  for (int t = 0; t < 300; ++t) {
    std::size_t k = 1 + t % 4;
    auto lp = random_box_lp(rng, k, t % 3 == 0);
    auto out = solve(lp);
    auto oracle = vertex_enumeration_optimum(lp);
    if (!oracle) {
      EXPECT_EQ(out.status, LpStatus::Infeasible) << to_text(lp);
      continue;
    }
    ASSERT_EQ(out.status, LpStatus::Optimal) << to_text(lp);
    EXPECT_EQ(out.value, *oracle) << to_text(lp);
    EXPECT_TRUE(satisfies(lp, out.point));
  }
}

TEST(Lp, RelaxationBoundsIntegerOptimum) {
  std::mt19937 rng(23);
  for (int t = 0; t < 200; ++t) {
    auto lp = random_box_lp(rng, 1 + t % 3, false);
    auto relax = solve(lp);
    for (std::size_t j = 0; j < lp.num_vars(); ++j) lp.integer_vars.push_back(j);
    auto mip = solve(lp);
    if (relax.status == LpStatus::Optimal && mip.status == LpStatus::Optimal) {
      EXPECT_LE(relax.value, mip.value);
      EXPECT_TRUE(satisfies(lp, mip.point));
      for (const auto& x : mip.point) EXPECT_EQ(x.get_den(), 1);
    }
    if (relax.status == LpStatus::Infeasible) {
      EXPECT_EQ(mip.status, LpStatus::Infeasible);
    }
  }
}

TEST(Lp, HomogeneousScaleInvariance) {
  std::mt19937 rng(29);
  std::uniform_int_distribution<int> d(-3, 3);
  for (int t = 0; t < 200; ++t) {
    LinearProgram lp(3);
    for (int i = 0; i < 2; ++i) lp.add_eq({Rational(d(rng)), Rational(d(rng)), Rational(d(rng))}, 0);
    lp.add_ge({Rational(1), Rational(1), Rational(1)}, 1);
    LinearProgram scaled = lp;
    Rational f(d(rng) + 4, 7);
    for (auto& b : scaled.ineq_rhs) b *= f;
    EXPECT_EQ(feasible(lp), feasible(scaled));
  }
}

TEST(Lp, PivotLimitIsReported) {
  LinearProgram lp(3);
  lp.objective = {Rational(-1), Rational(-1), Rational(-1)};
  lp.add_le({Rational(1), Rational(2), Rational(3)}, 10);
  lp.add_le({Rational(3), Rational(2), Rational(1)}, 10);
  LpOptions opts;
  opts.max_pivots = 0;
  EXPECT_THROW(solve(lp, opts), IterationLimit);
}

TEST(Lp, TextDumpMentionsEveryRow) {
  LinearProgram lp(2);
  lp.objective = {Rational(1), Rational(-1)};
  lp.add_eq({Rational(1), Rational(1)}, 1);
  lp.add_le({Rational(1, 2), Rational(0)}, 3);
  auto text = to_text(lp);
  EXPECT_NE(text.find("1/2"), std::string::npos);
  EXPECT_NE(text.find("="), std::string::npos);
  EXPECT_NE(text.find("<="), std::string::npos);
}
