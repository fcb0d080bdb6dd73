#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include "dyndiv/errors.hpp"
#include "dyndiv/theory.hpp"

namespace dyndiv {
namespace {

TEST(Alpha, Values) {
  EXPECT_EQ(alpha_basic(2.0), 8.0);
  EXPECT_NEAR(alpha_basic(1.6), 2 * 1.6 * 1.6 / 0.6, 1e-12);
  EXPECT_NEAR(alpha_basic(1.6), 8.533333333333333, 1e-9);
  EXPECT_EQ(alpha_greedy_inherit(2.0), 6.0);
  EXPECT_NEAR(alpha_greedy_inherit(3.0), 5.0, 1e-12);
  EXPECT_NEAR(alpha_greedy_inherit(1.2), 14.0, 1e-12);
  EXPECT_NEAR(alpha_layer(2.0), 5.0, 1e-12);
  EXPECT_NEAR(beta_upper_bound(2.0), 8.0, 1e-12);
}

TEST(Alpha, InvalidBase) {
  EXPECT_THROW(alpha_basic(1.0), InvalidBaseError);
  EXPECT_THROW(alpha_greedy_inherit(0.9), InvalidBaseError);
  EXPECT_THROW(diversity_bound(2.0, 1.0), InvalidBaseError);
}

TEST(Alpha, BlowsUpNearOne) {
  double last = alpha_basic(1.5);
  for (double b : {1.1, 1.01, 1.001}) {
    EXPECT_GT(alpha_basic(b), last);
    last = alpha_basic(b);
  }
  EXPECT_GT(alpha_basic(1.0 + 1e-9), 1e9);
}

TEST(Alpha, BasicFactorMinimalAtTwo) {
  const auto curve = alpha_curve(1.01, 5.0, 39900);
  double best_b = 0, best = 1e300;
  for (const auto& s : curve) {
    if (s.alpha_basic < best) {
      best = s.alpha_basic;
      best_b = s.b;
    }
  }
  EXPECT_NEAR(best_b, 2.0, 1e-3);
  EXPECT_NEAR(best, 8.0, 1e-6);
}

TEST(DiversityBound, Examples) {
  EXPECT_NEAR(diversity_bound(5.0, 2.0), 0.2, 1e-12);
  EXPECT_NEAR(diversity_bound(2.0, 2.0), 0.5, 1e-12);
  EXPECT_NEAR(diversity_bound(8.0 - 1e-12, 2.0), 0.5, 1e-9);
  EXPECT_NEAR(bound_intercept(2.0), 5.0, 1e-12);
}

TEST(DiversityBound, BetaRange) {
  EXPECT_THROW(diversity_bound(0.99, 2.0), BetaRangeError);
  EXPECT_THROW(diversity_bound(8.0, 2.0), BetaRangeError);
  EXPECT_THROW(greedy_diversity_bound(9.0, 2.0), BetaRangeError);
  EXPECT_NO_THROW(diversity_bound(1.0, 2.0));
}

TEST(GreedyBound, Examples) {
  EXPECT_NEAR(greedy_diversity_bound(6.0, 2.0), 1.0 / 6.0, 1e-12);
  EXPECT_NEAR(greedy_diversity_bound(3.0, 2.0), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(greedy_bound_intercept(2.0), 6.0, 1e-12);
}

class BoundMinima : public ::testing::TestWithParam<double> {};

TEST_P(BoundMinima, GridMinimaMatchClosedForms) {
  const double b = GetParam();
  const auto any = minimize_diversity_bound(b);
  EXPECT_NEAR(any.value, 1.0 / (1.0 + 2.0 * b / (b - 1.0)), 1e-9);
  EXPECT_NEAR(any.value, 1.0 / alpha_layer(b), 1e-9);
  const auto greedy = minimize_greedy_diversity_bound(b);
  EXPECT_NEAR(greedy.value, 1.0 / alpha_greedy_inherit(b), 1e-9);
}

TEST_P(BoundMinima, CaseBSeparationDominatesGreedyBranch) {
  const double b = GetParam();
  const double hi = beta_upper_bound(b);
  for (int i = 0; i < 20000; ++i) {
    const double beta = 1.0 + (hi - 1.0) * i / 20000.0;
    EXPECT_GE(inherited_separation(beta, b), 0.5 * (1.0 - 2.0 * b / (beta * (b - 1.0))) - 1e-15);
  }
}

TEST_P(BoundMinima, BoundsBetweenZeroAndOne) {
  const double b = GetParam();
  for (const auto& s : bound_curve(b, 1000)) {
    EXPECT_GT(s.bound_any, 0.0);
    EXPECT_LE(s.bound_any, 1.0);
    EXPECT_LE(s.bound_greedy, s.bound_any);
  }
}

INSTANTIATE_TEST_SUITE_P(Bases, BoundMinima, ::testing::Values(1.2, 1.6, 2.0, 3.0));

TEST(Csv, BoundCurveFormat) {
  std::ostringstream out;
  write_bound_csv(out, bound_curve(2.0, 4));
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "beta,bound_any,bound_greedy");
  std::getline(in, line);
  EXPECT_EQ(line, "1,1,1");
  int rows = 1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 4);
}

TEST(Csv, AlphaCurveFormat) {
  std::ostringstream out;
  write_alpha_csv(out, alpha_curve(1.0, 2.0, 2));
  EXPECT_EQ(out.str(), "b,alpha_basic,alpha_greedy_inherit\n1.5,9,8\n2,8,6\n");
}

}  // namespace
}  // namespace dyndiv
