#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "dyndiv/errors.hpp"
#include "dyndiv/metric.hpp"
#include "test_util.hpp"

namespace dyndiv {
namespace {

constexpr double kTol = 1e-9;

TEST(Metric, EuclideanPythagoreanTriple) {
  const auto m = MetricSpace::euclidean(2);
  EXPECT_DOUBLE_EQ(distance(m, Point{0, {0, 0}}, Point{1, {3, 4}}), 5.0);
}

TEST(Metric, CosineIdenticalAndOrthogonal) {
  const auto m = MetricSpace::cosine(2);
  EXPECT_NEAR(distance(m, Point{0, {1, 0}}, Point{1, {1, 0}}), 0.0, kTol);
  EXPECT_NEAR(distance(m, Point{0, {1, 0}}, Point{1, {0, 1}}), 1.0, kTol);
  EXPECT_NEAR(distance(m, Point{0, {1, 0}}, Point{1, {-1, 0}}), 2.0, kTol);
}

TEST(Metric, CosineNeverNegative) {
  const auto m = MetricSpace::cosine(3);
  const Point a{0, {0.1, 0.2, 0.3}};
  const Point b{1, {0.2, 0.4, 0.6}};
  EXPECT_GE(distance(m, a, b), 0.0);
}

TEST(Metric, DimensionMismatchThrows) {
  const auto m = MetricSpace::euclidean(2);
  EXPECT_THROW(distance(m, Point{0, {0, 0}}, Point{1, {1, 2, 3}}), DimensionError);
}

TEST(Metric, ZeroNormUnderCosineThrows) {
  const auto m = MetricSpace::cosine(2);
  EXPECT_THROW(distance(m, Point{0, {0, 0}}, Point{1, {1, 1}}), DegenerateVectorError);
  PointSet s(m);
  EXPECT_THROW(s.add({0, {0, 0}}), DegenerateVectorError);
}

TEST(Metric, ZeroDimensionRejected) { EXPECT_THROW(MetricSpace::euclidean(0), DimensionError); }

TEST(Metric, ParseMetricKind) {
  EXPECT_EQ(parse_metric_kind("euclidean"), MetricKind::Euclidean);
  EXPECT_EQ(parse_metric_kind("cosine"), MetricKind::Cosine);
  EXPECT_THROW(parse_metric_kind("manhattan"), ConfigError);
}

TEST(PointSetTest, RejectsDuplicateIdsAndBadPoints) {
  PointSet s(MetricSpace::euclidean(2));
  s.add({7, {1, 2}});
  EXPECT_THROW(s.add({7, {3, 4}}), DuplicateIdError);
  EXPECT_THROW(s.add({8, {1}}), DimensionError);
  EXPECT_THROW(s.add({9, {1, std::numeric_limits<double>::quiet_NaN()}}), ValueError);
  EXPECT_THROW(s.add({10, {std::numeric_limits<double>::infinity(), 0}}), ValueError);
  EXPECT_EQ(s.size(), 1u);
  ASSERT_NE(s.find(7), nullptr);
  EXPECT_EQ(s.find(7)->coords[1], 2.0);
  EXPECT_EQ(s.find(8), nullptr);
}

TEST(Diversity, UnitTriangle) {
  PointSet s(MetricSpace::euclidean(2), {{0, {0, 0}}, {1, {1, 0}}, {2, {0, 1}}});
  EXPECT_NEAR(diversity(s), 1.0, kTol);
}

TEST(Diversity, OuterEndpointsOfTheBasicWorstCase) {
  PointSet s(MetricSpace::euclidean(2), {{0, {-8, 0}}, {1, {8, 0}}});
  EXPECT_NEAR(diversity(s), 16.0, kTol);
}

TEST(Diversity, LineExample) {
  PointSet s(MetricSpace::euclidean(1), {{0, {0}}, {1, {4}}, {2, {6}}, {3, {7}}});
  EXPECT_NEAR(diversity(s), 1.0, kTol);
}

TEST(Diversity, SingletonThrows) {
  PointSet s(MetricSpace::euclidean(1), {{0, {0}}});
  EXPECT_THROW(diversity(s), TooFewPointsError);
}

TEST(MetricProperty, SymmetryIdentityTriangle) {
  const auto m = MetricSpace::euclidean(4);
  for (Seed seed = 0; seed < 200; ++seed) {
    const PointSet s = testing::random_pool(seed, 3, 4, 10.0);
    const double ab = distance(m, s[0], s[1]);
    EXPECT_EQ(ab, distance(m, s[1], s[0]));
    EXPECT_EQ(distance(m, s[0], s[0]), 0.0);
    EXPECT_LE(distance(m, s[0], s[2]), ab + distance(m, s[1], s[2]) + kTol);
    EXPECT_NEAR(ab, testing::euclid(s[0].coords, s[1].coords), kTol);
  }
}

TEST(MetricProperty, DiversityMatchesBruteForce) {
  Rng sizes(99);
  for (Seed seed = 0; seed < 60; ++seed) {
    const std::size_t n = 2 + sizes.uniform_index(49);
    const PointSet s = testing::random_pool(seed, n, 1 + seed % 4, 5.0);
    EXPECT_NEAR(diversity(s), testing::brute_diversity(s), kTol) << "seed " << seed;
  }
}

TEST(MetricProperty, RemovingAPointNeverLowersDiversity) {
  for (Seed seed = 0; seed < 40; ++seed) {
    const PointSet s = testing::random_pool(seed, 12, 2);
    const double full = diversity(s);
    for (std::size_t drop = 0; drop < s.size(); ++drop) {
      std::vector<Point> rest;
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (i != drop) rest.push_back(s[i]);
      }
      EXPECT_LE(full, diversity(s.metric(), std::span<const Point>(rest)));
    }
  }
}

}  // namespace
}  // namespace dyndiv
