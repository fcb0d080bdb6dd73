#include <gtest/gtest.h>

#include <algorithm>
#include <limits>

#include "dyndiv/benchgen.hpp"
#include "dyndiv/errors.hpp"
#include "dyndiv/oracle.hpp"
#include "test_util.hpp"

namespace dyndiv {
namespace {

constexpr double kTol = 1e-9;

// First maximizer in lexicographic order of id tuples, found by visiting
// every combination without pruning.
std::vector<PointId> brute_argmax(const PointSet& pool, std::size_t k) {
  std::vector<const Point*> sorted;
  for (const Point& p : pool) sorted.push_back(&p);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->id < b->id; });
  const std::size_t n = sorted.size();
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  double best = -1.0;
  std::vector<PointId> best_ids;
  for (;;) {
    std::vector<std::vector<double>> pts;
    for (std::size_t i : idx) pts.push_back(sorted[i]->coords);
    const double d = testing::brute_diversity(pts);
    if (d > best) {
      best = d;
      best_ids.clear();
      for (std::size_t i : idx) best_ids.push_back(sorted[i]->id);
    }
    std::size_t pos = k;
    while (pos > 0 && idx[pos - 1] == n - k + pos - 1) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t j = pos; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return best_ids;
}

TEST(SubsetCount, SmallValuesAndSaturation) {
  EXPECT_EQ(subset_count(4, 2), 6u);
  EXPECT_EQ(subset_count(52, 5), 2598960u);
  EXPECT_EQ(subset_count(3, 5), 0u);
  EXPECT_EQ(subset_count(10, 0), 1u);
  EXPECT_EQ(subset_count(67, 33), 14226520737620288370ull);
  EXPECT_EQ(subset_count(200, 100), std::numeric_limits<std::uint64_t>::max());
  EXPECT_TRUE(oracle_feasible(30, 5));
  EXPECT_FALSE(oracle_feasible(40, 20));
  EXPECT_FALSE(oracle_feasible(5, 1));
}

TEST(ExactDiverse, LineExample) {
  const PointSet pool(MetricSpace::euclidean(1), {{0, {0}}, {1, {4}}, {2, {6}}, {3, {7}}});
  const auto res = exact_diverse(pool, 2);
  EXPECT_EQ(res.optimal_set.ids(), (std::vector<PointId>{0, 3}));
  EXPECT_DOUBLE_EQ(res.d_star, 7.0);
  EXPECT_GE(res.instances_enumerated, 1u);
  EXPECT_LE(res.instances_enumerated, 6u);
}

TEST(ExactDiverse, PureGridIsOptimal) {
  GridConfig cfg;
  cfg.grid_side = 3;
  const auto inst = gen_grid(cfg);
  const auto res = exact_diverse(inst.pool, 9);
  EXPECT_NEAR(res.d_star, 1.0, kTol);
  EXPECT_EQ(res.optimal_set.ids(), inst.pool.ids());
}

TEST(ExactDiverse, WholePool) {
  const PointSet pool = testing::random_pool(6, 9, 3);
  const auto res = exact_diverse(pool, 9);
  EXPECT_EQ(res.optimal_set.ids(), pool.ids());
  EXPECT_NEAR(res.d_star, diversity(pool), kTol);
}

TEST(ExactDiverse, Errors) {
  const PointSet pool = testing::random_pool(1, 40, 2);
  EXPECT_THROW(exact_diverse(pool, 20), BudgetExceededError);
  EXPECT_THROW(exact_diverse(pool, 41), KTooLargeError);
  EXPECT_THROW(exact_diverse(pool, 1), KTooSmallError);
}

TEST(ExactDiverse, MatchesBruteForce) {
  for (Seed seed = 0; seed < 40; ++seed) {
    const std::size_t n = 5 + seed % 8;
    const PointSet pool = seed % 2 ? testing::random_pool(seed, n, 2) : testing::lattice_pool(seed, n, 2, 5);
    for (std::size_t k = 2; k <= std::min<std::size_t>(5, n); ++k) {
      const auto res = exact_diverse(pool, k);
      EXPECT_NEAR(res.d_star, testing::brute_dstar(pool, k), kTol);
      EXPECT_NEAR(res.d_star, diversity(res.optimal_set), 0.0);
      EXPECT_EQ(res.optimal_set.ids(), brute_argmax(pool, k)) << "seed " << seed << " k " << k;
    }
  }
}

TEST(ExactDiverse, InvariantUnderRelabeling) {
  for (Seed seed = 0; seed < 20; ++seed) {
    const PointSet pool = testing::random_pool(seed + 300, 10, 2);
    auto order = testing::shuffled_ids(pool, seed);
    PointSet relabeled(pool.metric());
    for (std::size_t i = 0; i < order.size(); ++i) relabeled.add({100 + i, pool.find(order[i])->coords});
    for (std::size_t k = 2; k <= 4; ++k) {
      EXPECT_DOUBLE_EQ(exact_diverse(pool, k).d_star, exact_diverse(relabeled, k).d_star);
    }
  }
}

TEST(MethodAlpha, Values) {
  EXPECT_DOUBLE_EQ(method_alpha(Method::GMM, std::nullopt), 2.0);
  EXPECT_DOUBLE_EQ(method_alpha(Method::ICTBasic, 2.0), 8.0);
  EXPECT_DOUBLE_EQ(method_alpha(Method::ICTGreedy, 2.0), 6.0);
  EXPECT_DOUBLE_EQ(method_alpha(Method::ICTInherit, 3.0), 5.0);
  EXPECT_THROW(method_alpha(Method::ICTInherit, std::nullopt), ConfigError);
}

TEST(CheckRatio, Examples) {
  const PointSet pool(MetricSpace::euclidean(1), {{0, {0}}, {1, {4}}, {2, {6}}, {3, {7}}});
  const std::vector<PointId> start{0};
  const auto sel = gmm(pool, 2, 0, start);
  const auto check = check_ratio(pool, 2, sel);
  EXPECT_DOUBLE_EQ(check.ratio, 1.0);
  EXPECT_FALSE(check.violates);

  const auto res = exact_diverse(pool, 3);
  const DiverseSelection optimal{Method::GMM, res.optimal_set, res.d_star, std::nullopt, 0, std::nullopt};
  EXPECT_DOUBLE_EQ(check_ratio(pool, 3, optimal).ratio, 1.0);
}

TEST(CheckRatio, BasicWorstCase) {
  const auto inst = gen_worstcase_basic({});
  const CoverTree tree = build_tree(inst.pool, inst.insertion_order, 2.0);
  const auto seed = search_seed([&](Seed s) {
    auto ids = ict_basic(tree, 2, s).points.ids();
    std::sort(ids.begin(), ids.end());
    return ids == std::vector<PointId>{0, 1};
  });
  ASSERT_TRUE(seed);
  const auto check = check_ratio(inst.pool, 2, ict_basic(tree, 2, *seed));
  EXPECT_NEAR(check.d_star, 15.8, kTol);
  EXPECT_NEAR(check.ratio, 15.8 / 2.1, kTol);
  EXPECT_DOUBLE_EQ(check.alpha, 8.0);
  EXPECT_FALSE(check.violates);
}

TEST(CheckRatio, FlagsViolations) {
  PointSet points(MetricSpace::euclidean(1), {{0, {0}}, {1, {1}}});
  const DiverseSelection sel{Method::GMM, points, 1.0, std::nullopt, 0, std::nullopt};
  EXPECT_TRUE(check_ratio(2.0 + 1e-6, sel).violates);
  EXPECT_FALSE(check_ratio(2.0 + 1e-10, sel).violates);
}

TEST(OracleProperty, EveryMethodWithinAlpha) {
  for (Seed seed = 0; seed < 50; ++seed) {
    const PointSet pool = testing::random_pool(seed + 900, 6 + seed % 7, 2);
    for (std::size_t k = 2; k <= 4; ++k) {
      const double d_star = exact_diverse(pool, k).d_star;
      const CoverTree tree = build_tree(pool, testing::shuffled_ids(pool, seed), 2.0);
      for (Method m : kAllMethods) {
        const auto check = check_ratio(d_star, run_method(m, pool, tree, k, seed));
        EXPECT_FALSE(check.violates);
        EXPECT_GE(check.ratio, 1.0 - 1e-12);
      }
    }
  }
}

}  // namespace
}  // namespace dyndiv
