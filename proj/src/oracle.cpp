#include "dyndiv/oracle.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "dyndiv/errors.hpp"
#include "dyndiv/theory.hpp"

namespace dyndiv {

std::uint64_t subset_count(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // acc * (n - k + i) is divisible by i; split i between the two factors.
    const std::uint64_t g = std::gcd(acc, i);
    const std::uint64_t factor = (n - k + i) / (i / g);
    acc /= g;
    if (acc > kMax / factor) return kMax;
    acc *= factor;
  }
  return acc;
}

bool oracle_feasible(std::size_t n, std::size_t k) { return k >= 2 && k <= n && subset_count(n, k) <= kOracleBudget; }

namespace {

class Enumerator {
 public:
  Enumerator(std::vector<double> dist, std::size_t n, std::size_t k) : dist_(std::move(dist)), n_(n), k_(k) {
    current_.reserve(k);
  }

  void run() { extend(0, std::numeric_limits<double>::infinity()); }

  double best_value() const { return best_; }
  const std::vector<std::size_t>& best() const { return best_set_; }
  std::uint64_t leaves() const { return leaves_; }

 private:
  void extend(std::size_t next, double running_min) {
    if (current_.size() == k_) {
      ++leaves_;
      if (running_min > best_) {
        best_ = running_min;
        best_set_ = current_;
      }
      return;
    }
    const std::size_t missing = k_ - current_.size();
    for (std::size_t i = next; i + missing <= n_; ++i) {
      double m = running_min;
      for (std::size_t c : current_) m = std::min(m, dist_[c * n_ + i]);
      // No extension can exceed m, and ties never replace the incumbent.
      if (current_.size() >= 1 && m <= best_) continue;
      current_.push_back(i);
      extend(i + 1, m);
      current_.pop_back();
    }
  }

  std::vector<double> dist_;
  std::size_t n_;
  std::size_t k_;
  std::vector<std::size_t> current_;
  std::vector<std::size_t> best_set_;
  double best_ = -std::numeric_limits<double>::infinity();
  std::uint64_t leaves_ = 0;
};

}  // namespace

OracleResult exact_diverse(const PointSet& pool, std::size_t k) {
  const std::size_t n = pool.size();
  if (k < 2) throw KTooSmallError("k must be at least 2, got " + std::to_string(k));
  if (k > n) throw KTooLargeError("k=" + std::to_string(k) + " exceeds the pool of " + std::to_string(n));
  if (subset_count(n, k) > kOracleBudget) {
    throw BudgetExceededError("C(" + std::to_string(n) + ", " + std::to_string(k) + ") exceeds the oracle budget of " +
                              std::to_string(kOracleBudget) + " subsets");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pool[a].id < pool[b].id; });

  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = pool.metric().distance(pool[order[i]], pool[order[j]]);
      dist[i * n + j] = d;
      dist[j * n + i] = d;
    }
  }
  Enumerator search(std::move(dist), n, k);
  search.run();

  PointSet best(pool.metric());
  for (std::size_t i : search.best()) best.add(pool[order[i]]);
  return {std::move(best), search.best_value(), search.leaves()};
}

double method_alpha(Method method, std::optional<double> base) {
  if (method == Method::GMM) return 2.0;
  if (!base) throw ConfigError("cover-tree method " + std::string(to_string(method)) + " needs the tree base");
  return method == Method::ICTBasic ? alpha_basic(*base) : alpha_greedy_inherit(*base);
}

RatioCheck check_ratio(double d_star, const DiverseSelection& selection) {
  const double div = selection.achieved_diversity;
  const double ratio = div > 0.0 ? d_star / div : std::numeric_limits<double>::infinity();
  const double alpha = method_alpha(selection.method, selection.base);
  return {d_star, ratio, alpha, ratio > alpha + 1e-9};
}

RatioCheck check_ratio(const PointSet& pool, std::size_t k, const DiverseSelection& selection) {
  return check_ratio(exact_diverse(pool, k).d_star, selection);
}

}  // namespace dyndiv
