#include "dyndiv/selection.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "dyndiv/errors.hpp"

namespace dyndiv {

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::GMM:
      return "GMM";
    case Method::ICTBasic:
      return "ICTBasic";
    case Method::ICTGreedy:
      return "ICTGreedy";
    case Method::ICTInherit:
      return "ICTInherit";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  std::string key;
  for (char c : name) {
    if (c != '-' && c != '_') key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (key == "gmm") return Method::GMM;
  if (key == "ictbasic") return Method::ICTBasic;
  if (key == "ictgreedy") return Method::ICTGreedy;
  if (key == "ictinherit") return Method::ICTInherit;
  throw ConfigError("unknown method '" + std::string(name) +
                    "' (expected gmm, ict-basic, ict-greedy or ict-inherit)");
}

namespace {

void check_k(std::size_t k, std::size_t available) {
  if (k < 2) throw KTooSmallError("k must be at least 2, got " + std::to_string(k));
  if (k > available) {
    throw KTooLargeError("k=" + std::to_string(k) + " exceeds the pool of " + std::to_string(available));
  }
}

/// `init` holds indices into `pool`.
std::vector<const Point*> greedy_max_min(const MetricSpace& metric, std::span<const Point* const> pool,
                                         std::size_t k, Seed seed, std::span<const std::size_t> init) {
  const std::size_t n = pool.size();
  std::vector<const Point*> chosen;
  chosen.reserve(k);
  std::vector<char> taken(n, 0);
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());

  auto take = [&](std::size_t idx) {
    taken[idx] = 1;
    chosen.push_back(pool[idx]);
    for (std::size_t j = 0; j < n; ++j) {
      if (!taken[j]) nearest[j] = std::min(nearest[j], metric.distance(*pool[idx], *pool[j]));
    }
  };

  if (init.empty()) {
    Rng rng(seed);
    take(static_cast<std::size_t>(rng.uniform_index(n)));
  } else {
    for (std::size_t idx : init) take(idx);
  }
  while (chosen.size() < k) {
    std::size_t best = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (taken[j]) continue;
      if (best == n || nearest[j] > nearest[best] || (nearest[j] == nearest[best] && pool[j]->id < pool[best]->id)) {
        best = j;
      }
    }
    take(best);
  }
  return chosen;
}

DiverseSelection make_selection(Method method, const MetricSpace& metric, const std::vector<const Point*>& chosen,
                                std::optional<int> level, Seed seed, std::optional<double> base) {
  PointSet points(metric);
  for (const Point* p : chosen) points.add(*p);
  const double div = diversity(points);
  return {method, std::move(points), div, level, seed, base};
}

std::vector<const Point*> view(const PointSet& set) {
  std::vector<const Point*> out;
  out.reserve(set.size());
  for (const Point& p : set) out.push_back(&p);
  return out;
}

}  // namespace

DiverseSelection gmm(const PointSet& pool, std::size_t k, Seed seed, std::span<const PointId> init) {
  check_k(k, pool.size());
  if (init.size() > k) {
    throw InvalidInitError("initial set of " + std::to_string(init.size()) + " exceeds k=" + std::to_string(k));
  }
  std::unordered_map<PointId, std::size_t> position;
  for (std::size_t i = 0; i < pool.size(); ++i) position.emplace(pool[i].id, i);
  std::vector<std::size_t> start;
  start.reserve(init.size());
  for (PointId id : init) {
    const auto it = position.find(id);
    if (it == position.end()) throw InvalidInitError("initial point " + std::to_string(id) + " is not in the pool");
    if (std::find(start.begin(), start.end(), it->second) != start.end()) {
      throw InvalidInitError("initial point " + std::to_string(id) + " is repeated");
    }
    start.push_back(it->second);
  }
  const auto all = view(pool);
  return make_selection(Method::GMM, pool.metric(), greedy_max_min(pool.metric(), all, k, seed, start), std::nullopt,
                        seed, std::nullopt);
}

DiverseSelection ict_basic(const CoverTree& tree, std::size_t k, Seed seed) {
  const int level = tree.termination_level(k);
  auto candidates = tree.layer_view(level);
  // Partial Fisher-Yates: the first k slots become a uniform k-subset.
  Rng rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(candidates.size() - i));
    std::swap(candidates[i], candidates[j]);
  }
  candidates.resize(k);
  return make_selection(Method::ICTBasic, tree.metric(), candidates, level, seed, tree.base());
}

DiverseSelection ict_greedy(const CoverTree& tree, std::size_t k, Seed seed) {
  const int level = tree.termination_level(k);
  const auto candidates = tree.layer_view(level);
  return make_selection(Method::ICTGreedy, tree.metric(), greedy_max_min(tree.metric(), candidates, k, seed, {}),
                        level, seed, tree.base());
}

DiverseSelection ict_inherit(const CoverTree& tree, std::size_t k) {
  const int level = tree.termination_level(k);
  const auto candidates = tree.layer_view_by_level(level);
  const std::size_t inherited = tree.layer_size(level + 1);
  if (inherited >= k) {
    throw InvariantViolation("layer above the termination layer already holds " + std::to_string(inherited) +
                             " >= k points");
  }
  // The upper layer is the prefix of the level-ordered view.
  std::vector<std::size_t> start(inherited);
  std::iota(start.begin(), start.end(), std::size_t{0});
  return make_selection(Method::ICTInherit, tree.metric(), greedy_max_min(tree.metric(), candidates, k, 0, start),
                        level, 0, tree.base());
}

DiverseSelection run_method(Method method, const PointSet& pool, const CoverTree& tree, std::size_t k, Seed seed) {
  switch (method) {
    case Method::GMM:
      return gmm(pool, k, seed);
    case Method::ICTBasic:
      return ict_basic(tree, k, seed);
    case Method::ICTGreedy:
      return ict_greedy(tree, k, seed);
    case Method::ICTInherit:
      return ict_inherit(tree, k);
  }
  throw ConfigError("unknown method");
}

PointId gmm_start_point(std::span<const Point* const> pool, Seed seed) {
  if (pool.empty()) throw TooFewPointsError("empty pool has no start point");
  Rng rng(seed);
  return pool[static_cast<std::size_t>(rng.uniform_index(pool.size()))]->id;
}

PointId gmm_start_point(const PointSet& pool, Seed seed) {
  const auto all = view(pool);
  return gmm_start_point(all, seed);
}

std::optional<Seed> search_seed(const std::function<bool(Seed)>& accept, Seed first, std::size_t max_attempts) {
  for (std::size_t i = 0; i < max_attempts; ++i) {
    if (accept(first + i)) return first + i;
  }
  return std::nullopt;
}

}  // namespace dyndiv
