#ifndef DYNDIV_SELECTION_HPP
#define DYNDIV_SELECTION_HPP

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>

#include "dyndiv/cover_tree.hpp"
#include "dyndiv/metric.hpp"
#include "dyndiv/rng.hpp"

namespace dyndiv {

enum class Method { GMM, ICTBasic, ICTGreedy, ICTInherit };

inline constexpr std::array<Method, 4> kAllMethods = {Method::GMM, Method::ICTBasic, Method::ICTGreedy,
                                                      Method::ICTInherit};

std::string_view to_string(Method method) noexcept;
/// Accepts gmm, ict-basic, ict-greedy, ict-inherit (case-insensitive, '_' or
/// '-' optional). Throws ConfigError.
Method parse_method(std::string_view name);

struct DiverseSelection {
  Method method;
  /// Selected points in the order they were picked.
  PointSet points;
  double achieved_diversity = 0.0;
  std::optional<int> termination_level;
  Seed seed = 0;
  /// Cover-tree base; unset for GMM.
  std::optional<double> base;
};

/// Greedy max-min over `pool`. Without `init` the first point is drawn
/// uniformly with `seed`; otherwise the selection starts from `init`. Each
/// step adds the point farthest from the current selection, ties going to
/// the lowest id.
DiverseSelection gmm(const PointSet& pool, std::size_t k, Seed seed, std::span<const PointId> init = {});

/// k points drawn uniformly without replacement from the termination layer.
DiverseSelection ict_basic(const CoverTree& tree, std::size_t k, Seed seed);

/// GMM restricted to the termination layer.
DiverseSelection ict_greedy(const CoverTree& tree, std::size_t k, Seed seed);

/// GMM over the termination layer C_i, started from the whole layer above it.
/// Deterministic.
DiverseSelection ict_inherit(const CoverTree& tree, std::size_t k);

/// Dispatch used by the experiment runners. `pool` is only read by GMM.
DiverseSelection run_method(Method method, const PointSet& pool, const CoverTree& tree, std::size_t k, Seed seed);

/// Id of the point GMM starts from for this seed when run without `init`
/// on a pool in this order.
PointId gmm_start_point(std::span<const Point* const> pool, Seed seed);
PointId gmm_start_point(const PointSet& pool, Seed seed);

/// Scans seeds first, first + 1, ... and returns the first accepted one.
std::optional<Seed> search_seed(const std::function<bool(Seed)>& accept, Seed first = 0,
                                std::size_t max_attempts = 10000);

}  // namespace dyndiv

#endif  // DYNDIV_SELECTION_HPP
