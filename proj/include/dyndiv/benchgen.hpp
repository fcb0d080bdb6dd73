#ifndef DYNDIV_BENCHGEN_HPP
#define DYNDIV_BENCHGEN_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dyndiv/metric.hpp"
#include "dyndiv/rng.hpp"

namespace dyndiv {

/// Regular grid of grid_side^dimension points with the given spacing plus
/// uniform noise inside the grid's bounding box. For k = grid_side^dimension
/// the grid itself is optimal with diversity `spacing`.
struct GridConfig {
  std::size_t dimension = 2;
  std::size_t grid_side = 3;
  std::size_t noise_count = 0;
  double spacing = 1.0;
  /// Distance kept between noise and the bounding-box faces. Defaults to
  /// spacing / 2, or spacing / 4 when grid_side == 2 (a half-spacing margin
  /// would collapse the noise box to a single point).
  std::optional<double> noise_margin;
  Seed seed = 0;

  double effective_margin() const;
  /// Throws ConfigError.
  void validate() const;
};

/// Line instance on which a random pick from the termination layer can be
/// almost 2b^2/(b-1) times worse than optimal (k = 2).
struct WorstCaseBasicConfig {
  double b = 2.0;
  double mu = 0.1;
  double eta = 0.1;

  void validate() const;
};

/// Line instance on which the inherited and greedy selections can be almost
/// 2 + 2b/(b-1) times worse than optimal (k = 2).
struct WorstCaseInheritConfig {
  double b = 2.0;
  double mu = 0.1;
  double eta = 0.1;

  void validate() const;
};

struct GeneratedInstance {
  std::string generator;
  PointSet pool;
  /// Every id of `pool` exactly once.
  std::vector<PointId> insertion_order;
  std::optional<double> known_d_star;
  std::optional<std::size_t> optimal_k;
  /// Generator parameters and derived quantities, in emission order.
  std::vector<std::pair<std::string, std::string>> metadata;
};

/// Smallest J >= 1 with b^(2-J)/(b-1) <= eta.
int worstcase_basic_jmax(double b, double eta);
/// Smallest J >= 1 with (1/b)^J <= eta.
int worstcase_inherit_jmax(double b, double eta);

/// Ids 0..g^D-1 are the grid (lexicographic, last axis fastest), noise
/// follows. The insertion order is a seeded shuffle.
GeneratedInstance gen_grid(const GridConfig& cfg);

/// 2D: the origin, (0, b + mu), and +-x for the partial sums
/// x_J = sum_{j=1..J} b^2 b^(1-j), J = 1..J_max, plus +-(b^3/(b-1) - eta) on
/// the x axis. Inserted by increasing |x| starting at the origin.
GeneratedInstance gen_worstcase_basic(const WorstCaseBasicConfig& cfg);

/// 1D: 0, +-(1 + mu), +-(1 + sum_{j=1..J} b^(1-j)) for J = 1..J_max and
/// +-(b/(b-1) + 1 - eta). Inserted by increasing absolute value.
GeneratedInstance gen_worstcase_inherit(const WorstCaseInheritConfig& cfg);

}  // namespace dyndiv

#endif  // DYNDIV_BENCHGEN_HPP
