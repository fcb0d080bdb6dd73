#include "dyndiv/benchgen.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "dyndiv/errors.hpp"
#include "dyndiv/text.hpp"

namespace dyndiv {

namespace {

constexpr std::size_t kMaxGridPoints = 10'000'000;
constexpr int kMaxJ = 4096;

// Stream tags for seed derivation.
constexpr std::uint64_t kNoiseStream = 0x6e6f697365;  // "noise"
constexpr std::uint64_t kOrderStream = 0x6f72646572;  // "order"

void check_base(double b) {
  if (!(b > 1.0) || !std::isfinite(b)) throw InvalidBaseError("base must be a finite real > 1, got " + format_real(b));
}

}  // namespace

double GridConfig::effective_margin() const {
  if (noise_margin) return *noise_margin;
  return grid_side == 2 ? spacing / 4.0 : spacing / 2.0;
}

void GridConfig::validate() const {
  if (dimension == 0) throw ConfigError("grid dimension must be positive");
  if (grid_side < 2) throw ConfigError("grid side must be at least 2");
  if (!(spacing > 0.0) || !std::isfinite(spacing)) throw ConfigError("grid spacing must be positive");
  double total = 1.0;
  for (std::size_t d = 0; d < dimension; ++d) total *= static_cast<double>(grid_side);
  if (total > static_cast<double>(kMaxGridPoints)) throw ConfigError("grid has too many points");
  const double margin = effective_margin();
  const double extent = spacing * static_cast<double>(grid_side - 1);
  if (!(margin >= 0.0) || !(2.0 * margin < extent)) {
    throw ConfigError("noise margin must lie in [0, " + format_real(extent / 2.0) + ")");
  }
}

void WorstCaseBasicConfig::validate() const {
  check_base(b);
  if (!(mu > 0.0 && mu <= 0.5)) throw ConfigError("mu must lie in (0, 0.5]");
  if (!(eta > 0.0 && eta <= 0.5)) throw ConfigError("eta must lie in (0, 0.5]");
}

void WorstCaseInheritConfig::validate() const {
  check_base(b);
  if (!(mu > 0.0 && mu <= b - 1.0 && mu < 1.0)) {
    throw ConfigError("mu must lie in (0, min(b - 1, 1)) so that level 0 is the deepest level below 1 + mu");
  }
  if (!(eta > 0.0 && eta <= 0.5)) throw ConfigError("eta must lie in (0, 0.5]");
}

int worstcase_basic_jmax(double b, double eta) {
  check_base(b);
  for (int j = 1; j <= kMaxJ; ++j) {
    if (std::pow(b, 2 - j) / (b - 1.0) <= eta) return j;
  }
  throw ConfigError("eta too small: no J_max found");
}

int worstcase_inherit_jmax(double b, double eta) {
  check_base(b);
  for (int j = 1; j <= kMaxJ; ++j) {
    if (std::pow(1.0 / b, j) <= eta) return j;
  }
  throw ConfigError("eta too small: no J_max found");
}

GeneratedInstance gen_grid(const GridConfig& cfg) {
  cfg.validate();
  const std::size_t dim = cfg.dimension;
  std::size_t grid_points = 1;
  for (std::size_t d = 0; d < dim; ++d) grid_points *= cfg.grid_side;

  PointSet pool(MetricSpace::euclidean(dim));
  std::vector<std::size_t> digit(dim, 0);
  for (std::size_t n = 0; n < grid_points; ++n) {
    std::vector<double> coords(dim);
    for (std::size_t d = 0; d < dim; ++d) coords[d] = cfg.spacing * static_cast<double>(digit[d]);
    pool.add({static_cast<PointId>(n), std::move(coords)});
    for (std::size_t d = dim; d-- > 0;) {
      if (++digit[d] < cfg.grid_side) break;
      digit[d] = 0;
    }
  }

  const double margin = cfg.effective_margin();
  const double lo = margin;
  const double hi = cfg.spacing * static_cast<double>(cfg.grid_side - 1) - margin;
  Rng noise(derive_seed(cfg.seed, kNoiseStream));
  for (std::size_t n = 0; n < cfg.noise_count; ++n) {
    std::vector<double> coords(dim);
    for (double& c : coords) c = noise.uniform(lo, hi);
    pool.add({static_cast<PointId>(grid_points + n), std::move(coords)});
  }

  std::vector<PointId> order(pool.size());
  std::iota(order.begin(), order.end(), PointId{0});
  Rng shuffle(derive_seed(cfg.seed, kOrderStream));
  shuffle.shuffle(std::span<PointId>(order));

  GeneratedInstance out{"grid", std::move(pool), std::move(order), cfg.spacing, grid_points, {}};
  out.metadata = {{"generator", "grid"},
                  {"dimension", std::to_string(dim)},
                  {"grid_side", std::to_string(cfg.grid_side)},
                  {"noise_count", std::to_string(cfg.noise_count)},
                  {"spacing", format_real(cfg.spacing)},
                  {"noise_margin", format_real(margin)},
                  {"seed", std::to_string(cfg.seed)}};
  return out;
}

GeneratedInstance gen_worstcase_basic(const WorstCaseBasicConfig& cfg) {
  cfg.validate();
  const double b = cfg.b;
  const int jmax = worstcase_basic_jmax(b, cfg.eta);

  std::vector<double> offsets;
  double sum = 0.0;
  for (int j = 1; j <= jmax; ++j) {
    sum += b * b * std::pow(1.0 / b, j - 1);
    offsets.push_back(sum);
  }
  const double end = b * b * b / (b - 1.0) - cfg.eta;
  if (!(end > offsets.back())) throw ConfigError("eta leaves no room for the outermost point");
  offsets.push_back(end);

  PointSet pool(MetricSpace::euclidean(2));
  PointId next = 0;
  pool.add({next++, {0.0, 0.0}});
  pool.add({next++, {0.0, b + cfg.mu}});
  for (double x : offsets) {
    pool.add({next++, {x, 0.0}});
    pool.add({next++, {-x, 0.0}});
  }
  std::vector<PointId> order(pool.size());
  std::iota(order.begin(), order.end(), PointId{0});

  GeneratedInstance out{"worstcase-basic", std::move(pool), order, 2.0 * b * b * b / (b - 1.0) - 2.0 * cfg.eta, 2, {}};
  out.metadata = {{"generator", "worstcase-basic"},
                  {"b", format_real(b)},
                  {"mu", format_real(cfg.mu)},
                  {"eta", format_real(cfg.eta)},
                  {"j_max", std::to_string(jmax)}};
  return out;
}

GeneratedInstance gen_worstcase_inherit(const WorstCaseInheritConfig& cfg) {
  cfg.validate();
  const double b = cfg.b;
  const int jmax = worstcase_inherit_jmax(b, cfg.eta);

  std::vector<double> offsets{1.0 + cfg.mu};
  double sum = 1.0;
  for (int j = 1; j <= jmax; ++j) {
    sum += std::pow(1.0 / b, j - 1);
    offsets.push_back(sum);
  }
  const double end = b / (b - 1.0) + 1.0 - cfg.eta;
  if (!(end > offsets.back())) throw ConfigError("eta leaves no room for the outermost point");
  if (!(offsets[0] < offsets[1])) throw ConfigError("1 + mu must lie below the first chain point");
  offsets.push_back(end);

  PointSet pool(MetricSpace::euclidean(1));
  PointId next = 0;
  pool.add({next++, {0.0}});
  for (double x : offsets) {
    pool.add({next++, {x}});
    pool.add({next++, {-x}});
  }
  std::vector<PointId> order(pool.size());
  std::iota(order.begin(), order.end(), PointId{0});

  GeneratedInstance out{"worstcase-inherit", std::move(pool), order, 2.0 * (b / (b - 1.0) + 1.0) - 2.0 * cfg.eta, 2,
                        {}};
  out.metadata = {{"generator", "worstcase-inherit"},
                  {"b", format_real(b)},
                  {"mu", format_real(cfg.mu)},
                  {"eta", format_real(cfg.eta)},
                  {"j_max", std::to_string(jmax)}};
  return out;
}

}  // namespace dyndiv
