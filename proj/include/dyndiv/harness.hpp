#ifndef DYNDIV_HARNESS_HPP
#define DYNDIV_HARNESS_HPP

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dyndiv/benchgen.hpp"
#include "dyndiv/metric.hpp"
#include "dyndiv/rng.hpp"
#include "dyndiv/selection.hpp"

namespace dyndiv {

/// Produces the instance for one trial from that trial's seed.
struct InstanceSource {
  std::string name;
  std::function<GeneratedInstance(Seed)> make;
};

/// Fresh grid per trial: the trial seed replaces cfg.seed.
InstanceSource grid_source(GridConfig cfg);
/// The same instance every trial, inserted in its prescribed order.
InstanceSource fixed_source(GeneratedInstance instance);
/// The same pool every trial, inserted in a fresh seeded shuffle.
InstanceSource shuffled_source(GeneratedInstance instance);

struct ExperimentConfig {
  std::vector<Method> methods{kAllMethods.begin(), kAllMethods.end()};
  /// Empty means the instance's optimal_k (distribution runs only).
  std::vector<std::size_t> ks;
  std::size_t trials = 100;
  double base = 2.0;
  Seed seed = 0;
  /// Overrides the per-trial GMM seed in relative-to-GMM runs.
  std::optional<Seed> gmm_seed;
  /// Attach wall time to distribution records. Off by default so that
  /// reruns produce identical files.
  bool record_time = false;
  /// Trials run on this many threads; output order is unaffected.
  std::size_t workers = 1;

  /// Throws ConfigError.
  void validate() const;
};

struct ExperimentRecord {
  std::string experiment;
  std::size_t trial = 0;
  Seed seed = 0;
  Method method = Method::GMM;
  std::size_t k = 0;
  double base = 2.0;
  double diversity = 0.0;
  std::optional<double> d_star;
  /// d* / diversity.
  std::optional<double> ratio;
  /// div(GMM) / diversity.
  std::optional<double> ratio_gmm;
  /// 2 * ratio_gmm, an upper bound on the true ratio since GMM is a
  /// 2-approximation.
  std::optional<double> bound_on_true_ratio;
  std::optional<double> wall_ms;
  std::optional<int> termination_level;
  /// Streaming runs: insertion step and tree size at that step.
  std::optional<std::size_t> step;
  std::optional<std::size_t> tree_size;
  std::vector<PointId> selected;
};

using RecordSink = std::function<void(const ExperimentRecord&)>;

/// Seed of trial `trial` under master seed `master`.
Seed trial_seed(Seed master, std::size_t trial);
/// Seed of `method` within a trial; independent of the other methods.
Seed method_seed(Seed trial, Method method);

/// Per trial: a fresh instance, a tree built in the instance's insertion
/// order, every configured method at every k. Ground truth is the known d*
/// when k equals the instance's optimal k, the exact oracle otherwise.
/// Throws MissingGroundTruthError when neither is available and
/// InvariantViolation when a ratio falls outside [1, alpha].
void run_distribution(const InstanceSource& source, const ExperimentConfig& cfg, const RecordSink& sink);
std::vector<ExperimentRecord> run_distribution(const InstanceSource& source, const ExperimentConfig& cfg);

/// Per trial and k: one GMM run with a fixed seed and every other method on
/// the shared tree, recording div(GMM) / div(method).
void run_relative_to_gmm(const InstanceSource& source, const ExperimentConfig& cfg, const RecordSink& sink);
std::vector<ExperimentRecord> run_relative_to_gmm(const InstanceSource& source, const ExperimentConfig& cfg);

/// Wall time of each selection call on a steady clock. Each (method, k) is
/// called three times to warm up, then timed five times; the minimum is kept.
void run_timing(const InstanceSource& source, const ExperimentConfig& cfg, const RecordSink& sink);
std::vector<ExperimentRecord> run_timing(const InstanceSource& source, const ExperimentConfig& cfg);

/// Sum of wall_ms per method.
std::map<Method, double> total_time(const std::vector<ExperimentRecord>& records);

struct StreamConfig {
  std::size_t k = 2;
  double base = 2.0;
  /// When set, the oldest point is removed once the tree holds more.
  std::optional<std::size_t> window;
};

/// Inserts the instance point by point and runs ICT Inherit after every
/// step with at least k points. Throws InvariantViolation if a selection is
/// not separated at its termination level.
void run_stream(const GeneratedInstance& instance, const StreamConfig& cfg, const RecordSink& sink);

/// One JSON object per line; absent optional fields are omitted.
std::string to_json_line(const ExperimentRecord& record);
void write_records(std::ostream& out, const std::vector<ExperimentRecord>& records);

/// One row per (method, k): count, diversity mean, and min/median/max of
/// whichever ratio the records carry.
void write_summary_csv(std::ostream& out, const std::vector<ExperimentRecord>& records);

double median(std::vector<double> values);

}  // namespace dyndiv

#endif  // DYNDIV_HARNESS_HPP
