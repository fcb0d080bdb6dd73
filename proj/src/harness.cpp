#include "dyndiv/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <deque>
#include <exception>
#include <limits>
#include <ostream>
#include <thread>
#include <utility>

#include <json.hpp>

#include "dyndiv/cover_tree.hpp"
#include "dyndiv/errors.hpp"
#include "dyndiv/oracle.hpp"
#include "dyndiv/text.hpp"

namespace dyndiv {

namespace {

constexpr std::uint64_t kTrialStream = 0x747269616c;     // "trial"
constexpr std::uint64_t kMethodStream = 0x6d6574686f64;  // "method"
constexpr std::uint64_t kShuffleStream = 0x73687566;     // "shuf"
constexpr int kWarmupCalls = 3;
constexpr int kTimedCalls = 5;

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

ExperimentRecord base_record(std::string experiment, std::size_t trial, const DiverseSelection& sel, std::size_t k,
                             double base) {
  ExperimentRecord r;
  r.experiment = std::move(experiment);
  r.trial = trial;
  r.seed = sel.seed;
  r.method = sel.method;
  r.k = k;
  r.base = base;
  r.diversity = sel.achieved_diversity;
  r.termination_level = sel.termination_level;
  r.selected = sel.points.ids();
  return r;
}

// Runs `body` for every trial, possibly on several threads, and hands the
// records to `sink` in trial order. The first failing trial's exception is
// rethrown after the earlier trials have been emitted.
void run_trials(std::size_t trials, std::size_t workers,
                const std::function<std::vector<ExperimentRecord>(std::size_t)>& body, const RecordSink& sink) {
  if (workers <= 1 || trials <= 1) {
    for (std::size_t t = 0; t < trials; ++t) {
      for (const auto& r : body(t)) sink(r);
    }
    return;
  }
  std::vector<std::vector<ExperimentRecord>> results(trials);
  std::vector<std::exception_ptr> errors(trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < trials; t = next++) {
      try {
        results[t] = body(t);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, trials); ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (std::size_t t = 0; t < trials; ++t) {
    if (errors[t]) std::rethrow_exception(errors[t]);
    for (const auto& r : results[t]) sink(r);
  }
}

std::vector<std::size_t> resolve_ks(const ExperimentConfig& cfg, const GeneratedInstance& inst) {
  if (!cfg.ks.empty()) return cfg.ks;
  if (!inst.optimal_k) throw ConfigError("no k given and the instance has no optimal k");
  return {*inst.optimal_k};
}

double ground_truth(const GeneratedInstance& inst, std::size_t k, std::map<std::size_t, double>& cache) {
  if (inst.known_d_star && inst.optimal_k && *inst.optimal_k == k) return *inst.known_d_star;
  if (auto it = cache.find(k); it != cache.end()) return it->second;
  if (k < 2 || k > inst.pool.size()) {
    throw KTooLargeError("k = " + std::to_string(k) + " outside [2, " + std::to_string(inst.pool.size()) + "]");
  }
  if (!oracle_feasible(inst.pool.size(), k)) {
    throw MissingGroundTruthError("no known d* for k = " + std::to_string(k) + " and C(" +
                                  std::to_string(inst.pool.size()) + ", " + std::to_string(k) +
                                  ") exceeds the oracle budget");
  }
  const double d = exact_diverse(inst.pool, k).d_star;
  cache.emplace(k, d);
  return d;
}

std::vector<ExperimentRecord> collect(void (*runner)(const InstanceSource&, const ExperimentConfig&, const RecordSink&),
                                      const InstanceSource& source, const ExperimentConfig& cfg) {
  std::vector<ExperimentRecord> out;
  runner(source, cfg, [&](const ExperimentRecord& r) { out.push_back(r); });
  return out;
}

}  // namespace

InstanceSource grid_source(GridConfig cfg) {
  cfg.validate();
  return {"grid", [cfg](Seed seed) mutable {
            GridConfig c = cfg;
            c.seed = seed;
            return gen_grid(c);
          }};
}

InstanceSource fixed_source(GeneratedInstance instance) {
  std::string name = instance.generator;
  return {std::move(name), [inst = std::move(instance)](Seed) { return inst; }};
}

InstanceSource shuffled_source(GeneratedInstance instance) {
  std::string name = instance.generator;
  return {std::move(name), [inst = std::move(instance)](Seed seed) {
            GeneratedInstance copy = inst;
            copy.insertion_order = copy.pool.ids();
            Rng rng(derive_seed(seed, kShuffleStream));
            rng.shuffle(std::span<PointId>(copy.insertion_order));
            return copy;
          }};
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (!(base > 1.0) || !std::isfinite(base)) throw InvalidBaseError("base must be a finite real > 1");
  for (std::size_t k : ks) {
    if (k < 2) throw ConfigError("k must be at least 2");
  }
}

Seed trial_seed(Seed master, std::size_t trial) { return derive_seed(master, kTrialStream, trial); }

Seed method_seed(Seed trial, Method method) {
  return derive_seed(trial, kMethodStream, static_cast<std::uint64_t>(method));
}

void run_distribution(const InstanceSource& source, const ExperimentConfig& cfg, const RecordSink& sink) {
  cfg.validate();
  run_trials(
      cfg.trials, cfg.workers,
      [&](std::size_t t) {
        const Seed tseed = trial_seed(cfg.seed, t);
        const GeneratedInstance inst = source.make(tseed);
        const CoverTree tree = build_tree(inst.pool, inst.insertion_order, cfg.base);
        std::map<std::size_t, double> oracle_cache;
        std::vector<ExperimentRecord> out;
        for (std::size_t k : resolve_ks(cfg, inst)) {
          const double d_star = ground_truth(inst, k, oracle_cache);
          for (Method m : cfg.methods) {
            const auto start = Clock::now();
            const DiverseSelection sel = run_method(m, inst.pool, tree, k, method_seed(tseed, m));
            const double ms = elapsed_ms(start);
            const RatioCheck check = check_ratio(d_star, sel);
            if (check.violates || check.ratio < 1.0 - 1e-12) {
              throw InvariantViolation(std::string(to_string(m)) + " ratio " + format_real(check.ratio) +
                                       " outside [1, " + format_real(check.alpha) + "] in trial " +
                                       std::to_string(t) + ", k = " + std::to_string(k));
            }
            ExperimentRecord r = base_record("dist", t, sel, k, cfg.base);
            r.d_star = d_star;
            r.ratio = check.ratio;
            if (cfg.record_time) r.wall_ms = ms;
            out.push_back(std::move(r));
          }
        }
        return out;
      },
      sink);
}

std::vector<ExperimentRecord> run_distribution(const InstanceSource& source, const ExperimentConfig& cfg) {
  return collect(&run_distribution, source, cfg);
}

void run_relative_to_gmm(const InstanceSource& source, const ExperimentConfig& cfg, const RecordSink& sink) {
  cfg.validate();
  run_trials(
      cfg.trials, cfg.workers,
      [&](std::size_t t) {
        const Seed tseed = trial_seed(cfg.seed, t);
        const GeneratedInstance inst = source.make(tseed);
        const CoverTree tree = build_tree(inst.pool, inst.insertion_order, cfg.base);
        const Seed gseed = cfg.gmm_seed.value_or(method_seed(tseed, Method::GMM));
        std::vector<ExperimentRecord> out;
        for (std::size_t k : resolve_ks(cfg, inst)) {
          const DiverseSelection reference = gmm(inst.pool, k, gseed);
          std::optional<double> d_star;
          if (inst.known_d_star && inst.optimal_k == k) d_star = inst.known_d_star;
          for (Method m : cfg.methods) {
            const DiverseSelection sel =
                m == Method::GMM ? reference : run_method(m, inst.pool, tree, k, method_seed(tseed, m));
            ExperimentRecord r = base_record("rel-gmm", t, sel, k, cfg.base);
            r.ratio_gmm = reference.achieved_diversity / sel.achieved_diversity;
            r.bound_on_true_ratio = 2.0 * *r.ratio_gmm;
            if (d_star) {
              r.d_star = d_star;
              r.ratio = *d_star / sel.achieved_diversity;
            }
            out.push_back(std::move(r));
          }
        }
        return out;
      },
      sink);
}

std::vector<ExperimentRecord> run_relative_to_gmm(const InstanceSource& source, const ExperimentConfig& cfg) {
  return collect(&run_relative_to_gmm, source, cfg);
}

void run_timing(const InstanceSource& source, const ExperimentConfig& cfg, const RecordSink& sink) {
  cfg.validate();
  // Timed calls share the machine, so trials never run concurrently here.
  run_trials(
      cfg.trials, 1,
      [&](std::size_t t) {
        const Seed tseed = trial_seed(cfg.seed, t);
        const GeneratedInstance inst = source.make(tseed);
        const CoverTree tree = build_tree(inst.pool, inst.insertion_order, cfg.base);
        std::vector<ExperimentRecord> out;
        for (std::size_t k : resolve_ks(cfg, inst)) {
          for (Method m : cfg.methods) {
            const Seed seed = method_seed(tseed, m);
            for (int w = 0; w < kWarmupCalls; ++w) (void)run_method(m, inst.pool, tree, k, seed);
            // The fastest of several calls filters out preemption spikes.
            std::optional<DiverseSelection> sel;
            double ms = std::numeric_limits<double>::infinity();
            for (int c = 0; c < kTimedCalls; ++c) {
              const auto start = Clock::now();
              sel = run_method(m, inst.pool, tree, k, seed);
              ms = std::min(ms, elapsed_ms(start));
            }
            ExperimentRecord r = base_record("timing", t, *sel, k, cfg.base);
            r.wall_ms = ms;
            out.push_back(std::move(r));
          }
        }
        return out;
      },
      sink);
}

std::vector<ExperimentRecord> run_timing(const InstanceSource& source, const ExperimentConfig& cfg) {
  return collect(&run_timing, source, cfg);
}

std::map<Method, double> total_time(const std::vector<ExperimentRecord>& records) {
  std::map<Method, double> totals;
  for (const auto& r : records) {
    if (r.wall_ms) totals[r.method] += *r.wall_ms;
  }
  return totals;
}

void run_stream(const GeneratedInstance& instance, const StreamConfig& cfg, const RecordSink& sink) {
  if (cfg.k < 2) throw KTooSmallError("k must be at least 2");
  if (cfg.window && *cfg.window < cfg.k) throw ConfigError("window must hold at least k points");
  CoverTree tree(instance.pool.metric(), cfg.base);
  std::deque<PointId> live;
  std::size_t step = 0;
  for (PointId id : instance.insertion_order) {
    const Point* p = instance.pool.find(id);
    if (!p) throw DataError("insertion order names unknown id " + std::to_string(id));
    ++step;
    if (tree.insert(*p).status == InsertStatus::DuplicateRejected) continue;
    live.push_back(id);
    if (cfg.window && tree.size() > *cfg.window) {
      tree.remove(live.front());
      live.pop_front();
    }
    if (tree.size() < cfg.k) continue;
    const DiverseSelection sel = ict_inherit(tree, cfg.k);
    const double separation = tree.radius(*sel.termination_level);
    if (!(sel.achieved_diversity > separation)) {
      throw InvariantViolation("step " + std::to_string(step) + ": diversity " + format_real(sel.achieved_diversity) +
                               " not above b^" + std::to_string(*sel.termination_level));
    }
    ExperimentRecord r = base_record("stream", 0, sel, cfg.k, cfg.base);
    r.step = step;
    r.tree_size = tree.size();
    sink(r);
  }
}

std::string to_json_line(const ExperimentRecord& r) {
  nlohmann::ordered_json j;
  j["experiment"] = r.experiment;
  j["trial"] = r.trial;
  j["seed"] = r.seed;
  j["method"] = std::string(to_string(r.method));
  j["k"] = r.k;
  j["b"] = r.base;
  j["diversity"] = r.diversity;
  if (r.d_star) j["d_star"] = *r.d_star;
  if (r.ratio) j["ratio"] = *r.ratio;
  if (r.ratio_gmm) j["ratio_gmm"] = *r.ratio_gmm;
  if (r.bound_on_true_ratio) j["bound_on_true_ratio"] = *r.bound_on_true_ratio;
  if (r.termination_level) j["termination_level"] = *r.termination_level;
  if (r.wall_ms) j["wall_ms"] = *r.wall_ms;
  if (r.step) j["step"] = *r.step;
  if (r.tree_size) j["tree_size"] = *r.tree_size;
  j["selected"] = r.selected;
  return j.dump();
}

void write_records(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  for (const auto& r : records) out << to_json_line(r) << '\n';
}

double median(std::vector<double> values) {
  if (values.empty()) throw DataError("median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

void write_summary_csv(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  struct Group {
    std::string experiment;
    double base = 0.0;
    std::vector<double> diversity;
    std::vector<double> values;
    std::string value_kind;
  };
  std::map<std::pair<Method, std::size_t>, Group> groups;
  for (const auto& r : records) {
    Group& g = groups[{r.method, r.k}];
    g.experiment = r.experiment;
    g.base = r.base;
    g.diversity.push_back(r.diversity);
    if (r.ratio) {
      g.value_kind = "ratio";
      g.values.push_back(*r.ratio);
    } else if (r.ratio_gmm) {
      g.value_kind = "ratio_gmm";
      g.values.push_back(*r.ratio_gmm);
    } else if (r.wall_ms) {
      g.value_kind = "wall_ms";
      g.values.push_back(*r.wall_ms);
    }
  }
  out << "experiment,method,k,count,diversity_mean,value,value_min,value_median,value_max,alpha\n";
  for (const auto& [key, g] : groups) {
    double sum = 0.0;
    for (double d : g.diversity) sum += d;
    out << g.experiment << ',' << to_string(key.first) << ',' << key.second << ',' << g.diversity.size() << ','
        << format_real(sum / static_cast<double>(g.diversity.size())) << ',';
    if (g.values.empty()) {
      out << ",,,";
    } else {
      out << g.value_kind << ',' << format_real(*std::min_element(g.values.begin(), g.values.end())) << ','
          << format_real(median(g.values)) << ','
          << format_real(*std::max_element(g.values.begin(), g.values.end()));
    }
    out << ',' << format_real(method_alpha(key.first, g.base)) << '\n';
  }
}

}  // namespace dyndiv
