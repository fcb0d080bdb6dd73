#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dyndiv/benchgen.hpp"
#include "dyndiv/cover_tree.hpp"
#include "dyndiv/errors.hpp"
#include "dyndiv/harness.hpp"
#include "dyndiv/oracle.hpp"
#include "dyndiv/point_io.hpp"
#include "dyndiv/selection.hpp"
#include "dyndiv/text.hpp"
#include "dyndiv/theory.hpp"

namespace dyndiv::cli {

namespace {

namespace fs = std::filesystem;

struct Options {
  // Common
  double b = 2.0;
  std::vector<std::size_t> k;
  std::string k_range;
  std::size_t trials = 0;
  Seed seed = 0;
  std::string metric = "euclidean";
  std::vector<std::string> methods;
  std::string input;
  std::string output;
  std::string generator;
  std::size_t workers = 1;
  bool shuffle = false;
  bool record_time = false;
  std::optional<Seed> gmm_seed;
  // Grid
  std::size_t dim = 2;
  std::size_t grid_side = 3;
  std::size_t noise = 0;
  double spacing = 1.0;
  std::optional<double> margin;
  // Worst cases
  double mu = 0.1;
  double eta = 0.1;
  // Bounds
  std::size_t samples = 100000;
  std::string curve = "bound";
  double b_lo = 1.05;
  double b_hi = 5.0;
  // Stream
  std::optional<std::size_t> window;
};

// Writes to --output when given, to `out` otherwise.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : path_(path) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw DataError("cannot write " + path);
      stream_ = file_.get();
    }
  }
  std::ostream& stream() { return *stream_; }
  bool is_file() const { return file_ != nullptr; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

std::vector<std::size_t> parse_k_range(const std::string& text) {
  // lo:hi or lo:hi:step, inclusive.
  std::vector<std::size_t> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      parts.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw ConfigError("--k-range expects lo:hi[:step], got '" + text + "'");
    }
  }
  if (parts.size() < 2 || parts.size() > 3) throw ConfigError("--k-range expects lo:hi[:step], got '" + text + "'");
  const std::size_t step = parts.size() == 3 ? parts[2] : 1;
  if (step == 0 || parts[0] > parts[1]) throw ConfigError("--k-range must be increasing with a positive step");
  std::vector<std::size_t> ks;
  for (std::size_t k = parts[0]; k <= parts[1]; k += step) ks.push_back(k);
  return ks;
}

std::vector<std::size_t> resolve_ks(const Options& o) {
  std::vector<std::size_t> ks = o.k;
  if (!o.k_range.empty()) {
    const auto range = parse_k_range(o.k_range);
    ks.insert(ks.end(), range.begin(), range.end());
  }
  return ks;
}

std::size_t single_k(const Options& o) {
  const auto ks = resolve_ks(o);
  if (ks.size() != 1) throw ConfigError("exactly one --k is required");
  return ks.front();
}

std::vector<Method> resolve_methods(const Options& o) {
  if (o.methods.empty()) return {kAllMethods.begin(), kAllMethods.end()};
  std::vector<Method> out;
  for (const auto& name : o.methods) {
    const Method m = parse_method(name);
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
  }
  return out;
}

GridConfig grid_config(const Options& o) {
  GridConfig cfg;
  cfg.dimension = o.dim;
  cfg.grid_side = o.grid_side;
  cfg.noise_count = o.noise;
  cfg.spacing = o.spacing;
  cfg.noise_margin = o.margin;
  cfg.seed = o.seed;
  return cfg;
}

GeneratedInstance generate(const Options& o) {
  if (o.generator == "grid") return gen_grid(grid_config(o));
  if (o.generator == "worstcase-basic") return gen_worstcase_basic({o.b, o.mu, o.eta});
  if (o.generator == "worstcase-inherit") return gen_worstcase_inherit({o.b, o.mu, o.eta});
  throw ConfigError("unknown generator '" + o.generator + "'");
}

// The instance named by --input or --generator.
GeneratedInstance load_instance(const Options& o) {
  if (!o.input.empty() && !o.generator.empty()) throw ConfigError("--input and --generator are exclusive");
  if (!o.input.empty()) return import_instance(o.input, parse_metric_kind(o.metric));
  if (!o.generator.empty()) return generate(o);
  throw ConfigError("one of --input or --generator is required");
}

InstanceSource make_source(const Options& o) {
  if (o.input.empty() && o.generator == "grid" && !o.shuffle) return grid_source(grid_config(o));
  GeneratedInstance inst = load_instance(o);
  if (o.shuffle) return shuffled_source(std::move(inst));
  return fixed_source(std::move(inst));
}

CoverTree tree_for(const GeneratedInstance& inst, double b) { return build_tree(inst.pool, inst.insertion_order, b); }

void write_experiment(const Options& o, std::ostream& out, const std::vector<ExperimentRecord>& records) {
  Sink sink(o.output, out);
  write_records(sink.stream(), records);
  if (sink.is_file()) {
    std::ofstream csv(o.output + ".summary.csv");
    if (!csv) throw DataError("cannot write " + o.output + ".summary.csv");
    write_summary_csv(csv, records);
  }
}

ExperimentConfig experiment_config(const Options& o, std::size_t default_trials) {
  ExperimentConfig cfg;
  cfg.methods = resolve_methods(o);
  cfg.ks = resolve_ks(o);
  cfg.trials = o.trials ? o.trials : default_trials;
  cfg.base = o.b;
  cfg.seed = o.seed;
  cfg.gmm_seed = o.gmm_seed;
  cfg.record_time = o.record_time;
  cfg.workers = o.workers;
  return cfg;
}

nlohmann::ordered_json selection_json(const DiverseSelection& sel) {
  nlohmann::ordered_json j;
  j["method"] = std::string(to_string(sel.method));
  j["k"] = sel.points.size();
  j["seed"] = sel.seed;
  if (sel.base) j["b"] = *sel.base;
  j["diversity"] = sel.achieved_diversity;
  if (sel.termination_level) j["termination_level"] = *sel.termination_level;
  j["selected"] = sel.points.ids();
  return j;
}

// ---- subcommands ----

int cmd_generate(const Options& o, std::ostream& out, const std::string& generator) {
  Options copy = o;
  copy.generator = generator;
  const GeneratedInstance inst = generate(copy);
  if (o.output.empty() || o.output == "-") {
    write_points(out, inst.pool, {"generator " + inst.generator});
  } else {
    export_instance(o.output, inst);
  }
  return exit_code::kOk;
}

int cmd_build(const Options& o, std::ostream& out) {
  const GeneratedInstance inst = load_instance(o);
  const CoverTree tree = tree_for(inst, o.b);
  Sink sink(o.output, out);
  tree.write_snapshot(sink.stream());
  return exit_code::kOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const GeneratedInstance inst = load_instance(o);
  const CoverTree tree = tree_for(inst, o.b);
  const InvariantReport report = tree.verify_invariants();
  Sink sink(o.output, out);
  sink.stream() << "points " << tree.size() << " levels " << tree.max_level() << ' ' << tree.min_level()
                << " violations " << report.violations.size() << '\n';
  for (const auto& v : report.violations) sink.stream() << v.describe() << '\n';
  return report.ok() ? exit_code::kOk : exit_code::kInvariant;
}

int cmd_select(const Options& o, std::ostream& out) {
  const GeneratedInstance inst = load_instance(o);
  const std::size_t k = single_k(o);
  const auto methods = resolve_methods(o);
  const CoverTree tree = tree_for(inst, o.b);
  Sink sink(o.output, out);
  for (Method m : methods) sink.stream() << selection_json(run_method(m, inst.pool, tree, k, o.seed)).dump() << '\n';
  return exit_code::kOk;
}

int cmd_oracle(const Options& o, std::ostream& out) {
  const GeneratedInstance inst = load_instance(o);
  const OracleResult res = exact_diverse(inst.pool, single_k(o));
  nlohmann::ordered_json j;
  j["k"] = res.optimal_set.size();
  j["d_star"] = res.d_star;
  j["optimal_set"] = res.optimal_set.ids();
  j["instances_enumerated"] = res.instances_enumerated;
  Sink sink(o.output, out);
  sink.stream() << j.dump() << '\n';
  return exit_code::kOk;
}

int cmd_dist(const Options& o, std::ostream& out) {
  write_experiment(o, out, run_distribution(make_source(o), experiment_config(o, 100)));
  return exit_code::kOk;
}

int cmd_rel_gmm(const Options& o, std::ostream& out) {
  write_experiment(o, out, run_relative_to_gmm(make_source(o), experiment_config(o, 1)));
  return exit_code::kOk;
}

int cmd_timing(const Options& o, std::ostream& out) {
  const auto records = run_timing(make_source(o), experiment_config(o, 1));
  write_experiment(o, out, records);
  return exit_code::kOk;
}

int cmd_bounds(const Options& o, std::ostream& out) {
  Sink sink(o.output, out);
  if (o.curve == "bound") {
    write_bound_csv(sink.stream(), bound_curve(o.b, o.samples));
  } else if (o.curve == "alpha") {
    write_alpha_csv(sink.stream(), alpha_curve(o.b_lo, o.b_hi, o.samples));
  } else {
    throw ConfigError("--curve must be 'bound' or 'alpha'");
  }
  return exit_code::kOk;
}

int cmd_stream(const Options& o, std::ostream& out) {
  const GeneratedInstance inst = load_instance(o);
  StreamConfig cfg;
  cfg.k = single_k(o);
  cfg.base = o.b;
  cfg.window = o.window;
  std::vector<ExperimentRecord> records;
  run_stream(inst, cfg, [&](const ExperimentRecord& r) { records.push_back(r); });
  write_experiment(o, out, records);
  return exit_code::kOk;
}

void add_base(CLI::App* app, Options& o) {
  app->add_option("--b", o.b, "Cover-tree base (> 1)")->capture_default_str();
}

void add_input(CLI::App* app, Options& o) {
  app->add_option("--input", o.input, "Point file; a <file>.meta sidecar supplies order and ground truth");
  app->add_option("--metric", o.metric, "euclidean or cosine")->capture_default_str();
}

void add_grid(CLI::App* app, Options& o) {
  app->add_option("--dim", o.dim, "Grid dimension")->capture_default_str();
  app->add_option("--grid-side", o.grid_side, "Points per grid axis")->capture_default_str();
  app->add_option("--noise", o.noise, "Number of noise points")->capture_default_str();
  app->add_option("--spacing", o.spacing, "Grid spacing")->capture_default_str();
  app->add_option("--margin", o.margin, "Noise distance from the grid hull");
}

void add_worstcase(CLI::App* app, Options& o) {
  app->add_option("--mu", o.mu, "Offset mu")->capture_default_str();
  app->add_option("--eta", o.eta, "Gap eta")->capture_default_str();
}

void add_k(CLI::App* app, Options& o) {
  app->add_option("--k", o.k, "Selection size; repeat or comma-separate for several")->delimiter(',');
  app->add_option("--k-range", o.k_range, "Inclusive range lo:hi[:step]");
}

void add_experiment(CLI::App* app, Options& o) {
  add_base(app, o);
  add_input(app, o);
  add_grid(app, o);
  add_worstcase(app, o);
  add_k(app, o);
  app->add_option("--generator", o.generator, "grid, worstcase-basic or worstcase-inherit");
  app->add_option("--method", o.methods, "gmm, ict-basic, ict-greedy, ict-inherit (default: all)")->delimiter(',');
  app->add_option("--trials", o.trials, "Number of trials");
  app->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  app->add_option("--output", o.output, "JSON Lines output; also writes <output>.summary.csv");
  app->add_option("--workers", o.workers, "Parallel trial workers")->capture_default_str();
  app->add_flag("--shuffle", o.shuffle, "Reshuffle the insertion order in every trial");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dynamic max-min diversification with cover trees"};
  app.name("dyndiv");
  app.require_subcommand(1);
  Options o;
  std::function<int()> action;

  auto* gg = app.add_subcommand("gen-grid", "Generate a noisy grid instance");
  add_grid(gg, o);
  gg->add_option("--seed", o.seed, "Seed for noise and insertion order")->capture_default_str();
  gg->add_option("--output", o.output, "Point file to write (sidecar <output>.meta)");
  gg->callback([&] { action = [&] { return cmd_generate(o, out, "grid"); }; });

  auto* gb = app.add_subcommand("gen-worstcase-basic", "Generate the random-pick worst case");
  add_base(gb, o);
  add_worstcase(gb, o);
  gb->add_option("--output", o.output, "Point file to write (sidecar <output>.meta)");
  gb->callback([&] { action = [&] { return cmd_generate(o, out, "worstcase-basic"); }; });

  auto* gi = app.add_subcommand("gen-worstcase-inherit", "Generate the inherit/greedy worst case");
  add_base(gi, o);
  add_worstcase(gi, o);
  gi->add_option("--output", o.output, "Point file to write (sidecar <output>.meta)");
  gi->callback([&] { action = [&] { return cmd_generate(o, out, "worstcase-inherit"); }; });

  auto* build = app.add_subcommand("build", "Build a cover tree and print its snapshot");
  add_base(build, o);
  add_input(build, o);
  build->add_option("--output", o.output, "Snapshot file");
  build->callback([&] { action = [&] { return cmd_build(o, out); }; });

  auto* verify = app.add_subcommand("verify", "Build a cover tree and check its invariants");
  add_base(verify, o);
  add_input(verify, o);
  verify->add_option("--output", o.output, "Report file");
  verify->callback([&] { action = [&] { return cmd_verify(o, out); }; });

  auto* select = app.add_subcommand("select", "Run selection methods on a point file");
  add_base(select, o);
  add_input(select, o);
  add_k(select, o);
  select->add_option("--method", o.methods, "Methods (default: all)")->delimiter(',');
  select->add_option("--seed", o.seed, "Selection seed")->capture_default_str();
  select->add_option("--output", o.output, "JSON Lines output");
  select->callback([&] { action = [&] { return cmd_select(o, out); }; });

  auto* oracle = app.add_subcommand("oracle", "Exact optimum by enumeration");
  add_input(oracle, o);
  add_k(oracle, o);
  oracle->add_option("--output", o.output, "JSON output");
  oracle->callback([&] { action = [&] { return cmd_oracle(o, out); }; });

  auto* dist = app.add_subcommand("dist", "Distribution of d*/div over seeded trials");
  add_experiment(dist, o);
  dist->add_flag("--time", o.record_time, "Include wall times (output is then not reproducible)");
  dist->callback([&] { action = [&] { return cmd_dist(o, out); }; });

  auto* rel = app.add_subcommand("rel-gmm", "div(GMM)/div(method) over a k sweep");
  add_experiment(rel, o);
  rel->add_option("--gmm-seed", o.gmm_seed, "Fixed GMM seed");
  rel->callback([&] { action = [&] { return cmd_rel_gmm(o, out); }; });

  auto* timing = app.add_subcommand("timing", "Wall time per selection call");
  add_experiment(timing, o);
  timing->callback([&] { action = [&] { return cmd_timing(o, out); }; });

  auto* bounds = app.add_subcommand("bounds", "Emit bound curves as CSV");
  add_base(bounds, o);
  bounds->add_option("--curve", o.curve, "bound (over beta) or alpha (over b)")->capture_default_str();
  bounds->add_option("--samples", o.samples, "Number of samples")->capture_default_str();
  bounds->add_option("--b-min", o.b_lo, "Smallest b of the alpha curve")->capture_default_str();
  bounds->add_option("--b-max", o.b_hi, "Largest b of the alpha curve")->capture_default_str();
  bounds->add_option("--output", o.output, "CSV file");
  bounds->callback([&] { action = [&] { return cmd_bounds(o, out); }; });

  auto* stream = app.add_subcommand("stream-demo", "Insert points one by one and reselect after each");
  add_base(stream, o);
  add_input(stream, o);
  add_grid(stream, o);
  add_worstcase(stream, o);
  add_k(stream, o);
  stream->add_option("--generator", o.generator, "grid, worstcase-basic or worstcase-inherit");
  stream->add_option("--seed", o.seed, "Generator seed")->capture_default_str();
  stream->add_option("--window", o.window, "Keep only the most recent points");
  stream->add_option("--output", o.output, "JSON Lines output");
  stream->callback([&] { action = [&] { return cmd_stream(o, out); }; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_code::kOk;
  } catch (const CLI::ParseError& e) {
    err << "dyndiv: " << e.what() << '\n';
    return exit_code::kUsage;
  }

  try {
    return action ? action() : exit_code::kUsage;
  } catch (const ConfigError& e) {
    err << "dyndiv: " << e.what() << '\n';
    return exit_code::kUsage;
  } catch (const DataError& e) {
    err << "dyndiv: " << e.what() << '\n';
    return exit_code::kData;
  } catch (const InvariantViolation& e) {
    err << "dyndiv: invariant violation: " << e.what() << '\n';
    return exit_code::kInvariant;
  } catch (const std::exception& e) {
    err << "dyndiv: internal error: " << e.what() << '\n';
    return exit_code::kInvariant;
  }
}

}  // namespace dyndiv::cli
