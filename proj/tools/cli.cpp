#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "aiknn/combinatorics.hpp"
#include "aiknn/csv_io.hpp"
#include "aiknn/distance.hpp"
#include "aiknn/error.hpp"
#include "aiknn/estimator.hpp"
#include "aiknn/experiments.hpp"

namespace aiknn::cli {
namespace {

struct DistanceArgs {
  std::string data;
  std::string a;
  std::string b;
  std::string metric = "exact";
  std::uint64_t m = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct PredictArgs {
  std::string data;
  std::string queries;
  std::string out;
  std::size_t k = 1;
  std::string metric = "exact";
  std::uint64_t m = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct InvarianceArgs {
  InvarianceOptions options;
  bool float_only = false;
  bool no_sampled = false;
};

struct ExperimentArgs {
  std::string config;
  std::string out;
  int threads = -1;
  bool require_trend = false;
};

struct BenchArgs {
  std::size_t d = 2;
  std::vector<std::size_t> n_grid{20, 40, 80};
  std::uint64_t m = 2000;
  std::uint64_t seed = 1;
  std::size_t repeats = 3;
};

// Quotes a CSV field when it contains a separator or quote.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

Metric make_metric(const std::string& name, std::uint64_t m, std::uint64_t seed) {
  if (name == "exact") return Metric::exact();
  if (name == "sampled") return Metric::sampled(m, seed);
  if (name == "euclidean") return Metric::euclidean();
  if (name == "rank") return Metric::coord_rank();
  throw InvalidInput("unknown metric '" + name + "'");
}

int cmd_distance(const DistanceArgs& args, std::ostream& out) {
  const Dataset data = read_dataset_csv(std::filesystem::path(args.data));
  const Point a = parse_point(args.a);
  const Point b = parse_point(args.b);
  require_dim(a, data.dim(), "--a");
  require_dim(b, data.dim(), "--b");
  const EngineOptions engine{PredicateMode::Filtered, args.threads};
  std::ostringstream s;
  if (args.metric == "exact") {
    const DistanceCount c = rho_exact(data, a, b, engine);
    s << "value=" << c.value << "\n"
      << "subsets=" << c.subsets << "\n"
      << "degenerate=" << c.degenerate_subsets << "\n"
      << "touching=" << c.touching_subsets << "\n";
  } else {
    if (args.m == 0) throw InvalidInput("--m must be positive");
    const SampledEstimate e = rho_sampled(data, a, b, args.m, args.seed, engine);
    s << "value=" << to_string(e.estimate) << "\n"
      << "value_approx=" << format_double(to_double(e.estimate)) << "\n"
      << "hits=" << e.draws.value << "\n"
      << "m=" << e.m << "\n"
      << "seed=" << e.seed << "\n"
      << "subsets=" << e.total_subsets << "\n"
      << "degenerate=" << e.draws.degenerate_subsets << "\n"
      << "touching=" << e.draws.touching_subsets << "\n";
  }
  out << s.str();
  return kOk;
}

int cmd_predict(const PredictArgs& args, std::ostream& out) {
  const Metric metric = make_metric(args.metric, args.m, args.seed);
  if (metric.kind == Metric::Kind::Sampled && args.m == 0) {
    throw InvalidInput("--m must be positive");
  }
  const Dataset data = read_dataset_csv(std::filesystem::path(args.data));
  if (args.k < 1 || args.k > data.size()) {
    throw InvalidInput("--k must lie in [1, " + std::to_string(data.size()) + "]");
  }
  const auto queries = read_points_csv(std::filesystem::path(args.queries), data.dim());
  const EstimatorConfig config{args.k, metric, {}};
  const auto predictions = predict_batch(data, queries, config, args.threads);

  std::string csv = "query,prediction,neighbors,metric\n";
  const std::string tag = csv_field(metric.tag());
  for (std::size_t q = 0; q < predictions.size(); ++q) {
    std::string nb;
    for (std::size_t i : predictions[q].neighbors) {
      if (!nb.empty()) nb += ';';
      nb += std::to_string(i + 1);
    }
    csv += std::to_string(q + 1) + "," + format_double(predictions[q].value) + "," + nb + "," +
           tag + "\n";
  }
  if (args.out.empty()) {
    out << csv;
  } else {
    write_file_atomic(args.out, csv);
    out << "predictions=" << predictions.size() << "\n";
  }
  return kOk;
}

int cmd_invariance(InvarianceArgs args, std::ostream& out) {
  if (args.float_only) args.options.predicates = PredicateMode::FloatOnly;
  if (args.no_sampled) args.options.check_sampled = false;
  const InvarianceReport report = run_invariance_suite(args.options);
  out << report.summary();
  return report.passed() ? kOk : kViolation;
}

int cmd_experiment(const ExperimentArgs& args, std::ostream& out) {
  std::ifstream in(args.config);
  if (!in) throw InvalidInput("cannot open config '" + args.config + "'");
  ExperimentConfig config = parse_experiment_config(in);
  if (args.threads >= 0) {
    config.threads = static_cast<unsigned>(args.threads);
  }
  const ExperimentReport report = run_consistency_experiment(config);
  if (!args.out.empty()) {
    write_file_atomic(args.out, report.to_csv());
  } else {
    out << report.to_csv();
  }
  out << report.summary();
  return args.require_trend && !report.trend().passed() ? kViolation : kOk;
}

int cmd_bench(const BenchArgs& args, std::ostream& out) {
  if (args.d < 1) throw InvalidInput("--d must be positive");
  if (args.m == 0) throw InvalidInput("--m must be positive");
  if (args.repeats == 0) throw InvalidInput("--repeats must be positive");
  for (std::size_t n : args.n_grid) {
    if (n < args.d) throw InvalidInput("every n in --n-grid must be at least d");
  }
  RegressionScenario s;
  s.dim = args.d;
  s.function = TrueFunction::Sine;
  s.seed = args.seed;
  using Clock = std::chrono::steady_clock;
  const auto seconds = [](Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
  };
  char line[256];
  std::snprintf(line, sizeof line, "%8s %12s %14s %12s %14s %12s\n", "n", "subsets", "exact_signs",
                "exact_ms", "sampled_signs", "sampled_ms");
  out << line;
  for (std::size_t n : args.n_grid) {
    const Dataset data = generate_sample(s, n);
    const Point x = generate_queries(s, 1, derive_seed(args.seed, {n}))[0];
    double exact_s = 0;
    double sampled_s = 0;
    std::uint64_t exact_signs = 0;
    std::uint64_t sampled_signs = 0;
    for (std::size_t r = 0; r < args.repeats; ++r) {
      const auto t0 = Clock::now();
      exact_signs = rho_profile(data, x).sign_evaluations;
      const auto t1 = Clock::now();
      sampled_signs = rho_profile_sampled(data, x, args.m, args.seed).sign_evaluations;
      const auto t2 = Clock::now();
      exact_s += seconds(t0, t1);
      sampled_s += seconds(t1, t2);
    }
    const double reps = static_cast<double>(args.repeats);
    std::snprintf(line, sizeof line, "%8zu %12llu %14llu %12.3f %14llu %12.3f\n", n,
                  static_cast<unsigned long long>(binomial(n, args.d)),
                  static_cast<unsigned long long>(exact_signs), 1e3 * exact_s / reps,
                  static_cast<unsigned long long>(sampled_signs), 1e3 * sampled_s / reps);
    out << line;
  }
  return kOk;
}

std::string one_line(std::string msg) {
  for (char& c : msg) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return msg;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Affine-invariant nearest-neighbor regression tools", "aiknn"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  const std::vector<std::string> metrics{"exact", "sampled", "euclidean", "rank"};

  DistanceArgs dist;
  auto* distance = app.add_subcommand("distance", "Hyperplane-crossing distance between two points");
  distance->add_option("--data", dist.data, "Dataset CSV (x1..xd, y)")->required();
  distance->add_option("--a", dist.a, "First point, comma separated")->required();
  distance->add_option("--b", dist.b, "Second point, comma separated")->required();
  distance->add_option("--metric", dist.metric)->check(CLI::IsMember({"exact", "sampled"}));
  distance->add_option("--m", dist.m, "Subsets drawn by the sampled metric");
  distance->add_option("--seed", dist.seed);
  distance->add_option("--threads", dist.threads, "0 = all cores");

  PredictArgs pred;
  auto* predict_cmd = app.add_subcommand("predict", "k-NN predictions for a query file");
  predict_cmd->add_option("--data", pred.data, "Dataset CSV (x1..xd, y)")->required();
  predict_cmd->add_option("--queries", pred.queries, "Query CSV (x1..xd, optional y)")->required();
  predict_cmd->add_option("--k", pred.k)->required();
  predict_cmd->add_option("--metric", pred.metric)->check(CLI::IsMember(metrics));
  predict_cmd->add_option("--m", pred.m);
  predict_cmd->add_option("--seed", pred.seed);
  predict_cmd->add_option("--threads", pred.threads, "0 = all cores");
  predict_cmd->add_option("--out", pred.out, "Output CSV (stdout when omitted)");

  InvarianceArgs inv;
  auto* invariance = app.add_subcommand("invariance", "Check predictions under random affine maps");
  invariance->add_option("--n", inv.options.n);
  invariance->add_option("--d", inv.options.d);
  invariance->add_option("--k", inv.options.k);
  invariance->add_option("--maps", inv.options.maps);
  invariance->add_option("--seed", inv.options.seeds, "One or more base seeds");
  invariance->add_option("--queries", inv.options.queries_per_map, "Queries per map");
  invariance->add_option("--sampled-m", inv.options.sampled_m);
  invariance->add_flag("--identity", inv.options.identity_maps, "Use identity maps");
  invariance->add_flag("--adversarial", inv.options.adversarial,
                       "Use the near-degenerate grid instance");
  invariance->add_flag("--float-only", inv.float_only,
                       "Plain double predicates (mutation check, expected to fail)");
  invariance->add_flag("--no-sampled", inv.no_sampled, "Skip the sampled metric");

  ExperimentArgs exp;
  auto* experiment = app.add_subcommand("experiment", "Consistency experiment over an n grid");
  experiment->add_option("--config", exp.config, "key = value config file")->required();
  experiment->add_option("--out", exp.out, "Report CSV");
  experiment->add_option("--threads", exp.threads, "Overrides the config");
  experiment->add_flag("--require-trend", exp.require_trend,
                       "Exit 2 when the error trend check fails");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time exact and sampled profiles");
  bench_cmd->add_option("--d", bench.d);
  bench_cmd->add_option("--n-grid", bench.n_grid)->delimiter(',');
  bench_cmd->add_option("--m", bench.m);
  bench_cmd->add_option("--seed", bench.seed);
  bench_cmd->add_option("--repeats", bench.repeats);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << one_line(e.what()) << "\n";
    return kInputError;
  }

  try {
    if (*distance) return cmd_distance(dist, out);
    if (*predict_cmd) return cmd_predict(pred, out);
    if (*invariance) return cmd_invariance(inv, out);
    if (*experiment) return cmd_experiment(exp, out);
    if (*bench_cmd) return cmd_bench(bench, out);
  } catch (const InvalidInput& e) {
    err << "error: " << one_line(e.what()) << "\n";
    return kInputError;
  } catch (const InvariantViolation& e) {
    err << "error: invariant violation: " << one_line(e.what()) << "\n";
    return kViolation;
  } catch (const std::exception& e) {
    err << "error: " << one_line(e.what()) << "\n";
    return kViolation;
  }
  return kInputError;
}

}  // namespace aiknn::cli
