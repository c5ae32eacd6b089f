// Acceptance gate: one PASS/FAIL line per criterion, exit 1 if any fails.
//
// Usage: aiknn_acceptance [data_dir]   (default: $AIKNN_TEST_DATA)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "aiknn/csv_io.hpp"
#include "aiknn/distance.hpp"
#include "aiknn/estimator.hpp"
#include "aiknn/experiments.hpp"
#include "cli.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace aiknn;

namespace {

fs::path g_data;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 1. Exact affine invariance.
Outcome invariance() {
  const auto t0 = std::chrono::steady_clock::now();
  InvarianceOptions planar;
  planar.n = 30;
  planar.d = 2;
  planar.k = 5;
  planar.maps = 100;
  const InvarianceReport a = run_invariance_suite(planar);
  InvarianceOptions spatial = planar;
  spatial.n = 25;
  spatial.d = 3;
  spatial.maps = 20;
  const InvarianceReport b = run_invariance_suite(spatial);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::size_t violations =
      a.exact_violations + a.sampled_violations + b.exact_violations + b.sampled_violations;
  char buf[200];
  std::snprintf(buf, sizeof buf, "%zu + %zu comparisons, %zu violations, %.1f s",
                a.comparisons, b.comparisons, violations, secs);
  return {violations == 0 && a.comparisons >= 100 && b.comparisons >= 20 && secs < 120.0, buf};
}

// 2. rho_exact against the brute-force elimination oracle.
Outcome oracle_equivalence() {
  std::mt19937_64 rng(2002);
  std::size_t instances = 0;
  std::size_t mismatches = 0;
  std::size_t with_dependent = 0;
  for (std::size_t d = 1; d <= 3; ++d) {
    for (int t = 0; t < 80; ++t) {
      const std::size_t n = d + static_cast<std::size_t>(t) % (16 - d);
      // Narrow ranges on some instances force collinear / repeated points.
      const long span = t % 3 == 0 ? 2 : 50;
      const Dataset data = oracle::random_int_dataset(rng, n, d, -span, span);
      const Point a = oracle::random_int_point(rng, d, -span, span);
      const Point b = t % 4 == 0 ? data.point(0) : oracle::random_int_point(rng, d, -span, span);
      const auto expect = oracle::rho(data, a, b);
      const DistanceCount got = rho_exact(data, a, b);
      ++instances;
      with_dependent += expect.dependent > 0;
      if (got.value != expect.value || got.degenerate_subsets != expect.dependent) {
        ++mismatches;
      }
    }
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "%zu instances (%zu with dependent subsets), %zu mismatches",
                instances, with_dependent, mismatches);
  return {instances >= 200 && mismatches == 0, buf};
}

// 3. d = 1: exact neighbor sets against Euclidean neighbor sets, every k.
Outcome one_dimensional() {
  std::mt19937_64 rng(3003);
  std::size_t instances = 0;
  std::size_t cases = 0;
  std::size_t mismatched_cases = 0;
  std::size_t mismatched_instances = 0;
  std::uniform_int_distribution<long> u(-1000, 1000);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(t) % 19;
    std::set<long> xs;
    while (xs.size() < n) xs.insert(u(rng));
    std::vector<Point> pts;
    for (long v : xs) pts.push_back(Point{v});
    std::shuffle(pts.begin(), pts.end(), rng);
    const Dataset data(std::move(pts), std::vector<double>(n, 0.0));
    const Point x{u(rng)};
    bool bad = false;
    for (std::size_t k = 1; k <= n; ++k) {
      auto e = predict(data, x, {k, Metric::exact(), {}}).neighbors;
      auto c = predict(data, x, {k, Metric::euclidean(), {}}).neighbors;
      std::sort(e.begin(), e.end());
      std::sort(c.begin(), c.end());
      ++cases;
      if (e != c) {
        ++mismatched_cases;
        bad = true;
      }
    }
    ++instances;
    mismatched_instances += bad;
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "%zu instances, %zu of %zu (instance, k) cases differ in %zu instances",
                instances, mismatched_cases, cases, mismatched_instances);
  return {mismatched_cases == 0, buf};
}

// 4. The five-point planar fixture.
Outcome figure_fixture() {
  const Dataset data = read_dataset_csv(g_data / "figure.csv");
  const Point a{10, 8};
  const Point b{6, 10};
  const auto expect = oracle::rho(data, a, b);
  const DistanceCount got = rho_exact(data, a, b);
  char buf[120];
  std::snprintf(buf, sizeof buf, "oracle %llu, library %llu",
                static_cast<unsigned long long>(expect.value),
                static_cast<unsigned long long>(got.value));
  return {expect.value == 4 && got.value == 4, buf};
}

// 5. Sampled estimate: unbiased mean over seeds, exhaustive sample is exact.
Outcome sampled_metric() {
  std::mt19937_64 rng(5005);
  const Dataset data = oracle::random_int_dataset(rng, 10, 2, -100, 100);
  const Point a{-60, 10};
  const Point b{70, -20};
  const DistanceCount exact = rho_exact(data, a, b);
  const double total = static_cast<double>(exact.subsets);
  const double p = static_cast<double>(exact.value) / total;
  const std::uint64_t m = 20;
  const int seeds = 1000;
  double sum = 0;
  for (int s = 0; s < seeds; ++s) {
    sum += to_double(rho_sampled(data, a, b, m, static_cast<std::uint64_t>(s)).estimate);
  }
  const double mean = sum / seeds;
  const double se = total * std::sqrt(p * (1 - p) / static_cast<double>(m) / seeds);
  const SampledEstimate full =
      rho_sampled(data, a, b, exact.subsets, 0, {}, SamplingScheme::Exhaustive);
  const bool exhaustive_ok = full.estimate == Scalar(static_cast<long>(exact.value));
  char buf[200];
  std::snprintf(buf, sizeof buf, "exact %llu, mean %.4f, 3 SE %.4f, exhaustive %s",
                static_cast<unsigned long long>(exact.value), mean, 3 * se,
                exhaustive_ok ? "equal" : "differs");
  return {exact.value > 0 && p < 1 && std::fabs(mean - static_cast<double>(exact.value)) <= 3 * se &&
              exhaustive_ok,
          buf};
}

// 6. Consistency trend on the desk-scale grid, plus the pinned report.
Outcome consistency() {
  std::ifstream in(g_data / "experiment_default.conf");
  const ExperimentConfig config = parse_experiment_config(in);
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentReport report = run_consistency_experiment(config);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const TrendCheck trend = report.trend();
  const bool golden = report.to_csv() == slurp(g_data / "experiment_default.golden.csv");
  std::string means;
  for (const auto& agg : report.aggregates) {
    char b[64];
    std::snprintf(b, sizeof b, "%s%zu:%.5f", means.empty() ? "" : " ", agg.n, agg.mean_error);
    means += b;
  }
  char buf[400];
  std::snprintf(buf, sizeof buf, "means [%s], inversions %zu, golden %s, %.0f s", means.c_str(),
                trend.inversions, golden ? "match" : "MISMATCH", secs);
  return {trend.passed() && golden && secs <= 1800.0, buf};
}

// 7. Euclidean neighbors change under axis scaling; exact ones do not.
Outcome witness() {
  const WitnessInstance w = euclidean_witness();
  const Dataset moved = w.scaling.apply(w.data);
  const Point qx = w.scaling.apply(w.query);
  const bool euclid_changed = predict(w.data, w.query, {w.k, Metric::euclidean(), {}}).neighbors !=
                              predict(moved, qx, {w.k, Metric::euclidean(), {}}).neighbors;
  const bool exact_same = predict(w.data, w.query, {w.k, Metric::exact(), {}}).neighbors ==
                          predict(moved, qx, {w.k, Metric::exact(), {}}).neighbors;
  InvarianceOptions o;
  o.maps = 1;
  const InvarianceReport r = run_invariance_suite(o);
  return {euclid_changed && exact_same && r.witness_euclidean_changed && r.witness_exact_unchanged,
          std::string("euclidean ") + (euclid_changed ? "changed" : "unchanged") + ", exact " +
              (exact_same ? "unchanged" : "changed")};
}

// 8. Byte-identical CLI reruns; parallel equals serial.
Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "aiknn_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::size_t checks = 0;
  std::vector<std::string> failures;

  const auto run = [](std::vector<std::string> args, std::string& out) {
    args.insert(args.begin(), "aiknn");
    std::vector<const char*> argv;
    for (const auto& s : args) argv.push_back(s.c_str());
    std::ostringstream o;
    std::ostringstream e;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), o, e);
    out = o.str();
    return code;
  };
  const std::string data = (g_data / "fixture20.csv").string();
  const std::string queries = (g_data / "fixture20_queries.csv").string();
  const std::string fig = (g_data / "figure.csv").string();

  // Commands whose file output (or stdout, when they write no file) must repeat.
  struct Cmd {
    std::string name;
    std::function<std::vector<std::string>(const std::string& out, const std::string& threads)> args;
    bool writes_file;
  };
  std::vector<Cmd> cmds;
  for (const std::string metric : {"exact", "sampled", "euclidean", "rank"}) {
    cmds.push_back({"predict " + metric,
                    [=](const std::string& out, const std::string& th) {
                      return std::vector<std::string>{"predict", "--data", data, "--queries", queries,
                                                      "--k", "5", "--metric", metric, "--m", "200",
                                                      "--seed", "3", "--threads", th, "--out", out};
                    },
                    true});
  }
  cmds.push_back({"experiment",
                  [=](const std::string& out, const std::string& th) {
                    return std::vector<std::string>{
                        "experiment", "--config", (g_data / "experiment_small.conf").string(),
                        "--out", out, "--threads", th};
                  },
                  true});
  for (const std::string metric : {"exact", "sampled"}) {
    cmds.push_back({"distance " + metric,
                    [=](const std::string&, const std::string& th) {
                      return std::vector<std::string>{"distance", "--data", fig, "--a", "10,8", "--b",
                                                      "6,10", "--metric", metric, "--m", "100",
                                                      "--seed", "9", "--threads", th};
                    },
                    false});
  }
  cmds.push_back({"invariance",
                  [](const std::string&, const std::string&) {
                    return std::vector<std::string>{"invariance", "--maps", "10"};
                  },
                  false});

  for (const auto& c : cmds) {
    std::string results[3];
    int codes[3];
    const char* threads[3] = {"1", "1", "4"};
    for (int i = 0; i < 3; ++i) {
      const std::string out = (dir / (std::to_string(i) + ".out")).string();
      std::string stdout_text;
      codes[i] = run(c.args(out, threads[i]), stdout_text);
      results[i] = c.writes_file ? slurp(out) : stdout_text;
    }
    ++checks;
    if (codes[0] != 0 || codes[1] != 0 || codes[2] != 0 || results[0].empty() ||
        results[0] != results[1] || results[0] != results[2]) {
      failures.push_back(c.name);
    }
  }

  // Library-level parallel vs serial.
  RegressionScenario s;
  s.seed = 808;
  s.noise = 0.1;
  const Dataset sample = generate_sample(s, 60);
  const auto qs = generate_queries(s, 8, 809);
  for (const Point& q : qs) {
    ++checks;
    if (rho_profile(sample, q, {PredicateMode::Filtered, 1}).entries !=
            rho_profile(sample, q, {PredicateMode::Filtered, 4}).entries ||
        rho_profile_sampled(sample, q, 500, 1, {PredicateMode::Filtered, 1}).entries !=
            rho_profile_sampled(sample, q, 500, 1, {PredicateMode::Filtered, 3}).entries) {
      failures.push_back("profile threads");
    }
  }
  const auto serial = predict_batch(sample, qs, {7, Metric::exact(), {}}, 1);
  const auto parallel = predict_batch(sample, qs, {7, Metric::exact(), {PredicateMode::Filtered, 2}}, 4);
  for (std::size_t i = 0; i < qs.size(); ++i) {
    ++checks;
    if (serial[i].neighbors != parallel[i].neighbors || serial[i].value != parallel[i].value) {
      failures.push_back("predict_batch threads");
    }
  }
  fs::remove_all(dir);

  std::string detail = std::to_string(checks) + " checks, " + std::to_string(failures.size()) + " failed";
  for (const auto& f : failures) detail += "; " + f;
  return {failures.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) {
    g_data = argv[1];
  } else if (const char* env = std::getenv("AIKNN_TEST_DATA")) {
    g_data = env;
  } else {
    std::fprintf(stderr, "error: pass the test data directory or set AIKNN_TEST_DATA\n");
    return 2;
  }

  struct Criterion {
    int id;
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "affine invariance (exact)", invariance},
      {2, "metric oracle equivalence", oracle_equivalence},
      {3, "d=1 exact vs euclidean neighbor sets", one_dimensional},
      {4, "five-point planar fixture distance 4", figure_fixture},
      {5, "sampled metric unbiased, exhaustive exact", sampled_metric},
      {6, "consistency trend", consistency},
      {7, "euclidean non-invariance witness", witness},
      {8, "determinism", determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %d %-44s %s  (%s)\n", c.id, c.name, o.pass ? "PASS" : "FAIL",
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of 8 criteria passed\n", 8 - failed);
  return failed == 0 ? 0 : 1;
}
