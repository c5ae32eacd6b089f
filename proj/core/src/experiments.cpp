#include "aiknn/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>
#include <optional>
#include <thread>

#include "aiknn/csv_io.hpp"
#include "aiknn/error.hpp"

namespace aiknn {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::uint64_t parse_unsigned(std::string_view key, std::string_view text) {
  const std::string t = trim(text);
  if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos || t.size() > 19) {
    throw InvalidInput("config key '" + std::string(key) + "' expects a non-negative integer, got '" +
                       t + "'");
  }
  return std::stoull(t);
}

double parse_real(std::string_view key, std::string_view text) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != t.size() || !std::isfinite(v)) {
    throw InvalidInput("config key '" + std::string(key) + "' expects a real number, got '" + t +
                       "'");
  }
  return v;
}

std::vector<std::size_t> parse_grid(std::string_view key, std::string_view text) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    out.push_back(parse_unsigned(key, text.substr(start, comma - start)));
    if (comma == std::string_view::npos) {
      break;
    }
    start = comma + 1;
  }
  return out;
}

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) {
    s += x;
  }
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double std_error_of(std::span<const double> v, double mean) {
  if (v.size() < 2) {
    return 0.0;
  }
  double ss = 0.0;
  for (double x : v) {
    ss += (x - mean) * (x - mean);
  }
  const double variance = ss / static_cast<double>(v.size() - 1);
  return std::sqrt(variance / static_cast<double>(v.size()));
}

std::string metric_label(const Metric& m) {
  return m.kind == Metric::Kind::Sampled ? "sampled(m=" + std::to_string(m.m) + ")" : m.tag();
}

}  // namespace

std::size_t KSchedule::operator()(std::size_t n) const {
  std::size_t k = 1;
  switch (kind) {
    case Kind::Sqrt: {
      // Smallest k with k * k >= n, computed without rounding surprises.
      k = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
      while (k * k < n) {
        ++k;
      }
      while (k > 0 && (k - 1) * (k - 1) >= n) {
        --k;
      }
      break;
    }
    case Kind::Fixed:
      k = fixed;
      break;
    case Kind::Power:
      k = static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(n), exponent)));
      break;
  }
  return std::clamp<std::size_t>(k, 1, std::max<std::size_t>(n, 1));
}

std::string KSchedule::describe() const {
  switch (kind) {
    case Kind::Sqrt:
      return "sqrt";
    case Kind::Fixed:
      return "fixed:" + std::to_string(fixed);
    case Kind::Power:
      return "power:" + format_double(exponent);
  }
  return "?";
}

KSchedule KSchedule::parse(std::string_view text) {
  const std::string t = trim(text);
  KSchedule s;
  if (t == "sqrt") {
    s.kind = Kind::Sqrt;
  } else if (t.rfind("fixed:", 0) == 0) {
    s.kind = Kind::Fixed;
    s.fixed = parse_unsigned("k_schedule", t.substr(6));
    if (s.fixed == 0) {
      throw InvalidInput("fixed k schedule needs k >= 1");
    }
  } else if (t.rfind("power:", 0) == 0) {
    s.kind = Kind::Power;
    s.exponent = parse_real("k_schedule", t.substr(6));
    if (!(s.exponent > 0.0 && s.exponent < 1.0)) {
      throw InvalidInput("power k schedule needs an exponent in (0, 1)");
    }
  } else {
    throw InvalidInput("unknown k schedule '" + t + "' (sqrt|fixed:K|power:A)");
  }
  return s;
}

MetricChoice parse_metric_choice(std::string_view name) {
  if (name == "auto") return MetricChoice::Auto;
  if (name == "exact") return MetricChoice::Exact;
  if (name == "sampled") return MetricChoice::Sampled;
  if (name == "euclidean") return MetricChoice::Euclidean;
  if (name == "rank") return MetricChoice::CoordRank;
  throw InvalidInput("unknown metric '" + std::string(name) +
                     "' (auto|exact|sampled|euclidean|rank)");
}

std::string to_string(MetricChoice c) {
  switch (c) {
    case MetricChoice::Auto:
      return "auto";
    case MetricChoice::Exact:
      return "exact";
    case MetricChoice::Sampled:
      return "sampled";
    case MetricChoice::Euclidean:
      return "euclidean";
    case MetricChoice::CoordRank:
      return "rank";
  }
  return "?";
}

std::size_t exact_metric_cap(std::size_t d) {
  switch (d) {
    case 1:
      return 5000;
    case 2:
      return 500;
    case 3:
      return 120;
    default:
      return 40;
  }
}

void ExperimentConfig::validate() const {
  scenario.validate();
  if (n_grid.empty()) {
    throw InvalidInput("n_grid must not be empty");
  }
  for (std::size_t n : n_grid) {
    if (n < scenario.dim || n == 0) {
      throw InvalidInput("every n in n_grid must satisfy n >= d");
    }
    const std::size_t k = k_schedule(n);
    if (k < 1 || k > n) {
      throw InvalidInput("k schedule gives k outside [1, n]");
    }
  }
  if (!(p >= 1.0)) {
    throw InvalidInput("error exponent p must be >= 1");
  }
  if (queries == 0) {
    throw InvalidInput("query count must be at least 1");
  }
  if (replicates == 0) {
    throw InvalidInput("replicate count must be at least 1");
  }
  if ((metric == MetricChoice::Sampled || metric == MetricChoice::Auto) && sampled_m == 0) {
    throw InvalidInput("sampled metric needs m >= 1");
  }
}

ExperimentConfig parse_experiment_config(std::istream& in) {
  ExperimentConfig c;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    const std::string body = trim(line);
    if (body.empty()) {
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw InvalidInput("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key == "sampler") {
      c.scenario.sampler = parse_sampler(value);
    } else if (key == "function") {
      c.scenario.function = parse_true_function(value);
    } else if (key == "constant") {
      c.scenario.constant = parse_real(key, value);
    } else if (key == "noise") {
      c.scenario.noise = parse_real(key, value);
    } else if (key == "dim") {
      c.scenario.dim = parse_unsigned(key, value);
    } else if (key == "seed") {
      c.scenario.seed = parse_unsigned(key, value);
    } else if (key == "n_grid") {
      c.n_grid = parse_grid(key, value);
    } else if (key == "k_schedule") {
      c.k_schedule = KSchedule::parse(value);
    } else if (key == "p") {
      c.p = parse_real(key, value);
    } else if (key == "queries") {
      c.queries = parse_unsigned(key, value);
    } else if (key == "replicates") {
      c.replicates = parse_unsigned(key, value);
    } else if (key == "metric") {
      c.metric = parse_metric_choice(value);
    } else if (key == "m") {
      c.sampled_m = parse_unsigned(key, value);
    } else if (key == "threads") {
      c.threads = static_cast<unsigned>(parse_unsigned(key, value));
    } else {
      throw InvalidInput("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  c.validate();
  return c;
}

ExperimentConfig parse_experiment_config(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_experiment_config(in);
}

Metric resolve_metric(const ExperimentConfig& config, std::size_t n, std::size_t replicate) {
  const auto sampled = [&] {
    return Metric::sampled(config.sampled_m, derive_seed(config.scenario.seed, {n, replicate, 3}));
  };
  switch (config.metric) {
    case MetricChoice::Auto:
      return n <= exact_metric_cap(config.scenario.dim) ? Metric::exact() : sampled();
    case MetricChoice::Exact:
      return Metric::exact();
    case MetricChoice::Sampled:
      return sampled();
    case MetricChoice::Euclidean:
      return Metric::euclidean();
    case MetricChoice::CoordRank:
      return Metric::coord_rank();
  }
  return Metric::exact();
}

std::vector<double> query_errors(const Dataset& data, std::span<const Point> queries,
                                 const RegressionScenario& scenario,
                                 const EstimatorConfig& estimator, double p, unsigned threads) {
  const auto predictions = predict_batch(data, queries, estimator, threads);
  std::vector<double> out(queries.size());
  for (std::size_t q = 0; q < queries.size(); ++q) {
    out[q] = std::pow(std::fabs(predictions[q].value - scenario.regression(queries[q])), p);
  }
  return out;
}

ExperimentReport run_consistency_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report;
  report.config = config;
  const std::uint64_t base = config.scenario.seed;
  for (std::size_t n : config.n_grid) {
    const std::size_t k = config.k_schedule(n);
    std::vector<double> errors;
    double runtime = 0.0;
    std::string label;
    for (std::size_t r = 0; r < config.replicates; ++r) {
      const auto start = std::chrono::steady_clock::now();
      RegressionScenario training = config.scenario;
      training.seed = derive_seed(base, {n, r, 1});
      const Dataset data = generate_sample(training, n);
      const auto queries = generate_queries(config.scenario, config.queries, derive_seed(base, {n, r, 2}));
      EstimatorConfig est;
      est.k = k;
      est.metric = resolve_metric(config, n, r);
      const auto errs = query_errors(data, queries, config.scenario, est, config.p, config.threads);
      const double elapsed =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

      ExperimentRecord rec;
      rec.n = n;
      rec.replicate = r;
      rec.k = k;
      rec.metric = est.metric.tag();
      rec.error = mean_of(errs);
      rec.runtime_seconds = elapsed;
      report.records.push_back(rec);
      errors.push_back(rec.error);
      runtime += elapsed;
      label = metric_label(est.metric);
    }
    ExperimentAggregate agg;
    agg.n = n;
    agg.k = k;
    agg.metric = label;
    agg.mean_error = mean_of(errors);
    agg.std_error = std_error_of(errors, agg.mean_error);
    agg.replicates = config.replicates;
    agg.runtime_seconds = runtime;
    report.aggregates.push_back(agg);
  }
  return report;
}

std::string ExperimentReport::to_csv() const {
  std::string out = "kind,n,replicate,k,metric,error,std_error,replicates\n";
  for (const auto& r : records) {
    out += "replicate," + std::to_string(r.n) + "," + std::to_string(r.replicate) + "," +
           std::to_string(r.k) + ",\"" + r.metric + "\"," + format_double(r.error) + ",,\n";
  }
  for (const auto& a : aggregates) {
    out += "aggregate," + std::to_string(a.n) + ",," + std::to_string(a.k) + ",\"" + a.metric +
           "\"," + format_double(a.mean_error) + "," + format_double(a.std_error) + "," +
           std::to_string(a.replicates) + "\n";
  }
  return out;
}

TrendCheck ExperimentReport::trend() const {
  TrendCheck t;
  if (aggregates.size() < 2) {
    return t;
  }
  t.last_below_first = aggregates.back().mean_error < aggregates.front().mean_error;
  for (std::size_t i = 0; i + 1 < aggregates.size(); ++i) {
    const auto& a = aggregates[i];
    const auto& b = aggregates[i + 1];
    if (b.mean_error > a.mean_error) {
      ++t.inversions;
      if (b.mean_error - a.mean_error > std::max(a.std_error, b.std_error)) {
        t.inversions_within_std_error = false;
      }
    }
  }
  return t;
}

std::string ExperimentReport::summary() const {
  std::string out;
  out += "sampler=" + to_string(config.scenario.sampler) + "\n";
  out += "function=" + to_string(config.scenario.function) + "\n";
  out += "dim=" + std::to_string(config.scenario.dim) + "\n";
  out += "noise=" + format_double(config.scenario.noise) + "\n";
  out += "p=" + format_double(config.p) + "\n";
  out += "k_schedule=" + config.k_schedule.describe() + "\n";
  out += "queries=" + std::to_string(config.queries) + "\n";
  out += "replicates=" + std::to_string(config.replicates) + "\n";
  for (const auto& a : aggregates) {
    out += "n=" + std::to_string(a.n) + " k=" + std::to_string(a.k) + " metric=" + a.metric +
           " mean_error=" + format_double(a.mean_error) +
           " std_error=" + format_double(a.std_error) +
           " runtime_s=" + format_double(a.runtime_seconds) + "\n";
  }
  const TrendCheck t = trend();
  out += std::string("trend_last_below_first=") + (t.last_below_first ? "true" : "false") + "\n";
  out += "trend_inversions=" + std::to_string(t.inversions) + "\n";
  out += std::string("trend=") + (t.passed() ? "pass" : "fail") + "\n";
  return out;
}

std::string InvarianceReport::summary() const {
  std::string out;
  out += "comparisons=" + std::to_string(comparisons) + "\n";
  out += "exact_violations=" + std::to_string(exact_violations) + "\n";
  out += "sampled_violations=" + std::to_string(sampled_violations) + "\n";
  out += "euclidean_changes=" + std::to_string(euclidean_changes) + "\n";
  out += std::string("witness_euclidean_changed=") + (witness_euclidean_changed ? "true" : "false") + "\n";
  out += std::string("witness_exact_unchanged=") + (witness_exact_unchanged ? "true" : "false") + "\n";
  for (const auto& f : failures) {
    out += "failure: " + f + "\n";
  }
  out += std::to_string(exact_violations + sampled_violations) + " violations\n";
  return out;
}

WitnessInstance euclidean_witness() {
  std::vector<Point> pts{{1, 0}, {0, 2}, {5, 5}, {-4, 6}, {3, -7}};
  Dataset data(std::move(pts), {1.0, 2.0, 3.0, 4.0, 5.0});
  return WitnessInstance{std::move(data), Point{0, 0}, AffineMap::diagonal({3, 1}), 1};
}

NearDegenerateInstance near_degenerate_instance() {
  // Grid (0.1 i, 0.3 j): decimal steps that doubles cannot represent, so
  // exactly collinear triples evaluate to rounding noise in floating point.
  std::vector<Point> pts;
  std::vector<double> ys;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      pts.push_back(Point{Scalar(i, 10), Scalar(3 * j, 10)});
      ys.push_back(static_cast<double>(4 * i + j));
    }
  }
  std::vector<Point> queries{
      Point{Scalar(1, 20), Scalar(3, 20)},  Point{Scalar(3, 20), Scalar(9, 20)},
      Point{Scalar(1, 10), Scalar(3, 10)},  Point{Scalar(1, 5), Scalar(3, 10)},
      Point{Scalar(1, 20), Scalar(9, 20)},  Point{Scalar(3, 20), Scalar(3, 20)},
  };
  return NearDegenerateInstance{Dataset(std::move(pts), std::move(ys)), std::move(queries), 5};
}

InvarianceReport run_invariance_suite(const InvarianceOptions& options) {
  if (options.maps == 0) {
    throw InvalidInput("invariance suite needs at least one map");
  }
  if (options.seeds.empty()) {
    throw InvalidInput("invariance suite needs at least one seed");
  }
  if (!options.adversarial) {
    if (options.d == 0 || options.n < options.d) {
      throw InvalidInput("invariance suite needs n >= d >= 1");
    }
    if (options.k == 0 || options.k > options.n) {
      throw InvalidInput("invariance suite needs 1 <= k <= n");
    }
    if (options.queries_per_map == 0) {
      throw InvalidInput("invariance suite needs at least one query per map");
    }
  }

  InvarianceReport report;
  const auto record_failure = [&](std::string what) {
    if (report.failures.size() < 10) {
      report.failures.push_back(std::move(what));
    }
  };

  for (std::uint64_t seed : options.seeds) {
    for (std::size_t t = 0; t < options.maps; ++t) {
      std::optional<Dataset> data;
      std::vector<Point> queries;
      std::size_t k = options.k;
      std::size_t d = options.d;
      if (options.adversarial) {
        auto inst = near_degenerate_instance();
        data.emplace(std::move(inst.data));
        queries = std::move(inst.queries);
        k = inst.k;
        d = 2;
      } else {
        RegressionScenario s;
        s.dim = d;
        s.function = TrueFunction::Sine;
        s.noise = 0.1;
        s.seed = derive_seed(seed, {t, 1});
        data.emplace(generate_sample(s, options.n));
        queries = generate_queries(s, options.queries_per_map, derive_seed(seed, {t, 2}));
      }
      const AffineMap map =
          options.identity_maps ? AffineMap::identity(d) : random_affine(d, derive_seed(seed, {t, 3}));
      const Dataset moved = map.apply(*data);

      EstimatorConfig exact;
      exact.k = k;
      exact.engine.predicates = options.predicates;
      EstimatorConfig sampled = exact;
      sampled.metric = Metric::sampled(options.sampled_m, derive_seed(seed, {t, 4}));
      EstimatorConfig euclid = exact;
      euclid.metric = Metric::euclidean();

      for (std::size_t q = 0; q < queries.size(); ++q) {
        const Point moved_query = map.apply(queries[q]);
        ++report.comparisons;
        const auto describe = [&](const char* metric) {
          return std::string(metric) + " seed=" + std::to_string(seed) + " map=" +
                 std::to_string(t) + " query=" + std::to_string(q);
        };

        const Prediction a = predict(*data, queries[q], exact);
        const Prediction b = predict(moved, moved_query, exact);
        if (a.value != b.value || a.neighbors != b.neighbors) {
          ++report.exact_violations;
          record_failure(describe("exact"));
        }
        if (options.check_sampled) {
          const Prediction sa = predict(*data, queries[q], sampled);
          const Prediction sb = predict(moved, moved_query, sampled);
          if (sa.value != sb.value || sa.neighbors != sb.neighbors) {
            ++report.sampled_violations;
            record_failure(describe("sampled"));
          }
        }
        const Prediction ea = predict(*data, queries[q], euclid);
        const Prediction eb = predict(moved, moved_query, euclid);
        if (ea.neighbors != eb.neighbors) {
          ++report.euclidean_changes;
        }
      }
    }
  }

  const WitnessInstance w = euclidean_witness();
  const Dataset scaled = w.scaling.apply(w.data);
  const Point scaled_query = w.scaling.apply(w.query);
  EstimatorConfig euclid;
  euclid.k = w.k;
  euclid.metric = Metric::euclidean();
  EstimatorConfig exact;
  exact.k = w.k;
  exact.engine.predicates = options.predicates;
  report.witness_euclidean_changed =
      predict(w.data, w.query, euclid).neighbors != predict(scaled, scaled_query, euclid).neighbors;
  report.witness_exact_unchanged =
      predict(w.data, w.query, exact).neighbors == predict(scaled, scaled_query, exact).neighbors;
  return report;
}

}  // namespace aiknn
