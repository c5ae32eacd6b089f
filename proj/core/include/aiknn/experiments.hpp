#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "aiknn/affine.hpp"
#include "aiknn/dataset.hpp"
#include "aiknn/estimator.hpp"
#include "aiknn/scenario.hpp"

namespace aiknn {

/// Maps a sample size n to the neighbor count k_n, clamped to [1, n].
struct KSchedule {
  enum class Kind { Sqrt, Fixed, Power };
  Kind kind = Kind::Sqrt;
  std::size_t fixed = 1;
  double exponent = 0.5;

  std::size_t operator()(std::size_t n) const;
  /// "sqrt", "fixed:K" or "power:A".
  std::string describe() const;
  static KSchedule parse(std::string_view text);
};

enum class MetricChoice { Auto, Exact, Sampled, Euclidean, CoordRank };

MetricChoice parse_metric_choice(std::string_view name);
std::string to_string(MetricChoice c);

/// Largest n for which Auto uses the exact metric at dimension d.
std::size_t exact_metric_cap(std::size_t d);

struct ExperimentConfig {
  RegressionScenario scenario{};
  std::vector<std::size_t> n_grid{50, 100, 200, 400};
  KSchedule k_schedule{};
  double p = 2.0;
  std::size_t queries = 50;
  std::size_t replicates = 10;
  MetricChoice metric = MetricChoice::Auto;
  std::uint64_t sampled_m = 2000;
  unsigned threads = 1;

  void validate() const;
};

/// Reads "key = value" lines ('#' starts a comment). Unknown keys and
/// malformed values throw InvalidInput.
ExperimentConfig parse_experiment_config(std::istream& in);
ExperimentConfig parse_experiment_config(std::string_view text);

/// The metric used for a grid cell; Auto routes n above the cap to sampling.
Metric resolve_metric(const ExperimentConfig& config, std::size_t n, std::size_t replicate);

struct ExperimentRecord {
  std::size_t n = 0;
  std::size_t replicate = 0;
  std::size_t k = 0;
  std::string metric;
  double error = 0.0;
  double runtime_seconds = 0.0;
};

struct ExperimentAggregate {
  std::size_t n = 0;
  std::size_t k = 0;
  std::string metric;
  double mean_error = 0.0;
  double std_error = 0.0;
  std::size_t replicates = 0;
  double runtime_seconds = 0.0;
};

struct TrendCheck {
  bool last_below_first = false;
  std::size_t inversions = 0;
  bool inversions_within_std_error = true;
  bool passed() const {
    return last_below_first && inversions <= 1 && inversions_within_std_error;
  }
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<ExperimentRecord> records;
  std::vector<ExperimentAggregate> aggregates;

  /// One row per (n, replicate) then one aggregate row per n. Contains no
  /// timing, so reruns are byte-identical.
  std::string to_csv() const;
  /// key=value lines, including runtimes and the trend verdict.
  std::string summary() const;
  TrendCheck trend() const;
};

/// |r_n(q) - r(q)|^p for each query.
std::vector<double> query_errors(const Dataset& data, std::span<const Point> queries,
                                 const RegressionScenario& scenario,
                                 const EstimatorConfig& estimator, double p,
                                 unsigned threads = 1);

ExperimentReport run_consistency_experiment(const ExperimentConfig& config);

struct InvarianceOptions {
  std::size_t n = 30;
  std::size_t d = 2;
  std::size_t k = 5;
  std::size_t maps = 100;
  std::size_t queries_per_map = 3;
  std::vector<std::uint64_t> seeds{1};
  /// Use the identity map instead of random ones.
  bool identity_maps = false;
  /// Use the shipped near-degenerate planar instance instead of random data.
  bool adversarial = false;
  /// Also check the seeded sampled metric.
  bool check_sampled = true;
  std::uint64_t sampled_m = 200;
  PredicateMode predicates = PredicateMode::Filtered;
};

struct InvarianceReport {
  std::size_t comparisons = 0;
  std::size_t exact_violations = 0;
  std::size_t sampled_violations = 0;
  /// Euclidean-baseline neighbor lists changed by a map (expected, not a bug).
  std::size_t euclidean_changes = 0;
  bool witness_euclidean_changed = false;
  bool witness_exact_unchanged = false;
  std::vector<std::string> failures;

  bool passed() const { return exact_violations == 0 && sampled_violations == 0; }
  std::string summary() const;
};

InvarianceReport run_invariance_suite(const InvarianceOptions& options);

/// A planar instance whose Euclidean nearest neighbors change under a
/// diagonal scaling of the axes.
struct WitnessInstance {
  Dataset data;
  Point query;
  AffineMap scaling;
  std::size_t k;
};
WitnessInstance euclidean_witness();

/// Planar decimal grid with many exactly collinear triples and queries on
/// those lines. Exact signs are zero there; doubles see rounding noise.
struct NearDegenerateInstance {
  Dataset data;
  std::vector<Point> queries;
  std::size_t k;
};
NearDegenerateInstance near_degenerate_instance();

}  // namespace aiknn
