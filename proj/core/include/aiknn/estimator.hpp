#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "aiknn/dataset.hpp"
#include "aiknn/distance.hpp"
#include "aiknn/point.hpp"
#include "aiknn/scalar.hpp"

namespace aiknn {

/// Distance used to order the sample around a query.
struct Metric {
  enum class Kind {
    Exact,      // hyperplane-crossing count over all d-subsets
    Sampled,    // the same count estimated from m seeded draws
    Euclidean,  // squared Euclidean distance (baseline)
    CoordRank,  // L1 distance between coordinatewise rank vectors (baseline)
  };

  Kind kind = Kind::Exact;
  std::uint64_t m = 0;
  std::uint64_t seed = 0;

  static Metric exact() { return {Kind::Exact, 0, 0}; }
  static Metric sampled(std::uint64_t m, std::uint64_t seed) { return {Kind::Sampled, m, seed}; }
  static Metric euclidean() { return {Kind::Euclidean, 0, 0}; }
  static Metric coord_rank() { return {Kind::CoordRank, 0, 0}; }

  /// "exact", "sampled(m=...,seed=...)", "euclidean" or "rank".
  std::string tag() const;

  friend bool operator==(const Metric&, const Metric&) = default;
};

struct EstimatorConfig {
  std::size_t k = 1;
  Metric metric = Metric::exact();
  EngineOptions engine{};
};

struct PredictionDiagnostics {
  std::uint64_t subsets_examined = 0;
  std::uint64_t degenerate_subsets = 0;
  std::uint64_t sign_evaluations = 0;
};

struct Prediction {
  /// Mean response of the selected neighbors.
  double value = 0.0;
  /// Data indices (0-based) in selection order: ascending distance, then index.
  std::vector<std::size_t> neighbors;
  PredictionDiagnostics diagnostics;
};

/// The k indices with the smallest (distance, index) pairs, in that order.
std::vector<std::size_t> select_neighbors(std::span<const Scalar> distances, std::size_t k);
std::vector<std::size_t> select_neighbors(const DistanceProfile& profile, std::size_t k);

/// Squared Euclidean distances from x to every sample point.
std::vector<Scalar> euclidean_distances(const Dataset& data, const Point& x);

/// L1 distances between rank vectors. Ranks are taken per coordinate over the
/// pooled values {X_1j, ..., X_nj, x_j}; tied values share their average rank.
std::vector<Scalar> coord_rank_distances(const Dataset& data, const Point& x);

/// Distances under `config.metric`, filling `diagnostics` when given.
std::vector<Scalar> metric_distances(const Dataset& data, const Point& x,
                                     const EstimatorConfig& config,
                                     PredictionDiagnostics* diagnostics = nullptr);

Prediction predict(const Dataset& data, const Point& x, const EstimatorConfig& config);

/// Element-wise predict. `threads` workers split the queries (0 = hardware
/// concurrency); results are identical for any thread count.
std::vector<Prediction> predict_batch(const Dataset& data, std::span<const Point> queries,
                                      const EstimatorConfig& config, unsigned threads = 1);

}  // namespace aiknn
