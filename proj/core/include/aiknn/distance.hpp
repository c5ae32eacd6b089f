#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "aiknn/dataset.hpp"
#include "aiknn/point.hpp"
#include "aiknn/predicates.hpp"
#include "aiknn/scalar.hpp"

namespace aiknn {

struct EngineOptions {
  PredicateMode predicates = PredicateMode::Filtered;
  /// Worker threads for subset enumeration; 0 means hardware concurrency.
  /// Counts are summed per worker, so results never depend on this.
  unsigned threads = 1;
};

/// Hyperplane-crossing count for one pair of points.
///
/// Every examined subset falls in exactly one bucket: it cuts the segment
/// (`value`), it is affinely dependent (`degenerate_subsets`), an endpoint
/// lies on its hyperplane (`touching_subsets`), or it leaves both endpoints
/// strictly on the same side.
struct DistanceCount {
  std::uint64_t value = 0;
  std::uint64_t degenerate_subsets = 0;
  std::uint64_t touching_subsets = 0;
  std::uint64_t subsets = 0;

  std::uint64_t same_side() const {
    return subsets - value - degenerate_subsets - touching_subsets;
  }
  friend bool operator==(const DistanceCount&, const DistanceCount&) = default;
};

/// Number of hyperplanes through d sample points that strictly separate a
/// and b, by enumerating all C(n, d) subsets.
DistanceCount rho_exact(const Dataset& data, const Point& a, const Point& b,
                        const EngineOptions& options = {});

enum class SamplingScheme {
  /// m subsets drawn uniformly with replacement (by unranking uniform ranks).
  WithReplacement,
  /// Each subset exactly once; m must equal C(n, d). Reproduces the exact count.
  Exhaustive,
};

struct SampledEstimate {
  /// C(n, d) * hits / m.
  Scalar estimate;
  DistanceCount draws;  // bucket counts over the m draws
  std::uint64_t m = 0;
  std::uint64_t seed = 0;
  std::uint64_t total_subsets = 0;
};

SampledEstimate rho_sampled(const Dataset& data, const Point& a, const Point& b, std::uint64_t m,
                            std::uint64_t seed, const EngineOptions& options = {},
                            SamplingScheme scheme = SamplingScheme::WithReplacement);

enum class ProfileKind { Exact, Sampled };

/// Distances from one query x to every sample point.
struct DistanceProfile {
  ProfileKind kind = ProfileKind::Exact;
  /// entries[i] holds the counts for the pair (x, X_i). For a sampled profile
  /// the counts are over the m draws.
  std::vector<DistanceCount> entries;
  std::uint64_t total_subsets = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  /// Dependent subsets visited (once per subset, not per entry).
  std::uint64_t degenerate_subsets = 0;
  /// Signs resolved: n + 1 per visited subset. Signs forced to Zero by a
  /// dependent subset or a query on the hyperplane are counted as resolved.
  std::uint64_t sign_evaluations = 0;

  std::size_t size() const { return entries.size(); }
  /// rho_n(x, X_i): the exact count, or C(n, d) * hits / m when sampled.
  Scalar distance(std::size_t i) const;
  std::vector<Scalar> distances() const;
};

/// All n exact distances from x. For each subset the query side is computed
/// once and every sample point is classified against it, so the work is
/// C(n, d) * (n + 1) sign evaluations.
DistanceProfile rho_profile(const Dataset& data, const Point& x, const EngineOptions& options = {});

/// Sampled profile: one sample of m subsets, determined by `seed` alone and
/// shared by all n entries.
DistanceProfile rho_profile_sampled(const Dataset& data, const Point& x, std::uint64_t m,
                                    std::uint64_t seed, const EngineOptions& options = {},
                                    SamplingScheme scheme = SamplingScheme::WithReplacement);

/// The subset ranks (lexicographic) drawn for a given (n, d, m, seed).
std::vector<std::uint64_t> draw_subset_ranks(std::uint64_t total_subsets, std::uint64_t m,
                                             std::uint64_t seed, SamplingScheme scheme);

}  // namespace aiknn
