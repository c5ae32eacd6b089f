#include "aiknn/estimator.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

#include "aiknn/error.hpp"

namespace aiknn {

std::string Metric::tag() const {
  switch (kind) {
    case Kind::Exact:
      return "exact";
    case Kind::Sampled:
      return "sampled(m=" + std::to_string(m) + ",seed=" + std::to_string(seed) + ")";
    case Kind::Euclidean:
      return "euclidean";
    case Kind::CoordRank:
      return "rank";
  }
  return "unknown";
}

std::vector<std::size_t> select_neighbors(std::span<const Scalar> distances, std::size_t k) {
  const std::size_t n = distances.size();
  if (k == 0 || k > n) {
    throw InvalidInput("k must satisfy 1 <= k <= n (k = " + std::to_string(k) +
                       ", n = " + std::to_string(n) + ")");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto closer = [&](std::size_t a, std::size_t b) {
    const int c = cmp(distances[a], distances[b]);
    return c != 0 ? c < 0 : a < b;
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    closer);
  order.resize(k);
  return order;
}

std::vector<std::size_t> select_neighbors(const DistanceProfile& profile, std::size_t k) {
  const auto distances = profile.distances();
  return select_neighbors(distances, k);
}

std::vector<Scalar> euclidean_distances(const Dataset& data, const Point& x) {
  require_dim(x, data.dim(), "query");
  std::vector<Scalar> out;
  out.reserve(data.size());
  for (const Point& p : data.points()) {
    Scalar acc = 0;
    for (std::size_t j = 0; j < data.dim(); ++j) {
      const Scalar diff = p[j] - x[j];
      acc += diff * diff;
    }
    out.push_back(std::move(acc));
  }
  return out;
}

std::vector<Scalar> coord_rank_distances(const Dataset& data, const Point& x) {
  require_dim(x, data.dim(), "query");
  const std::size_t n = data.size();
  // Doubled average ranks keep everything integral: positions lo..hi (1-based)
  // share rank (lo + hi) / 2.
  std::vector<std::vector<long>> ranks2(n + 1, std::vector<long>(data.dim()));
  std::vector<std::size_t> order(n + 1);
  for (std::size_t j = 0; j < data.dim(); ++j) {
    const auto value = [&](std::size_t i) -> const Scalar& {
      return i < n ? data.point(i)[j] : x[j];
    };
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return value(a) < value(b); });
    std::size_t lo = 0;
    while (lo <= n) {
      std::size_t hi = lo;
      while (hi + 1 <= n && value(order[hi + 1]) == value(order[lo])) {
        ++hi;
      }
      const long shared = static_cast<long>(lo + 1 + hi + 1);
      for (std::size_t t = lo; t <= hi; ++t) {
        ranks2[order[t]][j] = shared;
      }
      lo = hi + 1;
    }
  }
  std::vector<Scalar> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    long acc = 0;
    for (std::size_t j = 0; j < data.dim(); ++j) {
      acc += std::labs(ranks2[i][j] - ranks2[n][j]);
    }
    out.emplace_back(acc, 2);
    out.back().canonicalize();
  }
  return out;
}

std::vector<Scalar> metric_distances(const Dataset& data, const Point& x,
                                     const EstimatorConfig& config,
                                     PredictionDiagnostics* diagnostics) {
  switch (config.metric.kind) {
    case Metric::Kind::Exact:
    case Metric::Kind::Sampled: {
      const DistanceProfile profile =
          config.metric.kind == Metric::Kind::Exact
              ? rho_profile(data, x, config.engine)
              : rho_profile_sampled(data, x, config.metric.m, config.metric.seed, config.engine);
      if (diagnostics != nullptr) {
        diagnostics->subsets_examined = profile.samples;
        diagnostics->degenerate_subsets = profile.degenerate_subsets;
        diagnostics->sign_evaluations = profile.sign_evaluations;
      }
      return profile.distances();
    }
    case Metric::Kind::Euclidean:
      return euclidean_distances(data, x);
    case Metric::Kind::CoordRank:
      return coord_rank_distances(data, x);
  }
  throw InvalidInput("unknown metric");
}

Prediction predict(const Dataset& data, const Point& x, const EstimatorConfig& config) {
  if (config.k == 0 || config.k > data.size()) {
    throw InvalidInput("k must satisfy 1 <= k <= n (k = " + std::to_string(config.k) +
                       ", n = " + std::to_string(data.size()) + ")");
  }
  Prediction out;
  const auto distances = metric_distances(data, x, config, &out.diagnostics);
  out.neighbors = select_neighbors(distances, config.k);
  double sum = 0.0;
  for (std::size_t i : out.neighbors) {
    sum += data.response(i);
  }
  out.value = sum / static_cast<double>(config.k);
  return out;
}

std::vector<Prediction> predict_batch(const Dataset& data, std::span<const Point> queries,
                                      const EstimatorConfig& config, unsigned threads) {
  std::vector<Prediction> out(queries.size());
  if (threads == 0) {
    threads = std::max(1u, std::thread::hardware_concurrency());
  }
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(queries.size(), 1)));
  if (threads <= 1) {
    for (std::size_t q = 0; q < queries.size(); ++q) {
      out[q] = predict(data, queries[q], config);
    }
    return out;
  }
  std::vector<std::exception_ptr> failures(threads);
  {
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < threads; ++w) {
      workers.emplace_back([&, w] {
        try {
          for (std::size_t q = w; q < queries.size(); q += threads) {
            out[q] = predict(data, queries[q], config);
          }
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& f : failures) {
    if (f) {
      std::rethrow_exception(f);
    }
  }
  return out;
}

}  // namespace aiknn
