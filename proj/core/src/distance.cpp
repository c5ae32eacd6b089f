#include "aiknn/distance.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <thread>

#include "aiknn/combinatorics.hpp"
#include "aiknn/error.hpp"

namespace aiknn {
namespace {

void check_query(const Dataset& data, const Point& p, const char* what) {
  require_dim(p, data.dim(), what);
}

unsigned worker_count(unsigned requested, std::uint64_t jobs) {
  unsigned threads = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  if (jobs < threads) {
    threads = static_cast<unsigned>(std::max<std::uint64_t>(jobs, 1));
  }
  return threads;
}

// Runs body(begin, end, worker) over [0, count) split into contiguous chunks.
void parallel_chunks(std::uint64_t count, unsigned threads,
                     const std::function<void(std::uint64_t, std::uint64_t, unsigned)>& body) {
  if (threads <= 1) {
    body(0, count, 0);
    return;
  }
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    const std::uint64_t begin = count * w / threads;
    const std::uint64_t end = count * (w + 1) / threads;
    workers.emplace_back([&body, begin, end, w] { body(begin, end, w); });
  }
}

void add_into(DistanceCount& into, const DistanceCount& from) {
  into.value += from.value;
  into.degenerate_subsets += from.degenerate_subsets;
  into.touching_subsets += from.touching_subsets;
  into.subsets += from.subsets;
}

void bind_subset(Hyperplane& h, const Dataset& data, std::span<const std::size_t> combo,
          std::vector<const Point*>& through, PredicateMode mode) {
  for (std::size_t i = 0; i < combo.size(); ++i) {
    through[i] = &data.point(combo[i]);
  }
  h.assign(through, mode);
}

void classify_pair(const Hyperplane& h, const Point& a, const Point& b, DistanceCount& count) {
  ++count.subsets;
  const CutTest t = h.cut(a, b);
  if (t.dependent_subset) {
    ++count.degenerate_subsets;
  } else if (t.degenerate) {
    ++count.touching_subsets;
  } else if (t.cut) {
    ++count.value;
  }
}

// Per-worker accumulator for profiles.
struct ProfileTally {
  std::vector<DistanceCount> entries;
  std::uint64_t degenerate = 0;
  std::uint64_t sign_evaluations = 0;
  std::vector<Sign> signs;
};

// Members of the defining subset lie on the hyperplane by construction, so
// their signs are Zero without evaluation.
void classify_profile(const Hyperplane& h, std::span<const std::size_t> combo,
                      const Dataset& data, const ApproxBlock& block, const Point& x,
                      ProfileTally& t) {
  const std::size_t n = data.size();
  t.sign_evaluations += n + 1;
  for (auto& e : t.entries) {
    ++e.subsets;
  }
  if (h.degenerate()) {
    ++t.degenerate;
    for (auto& e : t.entries) {
      ++e.degenerate_subsets;
    }
    return;
  }
  const Sign sx = h.side(x);
  if (sx == Sign::Zero) {
    for (auto& e : t.entries) {
      ++e.touching_subsets;
    }
    return;
  }
  t.signs.resize(n);
  h.sides(block, data.points(), combo, t.signs);
  for (std::size_t j = 0; j < n; ++j) {
    const Sign sj = t.signs[j];
    if (sj == Sign::Zero) {
      ++t.entries[j].touching_subsets;
    } else if (sj != sx) {
      ++t.entries[j].value;
    }
  }
}

DistanceProfile merge_profile(std::vector<ProfileTally>& tallies, std::size_t n) {
  DistanceProfile profile;
  profile.entries.assign(n, DistanceCount{});
  for (const auto& t : tallies) {
    for (std::size_t j = 0; j < n; ++j) {
      add_into(profile.entries[j], t.entries[j]);
    }
    profile.degenerate_subsets += t.degenerate;
    profile.sign_evaluations += t.sign_evaluations;
  }
  return profile;
}

}  // namespace

DistanceCount rho_exact(const Dataset& data, const Point& a, const Point& b,
                        const EngineOptions& options) {
  check_query(data, a, "endpoint a");
  check_query(data, b, "endpoint b");
  const std::size_t n = data.size();
  const std::size_t d = data.dim();
  const std::uint64_t total = binomial(n, d);
  const unsigned threads = worker_count(options.threads, total);

  std::vector<DistanceCount> partial(threads);
  parallel_chunks(total, threads, [&](std::uint64_t begin, std::uint64_t end, unsigned w) {
    if (begin == end) {
      return;
    }
    std::vector<std::size_t> combo(d);
    std::vector<const Point*> through(d);
    Hyperplane h;
    unrank_combination(begin, n, combo);
    for (std::uint64_t r = begin; r < end; ++r) {
      bind_subset(h, data, combo, through, options.predicates);
      classify_pair(h, a, b, partial[w]);
      next_combination(combo, n);
    }
  });

  DistanceCount total_count;
  for (const auto& p : partial) {
    add_into(total_count, p);
  }
  return total_count;
}

std::vector<std::uint64_t> draw_subset_ranks(std::uint64_t total_subsets, std::uint64_t m,
                                             std::uint64_t seed, SamplingScheme scheme) {
  if (m == 0) {
    throw InvalidInput("sample size m must be at least 1");
  }
  std::vector<std::uint64_t> ranks(m);
  if (scheme == SamplingScheme::Exhaustive) {
    if (m != total_subsets) {
      throw InvalidInput("exhaustive sampling needs m = C(n, d) = " +
                         std::to_string(total_subsets));
    }
    for (std::uint64_t r = 0; r < m; ++r) {
      ranks[r] = r;
    }
    return ranks;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> pick(0, total_subsets - 1);
  for (auto& r : ranks) {
    r = pick(rng);
  }
  return ranks;
}

SampledEstimate rho_sampled(const Dataset& data, const Point& a, const Point& b, std::uint64_t m,
                            std::uint64_t seed, const EngineOptions& options,
                            SamplingScheme scheme) {
  check_query(data, a, "endpoint a");
  check_query(data, b, "endpoint b");
  const std::size_t n = data.size();
  const std::size_t d = data.dim();
  const std::uint64_t total = binomial(n, d);
  const auto ranks = draw_subset_ranks(total, m, seed, scheme);
  const unsigned threads = worker_count(options.threads, m);

  std::vector<DistanceCount> partial(threads);
  parallel_chunks(m, threads, [&](std::uint64_t begin, std::uint64_t end, unsigned w) {
    std::vector<std::size_t> combo(d);
    std::vector<const Point*> through(d);
    Hyperplane h;
    for (std::uint64_t s = begin; s < end; ++s) {
      unrank_combination(ranks[s], n, combo);
      bind_subset(h, data, combo, through, options.predicates);
      classify_pair(h, a, b, partial[w]);
    }
  });

  SampledEstimate out;
  for (const auto& p : partial) {
    add_into(out.draws, p);
  }
  out.m = m;
  out.seed = seed;
  out.total_subsets = total;
  out.estimate = Scalar(mpz_class(static_cast<unsigned long>(total)) *
                            mpz_class(static_cast<unsigned long>(out.draws.value)),
                        mpz_class(static_cast<unsigned long>(m)));
  out.estimate.canonicalize();
  return out;
}

Scalar DistanceProfile::distance(std::size_t i) const {
  const auto& e = entries.at(i);
  if (kind == ProfileKind::Exact) {
    return Scalar(mpz_class(static_cast<unsigned long>(e.value)));
  }
  Scalar q(mpz_class(static_cast<unsigned long>(total_subsets)) *
               mpz_class(static_cast<unsigned long>(e.value)),
           mpz_class(static_cast<unsigned long>(samples)));
  q.canonicalize();
  return q;
}

std::vector<Scalar> DistanceProfile::distances() const {
  std::vector<Scalar> out;
  out.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    out.push_back(distance(i));
  }
  return out;
}

DistanceProfile rho_profile(const Dataset& data, const Point& x, const EngineOptions& options) {
  check_query(data, x, "query");
  const std::size_t n = data.size();
  const std::size_t d = data.dim();
  const std::uint64_t total = binomial(n, d);
  const ApproxBlock block(data.points());
  const unsigned threads = worker_count(options.threads, total);

  std::vector<ProfileTally> tallies(threads);
  parallel_chunks(total, threads, [&](std::uint64_t begin, std::uint64_t end, unsigned w) {
    ProfileTally& t = tallies[w];
    t.entries.assign(n, DistanceCount{});
    if (begin == end) {
      return;
    }
    std::vector<std::size_t> combo(d);
    std::vector<const Point*> through(d);
    Hyperplane h;
    unrank_combination(begin, n, combo);
    for (std::uint64_t r = begin; r < end; ++r) {
      bind_subset(h, data, combo, through, options.predicates);
      classify_profile(h, combo, data, block, x, t);
      next_combination(combo, n);
    }
  });

  DistanceProfile profile = merge_profile(tallies, n);
  profile.kind = ProfileKind::Exact;
  profile.total_subsets = total;
  profile.samples = total;
  return profile;
}

DistanceProfile rho_profile_sampled(const Dataset& data, const Point& x, std::uint64_t m,
                                    std::uint64_t seed, const EngineOptions& options,
                                    SamplingScheme scheme) {
  check_query(data, x, "query");
  const std::size_t n = data.size();
  const std::size_t d = data.dim();
  const std::uint64_t total = binomial(n, d);
  const auto ranks = draw_subset_ranks(total, m, seed, scheme);
  const ApproxBlock block(data.points());
  const unsigned threads = worker_count(options.threads, m);

  std::vector<ProfileTally> tallies(threads);
  parallel_chunks(m, threads, [&](std::uint64_t begin, std::uint64_t end, unsigned w) {
    ProfileTally& t = tallies[w];
    t.entries.assign(n, DistanceCount{});
    std::vector<std::size_t> combo(d);
    std::vector<const Point*> through(d);
    Hyperplane h;
    for (std::uint64_t s = begin; s < end; ++s) {
      unrank_combination(ranks[s], n, combo);
      bind_subset(h, data, combo, through, options.predicates);
      classify_profile(h, combo, data, block, x, t);
    }
  });

  DistanceProfile profile = merge_profile(tallies, n);
  profile.kind = ProfileKind::Sampled;
  profile.total_subsets = total;
  profile.samples = m;
  profile.seed = seed;
  return profile;
}

}  // namespace aiknn
