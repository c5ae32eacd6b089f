#include <benchmark/benchmark.h>

#include "aiknn/distance.hpp"
#include "aiknn/estimator.hpp"
#include "aiknn/predicates.hpp"
#include "aiknn/scenario.hpp"

namespace {

using namespace aiknn;

struct Instance {
  Dataset data;
  Point query;
};

Instance make_instance(std::size_t n, std::size_t d) {
  RegressionScenario s;
  s.dim = d;
  s.function = TrueFunction::Sine;
  s.seed = 17;
  Dataset data = generate_sample(s, n);
  Point q = generate_queries(s, 1, 18)[0];
  return {std::move(data), std::move(q)};
}

void BM_ExactProfile(benchmark::State& state) {
  const auto inst = make_instance(static_cast<std::size_t>(state.range(0)),
                                  static_cast<std::size_t>(state.range(1)));
  std::uint64_t signs = 0;
  for (auto _ : state) {
    const DistanceProfile p = rho_profile(inst.data, inst.query);
    signs += p.sign_evaluations;
    benchmark::DoNotOptimize(p.entries.data());
  }
  state.counters["signs/s"] = benchmark::Counter(static_cast<double>(signs), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_ExactProfile)
    ->Args({50, 2})->Args({100, 2})->Args({200, 2})->Args({30, 3})->Args({60, 3})
    ->Unit(benchmark::kMillisecond);

void BM_ExactProfileExactOnly(benchmark::State& state) {
  const auto inst = make_instance(static_cast<std::size_t>(state.range(0)), 2);
  const EngineOptions opts{PredicateMode::ExactOnly, 1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(rho_profile(inst.data, inst.query, opts).entries.data());
  }
}
BENCHMARK(BM_ExactProfileExactOnly)->Arg(30)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_SampledProfile(benchmark::State& state) {
  const auto inst = make_instance(static_cast<std::size_t>(state.range(0)), 2);
  const auto m = static_cast<std::uint64_t>(state.range(1));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rho_profile_sampled(inst.data, inst.query, m, ++seed).entries.data());
  }
}
BENCHMARK(BM_SampledProfile)
    ->Args({200, 2000})->Args({400, 2000})->Args({400, 20000})
    ->Unit(benchmark::kMillisecond);

void BM_OrientationFiltered(benchmark::State& state) {
  const auto inst = make_instance(64, 2);
  const Point* through[2] = {&inst.data.point(0), &inst.data.point(1)};
  const Hyperplane h(through, PredicateMode::Filtered);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(h.side(inst.data.point(2 + (i++ % 62))));
  }
}
BENCHMARK(BM_OrientationFiltered);

void BM_Predict(benchmark::State& state) {
  const auto inst = make_instance(static_cast<std::size_t>(state.range(0)), 2);
  const EstimatorConfig config{10, Metric::exact(), {}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(predict(inst.data, inst.query, config).value);
  }
}
BENCHMARK(BM_Predict)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
