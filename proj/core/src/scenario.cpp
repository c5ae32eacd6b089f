#include "aiknn/scenario.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "aiknn/error.hpp"

namespace aiknn {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Point draw_point(const RegressionScenario& s, std::mt19937_64& rng) {
  std::vector<double> raw(s.dim);
  if (s.sampler == Sampler::UniformCube) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& v : raw) {
      v = u(rng);
    }
  } else {
    std::normal_distribution<double> g(0.0, 1.0);
    for (auto& v : raw) {
      v = g(rng);
    }
  }
  return snap_to_dyadic(raw);
}

}  // namespace

void RegressionScenario::validate() const {
  if (dim == 0) {
    throw InvalidInput("scenario dimension must be at least 1");
  }
  if (!(noise >= 0.0) || !std::isfinite(noise)) {
    throw InvalidInput("noise half-width must be finite and >= 0");
  }
  if (!std::isfinite(constant)) {
    throw InvalidInput("constant must be finite");
  }
  if (function == TrueFunction::Quadratic && sampler != Sampler::UniformCube) {
    throw InvalidInput("quadratic regression function is unbounded under the gaussian sampler");
  }
}

double RegressionScenario::regression(const Point& x) const {
  require_dim(x, dim, "scenario point");
  const auto v = x.approx();
  switch (function) {
    case TrueFunction::Constant:
      return constant;
    case TrueFunction::Quadratic:
      return dim == 1 ? v[0] * v[0] : v[0] * v[0] - v[1];
    case TrueFunction::Sine:
      return std::sin(2.0 * std::numbers::pi * v[0]);
  }
  return 0.0;
}

double RegressionScenario::response_bound() const {
  switch (function) {
    case TrueFunction::Constant:
      return std::fabs(constant) + noise;
    case TrueFunction::Quadratic:
    case TrueFunction::Sine:
      return 1.0 + noise;
  }
  return 0.0;
}

Sampler parse_sampler(std::string_view name) {
  if (name == "uniform") {
    return Sampler::UniformCube;
  }
  if (name == "gaussian") {
    return Sampler::Gaussian;
  }
  throw InvalidInput("unknown sampler '" + std::string(name) + "' (uniform|gaussian)");
}

TrueFunction parse_true_function(std::string_view name) {
  if (name == "constant") {
    return TrueFunction::Constant;
  }
  if (name == "quadratic") {
    return TrueFunction::Quadratic;
  }
  if (name == "sine") {
    return TrueFunction::Sine;
  }
  throw InvalidInput("unknown regression function '" + std::string(name) +
                     "' (constant|quadratic|sine)");
}

std::string to_string(Sampler s) { return s == Sampler::UniformCube ? "uniform" : "gaussian"; }

std::string to_string(TrueFunction f) {
  switch (f) {
    case TrueFunction::Constant:
      return "constant";
    case TrueFunction::Quadratic:
      return "quadratic";
    case TrueFunction::Sine:
      return "sine";
  }
  return "?";
}

Point snap_to_dyadic(std::span<const double> coords) {
  std::vector<Scalar> out;
  out.reserve(coords.size());
  for (double v : coords) {
    if (!std::isfinite(v)) {
      throw InvalidInput("cannot snap a non-finite coordinate");
    }
    // Scaling by powers of two is exact, so the result is k * 2^-53 exactly.
    const double snapped = std::ldexp(std::nearbyint(std::ldexp(v, 53)), -53);
    out.emplace_back(snapped);
  }
  return Point(std::move(out));
}

Dataset generate_sample(const RegressionScenario& scenario, std::size_t n) {
  scenario.validate();
  if (n < scenario.dim) {
    throw InvalidInput("sample size must satisfy n >= d");
  }
  std::mt19937_64 rng(scenario.seed);
  std::uniform_real_distribution<double> noise(-scenario.noise, scenario.noise);
  std::vector<Point> points;
  std::vector<double> responses;
  points.reserve(n);
  responses.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Point x = draw_point(scenario, rng);
    double y = scenario.regression(x);
    if (scenario.noise > 0.0) {
      y += noise(rng);
    }
    points.push_back(std::move(x));
    responses.push_back(y);
  }
  return Dataset(std::move(points), std::move(responses));
}

std::vector<Point> generate_queries(const RegressionScenario& scenario, std::size_t count,
                                    std::uint64_t seed) {
  scenario.validate();
  std::mt19937_64 rng(seed);
  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(draw_point(scenario, rng));
  }
  return out;
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> salts) {
  std::uint64_t h = splitmix64(base);
  for (std::uint64_t s : salts) {
    h = splitmix64(h ^ splitmix64(s + 0x632be59bd9b4e019ULL));
  }
  return h;
}

}  // namespace aiknn
