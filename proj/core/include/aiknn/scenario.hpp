#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aiknn/dataset.hpp"
#include "aiknn/point.hpp"

namespace aiknn {

enum class Sampler { UniformCube, Gaussian };

enum class TrueFunction {
  Constant,   // r(x) = c
  Quadratic,  // r(x) = x1^2 - x2 (x1^2 when d = 1); uniform cube only
  Sine,       // r(x) = sin(2 pi x1)
};

/// A synthetic regression model: X ~ sampler, Y = r(X) + U[-noise, noise].
struct RegressionScenario {
  std::size_t dim = 2;
  Sampler sampler = Sampler::UniformCube;
  TrueFunction function = TrueFunction::Quadratic;
  double constant = 0.0;
  double noise = 0.0;
  std::uint64_t seed = 0;

  /// Throws InvalidInput for unsupported combinations (e.g. an unbounded r).
  void validate() const;
  double regression(const Point& x) const;
  /// Declared bound on |Y|.
  double response_bound() const;
};

Sampler parse_sampler(std::string_view name);
TrueFunction parse_true_function(std::string_view name);
std::string to_string(Sampler s);
std::string to_string(TrueFunction f);

/// Rounds each coordinate to the nearest multiple of 2^-53 and stores it exactly.
Point snap_to_dyadic(std::span<const double> coords);

/// n i.i.d. draws from the scenario, seeded by scenario.seed.
Dataset generate_sample(const RegressionScenario& scenario, std::size_t n);

/// `count` i.i.d. draws of X from one stream seeded by `seed`; a longer list
/// extends a shorter one drawn with the same seed.
std::vector<Point> generate_queries(const RegressionScenario& scenario, std::size_t count,
                                    std::uint64_t seed);

/// Mixes a base seed with salts into an independent stream seed.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> salts);

}  // namespace aiknn
