#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aiknn/scalar.hpp"

namespace aiknn {

/// A point of R^d with exact rational coordinates.
///
/// Alongside the exact coordinates the point keeps a double approximation of
/// each coordinate and a bound on its absolute error; the predicate filter
/// works on those and falls back to the exact values when it cannot decide.
class Point {
 public:
  Point() = default;
  explicit Point(std::vector<Scalar> coords);
  Point(std::initializer_list<Scalar> coords);

  std::size_t dim() const { return coords_.size(); }
  const Scalar& operator[](std::size_t i) const { return coords_[i]; }
  std::span<const Scalar> coords() const { return coords_; }

  std::span<const double> approx() const { return approx_; }
  std::span<const double> approx_error() const { return approx_error_; }

  friend bool operator==(const Point& a, const Point& b) { return a.coords_ == b.coords_; }

 private:
  void refresh_approximation();

  std::vector<Scalar> coords_;
  std::vector<double> approx_;
  std::vector<double> approx_error_;
};

/// Parses "x1,x2,...,xd" with exact decimal coordinates.
Point parse_point(std::string_view text);

std::string to_string(const Point& p);

/// Throws InvalidInput unless p.dim() == dim.
void require_dim(const Point& p, std::size_t dim, std::string_view what);

}  // namespace aiknn
