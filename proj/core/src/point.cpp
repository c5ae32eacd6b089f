#include "aiknn/point.hpp"

#include <cmath>
#include <limits>

#include "aiknn/error.hpp"

namespace aiknn {

Point::Point(std::vector<Scalar> coords) : coords_(std::move(coords)) {
  refresh_approximation();
}

Point::Point(std::initializer_list<Scalar> coords) : coords_(coords) {
  refresh_approximation();
}

void Point::refresh_approximation() {
  // get_d truncates, so the relative error is below one ulp (2^-52).
  constexpr double kRel = std::numeric_limits<double>::epsilon();
  constexpr double kTiny = std::numeric_limits<double>::denorm_min();
  approx_.resize(coords_.size());
  approx_error_.resize(coords_.size());
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    const double v = coords_[i].get_d();
    approx_[i] = v;
    approx_error_[i] = std::fabs(v) * kRel + kTiny;
  }
}

Point parse_point(std::string_view text) {
  std::vector<Scalar> coords;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    coords.push_back(parse_scalar(text.substr(start, comma - start)));
    if (comma == std::string_view::npos) {
      break;
    }
    start = comma + 1;
  }
  return Point(std::move(coords));
}

std::string to_string(const Point& p) {
  std::string out = "(";
  for (std::size_t i = 0; i < p.dim(); ++i) {
    if (i > 0) {
      out += ", ";
    }
    out += to_string(p[i]);
  }
  out += ")";
  return out;
}

void require_dim(const Point& p, std::size_t dim, std::string_view what) {
  if (p.dim() != dim) {
    throw InvalidInput("dimension mismatch: " + std::string(what) + " has dimension " +
                       std::to_string(p.dim()) + ", expected " + std::to_string(dim));
  }
}

}  // namespace aiknn
