#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "aiknn/point.hpp"

namespace aiknn {

/// An immutable regression sample (X_1, Y_1), ..., (X_n, Y_n) in R^d x R.
/// Requires d >= 1, n >= d, equal lengths, and finite responses.
class Dataset {
 public:
  Dataset(std::vector<Point> points, std::vector<double> responses);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return points_.size(); }

  std::span<const Point> points() const { return points_; }
  std::span<const double> responses() const { return responses_; }
  const Point& point(std::size_t i) const { return points_[i]; }
  double response(std::size_t i) const { return responses_[i]; }

  /// Same points, different responses.
  Dataset with_responses(std::vector<double> responses) const;

 private:
  std::size_t dim_ = 0;
  std::vector<Point> points_;
  std::vector<double> responses_;
};

}  // namespace aiknn
