#include "aiknn/dataset.hpp"

#include <cmath>
#include <string>

#include "aiknn/error.hpp"

namespace aiknn {

Dataset::Dataset(std::vector<Point> points, std::vector<double> responses)
    : points_(std::move(points)), responses_(std::move(responses)) {
  if (points_.empty()) {
    throw InvalidInput("dataset is empty");
  }
  dim_ = points_.front().dim();
  if (dim_ == 0) {
    throw InvalidInput("dataset dimension must be at least 1");
  }
  if (points_.size() != responses_.size()) {
    throw InvalidInput("dataset has " + std::to_string(points_.size()) + " points but " +
                       std::to_string(responses_.size()) + " responses");
  }
  if (points_.size() < dim_) {
    throw InvalidInput("dataset needs n >= d (n = " + std::to_string(points_.size()) +
                       ", d = " + std::to_string(dim_) + ")");
  }
  for (const Point& p : points_) {
    require_dim(p, dim_, "dataset point");
  }
  for (double y : responses_) {
    if (!std::isfinite(y)) {
      throw InvalidInput("dataset response is not finite");
    }
  }
}

Dataset Dataset::with_responses(std::vector<double> responses) const {
  return Dataset(points_, std::move(responses));
}

}  // namespace aiknn
