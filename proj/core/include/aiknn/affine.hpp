#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "aiknn/dataset.hpp"
#include "aiknn/linalg.hpp"
#include "aiknn/point.hpp"
#include "aiknn/scalar.hpp"

namespace aiknn {

/// x -> A x + b with A nonsingular (checked exactly on construction).
class AffineMap {
 public:
  AffineMap(Matrix linear, std::vector<Scalar> offset);

  static AffineMap identity(std::size_t d);
  static AffineMap diagonal(std::vector<Scalar> scales);

  std::size_t dim() const { return linear_.size(); }
  const Matrix& linear() const { return linear_; }
  std::span<const Scalar> offset() const { return offset_; }
  const Scalar& determinant() const { return det_; }

  Point apply(const Point& p) const;
  std::vector<Point> apply(std::span<const Point> points) const;
  /// Transforms the points; responses are carried over unchanged.
  Dataset apply(const Dataset& data) const;

  AffineMap inverse() const;
  /// The map x -> next(this(x)).
  AffineMap then(const AffineMap& next) const;

 private:
  Matrix linear_;
  std::vector<Scalar> offset_;
  Scalar det_;
};

struct CoefficientRange {
  long lo = -5;
  long hi = 5;
};

/// Integer-entry map with A drawn uniformly from `linear` and b from
/// `offset`, redrawn until det(A) != 0. Deterministic per seed.
AffineMap random_affine(std::size_t d, std::uint64_t seed, CoefficientRange linear = {-5, 5},
                        CoefficientRange offset = {-10, 10});

}  // namespace aiknn
