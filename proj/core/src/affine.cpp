#include "aiknn/affine.hpp"

#include <random>
#include <string>

#include "aiknn/error.hpp"

namespace aiknn {

AffineMap::AffineMap(Matrix linear, std::vector<Scalar> offset)
    : linear_(std::move(linear)), offset_(std::move(offset)) {
  if (linear_.size() == 0) {
    throw InvalidInput("affine map dimension must be at least 1");
  }
  if (offset_.size() != linear_.size()) {
    throw InvalidInput("affine offset length does not match the matrix size");
  }
  det_ = aiknn::determinant(linear_);
  if (det_ == 0) {
    throw InvalidInput("affine map is singular");
  }
}

AffineMap AffineMap::identity(std::size_t d) {
  return AffineMap(Matrix::identity(d), std::vector<Scalar>(d));
}

AffineMap AffineMap::diagonal(std::vector<Scalar> scales) {
  const std::size_t d = scales.size();
  Matrix a(d);
  for (std::size_t i = 0; i < d; ++i) {
    a(i, i) = scales[i];
  }
  return AffineMap(std::move(a), std::vector<Scalar>(d));
}

Point AffineMap::apply(const Point& p) const {
  require_dim(p, dim(), "point under affine map");
  std::vector<Scalar> out(dim());
  for (std::size_t r = 0; r < dim(); ++r) {
    Scalar acc = offset_[r];
    for (std::size_t c = 0; c < dim(); ++c) {
      acc += linear_(r, c) * p[c];
    }
    out[r] = std::move(acc);
  }
  return Point(std::move(out));
}

std::vector<Point> AffineMap::apply(std::span<const Point> points) const {
  std::vector<Point> out;
  out.reserve(points.size());
  for (const Point& p : points) {
    out.push_back(apply(p));
  }
  return out;
}

Dataset AffineMap::apply(const Dataset& data) const {
  auto responses = data.responses();
  return Dataset(apply(data.points()), std::vector<double>(responses.begin(), responses.end()));
}

AffineMap AffineMap::inverse() const {
  auto inv = aiknn::inverse(linear_);
  if (!inv) {
    throw InvariantViolation("nonsingular affine map has no inverse");
  }
  // x = A^-1 (y - b) = A^-1 y - A^-1 b
  std::vector<Scalar> offset(dim());
  for (std::size_t r = 0; r < dim(); ++r) {
    Scalar acc = 0;
    for (std::size_t c = 0; c < dim(); ++c) {
      acc -= (*inv)(r, c) * offset_[c];
    }
    offset[r] = std::move(acc);
  }
  return AffineMap(std::move(*inv), std::move(offset));
}

AffineMap AffineMap::then(const AffineMap& next) const {
  if (next.dim() != dim()) {
    throw InvalidInput("cannot compose affine maps of different dimension");
  }
  Matrix a = next.linear_ * linear_;
  std::vector<Scalar> b(dim());
  for (std::size_t r = 0; r < dim(); ++r) {
    Scalar acc = next.offset_[r];
    for (std::size_t c = 0; c < dim(); ++c) {
      acc += next.linear_(r, c) * offset_[c];
    }
    b[r] = std::move(acc);
  }
  return AffineMap(std::move(a), std::move(b));
}

AffineMap random_affine(std::size_t d, std::uint64_t seed, CoefficientRange linear,
                        CoefficientRange offset) {
  if (d == 0) {
    throw InvalidInput("affine map dimension must be at least 1");
  }
  if (linear.lo > linear.hi || offset.lo > offset.hi) {
    throw InvalidInput("empty coefficient range");
  }
  if (linear.lo == 0 && linear.hi == 0) {
    throw InvalidInput("linear coefficient range contains only zero");
  }
  if (linear.lo == linear.hi && d > 1) {
    throw InvalidInput("a constant coefficient range cannot give a nonsingular matrix for d > 1");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> pick_a(linear.lo, linear.hi);
  std::uniform_int_distribution<long> pick_b(offset.lo, offset.hi);
  constexpr int kMaxAttempts = 10000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Matrix a(d);
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) {
        a(r, c) = pick_a(rng);
      }
    }
    std::vector<Scalar> b(d);
    for (auto& v : b) {
      v = pick_b(rng);
    }
    if (aiknn::determinant(a) != 0) {
      return AffineMap(std::move(a), std::move(b));
    }
  }
  throw InvalidInput("no nonsingular matrix found in the coefficient range after " +
                     std::to_string(kMaxAttempts) + " draws");
}

}  // namespace aiknn
