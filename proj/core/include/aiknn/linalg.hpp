#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "aiknn/scalar.hpp"

namespace aiknn {

/// Dense row-major square matrix of exact rationals.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n) : n_(n), data_(n * n) {}
  Matrix(std::size_t n, std::vector<Scalar> row_major);

  static Matrix identity(std::size_t n);

  std::size_t size() const { return n_; }
  Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
  const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Scalar> data_;
};

/// Determinant by Gaussian elimination with exact arithmetic.
Scalar determinant(Matrix m);

/// Exact inverse by Gauss-Jordan elimination; nullopt when singular.
std::optional<Matrix> inverse(const Matrix& m);

Matrix operator*(const Matrix& a, const Matrix& b);

}  // namespace aiknn
