#include "aiknn/linalg.hpp"

#include <utility>

#include "aiknn/error.hpp"

namespace aiknn {

Matrix::Matrix(std::size_t n, std::vector<Scalar> row_major)
    : n_(n), data_(std::move(row_major)) {
  if (data_.size() != n * n) {
    throw InvalidInput("matrix entry count does not match its size");
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = 1;
  }
  return m;
}

Scalar determinant(Matrix m) {
  const std::size_t n = m.size();
  Scalar det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m(pivot, col) == 0) {
      ++pivot;
    }
    if (pivot == n) {
      return 0;
    }
    if (pivot != col) {
      for (std::size_t c = col; c < n; ++c) {
        std::swap(m(pivot, c), m(col, c));
      }
      det = -det;
    }
    det *= m(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m(r, col) == 0) {
        continue;
      }
      const Scalar factor = m(r, col) / m(col, col);
      for (std::size_t c = col; c < n; ++c) {
        m(r, c) -= factor * m(col, c);
      }
    }
  }
  return det;
}

std::optional<Matrix> inverse(const Matrix& input) {
  const std::size_t n = input.size();
  Matrix m = input;
  Matrix inv = Matrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m(pivot, col) == 0) {
      ++pivot;
    }
    if (pivot == n) {
      return std::nullopt;
    }
    for (std::size_t c = 0; c < n; ++c) {
      std::swap(m(pivot, c), m(col, c));
      std::swap(inv(pivot, c), inv(col, c));
    }
    const Scalar scale = 1 / m(col, col);
    for (std::size_t c = 0; c < n; ++c) {
      m(col, c) *= scale;
      inv(col, c) *= scale;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m(r, col) == 0) {
        continue;
      }
      const Scalar factor = m(r, col);
      for (std::size_t c = 0; c < n; ++c) {
        m(r, c) -= factor * m(col, c);
        inv(r, c) -= factor * inv(col, c);
      }
    }
  }
  return inv;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.size() != b.size()) {
    throw InvalidInput("matrix size mismatch");
  }
  const std::size_t n = a.size();
  Matrix out(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      Scalar acc = 0;
      for (std::size_t k = 0; k < n; ++k) {
        acc += a(r, k) * b(k, c);
      }
      out(r, c) = acc;
    }
  }
  return out;
}

}  // namespace aiknn
