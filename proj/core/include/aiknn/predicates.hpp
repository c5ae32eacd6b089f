#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "aiknn/point.hpp"
#include "aiknn/scalar.hpp"

namespace aiknn {

enum class Sign : signed char { Negative = -1, Zero = 0, Positive = 1 };

constexpr Sign operator-(Sign s) { return static_cast<Sign>(-static_cast<int>(s)); }
constexpr Sign operator*(Sign a, Sign b) {
  return static_cast<Sign>(static_cast<int>(a) * static_cast<int>(b));
}

const char* to_string(Sign s);

/// How signs are decided.
///   Filtered   - double evaluation with a forward error bound, exact fallback.
///   ExactOnly  - rational arithmetic for every sign.
///   FloatOnly  - unchecked double evaluation. Unsound; exists so tests can
///                demonstrate that the invariance checks catch rounding bugs.
enum class PredicateMode { Filtered, ExactOnly, FloatOnly };

struct CutTest {
  bool cut = false;
  /// Either the subset is affinely dependent or an endpoint lies on the
  /// hyperplane. A degenerate test never reports a cut.
  bool degenerate = false;
  bool dependent_subset = false;
};

/// Double approximations of a point set in one row-major block, for batch
/// sign evaluation.
class ApproxBlock {
 public:
  ApproxBlock() = default;
  explicit ApproxBlock(std::span<const Point> points);

  std::size_t size() const { return size_; }
  std::size_t dim() const { return dim_; }
  const double* row(std::size_t i) const { return coords_.data() + i * dim_; }

 private:
  std::size_t size_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

/// The oriented hyperplane through d points of R^d.
///
/// side(p) is the sign of the (d+1)x(d+1) determinant whose rows are
/// (s_1, 1), ..., (s_d, 1), (p, 1). Expanding along the last row turns that
/// determinant into an affine form c . p + c0 whose cofactors depend only on
/// the d defining points, so they are computed once and reused for every p.
///
/// The object keeps pointers to the defining points (exact cofactors are
/// built lazily from them), so those points must outlive it. Not safe to
/// share between threads; give each worker its own instance.
class Hyperplane {
 public:
  Hyperplane() = default;
  explicit Hyperplane(std::span<const Point* const> through,
                      PredicateMode mode = PredicateMode::Filtered);

  /// Rebinds to a new point tuple, reusing internal buffers.
  void assign(std::span<const Point* const> through, PredicateMode mode = PredicateMode::Filtered);

  std::size_t dim() const { return through_.size(); }

  /// True when the defining points are affinely dependent (no unique
  /// hyperplane). Then side() is Zero everywhere.
  bool degenerate() const { return degenerate_; }

  Sign side(const Point& p) const;

  /// out[i] = side(points[i]). `block` must hold the approximations of
  /// `points`; only signs the filter cannot certify touch the exact values.
  /// Indices in `on_plane` (ascending) are known to lie on the hyperplane and
  /// get Sign::Zero without evaluation.
  void sides(const ApproxBlock& block, std::span<const Point> points,
             std::span<const std::size_t> on_plane, std::span<Sign> out) const;

  CutTest cut(const Point& a, const Point& b) const;

  /// Exact affine-form coefficients (c_1..c_d, c0).
  const std::vector<Scalar>& exact_coefficients() const;

 private:
  Sign exact_side(const Point& p) const;
  void compute_float_cofactors();

  std::vector<const Point*> through_;
  PredicateMode mode_ = PredicateMode::Filtered;
  std::vector<double> coef_;
  std::vector<double> coef_err_;
  std::vector<double> side_bound_linear_;
  double side_bound_const_ = 0.0;
  bool filter_usable_ = false;
  bool degenerate_ = false;
  mutable std::vector<Scalar> exact_;
};

/// Sign of det[(p_i, 1)] over d+1 points of R^d. Zero iff affinely dependent.
Sign orientation_sign(std::span<const Point> points, PredicateMode mode = PredicateMode::Filtered);

/// orientation_sign(subset ++ [p]).
Sign side_of_hyperplane(std::span<const Point> subset, const Point& p,
                        PredicateMode mode = PredicateMode::Filtered);

/// Strict-separation test of the segment (a, b) against the hyperplane
/// through `subset`. Touching endpoints and dependent subsets never cut.
CutTest segment_is_cut(std::span<const Point> subset, const Point& a, const Point& b,
                       PredicateMode mode = PredicateMode::Filtered);

}  // namespace aiknn
