#include "aiknn/predicates.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "aiknn/error.hpp"
#include "aiknn/linalg.hpp"

namespace aiknn {
namespace {

// Laplace expansion grows as d!, past this the filter is not worth it.
constexpr std::size_t kMaxFilteredDim = 6;

constexpr double kUnitRoundoff = 0x1p-53;
// Absorbs the rounding committed while computing the bounds themselves.
constexpr double kGrow = 1.0 + 0x1p-48;
constexpr double kTiny = std::numeric_limits<double>::denorm_min();
// Covers rounding while accumulating a side() bound (at most 2d + 2 operations).
constexpr double kBoundSafety = 1.0 + 0x1p-44;

// A double together with a bound on its distance from the exact value.
struct Bounded {
  double value;
  double error;
};

Bounded add(Bounded a, Bounded b) {
  const double v = a.value + b.value;
  return {v, (a.error + b.error + std::fabs(v) * kUnitRoundoff) * kGrow + kTiny};
}

Bounded sub(Bounded a, Bounded b) {
  const double v = a.value - b.value;
  return {v, (a.error + b.error + std::fabs(v) * kUnitRoundoff) * kGrow + kTiny};
}

Bounded mul(Bounded a, Bounded b) {
  const double v = a.value * b.value;
  return {v, (std::fabs(a.value) * b.error + std::fabs(b.value) * a.error + a.error * b.error +
              std::fabs(v) * kUnitRoundoff) *
                     kGrow +
                 kTiny};
}

// Determinant of the square submatrix of `m` (row stride `stride`) given by
// the listed rows and columns, by cofactor expansion along the first row.
Bounded laplace(const Bounded* m, std::size_t stride, const std::size_t* rows,
                const std::size_t* cols, std::size_t n) {
  if (n == 1) {
    return m[rows[0] * stride + cols[0]];
  }
  if (n == 2) {
    const Bounded ad = mul(m[rows[0] * stride + cols[0]], m[rows[1] * stride + cols[1]]);
    const Bounded bc = mul(m[rows[0] * stride + cols[1]], m[rows[1] * stride + cols[0]]);
    return sub(ad, bc);
  }
  std::array<std::size_t, kMaxFilteredDim> sub_cols{};
  Bounded acc{0.0, 0.0};
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t w = 0;
    for (std::size_t c = 0; c < n; ++c) {
      if (c != k) {
        sub_cols[w++] = cols[c];
      }
    }
    const Bounded term =
        mul(m[rows[0] * stride + cols[k]], laplace(m, stride, rows + 1, sub_cols.data(), n - 1));
    acc = (k % 2 == 0) ? add(acc, term) : sub(acc, term);
  }
  return acc;
}

Sign sign_from(int s) {
  return s > 0 ? Sign::Positive : (s < 0 ? Sign::Negative : Sign::Zero);
}

Sign sign_from(double v) {
  return v > 0 ? Sign::Positive : (v < 0 ? Sign::Negative : Sign::Zero);
}

void validate_tuple(std::span<const Point* const> through) {
  if (through.empty()) {
    throw InvalidInput("a hyperplane needs d >= 1 defining points");
  }
  const std::size_t d = through.size();
  for (const Point* p : through) {
    require_dim(*p, d, "hyperplane point");
  }
}

}  // namespace

const char* to_string(Sign s) {
  switch (s) {
    case Sign::Negative:
      return "Negative";
    case Sign::Zero:
      return "Zero";
    case Sign::Positive:
      return "Positive";
  }
  return "?";
}

namespace {

// D > 0 fixes the dimension at compile time; D == 0 reads it from `d`.
template <std::size_t D, class Fallback>
void filtered_range(const ApproxBlock& block, std::size_t d, std::size_t lo, std::size_t hi,
                    const double* coef, const double* lin, double bound_const, bool float_only,
                    Sign* out, const Fallback& fallback) {
  const std::size_t dim = D > 0 ? D : d;
  for (std::size_t i = lo; i < hi; ++i) {
    const double* x = block.row(i);
    double v = coef[dim];
    double e = bound_const;
    for (std::size_t j = 0; j < dim; ++j) {
      v += x[j] * coef[j];
      e += std::fabs(x[j]) * lin[j];
    }
    if (float_only || std::fabs(v) > e * kBoundSafety) {
      out[i] = sign_from(v);
    } else {
      out[i] = fallback(i);
    }
  }
}

}  // namespace

ApproxBlock::ApproxBlock(std::span<const Point> points)
    : size_(points.size()), dim_(points.empty() ? 0 : points.front().dim()) {
  coords_.reserve(size_ * dim_);
  for (const Point& p : points) {
    require_dim(p, dim_, "block point");
    const auto a = p.approx();
    coords_.insert(coords_.end(), a.begin(), a.end());
  }
}

Hyperplane::Hyperplane(std::span<const Point* const> through, PredicateMode mode) {
  assign(through, mode);
}

void Hyperplane::assign(std::span<const Point* const> through, PredicateMode mode) {
  validate_tuple(through);
  through_.assign(through.begin(), through.end());
  mode_ = mode;
  exact_.clear();

  const std::size_t d = through_.size();
  filter_usable_ = false;
  if (mode_ == PredicateMode::FloatOnly && d > kMaxFilteredDim) {
    throw InvalidInput("float-only predicates support d <= " + std::to_string(kMaxFilteredDim));
  }
  if (mode_ != PredicateMode::ExactOnly && d <= kMaxFilteredDim) {
    compute_float_cofactors();
  }

  if (mode_ == PredicateMode::FloatOnly) {
    degenerate_ = true;
    for (std::size_t j = 0; j < d; ++j) {
      degenerate_ = degenerate_ && coef_[j] == 0.0;
    }
    return;
  }

  if (filter_usable_) {
    for (std::size_t j = 0; j < d; ++j) {
      if (std::fabs(coef_[j]) > coef_err_[j]) {
        degenerate_ = false;
        return;
      }
    }
  }
  const auto& exact = exact_coefficients();
  degenerate_ = true;
  for (std::size_t j = 0; j < d; ++j) {
    if (exact[j] != 0) {
      degenerate_ = false;
      break;
    }
  }
}

void Hyperplane::compute_float_cofactors() {
  const std::size_t d = through_.size();
  const std::size_t width = d + 1;
  std::array<Bounded, kMaxFilteredDim*(kMaxFilteredDim + 1)> m{};
  for (std::size_t r = 0; r < d; ++r) {
    const auto approx = through_[r]->approx();
    const auto err = through_[r]->approx_error();
    for (std::size_t c = 0; c < d; ++c) {
      m[r * width + c] = {approx[c], err[c]};
    }
    m[r * width + d] = {1.0, 0.0};
  }

  std::array<std::size_t, kMaxFilteredDim> rows{};
  for (std::size_t r = 0; r < d; ++r) {
    rows[r] = r;
  }
  std::array<std::size_t, kMaxFilteredDim> cols{};

  coef_.resize(width);
  coef_err_.resize(width);
  bool finite = true;
  for (std::size_t j = 0; j <= d; ++j) {
    std::size_t w = 0;
    for (std::size_t c = 0; c <= d; ++c) {
      if (c != j) {
        cols[w++] = c;
      }
    }
    const Bounded minor = laplace(m.data(), width, rows.data(), cols.data(), d);
    // Cofactor of entry (d, j) in the (d+1)x(d+1) matrix.
    const bool negate = (d + j) % 2 == 1;
    coef_[j] = negate ? -minor.value : minor.value;
    coef_err_[j] = minor.error;
    finite = finite && std::isfinite(minor.value) && std::isfinite(minor.error);
  }
  filter_usable_ = finite;
  if (!filter_usable_) {
    return;
  }

  // For a point whose coordinates carry error eps |x_j| + tiny, the computed
  // sum(x_j c_j) + c0 is within sum_j |x_j| A_j + B of the exact affine form:
  // A_j and B fold in the cofactor errors, the coordinate errors and the
  // (d + 1)-term dot product rounding gamma * sum |terms|.
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  const double gamma = static_cast<double>(d + 2) * kUnitRoundoff;
  side_bound_linear_.resize(d);
  double constant = coef_err_[d] + std::fabs(coef_[d]) * gamma +
                    static_cast<double>(2 * d + 2) * kTiny;
  for (std::size_t j = 0; j < d; ++j) {
    side_bound_linear_[j] = coef_err_[j] * (1.0 + kEps) + std::fabs(coef_[j]) * (kEps + gamma);
    constant += kTiny * (std::fabs(coef_[j]) + coef_err_[j]);
  }
  side_bound_const_ = constant;
  filter_usable_ = std::isfinite(constant);
}

const std::vector<Scalar>& Hyperplane::exact_coefficients() const {
  if (!exact_.empty()) {
    return exact_;
  }
  const std::size_t d = through_.size();
  exact_.resize(d + 1);
  for (std::size_t j = 0; j <= d; ++j) {
    Matrix minor(d);
    for (std::size_t r = 0; r < d; ++r) {
      std::size_t w = 0;
      for (std::size_t c = 0; c <= d; ++c) {
        if (c == j) {
          continue;
        }
        minor(r, w++) = (c == d) ? Scalar(1) : (*through_[r])[c];
      }
    }
    Scalar det = determinant(std::move(minor));
    exact_[j] = ((d + j) % 2 == 1) ? Scalar(-det) : det;
  }
  return exact_;
}

Sign Hyperplane::exact_side(const Point& p) const {
  const auto& c = exact_coefficients();
  const std::size_t d = through_.size();
  Scalar acc = c[d];
  for (std::size_t j = 0; j < d; ++j) {
    acc += p[j] * c[j];
  }
  return sign_from(sgn(acc));
}

Sign Hyperplane::side(const Point& p) const {
  const std::size_t d = through_.size();
  if (p.dim() != d) [[unlikely]] {
    require_dim(p, d, "query point");
  }
  if (degenerate_) {
    return Sign::Zero;
  }

  if (mode_ == PredicateMode::FloatOnly) {
    const auto approx = p.approx();
    double v = coef_[d];
    for (std::size_t j = 0; j < d; ++j) {
      v += approx[j] * coef_[j];
    }
    return sign_from(v);
  }

  if (filter_usable_) {
    const auto approx = p.approx();
    double v = coef_[d];
    double e = side_bound_const_;
    for (std::size_t j = 0; j < d; ++j) {
      v += approx[j] * coef_[j];
      e += std::fabs(approx[j]) * side_bound_linear_[j];
    }
    e *= kBoundSafety;
    if (std::fabs(v) > e && std::isfinite(e)) {
      return sign_from(v);
    }
  }
  return exact_side(p);
}

void Hyperplane::sides(const ApproxBlock& block, std::span<const Point> points,
                       std::span<const std::size_t> on_plane, std::span<Sign> out) const {
  const std::size_t d = through_.size();
  const std::size_t n = points.size();
  if (block.size() != n || out.size() != n || (n > 0 && block.dim() != d)) {
    throw InvalidInput("batch side evaluation: mismatched block, points and output");
  }
  if (degenerate_) {
    std::fill(out.begin(), out.end(), Sign::Zero);
    return;
  }
  // Segments between the ascending on-plane indices.
  std::size_t lo = 0;
  std::size_t next = 0;
  const auto for_segments = [&](auto&& body) {
    while (lo < n) {
      while (next < on_plane.size() && on_plane[next] < lo) ++next;
      const std::size_t hi = next < on_plane.size() ? std::min(on_plane[next], n) : n;
      body(lo, hi);
      if (hi < n) out[hi] = Sign::Zero;
      lo = hi + 1;
    }
  };
  if (mode_ == PredicateMode::ExactOnly || !filter_usable_) {
    for_segments([&](std::size_t a, std::size_t b) {
      for (std::size_t i = a; i < b; ++i) out[i] = side(points[i]);
    });
    return;
  }
  const bool float_only = mode_ == PredicateMode::FloatOnly;
  const auto fallback = [&](std::size_t i) { return exact_side(points[i]); };
  for_segments([&](std::size_t a, std::size_t b) {
    switch (d) {
      case 1:
        filtered_range<1>(block, d, a, b, coef_.data(), side_bound_linear_.data(),
                          side_bound_const_, float_only, out.data(), fallback);
        break;
      case 2:
        filtered_range<2>(block, d, a, b, coef_.data(), side_bound_linear_.data(),
                          side_bound_const_, float_only, out.data(), fallback);
        break;
      case 3:
        filtered_range<3>(block, d, a, b, coef_.data(), side_bound_linear_.data(),
                          side_bound_const_, float_only, out.data(), fallback);
        break;
      default:
        filtered_range<0>(block, d, a, b, coef_.data(), side_bound_linear_.data(),
                          side_bound_const_, float_only, out.data(), fallback);
    }
  });
}

CutTest Hyperplane::cut(const Point& a, const Point& b) const {
  CutTest result;
  if (degenerate_) {
    result.degenerate = true;
    result.dependent_subset = true;
    return result;
  }
  const Sign sa = side(a);
  const Sign sb = side(b);
  if (sa == Sign::Zero || sb == Sign::Zero) {
    result.degenerate = true;
    return result;
  }
  result.cut = sa != sb;
  return result;
}

namespace {

std::vector<const Point*> pointers(std::span<const Point> pts, std::size_t count) {
  std::vector<const Point*> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(&pts[i]);
  }
  return out;
}

}  // namespace

Sign orientation_sign(std::span<const Point> points, PredicateMode mode) {
  if (points.size() < 2) {
    throw InvalidInput("orientation needs d+1 points with d >= 1");
  }
  const std::size_t d = points.size() - 1;
  for (const Point& p : points) {
    require_dim(p, d, "orientation point");
  }
  const auto through = pointers(points, d);
  return Hyperplane(through, mode).side(points[d]);
}

Sign side_of_hyperplane(std::span<const Point> subset, const Point& p, PredicateMode mode) {
  const auto through = pointers(subset, subset.size());
  Hyperplane h(through, mode);
  return h.side(p);
}

CutTest segment_is_cut(std::span<const Point> subset, const Point& a, const Point& b,
                       PredicateMode mode) {
  const auto through = pointers(subset, subset.size());
  Hyperplane h(through, mode);
  require_dim(a, subset.size(), "segment endpoint");
  require_dim(b, subset.size(), "segment endpoint");
  return h.cut(a, b);
}

}  // namespace aiknn
