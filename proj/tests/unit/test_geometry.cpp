#include <gtest/gtest.h>

#include <random>

#include "aiknn/affine.hpp"
#include "aiknn/error.hpp"
#include "aiknn/predicates.hpp"
#include "oracles.hpp"

namespace aiknn {
namespace {

constexpr PredicateMode kModes[] = {PredicateMode::Filtered, PredicateMode::ExactOnly};

Sign to_sign(int s) { return s > 0 ? Sign::Positive : (s < 0 ? Sign::Negative : Sign::Zero); }

TEST(Scalar, ParsesDecimalsExactly) {
  EXPECT_EQ(parse_scalar("0.1"), Scalar(1, 10));
  EXPECT_EQ(parse_scalar("-12.50"), Scalar(-25, 2));
  EXPECT_EQ(parse_scalar("+3"), Scalar(3));
  EXPECT_EQ(parse_scalar(".5"), Scalar(1, 2));
  EXPECT_EQ(parse_scalar("5."), Scalar(5));
  EXPECT_EQ(parse_scalar("1.5e3"), Scalar(1500));
  EXPECT_EQ(parse_scalar("25E-2"), Scalar(1, 4));
  EXPECT_EQ(parse_scalar(" 7/21 "), Scalar(1, 3));
  EXPECT_EQ(parse_scalar("-4/6"), Scalar(-2, 3));
  EXPECT_EQ(to_string(parse_scalar("0.75")), "3/4");
}

TEST(Scalar, RejectsMalformedLiterals) {
  for (const char* bad : {"", "abc", "1.2.3", "1e", "--1", "1/0", "0x10", "nan", "1,5", "."}) {
    EXPECT_THROW(parse_scalar(bad), InvalidInput) << bad;
  }
}

TEST(Scalar, DoublesConvertExactly) {
  EXPECT_EQ(scalar_from_double(0.1), Scalar(0.1));
  EXPECT_NE(scalar_from_double(0.1), Scalar(1, 10));
  EXPECT_THROW(scalar_from_double(std::numeric_limits<double>::infinity()), InvalidInput);
}

TEST(Point, ParsesCommaSeparatedCoordinates) {
  const Point p = parse_point("0.5,-1,3/4");
  ASSERT_EQ(p.dim(), 3u);
  EXPECT_EQ(p[0], Scalar(1, 2));
  EXPECT_EQ(p[2], Scalar(3, 4));
  EXPECT_THROW(parse_point("1,,2"), InvalidInput);
}

TEST(Orientation, CanonicalSimplexIsPositive) {
  const std::vector<Point> pts{{0, 0}, {1, 0}, {0, 1}};
  for (auto mode : kModes) {
    EXPECT_EQ(orientation_sign(pts, mode), Sign::Positive);
  }
}

TEST(Orientation, CollinearPointsAreZero) {
  const std::vector<Point> pts{{0, 0}, {1, 1}, {2, 2}};
  for (auto mode : kModes) {
    EXPECT_EQ(orientation_sign(pts, mode), Sign::Zero);
  }
}

TEST(Orientation, OneDimensionalOrdering) {
  // det [[a, 1], [b, 1]] = a - b
  EXPECT_EQ(orientation_sign(std::vector<Point>{{0}, {1}}), Sign::Negative);
  EXPECT_EQ(orientation_sign(std::vector<Point>{{3}, {1}}), Sign::Positive);
  EXPECT_EQ(orientation_sign(std::vector<Point>{{1}, {1}}), Sign::Zero);
}

TEST(Orientation, RejectsDimensionMismatch) {
  EXPECT_THROW(orientation_sign(std::vector<Point>{{0, 0}, {1, 0}}), InvalidInput);
  EXPECT_THROW(orientation_sign(std::vector<Point>{{0, 0}, {1, 0}, {0, 1, 2}}), InvalidInput);
  EXPECT_THROW(orientation_sign(std::vector<Point>{{0}}), InvalidInput);
}

TEST(Orientation, RandomThreeDimensionalMatchesCofactorOracle) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 500; ++t) {
    std::vector<Point> pts;
    for (int i = 0; i < 4; ++i) {
      pts.push_back(oracle::random_int_point(rng, 3, -10, 10));
    }
    const Sign expected = to_sign(oracle::orientation(pts));
    for (auto mode : kModes) {
      ASSERT_EQ(orientation_sign(pts, mode), expected);
    }
  }
}

TEST(Orientation, ExactOnLargeIntegerCoordinates) {
  // Property: >= 10^4 random instances with coordinates in [-10^6, 10^6].
  std::mt19937_64 rng(12);
  std::size_t zero_cases = 0;
  for (int t = 0; t < 12000; ++t) {
    const std::size_t d = 2 + t % 2;
    std::vector<Point> pts;
    for (std::size_t i = 0; i <= d; ++i) {
      pts.push_back(oracle::random_int_point(rng, d, -1000000, 1000000));
    }
    if (t % 5 == 0) {
      // Force an affinely dependent tuple: last point on the span of the others.
      std::vector<Scalar> c(d);
      for (std::size_t j = 0; j < d; ++j) {
        c[j] = pts[0][j] + 3 * (pts[1][j] - pts[0][j]);
      }
      pts[d] = Point(std::move(c));
    }
    const Sign expected = to_sign(oracle::orientation(pts));
    zero_cases += expected == Sign::Zero;
    ASSERT_EQ(orientation_sign(pts, PredicateMode::Filtered), expected) << "instance " << t;
  }
  EXPECT_GE(zero_cases, 2400u);
}

TEST(Orientation, SwappingTwoPointsNegates) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 300; ++t) {
    const std::size_t d = 1 + t % 4;
    std::vector<Point> pts;
    for (std::size_t i = 0; i <= d; ++i) {
      pts.push_back(oracle::random_int_point(rng, d, -5, 5));
    }
    const Sign s = orientation_sign(pts);
    std::uniform_int_distribution<std::size_t> pick(0, d);
    std::size_t i = pick(rng);
    std::size_t j = pick(rng);
    if (i == j) {
      j = (i + 1) % (d + 1);
    }
    std::swap(pts[i], pts[j]);
    ASSERT_EQ(orientation_sign(pts), -s);
  }
}

TEST(Orientation, AffineMapScalesSignByDeterminant) {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 200; ++t) {
    const std::size_t d = 1 + t % 3;
    std::vector<Point> pts;
    for (std::size_t i = 0; i <= d; ++i) {
      pts.push_back(oracle::random_int_point(rng, d, -20, 20));
    }
    const AffineMap map = random_affine(d, 1000 + t);
    const Sign det_sign = sgn(map.determinant()) > 0 ? Sign::Positive : Sign::Negative;
    ASSERT_EQ(orientation_sign(map.apply(pts)), det_sign * orientation_sign(pts));
  }
}

TEST(SideOfHyperplane, ReflectionFlipsSign) {
  const std::vector<Point> line{{0, 0}, {1, 0}};
  EXPECT_EQ(side_of_hyperplane(line, Point{0, 1}), Sign::Positive);
  EXPECT_EQ(side_of_hyperplane(line, Point{0, -1}), Sign::Negative);
  EXPECT_EQ(side_of_hyperplane(line, Point{5, 0}), Sign::Zero);
}

TEST(SideOfHyperplane, DependentSubsetGivesZero) {
  const std::vector<Point> plane{{0, 0, 0}, {1, 1, 1}, {2, 2, 2}};
  EXPECT_EQ(side_of_hyperplane(plane, Point{1, 0, 0}), Sign::Zero);
  EXPECT_THROW(side_of_hyperplane(plane, Point{1, 0}), InvalidInput);
}

TEST(SideOfHyperplane, RandomMatchesDeterminantOracle) {
  std::mt19937_64 rng(15);
  for (int t = 0; t < 500; ++t) {
    std::vector<Point> subset;
    for (int i = 0; i < 3; ++i) {
      subset.push_back(oracle::random_int_point(rng, 3, -10, 10));
    }
    const Point p = oracle::random_int_point(rng, 3, -10, 10);
    auto all = subset;
    all.push_back(p);
    ASSERT_EQ(side_of_hyperplane(subset, p), to_sign(oracle::orientation(all)));
  }
}

TEST(SegmentIsCut, OppositeSidesCut) {
  const std::vector<Point> line{{0, 0}, {1, 0}};
  const CutTest t = segment_is_cut(line, Point{0.5, 1}, Point{0.5, -1});
  EXPECT_TRUE(t.cut);
  EXPECT_FALSE(t.degenerate);
}

TEST(SegmentIsCut, SameSideDoesNotCut) {
  const std::vector<Point> line{{0, 0}, {1, 0}};
  const CutTest t = segment_is_cut(line, Point{0.5, 1}, Point{0.7, 2});
  EXPECT_FALSE(t.cut);
  EXPECT_FALSE(t.degenerate);
}

TEST(SegmentIsCut, TouchingEndpointIsDegenerate) {
  const std::vector<Point> line{{0, 0}, {2, 0}};
  const CutTest t = segment_is_cut(line, Point{1, 0}, Point{1, 1});
  EXPECT_FALSE(t.cut);
  EXPECT_TRUE(t.degenerate);
  EXPECT_FALSE(t.dependent_subset);
}

TEST(SegmentIsCut, DependentSubsetIsDegenerate) {
  const std::vector<Point> same{{1, 1}, {1, 1}};
  const CutTest t = segment_is_cut(same, Point{0, 0}, Point{5, 3});
  EXPECT_FALSE(t.cut);
  EXPECT_TRUE(t.degenerate);
  EXPECT_TRUE(t.dependent_subset);
}

TEST(SegmentIsCut, InvariantUnderAffineMaps) {
  std::mt19937_64 rng(16);
  for (int t = 0; t < 300; ++t) {
    const std::size_t d = 1 + t % 3;
    std::vector<Point> subset;
    for (std::size_t i = 0; i < d; ++i) {
      subset.push_back(oracle::random_int_point(rng, d, -4, 4));
    }
    const Point a = oracle::random_int_point(rng, d, -4, 4);
    const Point b = oracle::random_int_point(rng, d, -4, 4);
    const AffineMap map = random_affine(d, 2000 + t);
    const CutTest before = segment_is_cut(subset, a, b);
    const CutTest after = segment_is_cut(map.apply(subset), map.apply(a), map.apply(b));
    ASSERT_EQ(before.cut, after.cut);
    ASSERT_EQ(before.degenerate, after.degenerate);
    ASSERT_EQ(before.dependent_subset, after.dependent_subset);
  }
}

// Inputs built to defeat naive doubles: exactly dependent tuples with
// non-dyadic decimals, nearly dependent tuples, and huge magnitudes.
std::vector<std::vector<Point>> adversarial_tuples(std::mt19937_64& rng) {
  std::vector<std::vector<Point>> out;
  std::uniform_int_distribution<long> u(-50, 50);
  for (int t = 0; t < 400; ++t) {
    const Scalar x0(u(rng), 10);
    const Scalar y0(u(rng), 10);
    const Scalar dx(u(rng), 7);
    const Scalar dy(u(rng), 3);
    const Scalar s(u(rng), 13);
    const Scalar r(u(rng), 11);
    std::vector<Point> tuple{{x0, y0}, {x0 + s * dx, y0 + s * dy}, {x0 + r * dx, y0 + r * dy}};
    if (t % 3 == 1) {
      tuple[2] = Point{tuple[2][0], tuple[2][1] + Scalar(1, 1000000000000L)};
    }
    if (t % 3 == 2) {
      const Scalar big("1000000000000000000000");
      tuple[1] = Point{tuple[1][0] * big, tuple[1][1] * big};
      tuple[2] = Point{tuple[2][0] * big, tuple[2][1] * big + 1};
    }
    out.push_back(std::move(tuple));
  }
  return out;
}

TEST(FilterSoundness, FilteredEqualsExactOnAdversarialInputs) {
  std::mt19937_64 rng(17);
  std::size_t zeros = 0;
  for (const auto& tuple : adversarial_tuples(rng)) {
    const Sign exact = orientation_sign(tuple, PredicateMode::ExactOnly);
    ASSERT_EQ(orientation_sign(tuple, PredicateMode::Filtered), exact);
    ASSERT_EQ(exact, to_sign(oracle::orientation(tuple)));
    const std::vector<Point> line{tuple[0], tuple[1]};
    const auto filtered = segment_is_cut(line, tuple[2], Point{0, 0}, PredicateMode::Filtered);
    const auto exact_cut = segment_is_cut(line, tuple[2], Point{0, 0}, PredicateMode::ExactOnly);
    ASSERT_EQ(filtered.cut, exact_cut.cut);
    ASSERT_EQ(filtered.degenerate, exact_cut.degenerate);
    zeros += exact == Sign::Zero;
  }
  EXPECT_GT(zeros, 100u);
}

TEST(FilterSoundness, FloatOnlyIsWrongSomewhere) {
  // Guards the usefulness of the adversarial set: plain doubles must fail it.
  std::mt19937_64 rng(17);
  std::size_t wrong = 0;
  for (const auto& tuple : adversarial_tuples(rng)) {
    wrong += orientation_sign(tuple, PredicateMode::FloatOnly) !=
             orientation_sign(tuple, PredicateMode::ExactOnly);
  }
  EXPECT_GT(wrong, 0u);
}

TEST(FilterSoundness, HighDimensionFallsBackToExact) {
  std::mt19937_64 rng(18);
  for (int t = 0; t < 20; ++t) {
    const std::size_t d = 7;
    std::vector<Point> pts;
    for (std::size_t i = 0; i <= d; ++i) {
      pts.push_back(oracle::random_int_point(rng, d, -3, 3));
    }
    ASSERT_EQ(orientation_sign(pts, PredicateMode::Filtered),
              orientation_sign(pts, PredicateMode::ExactOnly));
  }
}

TEST(Hyperplane, ExactCoefficientsDescribeTheAffineForm) {
  const std::vector<Point> pts{{0, 0}, {1, 0}};
  std::vector<const Point*> through{&pts[0], &pts[1]};
  Hyperplane h(through);
  const auto& c = h.exact_coefficients();
  ASSERT_EQ(c.size(), 3u);
  // det [[0,0,1],[1,0,1],[x,y,1]] = y
  EXPECT_EQ(c[0], 0);
  EXPECT_EQ(c[1], 1);
  EXPECT_EQ(c[2], 0);
  EXPECT_FALSE(h.degenerate());
}

}  // namespace
}  // namespace aiknn
