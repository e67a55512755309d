#include "ostrowski/bounds.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ostrowski/oracle.hpp"
#include "ostrowski/reference.hpp"

using namespace ostrowski;

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(eng_() >> 11) * 0x1.0p-53);
  }

 private:
  std::mt19937_64 eng_;
};

struct Draw {
  double a, b, x, M;
};

Draw draw_interval(Rng& rng) {
  Draw d;
  d.a = rng.uniform(-3.0, 3.0);
  d.b = d.a + rng.uniform(0.2, 4.0);
  d.x = rng.uniform(d.a, d.b);
  d.M = rng.uniform(0.2, 5.0);
  return d;
}

// Largest modulus keeping M^q >= c d^2/6 for every d in [0, b-a].
double safe_c(double M, double w, double q = 1.0) {
  return 0.999 * 6.0 * std::pow(M, q) / (w * w);
}

bool bit_equal(double x, double y) {
  return std::memcmp(&x, &y, sizeof x) == 0;
}

}  // namespace

TEST(ClassicOstrowski, Examples) {
  EXPECT_DOUBLE_EQ(bounds::classic_ostrowski_rhs(0.0, 0.0, 1.0, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(bounds::classic_ostrowski_rhs(0.5, 0.0, 1.0, 2.0), 0.5);
  // f = x^2 on [0,1] at x = 0.25: |f(x) - mean| = |1/16 - 1/3|
  const double lhs = std::fabs(1.0 / 16.0 - 1.0 / 3.0);
  const double rhs = bounds::classic_ostrowski_rhs(0.25, 0.0, 1.0, 2.0);
  EXPECT_NEAR(rhs, 0.625, 1e-15);
  EXPECT_LE(lhs, rhs);
}

TEST(AlomariRhs, Examples) {
  EXPECT_NEAR(bounds::alomari_rhs(0.5, 0.0, 1.0, 2.0, 2.0), 1.0 / std::sqrt(3.0),
              1e-15);
  // p -> infinity approaches the (p+1)^(1/p) -> 1 envelope
  const double big_p = bounds::alomari_rhs(0.3, 0.0, 1.0, 2.0, 1e6);
  const double envelope = 2.0 * (0.09 + 0.49) / 1.0;
  EXPECT_NEAR(big_p, envelope, 1e-4 * envelope);
  // x = a collapses one term
  const double at_a = bounds::alomari_rhs(0.0, 0.0, 2.0, 1.5, 3.0);
  EXPECT_NEAR(at_a, 1.5 * 2.0 / std::pow(4.0, 1.0 / 3.0), 1e-14);
}

TEST(Hypothesis, Examples) {
  EXPECT_TRUE(bounds::hypothesis_ok(0.5, 0.0, 1.0, 2.0, 1.0));
  EXPECT_FALSE(bounds::hypothesis_ok(1.0, 0.0, 1.0, 0.1, 1.0));
  EXPECT_TRUE(bounds::hypothesis_ok(1.0, 0.0, 1.0, 1.0, 1.0, 2.0));
}

TEST(ScRhsT1, Values) {
  EXPECT_NEAR(bounds::sc_rhs_t1(0.5, 0.0, 1.0, 2.0, 1.0), 47.0 / 96.0, 1e-15);
  // cubic instance: x = 0.5, M = 1, c = 1
  EXPECT_NEAR(bounds::sc_rhs_t1(0.5, 0.0, 1.0, 1.0, 1.0), 23.0 / 96.0, 1e-15);
}

TEST(ScRhsT1, HypothesisSideIsNamed) {
  try {
    bounds::sc_rhs_t1(1.0, 0.0, 1.0, 0.1, 1.0);
    FAIL() << "expected HypothesisError";
  } catch (const bounds::HypothesisError& e) {
    EXPECT_NE(std::string(e.what()).find("left"), std::string::npos);
  }
  try {
    bounds::sc_rhs_t1(0.0, 0.0, 1.0, 0.1, 1.0);
    FAIL() << "expected HypothesisError";
  } catch (const bounds::HypothesisError& e) {
    EXPECT_NE(std::string(e.what()).find("right"), std::string::npos);
  }
}

TEST(ScRhsT2, Value) {
  const double v = bounds::sc_rhs_t2(0.5, 0.0, 1.0, 2.0, 1.0, 2.0, 2.0);
  EXPECT_NEAR(v, 0.5 * std::sqrt(95.0 / 72.0), 1e-15);
}

TEST(ScRhsT2, RejectsBadHolderPair) {
  EXPECT_THROW(bounds::sc_rhs_t2(0.5, 0.0, 1.0, 2.0, 1.0, 2.0, 3.0),
               std::invalid_argument);
  EXPECT_THROW(bounds::sc_rhs_t2(0.5, 0.0, 1.0, 2.0, 1.0, 1.0, 1.0),
               std::invalid_argument);
}

TEST(ScRhsT3, Value) {
  const double v = bounds::sc_rhs_t3(0.5, 0.0, 1.0, 2.0, 1.0, 2.0);
  EXPECT_NEAR(v, 0.25 * std::sqrt(95.0 / 24.0), 1e-15);
}

// Reduction identities are exact, not approximate: the c = 0 / q = 1 variants
// and the general forms share term kernels.
TEST(Reductions, BitExact) {
  Rng rng(20240817);
  for (int i = 0; i < 2000; ++i) {
    const Draw d = draw_interval(rng);
    const double w = d.b - d.a;

    EXPECT_TRUE(bit_equal(bounds::sc_rhs_t1(d.x, d.a, d.b, d.M, 0.0),
                          bounds::classic_ostrowski_rhs(d.x, d.a, d.b, d.M)));

    const double p = rng.uniform(1.1, 4.0);
    const double q = p / (p - 1.0);
    EXPECT_TRUE(bit_equal(bounds::sc_rhs_t2(d.x, d.a, d.b, d.M, 0.0, p, q),
                          bounds::alomari_rhs(d.x, d.a, d.b, d.M, p)));

    EXPECT_TRUE(bit_equal(bounds::sc_rhs_t3(d.x, d.a, d.b, d.M, 0.0, q),
                          bounds::classic_ostrowski_rhs(d.x, d.a, d.b, d.M)));

    const double c1 = rng.uniform(0.0, safe_c(d.M, w));
    EXPECT_TRUE(bit_equal(bounds::sc_rhs_t3(d.x, d.a, d.b, d.M, c1, 1.0),
                          bounds::sc_rhs_t1(d.x, d.a, d.b, d.M, c1)));

    // midpoint forms evaluate the general forms at x = (a+b)/2
    const double mid = (d.a + d.b) / 2.0;
    EXPECT_TRUE(bit_equal(bounds::midpoint_rhs_t1(d.a, d.b, d.M, c1),
                          bounds::sc_rhs_t1(mid, d.a, d.b, d.M, c1)));
    const double cq = rng.uniform(0.0, safe_c(d.M, w, q));
    EXPECT_TRUE(bit_equal(bounds::midpoint_rhs_t2(d.a, d.b, d.M, cq, p, q),
                          bounds::sc_rhs_t2(mid, d.a, d.b, d.M, cq, p, q)));
    EXPECT_TRUE(bit_equal(bounds::midpoint_rhs_t3(d.a, d.b, d.M, cq, q),
                          bounds::sc_rhs_t3(mid, d.a, d.b, d.M, cq, q)));
    EXPECT_TRUE(bit_equal(bounds::midpoint_rhs_t3(d.a, d.b, d.M, c1, 1.0),
                          bounds::midpoint_rhs_t1(d.a, d.b, d.M, c1)));
  }
}

TEST(Midpoint, ClosedFormAlgebra) {
  EXPECT_NEAR(bounds::midpoint_rhs_t1(0.0, 1.0, 2.0, 1.0), 47.0 / 96.0, 1e-15);
  Rng rng(7);
  for (int i = 0; i < 500; ++i) {
    const Draw d = draw_interval(rng);
    const double w = d.b - d.a;
    const double c = rng.uniform(0.0, safe_c(d.M, w));
    const double closed = d.M * w / 4.0 - c * w * w * w / 96.0;
    EXPECT_NEAR(bounds::midpoint_rhs_t1(d.a, d.b, d.M, c), closed,
                1e-12 * (1.0 + std::fabs(closed)));

    const double p = rng.uniform(1.1, 4.0);
    const double q = p / (p - 1.0);
    const double cq = rng.uniform(0.0, safe_c(d.M, w, q));
    const double root = std::pow(std::pow(d.M, q) - cq * w * w / 24.0, 1.0 / q);
    EXPECT_NEAR(bounds::midpoint_rhs_t2(d.a, d.b, d.M, cq, p, q),
                w / 2.0 * std::pow(1.0 / (p + 1.0), 1.0 / p) * root,
                1e-12 * (1.0 + root));
    EXPECT_NEAR(bounds::midpoint_rhs_t3(d.a, d.b, d.M, cq, q), w / 4.0 * root,
                1e-12 * (1.0 + root));
  }
}

TEST(Midpoint, HypothesisBoundaryGivesExactlyZero) {
  const double c = 1.7;
  const double M = c * (0.5 * 0.5) / 6.0;  // boundary: M = c(b-a)^2/24 on [0,1]
  EXPECT_EQ(bounds::midpoint_rhs_t1(0.0, 1.0, M, c), 0.0);
}

TEST(Properties, SymmetryInX) {
  Rng rng(99);
  for (int i = 0; i < 1000; ++i) {
    const Draw d = draw_interval(rng);
    const double c = rng.uniform(0.0, safe_c(d.M, d.b - d.a));
    const double left = bounds::sc_rhs_t1(d.x, d.a, d.b, d.M, c);
    const double right = bounds::sc_rhs_t1(d.a + d.b - d.x, d.a, d.b, d.M, c);
    EXPECT_NEAR(left, right, 1e-13 * (1.0 + std::fabs(left)));
    const double lc = bounds::classic_ostrowski_rhs(d.x, d.a, d.b, d.M);
    const double rc = bounds::classic_ostrowski_rhs(d.a + d.b - d.x, d.a, d.b, d.M);
    EXPECT_NEAR(lc, rc, 1e-13 * (1.0 + std::fabs(lc)));
  }
}

TEST(Properties, MonotoneInMAndC) {
  Rng rng(123);
  for (int i = 0; i < 1000; ++i) {
    const Draw d = draw_interval(rng);
    const double w = d.b - d.a;
    const double M2 = d.M + rng.uniform(0.0, 2.0);
    const double c = rng.uniform(0.0, safe_c(d.M, w));
    const double c2 = rng.uniform(c, safe_c(d.M, w));

    EXPECT_GE(bounds::sc_rhs_t1(d.x, d.a, d.b, M2, c),
              bounds::sc_rhs_t1(d.x, d.a, d.b, d.M, c) - 1e-15);
    EXPECT_GE(bounds::sc_rhs_t1(d.x, d.a, d.b, d.M, c),
              bounds::sc_rhs_t1(d.x, d.a, d.b, d.M, c2) - 1e-15);

    const double q = rng.uniform(1.0, 3.0);
    const double cq = rng.uniform(0.0, safe_c(d.M, w, q));
    EXPECT_GE(bounds::sc_rhs_t3(d.x, d.a, d.b, d.M, 0.0, q),
              bounds::sc_rhs_t3(d.x, d.a, d.b, d.M, cq, q) - 1e-15);
    EXPECT_GE(bounds::sc_rhs_t3(d.x, d.a, d.b, d.M, cq, q), 0.0);
    EXPECT_GE(bounds::sc_rhs_t1(d.x, d.a, d.b, d.M, c), 0.0);
  }
}

TEST(Properties, TighterThanClassicalWheneverApplicable) {
  Rng rng(321);
  for (int i = 0; i < 1000; ++i) {
    const Draw d = draw_interval(rng);
    const double c = rng.uniform(0.0, safe_c(d.M, d.b - d.a));
    EXPECT_LE(bounds::sc_rhs_t1(d.x, d.a, d.b, d.M, c),
              bounds::classic_ostrowski_rhs(d.x, d.a, d.b, d.M) + 1e-15);
  }
}

TEST(SegmentMoment, Values) {
  EXPECT_DOUBLE_EQ(bounds::segment_moment_bound(0.0, 2.0, 1.0, true), 1.0);
  EXPECT_DOUBLE_EQ(bounds::segment_moment_bound(0.0, 2.0, 1.0, false), 2.0);
  EXPECT_DOUBLE_EQ(
      bounds::segment_moment_bound(0.0, 2.0, 1.0, false, std::optional<double>(2.0)),
      4.0);
  EXPECT_NEAR(bounds::segment_moment_bound(1.0, 2.0, 1.0, true), 11.0 / 12.0, 1e-15);
  EXPECT_THROW(bounds::segment_moment_bound(1.0, 0.1, 1.0, true),
               std::invalid_argument);
}

TEST(SegmentMoment, DominatesOracleMoment) {
  // f = x^2 on the segment [0, x] with x = 1: int_0^1 t |f'(t)| dt = 2/3
  const auto est =
      oracle::integrate([](double t) { return t * std::fabs(2.0 * t); }, 0.0, 1.0,
                        1e-12);
  ASSERT_TRUE(est.converged);
  EXPECT_NEAR(est.value, 2.0 / 3.0, 1e-12);
  EXPECT_LE(est.value, bounds::segment_moment_bound(1.0, 2.0, 1.0, true));
}

TEST(ProductZ1, EqualityWitnessOnTwoIntervals) {
  // f = g = x^2 with c = 1 sits exactly on the strong-convexity equality case.
  const auto quartic = [](double x) { return std::pow(x, 4); };
  {
    const auto est = oracle::integrate(quartic, 0.0, 1.0, 1e-12);
    const double lhs = est.value / 1.0;
    const double rhs = bounds::product_rhs_z1(0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 1.0);
    EXPECT_NEAR(rhs, 0.2, 1e-15);
    EXPECT_LE(std::fabs(rhs - lhs), 1e-12);
  }
  {
    const auto est = oracle::integrate(quartic, -1.0, 2.0, 1e-12);
    const double lhs = est.value / 3.0;
    const double rhs = bounds::product_rhs_z1(1.0, 4.0, 1.0, 4.0, -1.0, 2.0, 1.0);
    EXPECT_NEAR(lhs, 2.2, 1e-12);
    EXPECT_LE(std::fabs(rhs - lhs), 1e-12);
  }
}

TEST(ProductZ1, ConstantsAndPreconditions) {
  EXPECT_DOUBLE_EQ(bounds::product_rhs_z1(1.0, 1.0, 1.0, 1.0, 0.0, 1.0, 0.0), 1.0);
  EXPECT_THROW(bounds::product_rhs_z1(-1.0, 1.0, 1.0, 1.0, 0.0, 1.0, 0.0),
               std::invalid_argument);
  EXPECT_THROW(bounds::product_rhs_z1(1.0, 1.0, 1.0, 1.0, 0.0, 1.0, -1.0),
               std::invalid_argument);
}

// The stated product bound carries a final term linear in c; the chord
// integration behind it produces c^2. For the equality-case pair with modulus
// 2 on [0, 1] the stated form therefore fails. Kept as a pinned witness of
// the as-stated behavior.
TEST(ProductZ1, StatedFormFailsForModulusAboveOneEqualityCase) {
  // f = g = 2x^2 - x + 1, c = 2: mean of (fg) is 22/15, stated rhs is 1.4
  const auto fg = [](double x) {
    const double v = 2.0 * x * x - x + 1.0;
    return v * v;
  };
  const auto est = oracle::integrate(fg, 0.0, 1.0, 1e-12);
  const double lhs = est.value;
  EXPECT_NEAR(lhs, 22.0 / 15.0, 1e-12);
  const double rhs = bounds::product_rhs_z1(1.0, 2.0, 1.0, 2.0, 0.0, 1.0, 2.0);
  EXPECT_NEAR(rhs, 1.4, 1e-12);
  EXPECT_LE(rhs - lhs, -0.06);
}

TEST(MixedZ3, WorkedExample) {
  // f = x^2 convex, g = x^2 strongly convex with c = 1 on [0, 1]
  const auto est =
      oracle::integrate([](double x) { return std::pow(x, 4); }, 0.0, 1.0, 1e-12);
  const double lhs = est.value + bounds::mixed_lhs_extra_z3(0.0, 1.0, 0.0, 1.0, 1.0);
  const double rhs = bounds::mixed_rhs_z3(0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 1.0);
  EXPECT_NEAR(lhs, 0.2 + 1.0 / 12.0, 1e-12);
  EXPECT_NEAR(rhs, 1.0 / 3.0, 1e-15);
  EXPECT_LE(lhs, rhs);
  EXPECT_DOUBLE_EQ(bounds::mixed_lhs_extra_z3(0.0, 0.0, 0.0, 1.0, 3.0), 0.0);
}

// The stated chord-rearrangement bound weighs the cross moments by 1/(b-a)^3
// where the chord integration gives 1/(b-a); on a width-3 interval the stated
// inequality inverts for the equality-case pair. Pinned as-stated behavior.
TEST(Z2, StatedFormFailsOffUnitWidth) {
  const auto f = [](double x) { return 0.5 * x * x + 2.0 * x + 3.0; };
  const double a = -1.0, b = 2.0, c = 0.5;
  const double fa = f(a), fb = f(b);
  auto quad = [&](const oracle::Fn& fn) {
    const auto est = oracle::integrate(fn, a, b, 1e-11);
    EXPECT_TRUE(est.converged);
    return est.value;
  };
  bounds::WeightedMoments m;
  m.left = quad([&](double x) { return (x - a) * f(x); });
  m.right = quad([&](double x) { return (b - x) * f(x); });
  m.cross = quad([&](double x) { return (x - a) * (b - x) * f(x); });
  const double mean_fg = quad([&](double x) { return f(x) * f(x); }) / (b - a);

  EXPECT_NEAR(m.left, 25.875, 1e-9);
  EXPECT_NEAR(m.right, 14.625, 1e-9);
  EXPECT_NEAR(m.cross, 19.575, 1e-9);

  const double lhs = bounds::z2_lhs(fa, fb, fa, fb, m, m, a, b, c);
  const double rhs = bounds::z2_rhs(mean_fg, fa, fb, fa, fb, a, b, c);
  EXPECT_NEAR(lhs, 55.9, 1e-8);
  EXPECT_NEAR(rhs, 50.775, 1e-8);
  EXPECT_LE(rhs - lhs, -5.0);
}

TEST(Cor5Cor6, QuadValues) {
  EXPECT_NEAR(bounds::cor5_rhs(0.0, 1.0, 0.0, 1.0, 1.0), 17.0 / 60.0, 1e-15);
  // vs mean 1/3: the substituted corollary is violated by 1/20
  EXPECT_NEAR(bounds::cor5_rhs(0.0, 1.0, 0.0, 1.0, 1.0) - 1.0 / 3.0, -0.05, 1e-12);
  EXPECT_NEAR(bounds::cor6_rhs(0.0, 1.0, 0.0, 1.0, 1.0), 5.0 / 12.0, 1e-15);
  // affine f = 2x + 3 with any c > 0 breaks the g == 1 substitution of z3
  EXPECT_LT(bounds::cor6_rhs(3.0, 5.0, 0.0, 1.0, 1.0), 4.0);
}

// Re-evaluate every formula with a 50-digit scalar; binary64 results must
// agree to ulp scale.
TEST(HighPrecisionCrossCheck, AllRhsForms) {
  using Big = reference::BigFloat;
  Rng rng(5150);
  for (int i = 0; i < 200; ++i) {
    const Draw d = draw_interval(rng);
    const double w = d.b - d.a;
    const double p = rng.uniform(1.1, 4.0);
    const double q = p / (p - 1.0);
    const double c1 = rng.uniform(0.0, safe_c(d.M, w));
    const double cq = rng.uniform(0.0, safe_c(d.M, w, q));

    auto close = [](double got, const Big& want) {
      const double ref = reference::to_double(want);
      EXPECT_NEAR(got, ref, 1e-15 * (1.0 + std::fabs(ref)));
    };

    const Big A(d.x), Ba(d.a), Bb(d.b), BM(d.M);
    close(bounds::classic_ostrowski_rhs(d.x, d.a, d.b, d.M),
          bounds::classic_ostrowski_rhs(A, Ba, Bb, BM));
    close(bounds::alomari_rhs(d.x, d.a, d.b, d.M, p),
          bounds::alomari_rhs(A, Ba, Bb, BM, Big(p)));
    close(bounds::sc_rhs_t1(d.x, d.a, d.b, d.M, c1),
          bounds::sc_rhs_t1(A, Ba, Bb, BM, Big(c1)));
    close(bounds::sc_rhs_t2(d.x, d.a, d.b, d.M, cq, p, q),
          bounds::sc_rhs_t2(A, Ba, Bb, BM, Big(cq), Big(p), Big(q)));
    close(bounds::sc_rhs_t3(d.x, d.a, d.b, d.M, cq, q),
          bounds::sc_rhs_t3(A, Ba, Bb, BM, Big(cq), Big(q)));

    // The product and substitution forms cancel between terms of size
    // ~(1 + sum of boundary values)(1 + w^4), so the agreement bound scales
    // with the terms rather than the (possibly tiny) result.
    const double fa = rng.uniform(0.0, 3.0), fb = rng.uniform(0.0, 3.0);
    const double ga = rng.uniform(0.0, 3.0), gb = rng.uniform(0.0, 3.0);
    const double cz = rng.uniform(0.0, 2.0);
    const double w4 = (w * w) * (w * w);
    const double scale = (1.0 + fa + fb + ga + gb) * (1.0 + (1.0 + cz) * w4);
    auto close_abs = [scale](double got, const Big& want) {
      EXPECT_NEAR(got, reference::to_double(want), 5e-15 * scale);
    };
    close_abs(bounds::product_rhs_z1(fa, fb, ga, gb, d.a, d.b, cz),
              bounds::product_rhs_z1(Big(fa), Big(fb), Big(ga), Big(gb), Ba, Bb,
                                     Big(cz)));
    close_abs(bounds::cor5_rhs(fa, fb, d.a, d.b, cz),
              bounds::cor5_rhs(Big(fa), Big(fb), Ba, Bb, Big(cz)));
    close_abs(bounds::cor6_rhs(fa, fb, d.a, d.b, cz),
              bounds::cor6_rhs(Big(fa), Big(fb), Ba, Bb, Big(cz)));
  }
}
