#include <gtest/gtest.h>

#include "dlap/limits.hpp"
#include "dlap/recurrence.hpp"

using namespace dlap;

namespace {

Scalar S(const char* text) { return parse_real<Scalar>(text); }

}  // namespace

TEST(Params, Adaptedness) {
  PrecisionScope scope(50);
  EXPECT_TRUE(params(S("0.17"), S("1.5")).adapted);
  EXPECT_FALSE(params(S("0.3"), S("1.5")).adapted);
  EXPECT_FALSE(params(S("-0.3"), S("1.5")).adapted);
  // Boundary: lambda = (1 + |s|)^2 exactly is not adapted.
  EXPECT_FALSE(params(S("0.5"), S("2.25")).adapted);
  EXPECT_THROW(params(S("0.5"), S("1")).repelling(), Error);
  EXPECT_THROW(params(S("0.5"), S("0.9")), Error);
}

TEST(Params, DiscriminantSignMatchesAdaptedness) {
  PrecisionScope scope(50);
  for (const char* s : {"-1.3", "-0.6", "0.05", "0.4", "1", "2"}) {
    for (const char* l : {"1.1", "1.6", "2.5", "4", "9", "30"}) {
      const auto p = params(S(s), S(l));
      EXPECT_EQ(p.adapted, Scalar(0) < p.discriminant) << s << ' ' << l;
    }
  }
}

TEST(Params, LaplacianLimitIsAdapted) {
  PrecisionScope scope(50);
  const auto p = params(S("1"), S("4.382975768"));
  ASSERT_TRUE(p.adapted);
  EXPECT_LT(abs(p.attracting() * p.repelling() - Scalar(1)), pow10<Scalar>(-45));
}

TEST(FixedPoints, ProductOrderAndResiduals) {
  PrecisionScope scope(60);
  const Scalar tol = pow10<Scalar>(-60 + 5);
  for (const char* s : {"0.1", "-0.45", "0.9", "1.4"}) {
    for (const char* l : {"3", "5.4", "12", "2025"}) {
      const auto p = params(S(s), S(l));
      if (!p.adapted) continue;
      const Scalar& th = p.attracting();
      const Scalar& tp = p.repelling();
      EXPECT_LT(abs(th * tp - p.s * p.s), tol * (Scalar(1) + abs(th)));
      EXPECT_LE(th, tp);
      EXPECT_LT(tp, Scalar(0));
      EXPECT_LT(abs(phi(p, th) - th), tol * (Scalar(1) + abs(th)));
      // phi expands by s^2 / theta'^2 near theta'.
      EXPECT_LT(abs(phi(p, tp) - tp), tol * (Scalar(1) + p.s * p.s / (tp * tp)));
      // The first null point lies in (theta', 0].
      EXPECT_LT(tp, *p.first_null);
      EXPECT_LE(*p.first_null, Scalar(0));
      EXPECT_LT(abs(phi(p, *p.first_null)), tol);
      // The orbit of 1 - lambda starts below theta.
      EXPECT_LT(Scalar(1) - p.lambda, th);
    }
  }
}

TEST(FixedPoints, StartBelowThetaOverGrid) {
  PrecisionScope scope(50);
  for (int i = 1; i <= 30; ++i) {
    for (int j = 1; j <= 30; ++j) {
      const Scalar s = Scalar(i) / Scalar(10);
      const Scalar lambda = Scalar(1) + Scalar(j) * Scalar(j) / Scalar(4);
      const auto p = params(s, lambda);
      if (p.adapted) {
        EXPECT_LT(Scalar(1) - lambda, p.attracting());
      }
    }
  }
}

TEST(Phi, PoleAndExactNull) {
  PrecisionScope scope(50);
  // s^2 = 1/4, lambda = 21/4: alpha = -4 and c1 = -1/16, all dyadic.
  const auto p = params(S("0.5"), S("5.25"));
  ASSERT_TRUE(p.adapted);
  EXPECT_EQ(*p.first_null, S("-0.0625"));
  EXPECT_EQ(phi(p, *p.first_null), Scalar(0));
  EXPECT_THROW(phi(p, Scalar(0)), Error);
  try {
    classify_orbit(p, *p.first_null, 10);
    FAIL() << "expected a null-set signal";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::null_set);
  }
  EXPECT_THROW(classify_orbit(p, Scalar(0), 10), Error);
}

TEST(Orbit, BelowThetaIncreases) {
  PrecisionScope scope(50);
  const auto p = params(S("0.3"), S("5.4"));
  const auto rep = classify_orbit(p, Scalar(Scalar(1) - p.lambda), 500);
  EXPECT_EQ(rep.start, OrbitStart::below_theta);
  EXPECT_EQ(rep.initial_trend, 1);
  EXPECT_FALSE(rep.positive_step);
  EXPECT_TRUE(rep.converged);
}

TEST(Orbit, BetweenFixedPointsDecreases) {
  PrecisionScope scope(50);
  const auto p = params(S("0.3"), S("5.4"));
  const Scalar x1 = (p.attracting() + p.repelling()) / 2;
  const auto rep = classify_orbit(p, x1, 500);
  EXPECT_EQ(rep.start, OrbitStart::between);
  EXPECT_EQ(rep.initial_trend, -1);
  EXPECT_TRUE(rep.converged);
  EXPECT_LT(abs(rep.last() - p.attracting()), pow10<Scalar>(-44));
}

TEST(Orbit, AboveRepellingEscapesThenReturnsFromBelow) {
  PrecisionScope scope(50);
  const auto p = params(S("0.3"), S("5.4"));
  const Scalar x1 = p.repelling() * (1 - pow10<Scalar>(-6));  // just above theta'
  const auto rep = classify_orbit(p, x1, 500);
  EXPECT_EQ(rep.start, OrbitStart::above_theta_prime);
  ASSERT_TRUE(rep.positive_step);
  EXPECT_GT(*rep.positive_step, 1);
  EXPECT_EQ(rep.initial_trend, 1);
  // After the positive term the orbit restarts below theta and climbs.
  EXPECT_LT(rep.orbit[*rep.positive_step], p.attracting());
  EXPECT_EQ(rep.final_trend, 1);
  EXPECT_TRUE(rep.converged);
}

TEST(Orbit, FixedPointsAreStationary) {
  PrecisionScope scope(50);
  const auto p = params(S("0.3"), S("5.4"));
  EXPECT_EQ(classify_orbit(p, p.attracting(), 5).start, OrbitStart::at_theta);
  EXPECT_EQ(classify_orbit(p, p.repelling(), 5).start, OrbitStart::at_theta_prime);
  EXPECT_EQ(classify_orbit(p, Scalar(1), 5).start, OrbitStart::positive);
}

TEST(Orbit, SymmetricInS) {
  PrecisionScope scope(50);
  for (const char* x : {"-7", "-0.5", "-0.01", "0.8"}) {
    const auto a = classify_orbit(params(S("0.4"), S("6")), S(x), 300);
    const auto b = classify_orbit(params(S("-0.4"), S("6")), S(x), 300);
    EXPECT_EQ(a.start, b.start);
    EXPECT_EQ(a.orbit, b.orbit);
    EXPECT_EQ(a.positive_step, b.positive_step);
  }
}

TEST(Orbit, NotAdaptedIsRejected) {
  PrecisionScope scope(50);
  EXPECT_THROW(classify_orbit(params(S("0.9"), S("2")), S("-1"), 10), Error);
}
