#include <gtest/gtest.h>

#include "dlap/diagonalize.hpp"
#include "dlap/limits.hpp"
#include "dlap/reproduce.hpp"

using namespace dlap;

namespace {

Scalar S(const char* text) { return parse_real<Scalar>(text); }

// Root of F(., lambda) on (0, sqrt(lambda) - 1) by plain bisection, with no
// use of the closed form.
Scalar s_star_by_bisection(const Scalar& lambda) {
  const Scalar hi = sqrt(lambda) - Scalar(1);
  const Scalar lo = hi * pow10<Scalar>(-8);
  const Scalar top = hi * (Scalar(1) - pow10<Scalar>(-30));
  const auto F = [&](const Scalar& s) { return convergence_margin(s, lambda); };
  return bisect_monotone_root(F, lo, top, iterations_for_digits(hi, 45));
}

}  // namespace

TEST(Tau0, ReferenceTable) {
  PrecisionScope scope(50);
  for (const auto& row : kTau0Table) {
    const Scalar value = tau0(S(row.s)).value;
    EXPECT_LE(abs(value - S(row.value)), S(row.tolerance)) << row.s << " gives " << format_real(value, 15);
  }
}

TEST(Tau0, EvenInS) {
  PrecisionScope scope(50);
  for (const char* s : {"0.01", "0.3", "1", "4"}) {
    EXPECT_EQ(tau0(S(s)).value, tau0(Scalar(-S(s))).value);
  }
}

TEST(Tau0, IncreasingOnGrid) {
  PrecisionScope scope(50);
  Scalar prev(1);
  for (int i = 1; i <= 100; ++i) {
    const Scalar t = tau0(Scalar(i) / Scalar(10)).value;
    EXPECT_LT(prev, t) << i;
    prev = t;
  }
}

TEST(Tau0, ResidualChangesSignAtRoot) {
  PrecisionScope scope(50);
  const Scalar s = S("0.5");
  const Scalar t = tau0(s).value;
  EXPECT_LT(tau0_residual(Scalar(t - pow10<Scalar>(-6)), s), Scalar(0));
  EXPECT_GT(tau0_residual(Scalar(t + pow10<Scalar>(-6)), s), Scalar(0));
  EXPECT_LT(abs(tau0_quartic_residual(t, s)), pow10<Scalar>(-40));
}

TEST(Tau0, DegenerateAtZero) {
  PrecisionScope scope(50);
  try {
    tau0(Scalar(0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate);
  }
}

// rho(T(1,n,n)) increases with n toward tau0 from below.
TEST(Tau0, StarlikeRadiiApproachLimit) {
  PrecisionScope scope(50);
  for (const char* text : {"0.3", "1", "2"}) {
    const Scalar s = S(text);
    const Scalar limit = tau0(s).value;
    Scalar prev(0);
    for (int n : {1, 2, 3, 5, 8}) {
      const Scalar rho = spectral_radius(starlike_t1nn(n), s, 45).midpoint();
      EXPECT_LT(prev, rho);
      EXPECT_LT(rho, limit);
      prev = rho;
    }
    // The gap closes geometrically, so a long arm matches well past 1e-9.
    const Scalar far = spectral_radius(starlike_t1nn(150), s, 45).midpoint();
    EXPECT_LT(abs(limit - far), pow10<Scalar>(-30)) << text;
  }
}

TEST(ClosedForm, LaplacianValueMatchesTau0AtOne) {
  PrecisionScope scope(50);
  const Scalar closed = laplacian_closed_form<Scalar>().value;
  EXPECT_LT(abs(closed - tau0(Scalar(1)).value), pow10<Scalar>(-9));
  EXPECT_LT(abs(closed - tau0(Scalar(1)).value), pow10<Scalar>(-40));
  EXPECT_EQ(format_real(closed, 10), "4.382975768");
}

TEST(SStar, ReferenceValues) {
  PrecisionScope scope(50);
  EXPECT_EQ(format_real(s_star(S("1.5")).value, 25).substr(0, 10), "0.17869088");
  EXPECT_EQ(format_real(s_star(S("5.4")).value, 25).substr(0, 9), "0.6718978");
  EXPECT_EQ(format_real(s_star(S("2025")).value, 25).substr(0, 12), "0.9990125897");
  for (const char* l : {"1.5", "5.4", "2025"}) {
    const Scalar lambda = S(l);
    EXPECT_LT(abs(convergence_margin(s_star(lambda).value, lambda)), pow10<Scalar>(-30)) << l;
  }
}

TEST(SStar, MatchesDirectBisection) {
  PrecisionScope scope(60);
  for (const char* l : {"1.01", "1.5", "3", "5.4", "40", "2025", "1e6"}) {
    const Scalar lambda = S(l);
    EXPECT_LT(abs(s_star(lambda).value - s_star_by_bisection(lambda)), pow10<Scalar>(-40)) << l;
  }
}

TEST(SStar, MarginSignAroundRoot) {
  PrecisionScope scope(50);
  const Scalar lambda = S("5.4");
  const Scalar root = s_star(lambda).value;
  EXPECT_GT(convergence_margin(Scalar(root / 2), lambda), Scalar(0));
  EXPECT_LT(convergence_margin(Scalar((root + sqrt(lambda) - 1) / 2), lambda), Scalar(0));
  EXPECT_LT(abs(s_star_quartic_residual(root, lambda)), pow10<Scalar>(-35));
}

TEST(SStar, LimitsAtProxyPoints) {
  PrecisionScope scope(80);
  EXPECT_LT(s_star(S("1.000001")).value, S("0.01"));
  EXPECT_GT(s_star(S("1e9")).value, S("0.99"));
}

TEST(SStar, IncreasingInLambda) {
  PrecisionScope scope(50);
  Scalar prev(0);
  for (const char* l : {"1.1", "1.5", "2", "5.4", "10", "100", "2025", "1e5"}) {
    const Scalar v = s_star(S(l)).value;
    EXPECT_LT(prev, v) << l;
    prev = v;
  }
}

TEST(SStar, DomainErrors) {
  PrecisionScope scope(50);
  EXPECT_THROW(s_star(S("1")), Error);
  EXPECT_THROW(s_star(S("0.5")), Error);
  EXPECT_THROW(convergence_margin(S("0.9"), S("2")), Error);
}

TEST(CubeRoot, RealBranch) {
  PrecisionScope scope(50);
  EXPECT_EQ(real_cbrt(Scalar(-27)), Scalar(-3));
  EXPECT_EQ(real_cbrt(Scalar(8)), Scalar(2));
}
