#ifndef DLAP_LIMITS_HPP
#define DLAP_LIMITS_HPP

// Closed-form limit machinery: the T(1,n,n) limit tau0(s), the Laplacian
// value at s = 1, the convergence margin F(s, lambda) and its root s*(lambda).

#include <algorithm>
#include <cmath>
#include <string>

#include "dlap/error.hpp"
#include "dlap/recurrence.hpp"
#include "dlap/scalar.hpp"

namespace dlap {

enum class LimitSource { tau0, s_star, laplacian_closed_form };

inline const char* to_string(LimitSource src) {
  switch (src) {
    case LimitSource::tau0: return "tau0";
    case LimitSource::s_star: return "s_star";
    case LimitSource::laplacian_closed_form: return "laplacian_closed_form";
  }
  return "?";
}

template <RealScalar R>
struct LimitPoint {
  R value;
  LimitSource source;
  R input;  // s for tau0, lambda for s_star, unused for the closed form
};

/// Residual tolerance 10^(10-P) scaled by the magnitude of the terms.
template <RealScalar R>
R residual_tolerance(const R& scale) {
  using std::abs;
  return pow10<R>(10 - static_cast<int>(working_digits<R>())) * (R(1) + abs(scale));
}

/// h(t) = (1 + s^2 - t)^2 - 4 s^2 - s^4 (1 + 1/(t - 1))^2; increasing on (1, inf).
template <RealScalar R>
R tau0_residual(const R& t, const R& s) {
  const R s2 = s * s;
  const R a = R(1) + s2 - t;
  const R b = R(1) + R(1) / (t - R(1));
  return a * a - R(4) * s2 - s2 * s2 * b * b;
}

/// p(t) = t^4 + (-2s^2-4)t^3 + (2s^2+6)t^2 + (-2s^4+2s^2-4)t + s^4-2s^2+1.
template <RealScalar R>
R tau0_quartic_residual(const R& t, const R& s) {
  require_uniform_precision("tau0_quartic_residual", t, s);
  const R s2 = s * s;
  const R s4 = s2 * s2;
  const R c3 = R(-2) * s2 - R(4);
  const R c2 = R(2) * s2 + R(6);
  const R c1 = R(-2) * s4 + R(2) * s2 - R(4);
  const R c0 = s4 - R(2) * s2 + R(1);
  return (((t + c3) * t + c2) * t + c1) * t + c0;
}

namespace detail {

template <RealScalar R>
R tau0_quartic_scale(const R& t, const R& s) {
  using std::abs;
  const R s2 = s * s;
  const R s4 = s2 * s2;
  const R coef = R(1) + abs(R(-2) * s2 - R(4)) + abs(R(2) * s2 + R(6)) + abs(R(-2) * s4 + R(2) * s2 - R(4)) +
                 abs(s4 - R(2) * s2 + R(1));
  const R base = std::max(R(1), R(abs(t)));
  return coef * base * base * base * base;
}

}  // namespace detail

/// Unique root of h in (1, inf), i.e. lim rho(M_{T(1,n,n)}(s)).
template <RealScalar R>
LimitPoint<R> tau0(const R& s) {
  using std::abs;
  using std::sqrt;
  require_uniform_precision("tau0", s);
  if (s == R(0)) throw Error(ErrorKind::degenerate, "tau0 is undefined at s = 0 (the radius is 1 for every n)");
  const int digits = static_cast<int>(working_digits<R>());
  const R low = R(1) + pow10<R>(-digits / 2);
  // The degree-3 upper bound: 1 + 2 s^2 + |s| * 2 sqrt(2).
  R high = R(1) + R(2) * s * s + R(2) * sqrt(R(2)) * abs(s);
  auto h = [&](const R& t) { return tau0_residual(t, s); };
  if (!(h(low) < R(0))) throw Error(ErrorKind::bracketing, "h is not negative near 1");
  for (int grow = 0; !(R(0) < h(high)); ++grow) {
    if (grow > 60) throw Error(ErrorKind::bracketing, "no sign change of h found");
    high = R(1) + R(2) * (high - R(1));
  }
  const int iters = iterations_for_digits(R(high - low), digits + 2);
  const R root = bisect_monotone_root(h, low, high, iters);
  const R residual = tau0_quartic_residual(root, s);
  if (abs(residual) > residual_tolerance(detail::tau0_quartic_scale(root, s))) {
    throw Error(ErrorKind::consistency, "tau0 root fails the quartic check, residual " + format_real(residual, 6));
  }
  return {root, LimitSource::tau0, s};
}

/// cbrt(54 + 6 sqrt 33)/3 + 4/cbrt(54 + 6 sqrt 33) + 2.
template <RealScalar R>
LimitPoint<R> laplacian_closed_form() {
  using std::cbrt;
  using std::sqrt;
  const R c = cbrt(R(54) + R(6) * sqrt(R(33)));
  return {c / R(3) + R(4) / c + R(2), LimitSource::laplacian_closed_form, R(0)};
}

/// F(s, lambda) = theta'(s) - delta + s.
template <RealScalar R>
R convergence_margin(const R& s, const R& lambda) {
  const auto p = params(s, lambda);
  if (!p.adapted) throw Error(ErrorKind::domain, "F needs s adapted to lambda");
  return p.repelling() - p.delta + s;
}

/// -4 lambda s^4 + (4 lambda^2 - 4) s^3 + (-4 lambda^3 + 12 lambda - 8) s^2
/// + (4 lambda^3 - 12 lambda^2 + 12 lambda - 4) s.
template <RealScalar R>
R s_star_quartic_residual(const R& s, const R& lambda) {
  const R l = lambda;
  const R l2 = l * l;
  const R l3 = l2 * l;
  const R c4 = R(-4) * l;
  const R c3 = R(4) * l2 - R(4);
  const R c2 = R(-4) * l3 + R(12) * l - R(8);
  const R c1 = R(4) * l3 - R(12) * l2 + R(12) * l - R(4);
  return (((c4 * s + c3) * s + c2) * s + c1) * s;
}

/// Real cube root, defined for negative arguments too.
template <RealScalar R>
R real_cbrt(const R& x) {
  using std::cbrt;
  return x < R(0) ? R(-cbrt(R(-x))) : R(cbrt(x));
}

/// Positive root of F(., lambda) by the Cardano closed form, checked against
/// both F and the quartic before it is returned.
template <RealScalar R>
LimitPoint<R> s_star(const R& lambda) {
  using std::abs;
  using std::sqrt;
  require_uniform_precision("s_star", lambda);
  if (!(R(1) < lambda)) throw Error(ErrorKind::domain, "s* needs lambda > 1");
  const R l = lambda;
  const R l2 = l * l;
  const R l3 = l2 * l;
  const R inner = (R(3) * l3 + R(4) * l2 + R(20) * l - R(4)) / l;
  const R radicand = R(12) * sqrt(R(3)) * checked_sqrt(inner, "s_star") * l2 - R(28) * l3 + R(24) * l2 -
                     R(48) * l + R(8);
  const R ell = real_cbrt(radicand);
  if (ell == R(0)) throw Error(ErrorKind::consistency, "s*: cube root vanished");
  const R value = (ell / R(2) - (R(4) * l2 + R(8) * l - R(2)) / ell + l + R(1)) * (l - R(1)) / (R(3) * l);

  const R upper = sqrt(l) - R(1);
  if (!(R(0) < value) || !(value < upper)) {
    throw Error(ErrorKind::consistency, "s* = " + format_real(value) + " is outside (0, sqrt(lambda) - 1)");
  }
  const R margin = convergence_margin(value, l);
  if (abs(margin) > residual_tolerance(l)) {
    throw Error(ErrorKind::consistency, "s* fails F = 0, residual " + format_real(margin, 6));
  }
  const R quartic = s_star_quartic_residual(value, l);
  const R scale = R(4) * (l3 + R(3) * l2 + R(3) * l + R(1));
  if (abs(quartic) > residual_tolerance(scale)) {
    throw Error(ErrorKind::consistency, "s* fails the quartic check, residual " + format_real(quartic, 6));
  }
  return {value, LimitSource::s_star, l};
}

}  // namespace dlap

#endif  // DLAP_LIMITS_HPP
