#ifndef DLAP_RECURRENCE_HPP
#define DLAP_RECURRENCE_HPP

// The rational map phi(t) = alpha + gamma / t with alpha = 1 + s^2 - lambda
// and gamma = -s^2, its fixed points and orbit behaviour.

#include <optional>
#include <string>
#include <vector>

#include "dlap/error.hpp"
#include "dlap/scalar.hpp"

namespace dlap {

template <RealScalar R>
struct RecurrenceParams {
  R s;
  R lambda;
  R alpha;
  R gamma;
  R discriminant;
  R delta;  // per-leaf contribution s^2 lambda / (lambda - 1)
  bool adapted = false;
  // Present only when adapted.
  std::optional<R> theta;        // attracting fixed point
  std::optional<R> theta_prime;  // repelling fixed point
  std::optional<R> first_null;   // c1 = -gamma / alpha

  const R& attracting() const { return require(theta); }
  const R& repelling() const { return require(theta_prime); }

 private:
  static const R& require(const std::optional<R>& v) {
    if (!v) throw Error(ErrorKind::not_adapted, "s is not adapted to lambda: fixed points are not real");
    return *v;
  }
};

/// Adapted means lambda > (1 + |s|)^2.
template <RealScalar R>
bool is_adapted(const R& s, const R& lambda) {
  using std::abs;
  const R edge = R(1) + abs(s);
  return edge * edge < lambda;
}

template <RealScalar R>
RecurrenceParams<R> params(const R& s, const R& lambda) {
  require_uniform_precision("params", s, lambda);
  if (!(R(1) < lambda)) throw Error(ErrorKind::domain, "lambda must exceed 1");
  RecurrenceParams<R> p;
  p.s = s;
  p.lambda = lambda;
  const R s2 = s * s;
  p.alpha = R(1) + s2 - lambda;
  p.gamma = -s2;
  p.discriminant = p.alpha * p.alpha + R(4) * p.gamma;
  p.delta = s2 * lambda / (lambda - R(1));
  p.adapted = is_adapted(s, lambda);
  if (p.adapted) {
    const R root = checked_sqrt(p.discriminant, "params");
    p.theta = (p.alpha - root) / R(2);
    p.theta_prime = (p.alpha + root) / R(2);
    p.first_null = -p.gamma / p.alpha;
  }
  return p;
}

template <RealScalar R>
R phi(const RecurrenceParams<R>& p, const R& t) {
  if (t == R(0)) throw Error(ErrorKind::pole, "phi is undefined at 0");
  return p.alpha + p.gamma / t;
}

enum class OrbitStart { below_theta, at_theta, between, at_theta_prime, above_theta_prime, positive };

inline const char* to_string(OrbitStart start) {
  switch (start) {
    case OrbitStart::below_theta: return "below-theta";
    case OrbitStart::at_theta: return "at-theta";
    case OrbitStart::between: return "between-fixed-points";
    case OrbitStart::at_theta_prime: return "at-theta-prime";
    case OrbitStart::above_theta_prime: return "above-theta-prime";
    case OrbitStart::positive: return "positive";
  }
  return "?";
}

template <RealScalar R>
struct OrbitReport {
  OrbitStart start = OrbitStart::below_theta;
  std::vector<R> orbit;
  // Before the first positive term (or throughout): +1 increasing,
  // -1 decreasing, 0 constant.
  int initial_trend = 0;
  // After the positive term, when there is one.
  int final_trend = 0;
  std::optional<int> positive_step;  // 1-based index m with x_m > 0
  bool converged = false;
  int steps = 0;

  const R& last() const { return orbit.back(); }
};

/// Iterates x_{j+1} = phi(x_j) from x1 until |x_j - theta| < 10^-target or
/// max_steps terms. A term equal to zero means x1 is in the null set.
template <RealScalar R>
OrbitReport<R> classify_orbit(const RecurrenceParams<R>& p, const R& x1, int max_steps, int target_digits = 0) {
  using std::abs;
  require_uniform_precision("classify_orbit", x1, p.s);
  const R& theta = p.attracting();
  const R& theta_prime = p.repelling();
  if (x1 == R(0)) throw Error(ErrorKind::null_set, "orbit starts at 0");
  if (max_steps < 1) throw Error(ErrorKind::domain, "max_steps must be positive");
  const int target = target_digits > 0 ? target_digits : static_cast<int>(working_digits<R>()) - 5;
  const R close = pow10<R>(-target);

  OrbitReport<R> rep;
  if (x1 < theta) {
    rep.start = OrbitStart::below_theta;
  } else if (x1 == theta) {
    rep.start = OrbitStart::at_theta;
  } else if (x1 < theta_prime) {
    rep.start = OrbitStart::between;
  } else if (x1 == theta_prime) {
    rep.start = OrbitStart::at_theta_prime;
  } else if (x1 < R(0)) {
    rep.start = OrbitStart::above_theta_prime;
  } else {
    rep.start = OrbitStart::positive;
  }

  rep.orbit.push_back(x1);
  for (int j = 1; j < max_steps; ++j) {
    const R& prev = rep.orbit.back();
    if (abs(prev - theta) < close) break;
    R next = phi(p, prev);
    if (next == R(0)) {
      throw Error(ErrorKind::null_set, "orbit reaches 0 at step " + std::to_string(j + 1));
    }
    rep.orbit.push_back(std::move(next));
  }
  rep.converged = abs(rep.orbit.back() - theta) < close;

  const int n = static_cast<int>(rep.orbit.size());
  for (int j = 0; j < n; ++j) {
    if (R(0) < rep.orbit[j]) {
      rep.positive_step = j + 1;
      break;
    }
  }
  // Trend over orbit[first..last), 0-based.
  auto trend = [&](int first, int last) {
    int result = 0;
    for (int j = first + 1; j < last; ++j) {
      const int step = sign_of<R>(rep.orbit[j] - rep.orbit[j - 1]);
      if (result == 0) {
        result = step;
      } else if (step != result) {
        return 2;
      }
    }
    return result;
  };
  if (rep.positive_step) {
    const int m = *rep.positive_step;
    rep.initial_trend = trend(0, m - 1);
    rep.final_trend = trend(m, n);
  } else {
    rep.initial_trend = trend(0, n);
  }
  rep.steps = static_cast<int>(rep.orbit.size());
  return rep;
}

inline const char* trend_name(int trend) {
  switch (trend) {
    case 1: return "increasing";
    case -1: return "decreasing";
    case 0: return "constant";
    default: return "not monotone";
  }
}

}  // namespace dlap

#endif  // DLAP_RECURRENCE_HPP
