#ifndef DLAP_SHEARER_HPP
#define DLAP_SHEARER_HPP

// Greedy caterpillar sequences whose back-node outputs at lambda stay just
// below the repelling fixed point, and the diagnostics that measure how fast
// their spectral radii approach lambda.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dlap/diagonalize.hpp"
#include "dlap/error.hpp"
#include "dlap/limits.hpp"
#include "dlap/recurrence.hpp"
#include "dlap/scalar.hpp"
#include "dlap/tree.hpp"

namespace dlap {

template <RealScalar R>
struct ShearerRun {
  R lambda;
  R s;
  Caterpillar counts;
  std::vector<R> b_trace;
  std::vector<R> beta_trace;
  RecurrenceParams<R> params;
  // Worst-case growth of a unit rounding error through the recurrence,
  // as log10 of the factor.
  double amplification_log10 = 0;

  std::size_t k() const { return counts.backbone(); }
};

namespace detail {

/// Floor of `x` known to within `err`. Refuses to guess when an integer lies
/// inside the uncertainty: the caller must retry at higher precision.
template <RealScalar R>
std::int64_t certified_floor(const R& x, const R& err, int step) {
  using std::floor;
  const int digits = static_cast<int>(working_digits<R>());
  const R below = x - floor(x);
  const R above = R(1) - below;
  const R dist = below < above ? below : above;
  const R slack = std::max(R(R(4) * err), pow10<R>(10 - digits));
  if (!(slack < dist)) {
    const int extra = dist == R(0) ? 40 : 20 + std::max(0, static_cast<int>(std::ceil(log10_abs(slack) - log10_abs(dist))));
    throw Error(ErrorKind::precision,
                "count r_" + std::to_string(step) + " is too close to an integer boundary at " +
                    std::to_string(digits) + " digits",
                static_cast<unsigned>(digits + extra));
  }
  return floor_to_int64(x);
}

}  // namespace detail

template <RealScalar R>
std::vector<R> beta_sequence(const ShearerRun<R>& run);

/// Shearer caterpillar T_k for (lambda, s): each count is the largest r that
/// keeps the back-node output below theta'.
template <RealScalar R>
ShearerRun<R> generate(const R& lambda, const R& s, int k) {
  using std::abs;
  require_uniform_precision("generate", lambda, s);
  if (!(R(1) < lambda)) throw Error(ErrorKind::domain, "lambda must exceed 1");
  if (s == R(0)) throw Error(ErrorKind::degenerate, "s = 0 gives delta = 0");
  if (k < 2) throw Error(ErrorKind::domain, "k must be at least 2");
  auto p = params(s, lambda);
  if (!p.adapted) {
    throw Error(ErrorKind::not_adapted, "s = " + format_real(s) + " is not adapted to lambda = " + format_real(lambda));
  }
  const R& tp = p.repelling();
  const R& delta = p.delta;
  const R s2 = s * s;
  const R u = R(8) * unit_roundoff<R>();
  const R tp_err = u * (abs(p.alpha) + abs(tp));

  std::vector<std::int64_t> counts(k);
  std::vector<R> b(k);

  R x = (tp + lambda - R(1)) / delta;
  R x_err = (tp_err + u * lambda) / delta + u * abs(x);
  counts[0] = detail::certified_floor(x, x_err, 1);
  b[0] = R(1) - lambda + R(counts[0]) * delta;
  R b_err = u * (lambda + R(counts[0]) * delta);

  for (int j = 1; j < k; ++j) {
    const bool last = j + 1 == k;
    const R& prev = b[j - 1];
    const R gain = s2 / (prev * prev);
    const R phi_val = phi(p, prev);
    const R phi_err = u * (abs(p.alpha) + s2 / abs(prev)) + gain * b_err;
    x = (tp - phi_val + (last ? s2 : R(0))) / delta;
    x_err = (tp_err + phi_err) / delta + u * abs(x);
    counts[j] = detail::certified_floor(x, x_err, j + 1);
    b[j] = phi_val + R(counts[j]) * delta - (last ? s2 : R(0));
    b_err = phi_err + u * (R(counts[j]) * delta + abs(b[j]));
  }

  for (int j = 0; j < k; ++j) {
    if (counts[j] < 0) {
      throw Error(ErrorKind::consistency, "negative count r_" + std::to_string(j + 1));
    }
    if (!(tp - delta < b[j]) || !(b[j] < tp)) {
      throw Error(ErrorKind::consistency, "b_" + std::to_string(j + 1) + " left the window (theta' - delta, theta')");
    }
  }

  ShearerRun<R> run{lambda, s, Caterpillar(std::move(counts)), std::move(b), {}, std::move(p), 0};
  run.amplification_log10 = std::max(0.0, log10_abs(R(b_err / u)));
  run.beta_trace = beta_sequence(run);
  return run;
}

/// c_j = (1 + r_j s^2/(lambda-1)^2) / (-b_j), the forcing term of the beta recurrence.
template <RealScalar R>
R beta_forcing(const ShearerRun<R>& run, std::size_t j) {
  const R lm1 = run.lambda - R(1);
  const R s2 = run.s * run.s;
  return (R(1) + R(run.counts.counts[j]) * s2 / (lm1 * lm1)) / -run.b_trace[j];
}

namespace detail {

template <RealScalar R>
void require_negative_outputs(const ShearerRun<R>& run) {
  for (std::size_t j = 0; j < run.b_trace.size(); ++j) {
    if (!(run.b_trace[j] < R(0))) {
      throw Error(ErrorKind::invalid_run, "b_" + std::to_string(j + 1) + " is not negative");
    }
  }
}

}  // namespace detail

/// beta_j = b_j'(0) / (-b_j(0)) by the first-order recurrence
/// beta_j = c_j + s^2 / (b_{j-1} b_j) * beta_{j-1}.
template <RealScalar R>
std::vector<R> beta_sequence(const ShearerRun<R>& run) {
  detail::require_negative_outputs(run);
  const std::size_t k = run.k();
  const R s2 = run.s * run.s;
  const R lm1 = run.lambda - R(1);
  const auto& r = run.counts.counts;
  std::vector<R> beta(k);
  beta[0] = (R(1) + R(r[0]) * s2 / (lm1 * lm1)) / (lm1 - R(r[0]) * run.params.delta);
  for (std::size_t j = 1; j < k; ++j) {
    const R coupling = s2 / (run.b_trace[j - 1] * run.b_trace[j]);
    beta[j] = beta_forcing(run, j) + coupling * beta[j - 1];
  }
  return beta;
}

/// The same quantity summed explicitly: sum_i c_i * prod_{m>i} s^2/(b_{m-1} b_m).
template <RealScalar R>
std::vector<R> beta_explicit(const ShearerRun<R>& run) {
  detail::require_negative_outputs(run);
  const std::size_t k = run.k();
  const R s2 = run.s * run.s;
  std::vector<R> forcing(k);
  for (std::size_t i = 0; i < k; ++i) forcing[i] = beta_forcing(run, i);
  std::vector<R> beta(k);
  for (std::size_t j = 0; j < k; ++j) {
    R sum(0);
    for (std::size_t i = 0; i <= j; ++i) {
      R term = forcing[i];
      for (std::size_t m = i + 1; m <= j; ++m) term *= s2 / (run.b_trace[m - 1] * run.b_trace[m]);
      sum += term;
    }
    beta[j] = sum;
  }
  return beta;
}

/// Lower bound on beta_k when F(s, lambda) > 0, with gap = delta - theta':
/// 1/gap + (k-2) s^2/gap^3 + s^2 beta_1/gap^2.
template <RealScalar R>
R beta_lower_bound(const ShearerRun<R>& run) {
  const R gap = run.params.delta - run.params.repelling();
  const R s2 = run.s * run.s;
  return R(1) / gap + R(static_cast<double>(run.k()) - 2) * s2 / (gap * gap * gap) +
         s2 * run.beta_trace[0] / (gap * gap);
}

namespace detail {

// Walks b_1(eps)..b_j(eps) (1-based j) with the end-node formula at j = k.
// `on_nonnegative` decides what happens when an earlier output is >= 0.
template <RealScalar R, class OnNonnegative>
R shifted_walk(const ShearerRun<R>& run, std::size_t j, const R& eps, OnNonnegative&& on_nonnegative) {
  const R mu = run.lambda - eps;
  const R s2 = run.s * run.s;
  const R delta = s2 * mu / (mu - R(1));
  const R alpha = R(1) + s2 - mu;
  const std::size_t k = run.k();
  const auto& r = run.counts.counts;
  R b = R(1) - mu + R(r[0]) * delta;
  for (std::size_t i = 1; i < j; ++i) {
    if (!(b < R(0))) return on_nonnegative(b);
    b = alpha - s2 / b + R(r[i]) * delta;
    if (i + 1 == k) b -= s2;
  }
  return b;
}

}  // namespace detail

/// b_j(eps): the output of back node j (1-based) probing at lambda - eps.
template <RealScalar R>
R shifted_output(const ShearerRun<R>& run, std::size_t j, const R& eps) {
  return detail::shifted_walk(run, j, eps, [](const R& b) -> R {
    if (b == R(0)) throw Error(ErrorKind::pole, "an earlier back-node output vanishes at this shift");
    throw Error(ErrorKind::invalid_run, "an earlier back-node output is positive at this shift");
  });
}

/// Sign of b_j(eps). Past the previous root (an earlier output is
/// nonnegative) the sign counts as positive.
template <RealScalar R>
int shifted_output_sign(const ShearerRun<R>& run, std::size_t j, const R& eps) {
  bool past = false;
  R b = detail::shifted_walk(run, j, eps, [&](const R& v) {
    past = true;
    return v;
  });
  return past ? 1 : sign_of(b);
}

template <RealScalar R>
struct EpsilonBound {
  int k = 0;
  R epsilon;  // midpoint of the final bracket
  R low;
  R high;
  std::vector<R> chain;  // eps_1 .. eps_k
  bool certified = false;
};

/// Nested roots: eps_0 = lambda - 1 and eps_j is the root of b_j(eps) in
/// (0, eps_{j-1}), where b_j increases from b_j(0) < 0.
template <RealScalar R>
EpsilonBound<R> epsilon_k(const ShearerRun<R>& run, int target_digits = 0) {
  detail::require_negative_outputs(run);
  const int digits = static_cast<int>(working_digits<R>());
  const int target = target_digits > 0 ? target_digits : digits - 10;
  const R rel = pow10<R>(-target);
  const int max_iters = iterations_for_digits(R(run.lambda - R(1)), digits + 10);
  EpsilonBound<R> out;
  out.k = static_cast<int>(run.k());
  out.certified = true;
  R upper = run.lambda - R(1);
  for (std::size_t j = 1; j <= run.k(); ++j) {
    auto sign = [&](const R& eps) { return shifted_output_sign(run, j, eps); };
    auto br = bisect_by_sign(sign, R(0), upper, max_iters, std::optional<R>(rel));
    if (br.high - br.low > rel * br.high && !br.exact) out.certified = false;
    out.chain.push_back(br.midpoint());
    if (j == run.k()) {
      out.low = br.low;
      out.high = br.high;
      out.epsilon = br.midpoint();
    }
    upper = br.high;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parameter choice and precision-adaptive drivers.

struct ParameterChoice {
  enum class Kind { literal, half_star, star };
  Kind kind = Kind::half_star;
  std::string literal;

  /// "auto" and "half-star" pick s*(lambda)/2, "star" picks s*(lambda).
  static ParameterChoice parse(std::string_view text) {
    if (text == "auto" || text == "half-star") return {Kind::half_star, {}};
    if (text == "star") return {Kind::star, {}};
    (void)parse_real<double>(text);
    return {Kind::literal, std::string(text)};
  }

  std::string describe() const {
    switch (kind) {
      case Kind::literal: return literal;
      case Kind::half_star: return "s*/2";
      case Kind::star: return "s*";
    }
    return "?";
  }

  template <RealScalar R>
  R resolve(const R& lambda) const {
    switch (kind) {
      case Kind::literal: return parse_real<R>(literal);
      case Kind::half_star: return s_star(lambda).value / R(2);
      case Kind::star: return s_star(lambda).value;
    }
    throw Error(ErrorKind::domain, "unknown parameter choice");
  }
};

inline constexpr unsigned kMaxAdaptiveDigits = 20000;

/// Runs `fn` inside a PrecisionScope, restarting it at the requested
/// precision whenever it throws a precision error that names one.
template <class Fn>
auto with_adaptive_precision(unsigned digits, Fn&& fn, unsigned max_digits = kMaxAdaptiveDigits) {
  while (true) {
    try {
      PrecisionScope scope(digits);
      return fn(digits);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::precision || e.required_digits() <= digits || e.required_digits() > max_digits) {
        throw;
      }
      digits = e.required_digits();
    }
  }
}

/// Throws a precision error unless `digits_needed` fits the working precision.
inline void require_digits(int digits_needed, const std::string& why) {
  const int have = static_cast<int>(working_digits<Scalar>());
  if (digits_needed > have) {
    throw Error(ErrorKind::precision, why + ": needs " + std::to_string(digits_needed) + " digits",
                static_cast<unsigned>(digits_needed));
  }
}

struct ReportRow {
  int k = 0;
  std::string s;  // resolved s at the row precision
  Caterpillar counts;
  std::string rho;
  std::string error;
  std::string rho_full;
  std::string error_full;
  double error_value = 0;
  int iterations = 0;
  bool exact_hit = false;
  unsigned digits = 0;
};

/// Digits beyond the error magnitude kept by the report, so the printed
/// error carries this many significant digits.
inline constexpr int kReportGuardDigits = 30;

/// Generates T_k for each k and brackets rho with A = 1, B = lambda. The
/// precision rises per row until both the counts and the error are resolved.
inline std::vector<ReportRow> convergence_report(const std::string& lambda_text, const ParameterChoice& choice,
                                                 const std::vector<int>& ks, unsigned digits, int print_digits = 15) {
  std::vector<ReportRow> rows;
  for (int k : ks) {
    rows.push_back(with_adaptive_precision(digits, [&](unsigned P) {
      const Scalar lambda = parse_real<Scalar>(lambda_text);
      const Scalar s = choice.resolve(lambda);
      const auto run = generate(lambda, s, k);
      const int scale = static_cast<int>(std::ceil(log10_abs(lambda)));
      require_digits(static_cast<int>(std::ceil(run.amplification_log10)) + scale + kReportGuardDigits,
                     "error growth of T_" + std::to_string(k));
      const int resolved = static_cast<int>(P) - scale - 3;
      const auto est = approximate_radius(run.counts, s, Scalar(1), lambda,
                                          iterations_for_digits(Scalar(lambda - Scalar(1)), resolved));
      const Scalar rho = est.midpoint();
      const Scalar error = lambda - rho;
      if (error > Scalar(0)) {
        require_digits(static_cast<int>(std::ceil(-log10_abs(error))) + scale + kReportGuardDigits,
                       "resolving lambda - rho for T_" + std::to_string(k));
      }
      ReportRow row;
      row.k = k;
      row.s = format_real(s, 20);
      row.counts = run.counts;
      row.rho = format_real(rho, print_digits);
      row.error = format_real(error, print_digits);
      row.rho_full = format_real(rho, static_cast<int>(P));
      row.error_full = format_real(error, 40);
      row.error_value = std::strtod(row.error_full.c_str(), nullptr);
      row.iterations = est.iterations;
      row.exact_hit = est.exact_hit;
      row.digits = P;
      return row;
    }));
  }
  return rows;
}

}  // namespace dlap

#endif  // DLAP_SHEARER_HPP
