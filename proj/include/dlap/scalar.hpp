#ifndef DLAP_SCALAR_HPP
#define DLAP_SCALAR_HPP

// Precision-configurable reals and monotone root bracketing.
//
// `Scalar` is an MPFR float whose precision (in decimal digits) is taken
// from the process-wide default at construction time. A PrecisionScope
// sets that default for the duration of one computation; every Scalar
// created inside it shares the same precision. Mixing values from
// different scopes is detected by `require_uniform_precision` at the
// entry of each public operation.

#include <boost/multiprecision/mpfr.hpp>

#include <mpfr.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "dlap/error.hpp"

namespace dlap {

using Scalar = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                             boost::multiprecision::et_off>;

inline constexpr unsigned kMinDigits = 16;
inline constexpr unsigned kDefaultDigits = 50;
inline constexpr const char* kDigitsEnvVar = "DLAP_DIGITS";

template <class T>
struct scalar_traits;

template <>
struct scalar_traits<double> {
  static constexpr bool variable_precision = false;
  static unsigned working_digits() noexcept { return std::numeric_limits<double>::digits10; }
  static unsigned digits_of(double) noexcept { return working_digits(); }

  static double parse(std::string_view text) {
    double value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw Error(ErrorKind::parse, "not a real number: '" + std::string(text) + "'");
    }
    return value;
  }

  static std::string format(double x, int significant) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", significant, x);
    return buf;
  }
};

template <>
struct scalar_traits<Scalar> {
  static constexpr bool variable_precision = true;
  static unsigned working_digits() { return Scalar::default_precision(); }
  static unsigned digits_of(const Scalar& x) { return x.precision(); }

  static Scalar parse(std::string_view text) {
    // Accept plain decimal / scientific literals only; MPFR would also take
    // "inf", "nan" and hex forms, which have no meaning here.
    std::size_t i = 0;
    const auto n = text.size();
    auto digits = [&] {
      std::size_t start = i;
      while (i < n && text[i] >= '0' && text[i] <= '9') ++i;
      return i - start;
    };
    if (i < n && (text[i] == '+' || text[i] == '-')) ++i;
    std::size_t mantissa = digits();
    if (i < n && text[i] == '.') {
      ++i;
      mantissa += digits();
    }
    bool ok = mantissa > 0;
    if (ok && i < n && (text[i] == 'e' || text[i] == 'E')) {
      ++i;
      if (i < n && (text[i] == '+' || text[i] == '-')) ++i;
      ok = digits() > 0;
    }
    if (!ok || i != n) {
      throw Error(ErrorKind::parse, "not a real number: '" + std::string(text) + "'");
    }
    return Scalar(std::string(text));
  }

  /// Round-half-even to `significant` digits, %g style.
  static std::string format(const Scalar& x, int significant) {
    char* raw = nullptr;
    mpfr_asprintf(&raw, "%.*RNg", std::max(significant, 1), x.backend().data());
    std::string out = raw ? raw : "";
    mpfr_free_str(raw);
    return out;
  }
};

template <class T>
concept RealScalar = requires(const T& a, const T& b) {
  { a + b } -> std::convertible_to<T>;
  { a - b } -> std::convertible_to<T>;
  { a * b } -> std::convertible_to<T>;
  { a / b } -> std::convertible_to<T>;
  { a < b } -> std::convertible_to<bool>;
  { scalar_traits<T>::working_digits() } -> std::convertible_to<unsigned>;
  { scalar_traits<T>::parse(std::string_view{}) } -> std::same_as<T>;
};

template <RealScalar R>
R parse_real(std::string_view text) {
  return scalar_traits<R>::parse(text);
}

template <RealScalar R>
std::string format_real(const R& x, int significant = 15) {
  return scalar_traits<R>::format(x, significant);
}

template <RealScalar R>
unsigned working_digits() {
  return scalar_traits<R>::working_digits();
}

/// Throws a precision error if any argument was created at a precision other
/// than the current working precision.
template <RealScalar R, class... Rs>
void require_uniform_precision(const char* where, const R& first, const Rs&... rest) {
  if constexpr (scalar_traits<R>::variable_precision) {
    const unsigned want = scalar_traits<R>::working_digits();
    for (unsigned got : {scalar_traits<R>::digits_of(first), scalar_traits<R>::digits_of(rest)...}) {
      if (got != want) {
        throw Error(ErrorKind::precision,
                    std::string(where) + ": operand has " + std::to_string(got) +
                        " digits but the working precision is " + std::to_string(want));
      }
    }
  }
}

template <RealScalar R>
int sign_of(const R& x) {
  return (R(0) < x) - (x < R(0));
}

template <RealScalar R>
R pow10(int exponent) {
  using std::pow;
  return pow(R(10), exponent);
}

/// Relative spacing of the working precision, 10^-digits.
template <RealScalar R>
R unit_roundoff() {
  return pow10<R>(-static_cast<int>(working_digits<R>()));
}

template <RealScalar R>
double to_double(const R& x) {
  if constexpr (std::same_as<R, double>) {
    return x;
  } else {
    return x.template convert_to<double>();
  }
}

/// log10 |x| as a double; usable far beyond the double exponent range.
template <RealScalar R>
double log10_abs(const R& x) {
  using std::abs;
  using std::log10;
  return to_double(R(log10(R(abs(x)))));
}

template <RealScalar R>
std::int64_t floor_to_int64(const R& x) {
  using std::floor;
  const R f = floor(x);
  if (!(R(static_cast<double>(std::numeric_limits<std::int64_t>::min())) < f) ||
      !(f < R(static_cast<double>(std::numeric_limits<std::int64_t>::max())))) {
    throw Error(ErrorKind::domain, "value does not fit a 64-bit integer");
  }
  if constexpr (std::same_as<R, double>) {
    return static_cast<std::int64_t>(f);
  } else {
    return f.template convert_to<std::int64_t>();
  }
}

/// Checked square root: negative radicands are errors, never NaN.
template <RealScalar R>
R checked_sqrt(const R& x, const char* what) {
  using std::sqrt;
  if (x < R(0)) {
    throw Error(ErrorKind::domain, std::string("square root of a negative value in ") + what);
  }
  return sqrt(x);
}

struct PrecisionContext {
  unsigned digits = kDefaultDigits;
  unsigned default_bisection_iters = 200;

  void validate() const {
    if (digits < kMinDigits) {
      throw Error(ErrorKind::precision,
                  "working precision must be at least " + std::to_string(kMinDigits) + " digits",
                  kMinDigits);
    }
    if (default_bisection_iters == 0) {
      throw Error(ErrorKind::domain, "bisection iteration count must be positive");
    }
  }

  /// Digits from $DLAP_DIGITS when set, otherwise the default.
  static PrecisionContext from_environment() {
    PrecisionContext ctx;
    if (const char* env = std::getenv(kDigitsEnvVar); env && *env) {
      unsigned value = 0;
      std::string_view text(env);
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
      if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw Error(ErrorKind::parse, std::string(kDigitsEnvVar) + " is not a positive integer");
      }
      ctx.digits = value;
    }
    ctx.validate();
    return ctx;
  }
};

/// Sets the working precision of `Scalar` until destruction.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned digits) : saved_(Scalar::default_precision()) {
    if (digits < kMinDigits) {
      throw Error(ErrorKind::precision, "precision below " + std::to_string(kMinDigits) + " digits",
                  kMinDigits);
    }
    Scalar::default_precision(digits);
  }
  explicit PrecisionScope(const PrecisionContext& ctx) : PrecisionScope(ctx.digits) {}

  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

  ~PrecisionScope() { Scalar::default_precision(saved_); }

  unsigned digits() const { return Scalar::default_precision(); }

 private:
  unsigned saved_;
};

/// Iterations needed to shrink `width` below 10^-target_digits by halving.
template <RealScalar R>
int iterations_for_digits(const R& width, int target_digits) {
  const double w = static_cast<double>(width);
  if (!(w > 0)) throw Error(ErrorKind::domain, "bisection width must be positive");
  const double n = std::ceil(std::log2(w) + target_digits * std::log2(10.0));
  return std::max(1, static_cast<int>(n));
}

template <RealScalar R>
struct Bracket {
  R low;
  R high;
  int iterations = 0;
  bool exact = false;  // the probe landed on a point where the sign is zero

  R midpoint() const { return (low + high) / R(2); }
  R width() const { return high - low; }
};

/// Bisection driven by a sign oracle. `sign_at(m)` must return a negative
/// value on the low side of the root, positive on the high side and zero on
/// the root itself. Stops after `max_iters` halvings, or earlier once the
/// bracket width is at most `relative_tol * high` when that is given.
template <RealScalar R, class SignFn>
Bracket<R> bisect_by_sign(SignFn&& sign_at, R low, R high, int max_iters,
                          std::optional<R> relative_tol = std::nullopt) {
  if (!(low < high)) throw Error(ErrorKind::domain, "bisection requires low < high");
  if (max_iters < 0) throw Error(ErrorKind::domain, "negative iteration count");
  Bracket<R> br{std::move(low), std::move(high)};
  for (int it = 0; it < max_iters; ++it) {
    if (relative_tol && br.high - br.low <= *relative_tol * br.high) break;
    R mid = br.midpoint();
    const int sg = sign_at(mid);
    ++br.iterations;
    if (sg == 0) {
      br.low = mid;
      br.high = mid;
      br.exact = true;
      break;
    }
    if (sg < 0) {
      br.low = std::move(mid);
    } else {
      br.high = std::move(mid);
    }
  }
  return br;
}

/// Root of a continuous strictly monotone `f` on [a, b] by `iters` halvings.
/// The returned midpoint is within (b - a) / 2^iters of the root.
template <RealScalar R, class F>
R bisect_monotone_root(F&& f, const R& a, const R& b, int iters) {
  require_uniform_precision("bisect_monotone_root", a, b);
  if (!(a < b)) throw Error(ErrorKind::domain, "bisect_monotone_root requires a < b");
  const int sa = sign_of<R>(f(a));
  const int sb = sign_of<R>(f(b));
  if (sa == 0) return a;
  if (sb == 0) return b;
  if (sa == sb) {
    throw Error(ErrorKind::bracketing, "f(a) and f(b) have the same sign");
  }
  // Orient so the low side reads negative.
  auto sign_fn = [&](const R& m) { return sa < 0 ? sign_of<R>(f(m)) : -sign_of<R>(f(m)); };
  return bisect_by_sign(sign_fn, a, b, iters).midpoint();
}

}  // namespace dlap

#endif  // DLAP_SCALAR_HPP
