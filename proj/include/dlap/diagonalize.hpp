#ifndef DLAP_DIAGONALIZE_HPP
#define DLAP_DIAGONALIZE_HPP

// Inertia of M_T(s) + xI by congruence along a bottom-up order, with a
// closed-form fast path for caterpillars and bisection for the spectral radius.

#include <cstdint>
#include <optional>
#include <vector>

#include "dlap/error.hpp"
#include "dlap/scalar.hpp"
#include "dlap/tree.hpp"

namespace dlap {

struct Inertia {
  std::int64_t positive = 0;
  std::int64_t negative = 0;
  std::int64_t zero = 0;

  std::int64_t total() const { return positive + negative + zero; }
  friend bool operator==(const Inertia&, const Inertia&) = default;
};

/// Eigenvalue counts relative to a point c.
struct EigenCount {
  std::int64_t greater = 0;
  std::int64_t smaller = 0;
  std::int64_t equal = 0;
  friend bool operator==(const EigenCount&, const EigenCount&) = default;
};

inline EigenCount to_count(const Inertia& in) { return {in.positive, in.negative, in.zero}; }

/// For a general tree `outputs` has one entry per vertex id. For the
/// caterpillar fast path it holds the back-node outputs only, while
/// `inertia` still counts every vertex.
template <RealScalar R>
struct DiagOutcome {
  std::vector<R> outputs;
  Inertia inertia;
};

template <RealScalar R>
void tally(Inertia& in, const R& d, std::int64_t times = 1) {
  if (times == 0) return;
  const int sg = sign_of(d);
  if (sg > 0) {
    in.positive += times;
  } else if (sg < 0) {
    in.negative += times;
  } else {
    in.zero += times;
  }
}

template <RealScalar R>
DiagOutcome<R> diagonalize_tree(const Tree& t, const R& s, const R& x) {
  require_uniform_precision("diagonalize_tree", s, x);
  const int n = t.size();
  const R s2 = s * s;
  std::vector<R> d(n);
  for (int v = 0; v < n; ++v) d[v] = R(1) + s2 * R(t.degree(v) - 1) + x;
  // With s = 0 every edge weight vanishes and M + xI is already diagonal.
  if (s != R(0)) {
    std::vector<char> cut(n, 0);  // edge to the parent removed
    for (int v : t.order()) {
      if (t.child_count(v) == 0) continue;
      int zero_child = -1;
      for (int c : t.children(v)) {
        if (!cut[c] && d[c] == R(0)) {
          zero_child = c;
          break;
        }
      }
      if (zero_child < 0) {
        for (int c : t.children(v)) {
          if (!cut[c]) d[v] -= s2 / d[c];
        }
      } else {
        d[v] = -s2 / R(2);
        d[zero_child] = R(2);
        cut[v] = 1;
      }
    }
  }
  DiagOutcome<R> out{std::move(d), {}};
  for (const auto& value : out.outputs) tally(out.inertia, value);
  return out;
}

template <RealScalar R>
EigenCount count_eigenvalues(const Tree& t, const R& s, const R& c) {
  return to_count(diagonalize_tree(t, s, R(-c)).inertia);
}

/// Diagonalize on a caterpillar without materializing its leaves. All r_j
/// leaves of back node j share the value 1 + x and are folded in at once.
template <RealScalar R>
DiagOutcome<R> diagonalize_caterpillar(const Caterpillar& cat, const R& s, const R& x) {
  require_uniform_precision("diagonalize_caterpillar", s, x);
  cat.validate();
  const std::size_t k = cat.backbone();
  const R s2 = s * s;
  const R leaf = R(1) + x;
  DiagOutcome<R> out;
  out.outputs.resize(k);
  auto& in = out.inertia;
  bool prev_cut = false;
  for (std::size_t j = 0; j < k; ++j) {
    const std::int64_t r = cat.counts[j];
    R d = R(1) + s2 * R(cat.degree(j) - 1) + x;
    if (s == R(0)) {
      tally(in, leaf, r);
      out.outputs[j] = d;
      continue;
    }
    const bool has_prev = j > 0 && !prev_cut;
    const bool leaf_zero = r > 0 && leaf == R(0);
    const bool prev_zero = has_prev && out.outputs[j - 1] == R(0);
    if (!leaf_zero && !prev_zero) {
      if (r > 0) d -= R(r) * s2 / leaf;
      if (has_prev) d -= s2 / out.outputs[j - 1];
      tally(in, leaf, r);
      prev_cut = false;
    } else {
      // Same child choice as diagonalize_tree: the back node has the
      // smaller id, so it is preferred over its leaves.
      d = -s2 / R(2);
      if (prev_zero) {
        out.outputs[j - 1] = R(2);
        tally(in, leaf, r);
      } else {
        in.positive += 1;
        in.zero += r - 1;
      }
      prev_cut = j + 1 < k;
    }
    out.outputs[j] = d;
  }
  for (const auto& b : out.outputs) tally(in, b);
  return out;
}

template <RealScalar R>
EigenCount count_eigenvalues(const Caterpillar& cat, const R& s, const R& c) {
  return to_count(diagonalize_caterpillar(cat, s, R(-c)).inertia);
}

/// Back-node outputs b_1..b_k of Diagonalize(M_T(s), -lambda) in the
/// recurrence form, with delta = s^2 lambda / (lambda - 1).
template <RealScalar R>
std::vector<R> caterpillar_outputs(const Caterpillar& cat, const R& s, const R& lambda) {
  require_uniform_precision("caterpillar_outputs", s, lambda);
  cat.validate();
  if (lambda == R(1)) throw Error(ErrorKind::pole, "lambda = 1 is a pole of the leaf contribution");
  const std::size_t k = cat.backbone();
  const R s2 = s * s;
  const R delta = s2 * lambda / (lambda - R(1));
  const R alpha = R(1) + s2 - lambda;
  std::vector<R> b(k);
  b[0] = R(1) - lambda + R(cat.counts[0]) * delta;
  for (std::size_t j = 1; j < k; ++j) {
    if (b[j - 1] == R(0)) {
      throw Error(ErrorKind::zero_child, "back node " + std::to_string(j) + " output is zero");
    }
    b[j] = alpha - s2 / b[j - 1] + R(cat.counts[j]) * delta;
  }
  b[k - 1] -= s2;
  return b;
}

/// Bracket [low, high] for rho(M_T(s)) after bisection.
template <RealScalar R>
struct RadiusEstimate {
  R low;
  R high;
  int iterations = 0;
  int early_breaks = 0;
  bool exact_hit = false;

  R midpoint() const { return (low + high) / R(2); }
  R width() const { return high - low; }
};

namespace detail {

// Probe at mu: -1 when every output is negative (rho < mu), +1 when rho > mu,
// 0 when mu is the largest eigenvalue. Stops at the first nonnegative output.
template <RealScalar R>
int probe_radius(const Tree& t, const R& s, const R& mu, bool& early) {
  early = false;
  const int n = t.size();
  const R s2 = s * s;
  const R x = -mu;
  std::vector<R> d(n);
  for (int v = 0; v < n; ++v) d[v] = R(1) + s2 * R(t.degree(v) - 1) + x;
  bool zero_seen = false;
  if (s == R(0)) {
    for (const auto& v : d) {
      if (!(v < R(0))) {
        zero_seen = true;
        break;
      }
    }
  } else {
    for (int v : t.order()) {
      if (t.child_count(v) != 0) {
        for (int c : t.children(v)) {
          if (d[c] == R(0)) {
            zero_seen = true;
            break;
          }
          d[v] -= s2 / d[c];
        }
      }
      if (zero_seen) break;
      if (!(d[v] < R(0))) {
        if (R(0) < d[v]) {
          early = true;
          return 1;
        }
        zero_seen = true;
        break;
      }
    }
  }
  if (!zero_seen) return -1;
  const auto counts = count_eigenvalues(t, s, mu);
  if (counts.greater > 0) {
    early = true;
    return 1;
  }
  return counts.equal > 0 ? 0 : -1;
}

template <RealScalar R>
int probe_radius(const Caterpillar& cat, const R& s, const R& mu, bool& early) {
  early = false;
  if (s != R(0) && mu != R(1)) {
    const std::size_t k = cat.backbone();
    const R s2 = s * s;
    const R delta = s2 * mu / (mu - R(1));
    const R alpha = R(1) + s2 - mu;
    const R leaf = R(1) - mu;
    // Leaves are outputs too; for mu < 1 they are positive.
    if (R(0) < leaf && cat.vertex_count() > static_cast<std::int64_t>(k)) {
      early = true;
      return 1;
    }
    R b = leaf + R(cat.counts[0]) * delta;
    bool zero_seen = false;
    for (std::size_t j = 0;; ++j) {
      if (!(b < R(0))) {
        if (R(0) < b) {
          early = true;
          return 1;
        }
        zero_seen = true;
        break;
      }
      if (j + 1 == k) break;
      b = alpha - s2 / b + R(cat.counts[j + 1]) * delta;
      if (j + 2 == k) b -= s2;
    }
    if (!zero_seen) return -1;
  }
  const auto counts = count_eigenvalues(cat, s, mu);
  if (counts.greater > 0) {
    early = true;
    return 1;
  }
  return counts.equal > 0 ? 0 : -1;
}

}  // namespace detail

/// Gershgorin-based bracket with A < rho <= B: the largest eigenvalue is at
/// least the largest diagonal entry and at most the largest row disc.
template <RealScalar R>
std::pair<R, R> default_bracket(const Tree& t, const R& s) {
  using std::abs;
  const R s2 = s * s;
  R diag_max(1), disc_max(1);
  for (int v = 0; v < t.size(); ++v) {
    const R deg(t.degree(v));
    const R m = R(1) + s2 * (deg - R(1));
    if (diag_max < m) diag_max = m;
    const R disc = m + abs(s) * deg;
    if (disc_max < disc) disc_max = disc;
  }
  return {diag_max - R(1), disc_max + R(1)};
}

template <RealScalar R>
std::pair<R, R> default_bracket(const Caterpillar& cat, const R& s) {
  using std::abs;
  const R s2 = s * s;
  R diag_max(1), disc_max(1);
  for (std::size_t j = 0; j < cat.backbone(); ++j) {
    const R deg(cat.degree(j));
    const R m = R(1) + s2 * (deg - R(1));
    if (diag_max < m) diag_max = m;
    const R disc = m + abs(s) * deg;
    if (disc_max < disc) disc_max = disc;
  }
  return {diag_max - R(1), disc_max + R(1)};
}

/// Bisection for rho(M_T(s)) on [low, high]. Each probe diagonalizes at the
/// midpoint; any nonnegative output raises the lower end. A probe landing
/// exactly on rho collapses the bracket to that point.
template <RealScalar R, class Shape>
RadiusEstimate<R> approximate_radius(const Shape& shape, const R& s, const R& low, const R& high,
                                     int iterations) {
  require_uniform_precision("approximate_radius", s, low, high);
  if (!(low < high)) throw Error(ErrorKind::domain, "radius bracket requires low < high");
  if (iterations < 0) throw Error(ErrorKind::domain, "negative iteration count");
  if (count_eigenvalues(shape, s, low).greater == 0) {
    throw Error(ErrorKind::bracketing, "spectral radius is not above the lower end " + format_real(low));
  }
  if (count_eigenvalues(shape, s, high).greater != 0) {
    throw Error(ErrorKind::bracketing, "spectral radius exceeds the upper end " + format_real(high));
  }
  RadiusEstimate<R> est{low, high};
  for (int it = 0; it < iterations; ++it) {
    R mid = est.midpoint();
    bool early = false;
    const int side = detail::probe_radius(shape, s, mid, early);
    ++est.iterations;
    if (early) ++est.early_breaks;
    if (side == 0) {
      est.low = mid;
      est.high = mid;
      est.exact_hit = true;
      break;
    }
    if (side > 0) {
      est.low = std::move(mid);
    } else {
      est.high = std::move(mid);
    }
  }
  return est;
}

/// Radius to `target_digits` decimal places using the Gershgorin bracket.
template <RealScalar R, class Shape>
RadiusEstimate<R> spectral_radius(const Shape& shape, const R& s, int target_digits) {
  auto [a, b] = default_bracket(shape, s);
  return approximate_radius(shape, s, a, b, iterations_for_digits(R(b - a), target_digits));
}

}  // namespace dlap

#endif  // DLAP_DIAGONALIZE_HPP
