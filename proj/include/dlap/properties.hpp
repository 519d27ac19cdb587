#ifndef DLAP_PROPERTIES_HPP
#define DLAP_PROPERTIES_HPP

// Known spectral facts about M_T(s) on trees as executable predicates.

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dlap/dense.hpp"
#include "dlap/diagonalize.hpp"
#include "dlap/error.hpp"
#include "dlap/generators.hpp"
#include "dlap/scalar.hpp"
#include "dlap/tree.hpp"

namespace dlap {

enum class PropertyId {
  zero_eigenvalue,     // 0 is an eigenvalue iff s = +-1
  positive_definite,   // M_T(s) > 0 iff |s| < 1
  radius_above_one,    // rho > 1
  pendant_p2,          // a pendant P2 forces rho > 1 + s^2
  leaf_deletion,       // deleting a leaf strictly lowers rho
  max_degree_bound,    // Delta >= 4: rho > (1+|s|)^2; Delta = 3: rho > 1 + sqrt3 |s| + s^2
  starlike_upper,      // starlike with k arms: rho <= 1 + s^2 (Delta-1) + |s| k / sqrt(k-1)
  star_lower_bound,    // rho >= closed form in Delta, equality iff star
  degree_upper_bound,  // rho <= 1 + s^2 (Delta-1) + |s| rho(A)
  adapted_super,       // |s| > 1, Delta >= 3: s adapted to rho
  adapted_high_degree, // |s| < 1, Delta >= 4: s adapted to rho
  adapted_t144,        // 0 < |s| < 1, Delta = 3, contains T(1,4,4): s adapted to rho
};

inline constexpr std::array kAllProperties = {
    PropertyId::zero_eigenvalue,  PropertyId::positive_definite,  PropertyId::radius_above_one,
    PropertyId::pendant_p2,       PropertyId::leaf_deletion,      PropertyId::max_degree_bound,
    PropertyId::starlike_upper,   PropertyId::star_lower_bound,   PropertyId::degree_upper_bound,
    PropertyId::adapted_super,    PropertyId::adapted_high_degree, PropertyId::adapted_t144,
};

inline const char* to_string(PropertyId id) {
  switch (id) {
    case PropertyId::zero_eigenvalue: return "zero-eigenvalue";
    case PropertyId::positive_definite: return "positive-definite";
    case PropertyId::radius_above_one: return "radius-above-one";
    case PropertyId::pendant_p2: return "pendant-p2";
    case PropertyId::leaf_deletion: return "leaf-deletion";
    case PropertyId::max_degree_bound: return "max-degree-bound";
    case PropertyId::starlike_upper: return "starlike-upper";
    case PropertyId::star_lower_bound: return "star-lower-bound";
    case PropertyId::degree_upper_bound: return "degree-upper-bound";
    case PropertyId::adapted_super: return "adapted-super";
    case PropertyId::adapted_high_degree: return "adapted-high-degree";
    case PropertyId::adapted_t144: return "adapted-t144";
  }
  return "?";
}

inline PropertyId parse_property(std::string_view name) {
  for (auto id : kAllProperties) {
    if (name == to_string(id)) return id;
  }
  throw Error(ErrorKind::parse, "unknown property '" + std::string(name) + "'");
}

enum class Verdict { holds, violated, not_applicable };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::violated: return "violated";
    case Verdict::not_applicable: return "n/a";
  }
  return "?";
}

struct Witness {
  std::string tree;  // edge-list text
  std::string s;
  std::vector<std::pair<std::string, std::string>> values;
};

struct PropertyReport {
  PropertyId id;
  Verdict verdict = Verdict::not_applicable;
  std::optional<Witness> witness;  // always present when violated
  std::string note;

  bool holds() const { return verdict == Verdict::holds; }
};

namespace detail {

template <RealScalar R>
struct Checker {
  const Tree& t;
  const R& s;
  const R& tol;

  PropertyReport report(PropertyId id, bool ok, std::vector<std::pair<std::string, R>> values,
                        std::string note = {}) const {
    PropertyReport rep{id, ok ? Verdict::holds : Verdict::violated, std::nullopt, std::move(note)};
    if (!ok) {
      Witness w{format_tree(t), format_real(s, 20), {}};
      for (auto& [name, value] : values) w.values.emplace_back(name, format_real(value, 25));
      rep.witness = std::move(w);
    }
    return rep;
  }

  static PropertyReport skip(PropertyId id, std::string why) {
    return {id, Verdict::not_applicable, std::nullopt, std::move(why)};
  }

  // Radius to a bisection width at most tol / 10.
  RadiusEstimate<R> radius(const Tree& tree) const {
    auto [a, b] = default_bracket(tree, s);
    int iters = 0;
    for (R width = b - a; R(tol) / R(10) < width; width /= R(2)) ++iters;
    return approximate_radius(tree, s, a, b, iters);
  }

  // rho > bound, beyond tolerance.
  PropertyReport strictly_above(PropertyId id, const R& bound, const char* bound_name) const {
    const R rho = radius(t).midpoint();
    return report(id, tol < rho - bound, {{"rho", rho}, {bound_name, bound}});
  }
};

}  // namespace detail

/// Evaluates one property on (t, s). Strict inequalities must hold with a
/// margin of `tol`; radius estimates are bisected to width tol / 10.
template <RealScalar R>
PropertyReport check_property(PropertyId id, const Tree& t, const R& s, const R& tol) {
  using std::abs;
  using std::sqrt;
  require_uniform_precision("check_property", s, tol);
  detail::Checker<R> ck{t, s, tol};
  const int delta = t.max_degree();
  const R as = abs(s);
  const R s2 = s * s;
  if (t.size() == 1) return ck.skip(id, "K1");

  switch (id) {
    case PropertyId::zero_eigenvalue: {
      const auto c = count_eigenvalues(t, s, R(0));
      const bool has_zero = c.equal > 0;
      const bool unit = as == R(1);
      return ck.report(id, has_zero == unit, {{"zero_count", R(static_cast<double>(c.equal))}});
    }
    case PropertyId::positive_definite: {
      const auto c = count_eigenvalues(t, s, R(0));
      const bool pd = c.greater == t.size();
      return ck.report(id, pd == (as < R(1)), {{"positive_count", R(static_cast<double>(c.greater))}});
    }
    case PropertyId::radius_above_one:
      if (s == R(0)) return ck.skip(id, "s = 0 gives M = I");
      return ck.strictly_above(id, R(1), "bound");
    case PropertyId::pendant_p2: {
      if (s == R(0)) return ck.skip(id, "s = 0 gives M = I");
      bool found = false;
      for (int v : t.leaves()) {
        const int w = t.parent(v) == Tree::kNone ? t.children(v)[0] : t.parent(v);
        if (t.degree(w) == 2) found = true;
      }
      if (!found) return ck.skip(id, "no pendant P2");
      return ck.strictly_above(id, R(1) + s2, "bound");
    }
    case PropertyId::leaf_deletion: {
      if (s == R(0)) return ck.skip(id, "s = 0 gives M = I");
      const R rho = ck.radius(t).midpoint();
      for (int v : t.leaves()) {
        const Tree smaller = t.remove_leaf(v);
        const R rho_minus = smaller.size() == 1 ? R(1) : ck.radius(smaller).midpoint();
        if (!(tol < rho - rho_minus)) {
          return ck.report(id, false, {{"rho", rho}, {"rho_without_leaf", rho_minus}, {"leaf", R(v + 1)}});
        }
      }
      return ck.report(id, true, {});
    }
    case PropertyId::max_degree_bound:
      if (s == R(0)) return ck.skip(id, "s = 0 gives M = I");
      if (delta >= 4) return ck.strictly_above(id, R((R(1) + as) * (R(1) + as)), "bound");
      if (delta == 3) return ck.strictly_above(id, R(R(1) + sqrt(R(3)) * as + s2), "bound");
      return ck.skip(id, "max degree below 3");
    case PropertyId::starlike_upper: {
      const int arms = starlike_arms(t);
      if (arms < 3) return ck.skip(id, "not starlike");
      const R k(arms);
      const R bound = R(1) + s2 * R(delta - 1) + as * k / sqrt(R(k - R(1)));
      const R rho = ck.radius(t).midpoint();
      return ck.report(id, rho <= bound + tol, {{"rho", rho}, {"bound", bound}});
    }
    case PropertyId::star_lower_bound: {
      const R d(delta);
      const R bound = (s2 * (d - R(1)) + R(2) + as * sqrt(R(s2 * (d - R(1)) * (d - R(1)) + R(4) * d))) / R(2);
      const R rho = ck.radius(t).midpoint();
      if (is_star(t)) return ck.report(id, abs(rho - bound) <= tol, {{"rho", rho}, {"bound", bound}}, "equality");
      if (s == R(0)) return ck.skip(id, "s = 0 gives M = I");
      return ck.report(id, tol < rho - bound, {{"rho", rho}, {"bound", bound}}, "strict");
    }
    case PropertyId::degree_upper_bound: {
      const auto adj = symmetric_eigenvalues(adjacency_matrix<R>(t));
      const R bound = R(1) + s2 * R(delta - 1) + as * adj.back();
      const R rho = ck.radius(t).midpoint();
      return ck.report(id, rho <= bound + tol, {{"rho", rho}, {"bound", bound}, {"adjacency_radius", adj.back()}});
    }
    case PropertyId::adapted_super:
      if (delta < 3) return ck.skip(id, "max degree below 3");
      if (!(R(1) < as)) return ck.skip(id, "s is not super-Laplacian");
      return ck.strictly_above(id, R((R(1) + as) * (R(1) + as)), "adapted_threshold");
    case PropertyId::adapted_high_degree:
      if (delta < 4) return ck.skip(id, "max degree below 4");
      if (!(as < R(1)) || s == R(0)) return ck.skip(id, "s is not sub-Laplacian and nonzero");
      return ck.strictly_above(id, R((R(1) + as) * (R(1) + as)), "adapted_threshold");
    case PropertyId::adapted_t144:
      if (delta != 3) return ck.skip(id, "max degree is not 3");
      if (!(as < R(1)) || s == R(0)) return ck.skip(id, "s is not sub-Laplacian and nonzero");
      if (!contains_t1ab(t, 4, 4)) return ck.skip(id, "no T(1,4,4) subgraph");
      return ck.strictly_above(id, R((R(1) + as) * (R(1) + as)), "adapted_threshold");
  }
  return ck.skip(id, "unknown property");
}

struct TreeSource {
  enum class Kind { exhaustive, random_trees, random_caterpillars };
  Kind kind = Kind::exhaustive;
  int max_n = 8;          // exhaustive: every n in [1, max_n]; random: n in [2, max_n]
  int samples = 0;        // random kinds
  int max_count = 4;      // random caterpillars: largest pendant count
  std::uint64_t seed = 1;

  std::vector<Tree> trees() const {
    std::vector<Tree> out;
    std::mt19937_64 rng(seed);
    switch (kind) {
      case Kind::exhaustive:
        if (max_n > 12) throw Error(ErrorKind::size, "exhaustive enumeration is limited to n <= 12");
        for (int n = 1; n <= max_n; ++n) {
          for (auto& t : all_free_trees(n)) out.push_back(std::move(t));
        }
        break;
      case Kind::random_trees: {
        std::uniform_int_distribution<int> size(2, std::max(2, max_n));
        for (int i = 0; i < samples; ++i) out.push_back(random_tree(size(rng), rng));
        break;
      }
      case Kind::random_caterpillars:
        for (int i = 0; i < samples; ++i) {
          out.push_back(caterpillar_to_tree(random_caterpillar(std::max(2, max_n), max_count, rng)));
        }
        break;
    }
    return out;
  }
};

struct SweepSummary {
  std::map<PropertyId, std::array<int, 3>> counts;  // holds, violated, n/a
  std::vector<PropertyReport> violations;

  int total_violations() const { return static_cast<int>(violations.size()); }
};

template <RealScalar R>
using PropertyChecker = std::function<PropertyReport(PropertyId, const Tree&, const R&, const R&)>;

/// Every (property, tree, s) combination. `checker` defaults to
/// check_property and exists so the harness can be tested with a broken one.
template <RealScalar R>
SweepSummary sweep(const std::vector<PropertyId>& ids, const TreeSource& source, const std::vector<R>& s_grid,
                   const R& tol, PropertyChecker<R> checker = {}) {
  if (!checker) checker = [](PropertyId id, const Tree& t, const R& s, const R& e) { return check_property(id, t, s, e); };
  SweepSummary summary;
  const auto trees = source.trees();
  for (auto id : ids) {
    auto& slot = summary.counts[id];
    for (const auto& t : trees) {
      for (const auto& s : s_grid) {
        auto rep = checker(id, t, s, tol);
        ++slot[static_cast<int>(rep.verdict)];
        if (rep.verdict == Verdict::violated) summary.violations.push_back(std::move(rep));
      }
    }
  }
  return summary;
}

}  // namespace dlap

#endif  // DLAP_PROPERTIES_HPP
