#ifndef DLAP_GENERATORS_HPP
#define DLAP_GENERATORS_HPP

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "dlap/error.hpp"
#include "dlap/tree.hpp"

namespace dlap {

namespace detail {

/// Parent array from a level sequence (root at level 1, preorder).
inline std::vector<int> parents_from_levels(const std::vector<int>& level) {
  const int n = static_cast<int>(level.size());
  std::vector<int> parent(n, Tree::kNone);
  std::vector<int> last_at(n + 2, Tree::kNone);
  for (int i = 0; i < n; ++i) {
    if (i > 0) parent[i] = last_at[level[i] - 1];
    last_at[level[i]] = i;
  }
  return parent;
}

inline std::string rooted_code(const std::vector<std::vector<int>>& adj, int v, int from) {
  std::vector<std::string> parts;
  for (int w : adj[v]) {
    if (w != from) parts.push_back(rooted_code(adj, w, v));
  }
  std::sort(parts.begin(), parts.end());
  std::string out = "(";
  for (auto& p : parts) out += p;
  return out + ")";
}

inline std::vector<int> centers(const std::vector<std::vector<int>>& adj) {
  const int n = static_cast<int>(adj.size());
  if (n <= 2) {
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    return all;
  }
  std::vector<int> deg(n), layer;
  for (int v = 0; v < n; ++v) {
    deg[v] = static_cast<int>(adj[v].size());
    if (deg[v] == 1) layer.push_back(v);
  }
  int remaining = n;
  while (remaining > 2) {
    remaining -= static_cast<int>(layer.size());
    std::vector<int> next;
    for (int v : layer) {
      for (int w : adj[v]) {
        if (--deg[w] == 1) next.push_back(w);
      }
    }
    layer = std::move(next);
  }
  std::sort(layer.begin(), layer.end());
  return layer;
}

}  // namespace detail

/// Isomorphism-invariant code: AHU encoding rooted at the centre, minimised
/// over both centres of a bicentral tree.
inline std::string canonical_form(const Tree& t) {
  const auto adj = t.adjacency_lists();
  std::string best;
  for (int c : detail::centers(adj)) {
    auto code = detail::rooted_code(adj, c, -1);
    if (best.empty() || code < best) best = std::move(code);
  }
  return best;
}

/// All rooted trees on n vertices up to isomorphism, via successive level
/// sequences (Beyer and Hedetniemi).
inline std::vector<Tree> all_rooted_trees(int n) {
  if (n < 1) throw Error(ErrorKind::domain, "n must be positive");
  std::vector<Tree> out;
  std::vector<int> level(n);
  for (int i = 0; i < n; ++i) level[i] = i + 1;
  while (true) {
    out.emplace_back(detail::parents_from_levels(level));
    int p = n - 1;
    while (p > 0 && level[p] == 2) --p;
    if (p == 0) break;
    int q = p - 1;
    while (level[q] != level[p] - 1) --q;
    for (int i = p; i < n; ++i) level[i] = level[i - (p - q)];
  }
  return out;
}

/// All free trees on n vertices up to isomorphism, in a deterministic order.
inline std::vector<Tree> all_free_trees(int n) {
  std::set<std::string> seen;
  std::vector<Tree> out;
  for (auto& t : all_rooted_trees(n)) {
    if (seen.insert(canonical_form(t)).second) out.push_back(std::move(t));
  }
  return out;
}

/// Uniformly random labelled tree on n vertices (Pruefer decoding), rooted at
/// the highest-numbered vertex.
template <class Rng>
Tree random_tree(int n, Rng& rng) {
  if (n < 1) throw Error(ErrorKind::domain, "n must be positive");
  if (n <= 2) return path(n);
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::vector<int> code(n - 2), degree(n, 1);
  for (int& c : code) {
    c = pick(rng);
    ++degree[c];
  }
  std::vector<std::pair<int, int>> edges;
  std::set<int> leaves;
  for (int v = 0; v < n; ++v) {
    if (degree[v] == 1) leaves.insert(v);
  }
  for (int c : code) {
    const int leaf = *leaves.begin();
    leaves.erase(leaves.begin());
    edges.emplace_back(leaf, c);
    if (--degree[c] == 1) leaves.insert(c);
  }
  edges.emplace_back(*leaves.begin(), *std::next(leaves.begin()));
  return Tree::from_edges(n, edges, n - 1);
}

template <class Rng>
Caterpillar random_caterpillar(int max_backbone, int max_count, Rng& rng) {
  if (max_backbone < 2 || max_count < 0) throw Error(ErrorKind::domain, "bad caterpillar bounds");
  std::uniform_int_distribution<int> len(2, max_backbone);
  std::uniform_int_distribution<std::int64_t> count(0, max_count);
  std::vector<std::int64_t> r(len(rng));
  for (auto& x : r) x = count(rng);
  return Caterpillar(std::move(r));
}

/// Does `t` contain T_{1,a,b} (a <= b) as a subgraph: some vertex with three
/// branches reaching depths >= 1, >= a and >= b.
inline bool contains_t1ab(const Tree& t, int a, int b) {
  const auto adj = t.adjacency_lists();
  const int n = t.size();
  auto depth = [&](int start, int from) {
    int best = 0;
    std::vector<std::pair<int, int>> stack{{start, from}};
    std::vector<int> dist(n, 0);
    dist[start] = 1;
    while (!stack.empty()) {
      auto [v, p] = stack.back();
      stack.pop_back();
      best = std::max(best, dist[v]);
      for (int w : adj[v]) {
        if (w != p) {
          dist[w] = dist[v] + 1;
          stack.emplace_back(w, v);
        }
      }
    }
    return best;
  };
  for (int u = 0; u < n; ++u) {
    if (adj[u].size() < 3) continue;
    std::vector<int> reach;
    for (int w : adj[u]) reach.push_back(depth(w, u));
    std::sort(reach.rbegin(), reach.rend());
    if (reach[0] >= b && reach[1] >= a && reach[2] >= 1) return true;
  }
  return false;
}

/// Starlike: exactly one vertex of degree >= 3. Returns its arm count or 0.
inline int starlike_arms(const Tree& t) {
  int arms = 0;
  for (int v = 0; v < t.size(); ++v) {
    if (t.degree(v) >= 3) {
      if (arms) return 0;
      arms = t.degree(v);
    }
  }
  return arms;
}

inline bool is_star(const Tree& t) {
  if (t.size() < 2) return false;
  int hubs = 0;
  for (int v = 0; v < t.size(); ++v) {
    if (t.degree(v) != 1) ++hubs;
  }
  return hubs == 0 || (hubs == 1 && t.max_degree() == t.size() - 1);
}

}  // namespace dlap

#endif  // DLAP_GENERATORS_HPP
