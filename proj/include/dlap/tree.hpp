#ifndef DLAP_TREE_HPP
#define DLAP_TREE_HPP

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <istream>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dlap/error.hpp"

namespace dlap {

/// Rooted tree on vertices 0..n-1 with a bottom-up processing order.
///
/// Children are stored in CSR form sorted by vertex id, so the Diagonalize
/// pass visits them in a fixed order and results are reproducible.
class Tree {
 public:
  static constexpr int kNone = -1;

  Tree() : Tree(std::vector<int>{kNone}) {}

  /// `parent[root] == kNone` for exactly one vertex. When `order` is empty a
  /// reverse breadth-first order is used.
  explicit Tree(std::vector<int> parent, std::vector<int> order = {})
      : parent_(std::move(parent)), order_(std::move(order)) {
    const int n = size();
    if (n == 0) throw Error(ErrorKind::domain, "a tree needs at least one vertex");
    root_ = kNone;
    child_offset_.assign(n + 1, 0);
    for (int v = 0; v < n; ++v) {
      const int p = parent_[v];
      if (p == kNone) {
        if (root_ != kNone) throw Error(ErrorKind::domain, "more than one root");
        root_ = v;
      } else if (p < 0 || p >= n || p == v) {
        throw Error(ErrorKind::domain, "parent index out of range at vertex " + std::to_string(v));
      } else {
        ++child_offset_[p + 1];
      }
    }
    if (root_ == kNone) throw Error(ErrorKind::domain, "no root");
    std::partial_sum(child_offset_.begin(), child_offset_.end(), child_offset_.begin());
    children_.resize(n - 1);
    std::vector<int> fill(child_offset_.begin(), child_offset_.end() - 1);
    for (int v = 0; v < n; ++v) {
      if (parent_[v] != kNone) children_[fill[parent_[v]]++] = v;
    }

    // Reverse BFS doubles as the acyclicity check: every vertex must be reached.
    std::vector<int> bfs;
    bfs.reserve(n);
    bfs.push_back(root_);
    for (std::size_t head = 0; head < bfs.size(); ++head) {
      for (int c : children(bfs[head])) bfs.push_back(c);
    }
    if (static_cast<int>(bfs.size()) != n) {
      throw Error(ErrorKind::domain, "parent links contain a cycle");
    }
    if (order_.empty()) {
      order_.assign(bfs.rbegin(), bfs.rend());
    } else {
      validate_order();
    }
  }

  /// Edges given as 0-based vertex pairs; the tree is rooted at `root`.
  static Tree from_edges(int n, std::span<const std::pair<int, int>> edges, int root) {
    if (n < 1) throw Error(ErrorKind::domain, "a tree needs at least one vertex");
    if (static_cast<int>(edges.size()) != n - 1) {
      throw Error(ErrorKind::domain, "a tree on " + std::to_string(n) + " vertices has " +
                                         std::to_string(n - 1) + " edges, got " +
                                         std::to_string(edges.size()));
    }
    if (root < 0 || root >= n) throw Error(ErrorKind::domain, "root out of range");
    std::vector<std::vector<int>> adj(n);
    for (auto [u, v] : edges) {
      if (u < 0 || v < 0 || u >= n || v >= n || u == v) {
        throw Error(ErrorKind::domain, "invalid edge");
      }
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    std::vector<int> parent(n, kNone - 1);
    parent[root] = kNone;
    std::vector<int> queue{root};
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int u = queue[head];
      for (int w : adj[u]) {
        if (w == parent[u]) continue;
        if (parent[w] != kNone - 1) throw Error(ErrorKind::domain, "edges contain a cycle");
        parent[w] = u;
        queue.push_back(w);
      }
    }
    if (static_cast<int>(queue.size()) != n) throw Error(ErrorKind::domain, "edges are disconnected");
    return Tree(std::move(parent));
  }

  int size() const { return static_cast<int>(parent_.size()); }
  int root() const { return root_; }
  int parent(int v) const { return parent_[v]; }
  std::span<const int> parents() const { return parent_; }

  std::span<const int> children(int v) const {
    return {children_.data() + child_offset_[v], children_.data() + child_offset_[v + 1]};
  }
  int child_count(int v) const { return child_offset_[v + 1] - child_offset_[v]; }

  int degree(int v) const { return child_count(v) + (parent_[v] == kNone ? 0 : 1); }

  int max_degree() const {
    int best = 0;
    for (int v = 0; v < size(); ++v) best = std::max(best, degree(v));
    return best;
  }

  /// Bottom-up: each vertex appears after all of its children.
  std::span<const int> order() const { return order_; }

  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(size() - 1);
    for (int v = 0; v < size(); ++v) {
      if (parent_[v] != kNone) out.emplace_back(std::min(v, parent_[v]), std::max(v, parent_[v]));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<std::vector<int>> adjacency_lists() const {
    std::vector<std::vector<int>> adj(size());
    for (auto [u, v] : edges()) {
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    return adj;
  }

  std::vector<int> leaves() const {
    std::vector<int> out;
    for (int v = 0; v < size(); ++v) {
      if (degree(v) == 1) out.push_back(v);
    }
    return out;
  }

  /// The tree with pendant vertex `v` deleted. Vertices above `v` shift down
  /// by one; if `v` was the root its only neighbour becomes the root.
  Tree remove_leaf(int v) const {
    if (size() < 2 || v < 0 || v >= size() || degree(v) != 1) {
      throw Error(ErrorKind::domain, "vertex " + std::to_string(v) + " is not a pendant vertex");
    }
    auto relabel = [v](int u) { return u > v ? u - 1 : u; };
    std::vector<std::pair<int, int>> kept;
    for (auto [a, b] : edges()) {
      if (a != v && b != v) kept.emplace_back(relabel(a), relabel(b));
    }
    const int new_root = root_ == v ? relabel(children(v)[0]) : relabel(root_);
    return from_edges(size() - 1, kept, new_root);
  }

 private:
  void validate_order() const {
    const int n = size();
    if (static_cast<int>(order_.size()) != n) throw Error(ErrorKind::domain, "order has wrong length");
    std::vector<int> pos(n, -1);
    for (int i = 0; i < n; ++i) {
      const int v = order_[i];
      if (v < 0 || v >= n || pos[v] != -1) throw Error(ErrorKind::domain, "order is not a permutation");
      pos[v] = i;
    }
    for (int v = 0; v < n; ++v) {
      if (parent_[v] != kNone && pos[v] > pos[parent_[v]]) {
        throw Error(ErrorKind::domain, "order is not bottom-up at vertex " + std::to_string(v));
      }
    }
  }

  std::vector<int> parent_;
  std::vector<int> order_;
  std::vector<int> child_offset_;
  std::vector<int> children_;
  int root_ = kNone;
};

/// Caterpillar [r1, ..., rk]: backbone v1..vk where vj carries rj pendant leaves.
struct Caterpillar {
  std::vector<std::int64_t> counts;

  Caterpillar() = default;
  explicit Caterpillar(std::vector<std::int64_t> c) : counts(std::move(c)) { validate(); }

  void validate() const {
    if (counts.size() < 2) throw Error(ErrorKind::domain, "a caterpillar needs k >= 2 back nodes");
    for (auto r : counts) {
      if (r < 0) throw Error(ErrorKind::domain, "negative pendant count");
    }
  }

  std::size_t backbone() const { return counts.size(); }

  std::int64_t vertex_count() const {
    return static_cast<std::int64_t>(counts.size()) +
           std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
  }

  /// Degree of back node j (0-based).
  std::int64_t degree(std::size_t j) const {
    const bool end = j == 0 || j + 1 == counts.size();
    return counts[j] + (end ? 1 : 2);
  }

  friend bool operator==(const Caterpillar&, const Caterpillar&) = default;
};

/// Accepts "[r1,r2,...]", "r1 r2 ..." and mixtures of commas and spaces.
inline Caterpillar parse_caterpillar(std::string_view text) {
  std::string body(text);
  auto first = body.find_first_not_of(" \t\r\n");
  auto last = body.find_last_not_of(" \t\r\n");
  if (first == std::string::npos) throw Error(ErrorKind::parse, "empty caterpillar literal");
  body = body.substr(first, last - first + 1);
  if (body.front() == '[' || body.back() == ']') {
    if (body.size() < 2 || body.front() != '[' || body.back() != ']') {
      throw Error(ErrorKind::parse, "unbalanced brackets in caterpillar literal");
    }
    body = body.substr(1, body.size() - 2);
  }
  std::vector<std::int64_t> counts;
  std::size_t i = 0;
  bool expect_value = true;
  while (i < body.size()) {
    const char ch = body[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
    } else if (ch == ',') {
      if (expect_value) throw Error(ErrorKind::parse, "empty entry in caterpillar literal");
      expect_value = true;
      ++i;
    } else {
      std::int64_t value = 0;
      auto [ptr, ec] = std::from_chars(body.data() + i, body.data() + body.size(), value);
      if (ec != std::errc() || ptr == body.data() + i) {
        throw Error(ErrorKind::parse, "bad entry in caterpillar literal: '" + std::string(text) + "'");
      }
      if (value < 0) throw Error(ErrorKind::parse, "negative entry in caterpillar literal");
      counts.push_back(value);
      i = static_cast<std::size_t>(ptr - body.data());
      expect_value = false;
      if (i < body.size() && body[i] != ',' && !std::isspace(static_cast<unsigned char>(body[i]))) {
        throw Error(ErrorKind::parse, "bad entry in caterpillar literal: '" + std::string(text) + "'");
      }
    }
  }
  if (counts.empty()) throw Error(ErrorKind::parse, "empty caterpillar literal");
  if (expect_value && body.find(',') != std::string::npos) {
    throw Error(ErrorKind::parse, "trailing comma in caterpillar literal");
  }
  return Caterpillar(std::move(counts));
}

/// "[r1,r2,...,rk]" with every entry.
inline std::string format_caterpillar(const Caterpillar& c) {
  std::string out = "[";
  for (std::size_t j = 0; j < c.counts.size(); ++j) {
    if (j) out += ',';
    out += std::to_string(c.counts[j]);
  }
  return out + "]";
}

/// Space-separated and CSV-safe; long runs keep `head` leading and `tail`
/// trailing entries around a `..` token.
inline std::string format_counts_abbrev(const Caterpillar& c, std::size_t head = 6, std::size_t tail = 3) {
  const auto& r = c.counts;
  std::string out = "[";
  auto put = [&](std::size_t j) {
    if (out.size() > 1) out += ' ';
    out += std::to_string(r[j]);
  };
  if (r.size() <= head + tail) {
    for (std::size_t j = 0; j < r.size(); ++j) put(j);
  } else {
    for (std::size_t j = 0; j < head; ++j) put(j);
    out += " ..";
    for (std::size_t j = r.size() - tail; j < r.size(); ++j) put(j);
  }
  return out + "]";
}

/// Backbone vj gets id j-1; leaves follow in backbone order. Rooted at vk,
/// processed leaves first and then v1..vk.
inline Tree caterpillar_to_tree(const Caterpillar& c) {
  c.validate();
  const auto total = c.vertex_count();
  if (total > static_cast<std::int64_t>(std::numeric_limits<int>::max())) {
    throw Error(ErrorKind::size, "caterpillar too large to materialize");
  }
  const int k = static_cast<int>(c.counts.size());
  const int n = static_cast<int>(total);
  std::vector<int> parent(n);
  std::vector<int> order;
  order.reserve(n);
  for (int j = 0; j < k; ++j) parent[j] = j + 1 < k ? j + 1 : Tree::kNone;
  int next = k;
  for (int j = 0; j < k; ++j) {
    for (std::int64_t i = 0; i < c.counts[j]; ++i) {
      parent[next] = j;
      order.push_back(next++);
    }
  }
  for (int j = 0; j < k; ++j) order.push_back(j);
  return Tree(std::move(parent), std::move(order));
}

/// Pendant counts per back node of a tree built by caterpillar_to_tree.
inline Caterpillar caterpillar_counts_of(const Tree& t, int backbone) {
  std::vector<std::int64_t> counts(backbone, 0);
  for (int v = backbone; v < t.size(); ++v) {
    const int p = t.parent(v);
    if (p < 0 || p >= backbone || t.child_count(v) != 0) {
      throw Error(ErrorKind::domain, "not a caterpillar layout");
    }
    ++counts[p];
  }
  return Caterpillar(std::move(counts));
}

/// T_{1,n,n}: centre 0 with one pendant vertex and two pendant paths of n
/// vertices; rooted at the centre.
inline Tree starlike_t1nn(int n) {
  if (n < 1) throw Error(ErrorKind::domain, "T(1,n,n) needs n >= 1");
  std::vector<int> parent(2 * n + 2);
  parent[0] = Tree::kNone;
  parent[1] = 0;
  for (int arm = 0; arm < 2; ++arm) {
    const int base = 2 + arm * n;
    parent[base] = 0;
    for (int i = 1; i < n; ++i) parent[base + i] = base + i - 1;
  }
  return Tree(std::move(parent));
}

/// Star K_{1,m} centred at vertex 0.
inline Tree star(int m) {
  if (m < 1) throw Error(ErrorKind::domain, "star needs at least one leaf");
  std::vector<int> parent(m + 1, 0);
  parent[0] = Tree::kNone;
  return Tree(std::move(parent));
}

/// Path on n vertices, rooted at the last one.
inline Tree path(int n) {
  if (n < 1) throw Error(ErrorKind::domain, "path needs at least one vertex");
  std::vector<int> parent(n);
  for (int v = 0; v < n; ++v) parent[v] = v + 1 < n ? v + 1 : Tree::kNone;
  return Tree(std::move(parent));
}

// Text format: optional `root=R` line, then one `edge u v` line per edge.
// Labels are 1-based; `#` starts a comment. Default root is the highest label.

inline Tree parse_tree(std::istream& in) {
  std::vector<std::pair<int, int>> edges;
  std::optional<int> root;
  int max_label = 0;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& why) {
    throw Error(ErrorKind::parse, "tree line " + std::to_string(lineno) + ": " + why);
  };
  auto label = [&](const std::string& tok) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || value < 1) fail("bad vertex '" + tok + "'");
    return value;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    if (word.rfind("root=", 0) == 0) {
      if (root) fail("duplicate root header");
      if (!edges.empty()) fail("root header must precede edges");
      root = label(word.substr(5));
    } else if (word == "edge") {
      std::string a, b, extra;
      if (!(ls >> a >> b) || (ls >> extra)) fail("expected 'edge u v'");
      const int u = label(a), v = label(b);
      max_label = std::max({max_label, u, v});
      edges.emplace_back(u - 1, v - 1);
    } else {
      fail("unknown directive '" + word + "'");
    }
  }
  const int n = edges.empty() ? (root ? *root : 1) : max_label;
  if (edges.empty() && n != 1) throw Error(ErrorKind::parse, "tree file has no edges");
  const int r = root ? *root - 1 : n - 1;
  if (r >= n) throw Error(ErrorKind::parse, "root label exceeds vertex count");
  return Tree::from_edges(n, edges, r);
}

inline Tree parse_tree(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_tree(in);
}

inline void write_tree(std::ostream& out, const Tree& t) {
  out << "root=" << t.root() + 1 << '\n';
  for (auto [u, v] : t.edges()) out << "edge " << u + 1 << ' ' << v + 1 << '\n';
}

inline std::string format_tree(const Tree& t) {
  std::ostringstream out;
  write_tree(out, t);
  return out.str();
}

}  // namespace dlap

#endif  // DLAP_TREE_HPP
