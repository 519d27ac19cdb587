#ifndef DLAP_DENSE_HPP
#define DLAP_DENSE_HPP

// Small dense matrices used only as an independent oracle in tests and for
// the adjacency radius in the degree upper bound.

#include <algorithm>
#include <cmath>
#include <vector>

#include "dlap/error.hpp"
#include "dlap/scalar.hpp"
#include "dlap/tree.hpp"

namespace dlap {

inline constexpr int kDenseCap = 64;

template <RealScalar R>
class DenseMatrix {
 public:
  explicit DenseMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, R(0)) {}

  int size() const { return n_; }
  R& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  const R& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

  bool is_symmetric() const {
    for (int i = 0; i < n_; ++i) {
      for (int j = i + 1; j < n_; ++j) {
        if ((*this)(i, j) != (*this)(j, i)) return false;
      }
    }
    return true;
  }

 private:
  int n_;
  std::vector<R> a_;
};

inline void check_dense_cap(const Tree& t, int cap) {
  if (t.size() > cap) {
    throw Error(ErrorKind::size, "dense oracle limited to " + std::to_string(cap) + " vertices, tree has " +
                                     std::to_string(t.size()));
  }
}

/// I - sA + s^2 (D - I).
template <RealScalar R>
DenseMatrix<R> dense_deformed_laplacian(const Tree& t, const R& s, int cap = kDenseCap) {
  check_dense_cap(t, cap);
  DenseMatrix<R> m(t.size());
  const R s2 = s * s;
  for (int v = 0; v < t.size(); ++v) m(v, v) = R(1) + s2 * R(t.degree(v) - 1);
  for (auto [u, v] : t.edges()) {
    m(u, v) = -s;
    m(v, u) = -s;
  }
  return m;
}

template <RealScalar R>
DenseMatrix<R> adjacency_matrix(const Tree& t, int cap = kDenseCap) {
  check_dense_cap(t, cap);
  DenseMatrix<R> m(t.size());
  for (auto [u, v] : t.edges()) {
    m(u, v) = R(1);
    m(v, u) = R(1);
  }
  return m;
}

/// Eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi rotations.
template <RealScalar R>
std::vector<R> symmetric_eigenvalues(DenseMatrix<R> m) {
  using std::abs;
  using std::sqrt;
  const int n = m.size();
  R total(0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) total += m(i, j) * m(i, j);
  }
  const R eps = unit_roundoff<R>();
  const R stop = eps * eps * total;
  for (int sweep = 0; sweep < 100; ++sweep) {
    R off(0);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) off += m(i, j) * m(i, j);
    }
    if (off <= stop) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (m(p, q) == R(0)) continue;
        const R theta = (m(q, q) - m(p, p)) / (R(2) * m(p, q));
        R t = R(1) / (abs(theta) + sqrt(theta * theta + R(1)));
        if (theta < R(0)) t = -t;
        const R c = R(1) / sqrt(t * t + R(1));
        const R sn = t * c;
        const R tau = sn / (R(1) + c);
        const R apq = m(p, q);
        m(p, p) -= t * apq;
        m(q, q) += t * apq;
        m(p, q) = R(0);
        m(q, p) = R(0);
        for (int r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const R arp = m(r, p);
          const R arq = m(r, q);
          m(r, p) = arp - sn * (arq + tau * arp);
          m(p, r) = m(r, p);
          m(r, q) = arq + sn * (arp - tau * arq);
          m(q, r) = m(r, q);
        }
      }
    }
  }
  std::vector<R> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = m(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace dlap

#endif  // DLAP_DENSE_HPP
