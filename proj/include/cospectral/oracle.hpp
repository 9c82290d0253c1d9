#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cospectral/cotree.hpp"

// Dense reference computations for small graphs. Deliberately shares nothing
// with the diagonalizer: adjacency is realized from the least-common-ancestor
// rule and the spectrum comes from cyclic Jacobi rotations.

namespace cospectral::oracle {

inline constexpr std::size_t kDefaultCap = 2048;

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Row-major symmetric matrix of doubles.
class DenseSymmetric {
 public:
  DenseSymmetric() = default;
  explicit DenseSymmetric(std::size_t n) : n_(n), a_(n * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    a_[i * n_ + j] = v;
    a_[j * n_ + i] = v;
  }
  bool is_symmetric() const {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }
  std::size_t edge_count() const {
    std::size_t m = 0;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j) m += (*this)(i, j) != 0.0;
    return m;
  }

  friend bool operator==(const DenseSymmetric&, const DenseSymmetric&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

/// a(u, v) = 1 iff the least common ancestor of leaves u and v is a Join
/// node. Each Join node connects the leaf sets of every pair of its children.
inline DenseSymmetric adjacency_from_cotree(const Cotree& t, std::size_t cap = kDefaultCap) {
  const std::size_t n = t.order();
  if (n > cap)
    throw OracleError("oracle cap exceeded: n = " + std::to_string(n) + " > " + std::to_string(cap));
  if (t.leaf_count() != n) throw OracleError("oracle needs an unreduced cotree");
  DenseSymmetric a(n);

  // Post-order: the leaf set of every node, built from its children's.
  const auto pre = t.preorder();
  std::vector<std::vector<std::int32_t>> leaves_of;
  {
    NodeIndex max_index = 0;
    for (NodeIndex v : pre) max_index = std::max(max_index, v);
    leaves_of.resize(static_cast<std::size_t>(max_index) + 1);
  }
  for (auto it = pre.rbegin(); it != pre.rend(); ++it) {
    const NodeIndex v = *it;
    auto& mine = leaves_of[v];
    if (t.is_leaf(v)) {
      mine.push_back(t.vertex(v));
      continue;
    }
    const auto kids = t.children(v);
    if (t.kind(v) == NodeKind::Join) {
      for (std::size_t i = 0; i < kids.size(); ++i)
        for (std::size_t j = i + 1; j < kids.size(); ++j)
          for (auto u : leaves_of[kids[i]])
            for (auto w : leaves_of[kids[j]]) a.set(u, w, 1.0);
    }
    for (NodeIndex c : kids) {
      mine.insert(mine.end(), leaves_of[c].begin(), leaves_of[c].end());
      std::vector<std::int32_t>().swap(leaves_of[c]);
    }
  }
  return a;
}

/// All eigenvalues of a symmetric matrix, descending, by cyclic Jacobi
/// sweeps until the off-diagonal Frobenius norm falls below 1e-12 (relative
/// to the matrix norm when that exceeds 1).
inline std::vector<double> eigenvalues_dense(const DenseSymmetric& m, std::size_t cap = kDefaultCap) {
  const std::size_t n = m.size();
  if (n > cap) throw OracleError("oracle cap exceeded");
  if (!m.is_symmetric()) throw OracleError("matrix is not symmetric");
  std::vector<double> a(n * n);
  double frob = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      a[i * n + j] = m(i, j);
      frob += m(i, j) * m(i, j);
    }
  const auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
  const double threshold = 1e-12 * std::max(1.0, std::sqrt(frob));

  const auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * at(i, j) * at(i, j);
    return std::sqrt(s);
  };

  int sweep = 0;
  while (off_norm() > threshold) {
    if (++sweep > 100) throw OracleError("Jacobi iteration did not converge in 100 sweeps");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        at(p, p) -= t * apq;
        at(q, q) += t * apq;
        at(p, q) = at(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = at(r, p);
          const double arq = at(r, q);
          at(r, p) = at(p, r) = arp - s * (arq + tau * arp);
          at(r, q) = at(q, r) = arq + s * (arp - tau * arq);
        }
      }
    }
  }
  std::vector<double> evs(n);
  for (std::size_t i = 0; i < n; ++i) evs[i] = at(i, i);
  std::sort(evs.begin(), evs.end(), std::greater<>());
  return evs;
}

struct RelativeCounts {
  std::size_t greater = 0;
  std::size_t equal = 0;
  std::size_t less = 0;
  friend bool operator==(const RelativeCounts&, const RelativeCounts&) = default;
};

/// Counts eigenvalues above, at (|lambda - a| <= guard) and below `a`.
/// Throws if some eigenvalue sits in the ambiguous band (guard, 10 guard).
inline RelativeCounts count_relative(const std::vector<double>& evs, double a, double guard = 1e-9) {
  if (!(guard > 0.0)) throw OracleError("guard must be positive");
  RelativeCounts c;
  for (double ev : evs) {
    const double gap = std::fabs(ev - a);
    if (gap <= guard)
      ++c.equal;
    else if (gap < 10.0 * guard)
      throw OracleError("eigenvalue too close to probe point for an unambiguous count");
    else if (ev > a)
      ++c.greater;
    else
      ++c.less;
  }
  return c;
}

/// True when `a` can be classified unambiguously against every eigenvalue.
inline bool is_clean_probe(const std::vector<double>& evs, double a, double guard = 1e-9) {
  for (double ev : evs) {
    const double gap = std::fabs(ev - a);
    if (gap > guard && gap < 10.0 * guard) return false;
  }
  return true;
}

}  // namespace cospectral::oracle
