#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "cospectral/cotree.hpp"
#include "cospectral/diagonalizer.hpp"
#include "cospectral/scalar.hpp"

namespace cospectral {

struct Inertia {
  std::size_t n_plus = 0;
  std::size_t n_zero = 0;
  std::size_t n_minus = 0;

  std::size_t total() const noexcept { return n_plus + n_zero + n_minus; }
  friend bool operator==(const Inertia&, const Inertia&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Inertia& i) {
  return os << '(' << i.n_plus << ", " << i.n_zero << ", " << i.n_minus << ')';
}

class IntervalError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Real interval with exact endpoints. A point query is `[a, a]`.
struct Interval {
  Rational lo;
  Rational hi;
  bool lo_inclusive = false;
  bool hi_inclusive = true;

  bool is_point() const { return lo == hi; }

  void validate() const {
    if (lo > hi || (lo == hi && !(lo_inclusive && hi_inclusive)))
      throw IntervalError("empty interval: need lo < hi, or lo = hi with both ends closed");
  }

  /// Parses `(a,b]`, `[a,b)`, `(a,b)` or `[a,b]` with rational literals.
  static Interval parse(std::string_view text) {
    std::string s;
    for (char c : text)
      if (c != ' ' && c != '\t') s.push_back(c);
    const auto comma = s.find(',');
    if (s.size() < 5 || (s.front() != '(' && s.front() != '[') || (s.back() != ')' && s.back() != ']') ||
        comma == std::string::npos || s.find(',', comma + 1) != std::string::npos)
      throw IntervalError("interval must look like (a,b], [a,b), (a,b) or [a,b]: '" + std::string(text) + "'");
    Interval iv{parse_rational(s.substr(1, comma - 1)), parse_rational(s.substr(comma + 1, s.size() - comma - 2)),
                s.front() == '[', s.back() == ']'};
    iv.validate();
    return iv;
  }
};

inline std::ostream& operator<<(std::ostream& os, const Interval& iv) {
  return os << (iv.lo_inclusive ? '[' : '(') << iv.lo.get_str() << ',' << iv.hi.get_str()
            << (iv.hi_inclusive ? ']' : ')');
}

/// Bracket lo < lambda_index <= hi, with `exact` set when the bisection
/// landed on the eigenvalue itself.
struct EigenvalueEstimate {
  std::size_t index = 0;
  Rational lo;
  Rational hi;
  Rational width;
  std::optional<Rational> exact;

  Rational midpoint() const { return exact ? *exact : Rational((lo + hi) / 2); }
};

/// Counts of eigenvalues greater than, equal to and less than `a`.
template <DiagonalScalar T = Rational>
SignCounts counts_at(const Cotree& t, const T& a) {
  return diagonalize<T>(t, T(-a)).counts;
}

template <DiagonalScalar T = Rational>
std::size_t count_greater(const Cotree& t, const T& a) {
  return counts_at<T>(t, a).positives;
}

template <DiagonalScalar T = Rational>
std::size_t count_less(const Cotree& t, const T& a) {
  return counts_at<T>(t, a).negatives;
}

template <DiagonalScalar T = Rational>
std::size_t multiplicity(const Cotree& t, const T& a) {
  return counts_at<T>(t, a).zeros;
}

/// Eigenvalues in `iv`, from one diagonalization per distinct endpoint.
inline std::size_t count_in_interval(const Cotree& t, const Interval& iv) {
  iv.validate();
  if (iv.is_point()) return multiplicity(t, iv.lo);
  const SignCounts at_lo = counts_at(t, iv.lo);
  const SignCounts at_hi = counts_at(t, iv.hi);
  const std::size_t from_lo = at_lo.positives + (iv.lo_inclusive ? at_lo.zeros : 0);
  const std::size_t past_hi = at_hi.positives + (iv.hi_inclusive ? 0 : at_hi.zeros);
  return from_lo - past_hi;
}

inline Inertia inertia_by_algorithm(const Cotree& t) {
  const SignCounts c = diagonalize(t, Rational(0)).counts;
  return {c.positives, c.zeros, c.negatives};
}

// -- closed forms read off the cotree ---------------------------------------

namespace detail {

template <typename Fn>
void for_each_interior(const Cotree& t, Fn&& fn) {
  for (NodeIndex v : t.preorder()) {
    if (t.is_leaf(v)) continue;
    std::size_t leaves = 0;
    t.for_each_child(v, [&](NodeIndex c) { leaves += t.is_leaf(c); });
    fn(t.kind(v), t.child_count(v), leaves);
  }
}

}  // namespace detail

/// Negative eigenvalues: sum over Join nodes of (children - 1).
inline std::size_t n_minus_closed_form(const Cotree& t) {
  std::size_t total = 0;
  detail::for_each_interior(t, [&](NodeKind kind, std::size_t children, std::size_t) {
    if (kind == NodeKind::Join) total += children - 1;
  });
  return total;
}

/// Multiplicity of 0: sum over Union nodes of (leaf children - 1), plus one
/// when the graph has isolated vertices.
///
/// Isolated vertices are exactly the leaf children of a Union root. Those j
/// leaves already contribute j - 1 through the sum; the final survivor at the
/// root adds a single further zero. Adding j on top of the sum, as a literal
/// reading of the isolated-vertex term suggests, overcounts: the edgeless
/// graph on 5 vertices would get 9.
inline std::size_t n_zero_closed_form(const Cotree& t) {
  if (t.leaf_count() == 1) return 1;
  std::size_t total = 0;
  detail::for_each_interior(t, [&](NodeKind kind, std::size_t, std::size_t leaves) {
    if (kind == NodeKind::Union && leaves > 0) total += leaves - 1;
  });
  bool isolated = false;
  if (t.kind(t.root()) == NodeKind::Union)
    t.for_each_child(t.root(), [&](NodeIndex c) { isolated |= t.is_leaf(c); });
  return total + (isolated ? 1 : 0);
}

/// Multiplicity of -1: sum over Join nodes of (leaf children - 1).
inline std::size_t mult_minus_one_closed_form(const Cotree& t) {
  std::size_t total = 0;
  detail::for_each_interior(t, [&](NodeKind kind, std::size_t, std::size_t leaves) {
    if (kind == NodeKind::Join && leaves > 0) total += leaves - 1;
  });
  return total;
}

inline Inertia inertia_closed_form(const Cotree& t) {
  const std::size_t minus = n_minus_closed_form(t);
  const std::size_t zero = n_zero_closed_form(t);
  return {t.order() - minus - zero, zero, minus};
}

// -- bisection ----------------------------------------------------------------

class SpectralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Shrinks a bracket with count_greater(lo) >= index > count_greater(hi)
/// by exact dyadic halving until hi - lo <= tol.
inline EigenvalueEstimate refine_eigenvalue(const Cotree& t, std::size_t index, Rational lo, Rational hi,
                                            const Rational& tol) {
  EigenvalueEstimate e;
  e.index = index;
  while (hi - lo > tol) {
    const Rational mid = (lo + hi) / 2;
    const SignCounts c = counts_at(t, mid);
    if (c.positives >= index) {
      lo = mid;
    } else if (c.positives + c.zeros >= index) {
      e.exact = mid;
      hi = mid;
      if (hi - lo > tol) lo = hi - tol;
      break;
    } else {
      hi = mid;
    }
  }
  e.lo = lo;
  e.hi = hi;
  e.width = hi - lo;
  return e;
}

/// Brackets the index-th largest eigenvalue (1-based) to width <= tol.
///
/// The start bracket is [-2^k, 2^k] with 2^k >= n, which contains the whole
/// spectrum and keeps every midpoint dyadic, so integer eigenvalues are hit
/// exactly once the bracket is narrow enough.
inline EigenvalueEstimate approximate_eigenvalue(const Cotree& t, std::size_t index, const Rational& tol) {
  const std::size_t n = t.order();
  if (index < 1 || index > n) throw SpectralError("eigenvalue index out of range 1.." + std::to_string(n));
  if (sgn(tol) <= 0) throw SpectralError("tolerance must be positive");
  Rational bound(1);
  while (bound < static_cast<unsigned long>(n)) bound *= 2;
  return refine_eigenvalue(t, index, -bound, bound, tol);
}

struct EnergyEstimate {
  Rational value;
  Rational error_bound;
  std::size_t exact_eigenvalues = 0;  // found at integer probes or dyadic midpoints
};

/// Sum of |eigenvalue|. Integer eigenvalues are located exactly by probing
/// every integer in [-(n-1), n-1]; the rest are bisected inside their unit
/// gap. Each bisected eigenvalue contributes the midpoint of its |bracket|,
/// so the error is at most (number bisected) * tol / 2.
inline EnergyEstimate energy(const Cotree& t, const Rational& tol, unsigned jobs = 1) {
  if (sgn(tol) <= 0) throw SpectralError("tolerance must be positive");
  const std::size_t n = t.order();
  EnergyEstimate out;
  if (n == 1) {
    out.exact_eigenvalues = 1;
    return out;
  }
  const long top = static_cast<long>(n) - 1;
  std::vector<SignCounts> at_int;
  at_int.reserve(static_cast<std::size_t>(2 * top + 1));
  for (long a = -top; a <= top; ++a) at_int.push_back(counts_at(t, Rational(a)));

  struct Job {
    std::size_t index;
    long floor;
  };
  std::vector<Job> pending;
  for (long a = -top; a <= top; ++a) {
    const SignCounts& c = at_int[static_cast<std::size_t>(a + top)];
    if (c.zeros > 0) {
      out.value += Rational(std::abs(a)) * static_cast<unsigned long>(c.zeros);
      out.exact_eigenvalues += c.zeros;
    }
    if (a == top) break;
    const SignCounts& next = at_int[static_cast<std::size_t>(a + 1 + top)];
    for (std::size_t i = next.positives + next.zeros + 1; i <= c.positives; ++i) pending.push_back({i, a});
  }

  std::vector<EigenvalueEstimate> results(pending.size());
  const auto work = [&](std::size_t first, std::size_t step) {
    for (std::size_t j = first; j < pending.size(); j += step)
      results[j] = refine_eigenvalue(t, pending[j].index, Rational(pending[j].floor),
                                     Rational(pending[j].floor + 1), tol);
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(jobs, pending.size()));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    for (auto& th : pool) th.join();
  }

  for (const auto& e : results) {
    if (e.exact) {
      out.value += abs(*e.exact);
      ++out.exact_eigenvalues;
      continue;
    }
    // Brackets never straddle 0: they lie inside (a, a+1] for an integer a.
    const Rational lo_abs = abs(e.lo), hi_abs = abs(e.hi);
    out.value += (lo_abs + hi_abs) / 2;
    out.error_bound += e.width / 2;
  }
  return out;
}

}  // namespace cospectral
