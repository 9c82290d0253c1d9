#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <climits>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <ostream>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "cospectral/cotree.hpp"
#include "cospectral/scalar.hpp"

namespace cospectral {

/// Elimination rule applied to one sibling pair. 1x: Join parent, 2x: Union.
enum class Subcase : std::uint8_t { k1a, k1b, k1c, k2a, k2b, k2c };

inline constexpr const char* subcase_name(Subcase s) {
  constexpr const char* names[] = {"1a", "1b", "1c", "2a", "2b", "2c"};
  return names[static_cast<int>(s)];
}

template <typename T>
struct IterationRecord {
  std::int32_t k = -1;  // vertex id finalized this iteration
  std::int32_t l = -1;  // vertex id that normally survives
  NodeKind parent_kind = NodeKind::Union;
  Subcase subcase = Subcase::k2a;
  T alpha{};
  T beta{};
  T new_dk{};
  T new_dl{};
  bool l_finalized = false;
};

struct SignCounts {
  std::size_t positives = 0;
  std::size_t zeros = 0;
  std::size_t negatives = 0;

  std::size_t total() const noexcept { return positives + zeros + negatives; }
  friend bool operator==(const SignCounts&, const SignCounts&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const SignCounts& c) {
  return os << '(' << c.positives << ", " << c.zeros << ", " << c.negatives << ')';
}

/// Classifies each value by sign. For binary floating point, values with
/// |v| <= zero_tolerance count as zero; the tolerance is ignored for exact
/// rationals.
template <DiagonalScalar T>
SignCounts sign_counts(std::span<const T> values, double zero_tolerance = 0.0) {
  SignCounts c;
  for (const T& v : values) {
    int s;
    if constexpr (std::is_floating_point_v<T>) {
      if (std::isnan(v)) throw NumericFailure("NaN in diagonal");
      s = std::fabs(v) <= zero_tolerance ? 0 : ScalarTraits<T>::sign(v);
    } else {
      s = ScalarTraits<T>::sign(v);
    }
    if (s > 0)
      ++c.positives;
    else if (s < 0)
      ++c.negatives;
    else
      ++c.zeros;
  }
  return c;
}

/// Diagonal congruent to A(G) + xI, indexed by vertex id.
template <typename T>
struct DiagonalReport {
  std::vector<T> values;
  SignCounts counts;
  T shift{};
  std::optional<std::vector<IterationRecord<T>>> trace;
  std::size_t tree_work = 0;

  std::size_t positives() const noexcept { return counts.positives; }
  std::size_t zeros() const noexcept { return counts.zeros; }
  std::size_t negatives() const noexcept { return counts.negatives; }
};

struct DiagonalizeOptions {
  bool trace = false;
  /// Float mode only: |d| <= zero_tolerance is counted as zero.
  double zero_tolerance = 0.0;
};

/// Picks the leftmost deepest sibling pair; the default selection order.
struct CanonicalSelection {
  SiblingPair operator()(const Cotree& t) const { return t.deepest_sibling_pair(); }
};

/// Uniformly random maximal-depth pair, deterministic in the seed.
class RandomSelection {
 public:
  explicit RandomSelection(std::uint64_t seed) : rng_(seed) {}
  SiblingPair operator()(const Cotree& t) { return random_deepest_sibling_pair(t, rng_); }

 private:
  std::mt19937_64 rng_;
};

namespace detail {

template <typename T>
void require_finite(const T& v) {
  if (!ScalarTraits<T>::finite(v))
    throw NumericFailure("floating-point overflow or NaN during diagonalization; rerun in exact mode");
}

// One elimination step on a sibling pair with current values (alpha, beta).
// Writes the new values to dk and dl, which must not alias alpha or beta.
// Returns the subcase; vl is finalized too in 1c and 2c.
template <typename T>
class Eliminator {
 public:
  explicit Eliminator(const T& x) {
#ifndef NDEBUG
    range_check_ = ScalarTraits<T>::sign(x) == 0;
#else
    (void)x;
#endif
  }

  Subcase operator()(const T& alpha, const T& beta, NodeKind parent_kind, T& dk, T& dl) const {
    Subcase subcase;
    if (parent_kind == NodeKind::Join) {
      dk = alpha + beta - two_;
      if (dk != zero_) {
        subcase = Subcase::k1a;
        dl = (alpha * beta - one_) / dk;
      } else if (beta == one_) {
        subcase = Subcase::k1b;
        dl = one_;
      } else {
        subcase = Subcase::k1c;
        dl = one_ - beta;
        dk = -(dl * dl);
        dl = one_;
      }
    } else {
      dk = alpha + beta;
      if (dk != zero_) {
        subcase = Subcase::k2a;
        dl = (alpha * beta) / dk;
      } else if (beta == zero_) {
        subcase = Subcase::k2b;
        dl = zero_;
      } else {
        subcase = Subcase::k2c;
        dk = -beta;
        dl = beta;
      }
    }
    require_finite(dk);
    require_finite(dl);
#ifndef NDEBUG
    // At x = 0 every value still on the tree lies in [0, 1).
    if (range_check_ && !finalizes_both(subcase)) assert(ScalarTraits<T>::sign(dl) >= 0 && dl < one_);
#endif
    return subcase;
  }

  static constexpr bool finalizes_both(Subcase s) { return s == Subcase::k1c || s == Subcase::k2c; }

 private:
  const T zero_{0}, one_{1}, two_{2};
#ifndef NDEBUG
  bool range_check_ = false;
#endif
};

// Canonical elimination on the flat plan. Each interior node, when its turn
// comes, has only leaves below it, so its elimination is a left fold over its
// current child list. Values travel with the fold and are written to
// `values` (indexed by vertex) once final.
//
// A node's fold depends only on its own subtree unless some fold finalizes
// both leaves of its last pair, after which the parent may collapse and splice
// a sibling into the grandparent. Until that happens the nodes can be visited
// in post-order, where the results of a node's interior children are simply
// the most recent ones; run_post_order returns false as soon as it would
// have to deal with a collapse, and run_level_order handles the general case.
template <typename T, bool kIdentitySlots>
bool run_post_order(const Cotree::EliminationPlan& p, const T& x, const Eliminator<T>& step, std::vector<T>& values,
                    std::size_t& work) {
  using P = Cotree::EliminationPlan;
  struct Item {
    std::int32_t slot;
    T value;
  };
  if (p.interior_count() == 0) return true;
  const std::int32_t* vertex = p.vertex_of_slot.data();
  const auto out = [&](std::int32_t slot) -> T& { return values[kIdentitySlots ? slot : vertex[slot]]; };
  std::vector<Item> results;  // survivors of finished nodes still waiting for their parent
  T dk, dl;
  Item cur{-1, T{}};
  Item leaf{-1, T{}};
  std::int32_t next_slot = 0;
  const std::uint8_t* s = p.stream.data();
  while (*s != P::kEnd) {
    const NodeKind kind = *s == P::kJoinHeader ? NodeKind::Join : NodeKind::Union;
    const std::uint8_t* const first = ++s;
    std::size_t interior = 0;
    for (; *s <= P::kInterior; ++s) interior += *s;
    const std::uint8_t* const last = s;
    const std::size_t base = results.size() - interior;
    std::size_t next = base;
    bool have = false;
    for (const std::uint8_t* c = first; c != last; ++c) {
      Item* it;
      if (*c == P::kLeaf) {
        leaf.slot = next_slot++;
        leaf.value = x;
        it = &leaf;
      } else {
        it = &results[next++];
      }
      if (!have) {
        std::swap(cur.value, it->value);
        cur.slot = it->slot;
        have = true;
        continue;
      }
      const Subcase sc = step(cur.value, it->value, kind, dk, dl);
      std::swap(out(cur.slot), dk);
      if (Eliminator<T>::finalizes_both(sc)) {
        // On the last pair the parent loses a child; the caller starts over.
        if (c + 1 == last) return false;
        std::swap(out(it->slot), dl);
        have = false;
      } else {
        std::swap(cur.value, dl);
        cur.slot = it->slot;
      }
    }
    work += static_cast<std::size_t>(last - first);
    results.resize(base);
    results.push_back({cur.slot, T{}});
    std::swap(results.back().value, cur.value);
  }
  std::swap(out(results.back().slot), results.back().value);
  return true;
}

inline constexpr std::int32_t kUnresolved = INT32_MIN;
inline constexpr std::int32_t kEmpty = -1;

template <typename T>
void run_level_order(const Cotree::EliminationPlan& p, const T& x, const Eliminator<T>& step, std::vector<T>& values,
                     std::optional<std::vector<IterationRecord<T>>>& trace, std::size_t& work) {
  const std::size_t m = p.interior_count();
  if (m == 0) return;
  const auto forward = [](std::int32_t rank) { return -2 - rank; };

  // state >= 0: a surviving leaf slot holding `survivor`. count is the
  // current number of children; 0 marks a node that collapsed away.
  struct Node {
    T survivor{};
    std::int32_t state = kUnresolved;
    std::int32_t count = 0;
  };
  std::vector<Node> node(m);
  for (std::size_t r = 0; r < m; ++r) node[r].count = static_cast<std::int32_t>(p.first[r + 1] - p.first[r]);
  std::int32_t root = static_cast<std::int32_t>(m - 1);
  const auto& vertex = p.vertex_of_slot;

  struct Item {
    std::int32_t slot;
    T value;
  };
  std::vector<Item> items;
  std::vector<std::int32_t> stack;
  const auto push_children = [&](std::int32_t r) {
    for (std::uint32_t i = p.first[r + 1]; i-- > p.first[r];) stack.push_back(p.child[i]);
  };
  T dk, dl;

  for (std::size_t i = 0; i < m; ++i) {
    const std::int32_t r = p.level_order[i];
    if (node[r].count == 0) continue;
    const NodeKind kind = p.kind[r];
    items.clear();
    push_children(r);
    while (!stack.empty()) {
      const std::int32_t c = stack.back();
      stack.pop_back();
      ++work;
      if (c >= 0) {
        items.push_back({c, x});
        continue;
      }
      const Node& child = node[~c];
      if (child.state >= 0)
        items.push_back({child.state, child.survivor});
      else if (child.state <= -2)
        push_children(forward(child.state));
      else if (child.state == kUnresolved)
        throw std::logic_error("diagonalize: child visited before elimination");
    }

    Item* cur = nullptr;
    for (Item& it : items) {
      if (!cur) {
        cur = &it;
        continue;
      }
      const Subcase sc = step(cur->value, it.value, kind, dk, dl);
      const bool both = Eliminator<T>::finalizes_both(sc);
      if (trace) trace->push_back({vertex[cur->slot], vertex[it.slot], kind, sc, cur->value, it.value, dk, dl, both});
      std::swap(values[vertex[cur->slot]], dk);
      if (both) {
        std::swap(values[vertex[it.slot]], dl);
        cur = nullptr;
      } else {
        std::swap(it.value, dl);
        cur = &it;
      }
    }
    if (r == root) {
      if (cur) std::swap(values[vertex[cur->slot]], cur->value);
      return;
    }
    if (cur) {
      node[r].state = cur->slot;
      std::swap(node[r].survivor, cur->value);
      continue;
    }

    // Both leaves of the final pair were finalized: the parent loses a child.
    node[r].state = kEmpty;
    const std::int32_t g = p.parent[r];
    if (--node[g].count != 1) continue;
    std::int32_t leaf = -1, interior = -1;
    const T* leaf_value = &x;
    for (std::uint32_t i = p.first[g]; i < p.first[g + 1] && leaf < 0 && interior < 0; ++i) {
      const std::int32_t c = p.child[i];
      ++work;
      if (c >= 0) {
        leaf = c;
      } else if (node[~c].state >= 0) {
        leaf = node[~c].state;
        leaf_value = &node[~c].survivor;
      } else if (node[~c].state == kUnresolved) {
        interior = ~c;
      }
    }
    node[g].count = 0;
    if (g == root) {
      if (interior < 0) {
        values[vertex[leaf]] = *leaf_value;
        return;
      }
      root = interior;
    } else if (interior < 0) {
      node[g].state = leaf;
      node[g].survivor = *leaf_value;
    } else {
      // Same kind as g's parent: its children are spliced in g's place.
      node[g].state = forward(interior);
      node[p.parent[g]].count += node[interior].count - 1;
      node[interior].count = 0;
    }
  }
}

}  // namespace detail

/// Computes a diagonal matrix congruent to A(G) + xI, where G is the cograph
/// whose cotree is `t`, by eliminating maximal-depth sibling pairs.
///
/// Every iteration costs O(1) arithmetic operations and amortized O(1) tree
/// work, n - 1 iterations at most. Float mode takes exact branch decisions on
/// computed doubles, so values near the branch boundaries are unreliable.
///
/// The canonical order runs on the tree's flat plan without copying it; any
/// other selector drives a working copy of the linked tree.
template <DiagonalScalar T, typename Select = CanonicalSelection>
DiagonalReport<T> diagonalize(const Cotree& t, const T& x, const DiagonalizeOptions& options = {},
                              Select&& select = {}) {
  detail::require_finite(x);
  const std::size_t n = t.order();
  if (t.leaf_count() != n) throw CotreeError("diagonalize needs an unreduced cotree");

  DiagonalReport<T> report;
  report.shift = x;
  // Branch tests compare exactly, so a rational built as e.g. 2/2 must be reduced first.
  if constexpr (std::is_same_v<T, Rational>) report.shift.canonicalize();
  report.values.assign(n, report.shift);
  if (options.trace) report.trace.emplace().reserve(n > 0 ? n - 1 : 0);
  const detail::Eliminator<T> step(report.shift);

  if (std::is_same_v<std::decay_t<Select>, CanonicalSelection> && t.has_plan()) {
    const auto& plan = t.plan();
    const bool done = !report.trace && (plan.slots_are_vertices
                                            ? detail::run_post_order<T, true>(plan, report.shift, step, report.values,
                                                                              report.tree_work)
                                            : detail::run_post_order<T, false>(plan, report.shift, step,
                                                                               report.values, report.tree_work));
    if (!done) {
      report.values.assign(n, report.shift);
      detail::run_level_order(plan, report.shift, step, report.values, report.trace, report.tree_work);
    }
  } else {
    Cotree tree = t;
    std::vector<T>& d = report.values;
    T dk, dl;
    while (tree.leaf_count() >= 2) {
      const SiblingPair pair = select(tree);
      const std::int32_t vk = tree.vertex(pair.k);
      const std::int32_t vl = tree.vertex(pair.l);
      const Subcase sc = step(d[vk], d[vl], pair.parent_kind, dk, dl);
      const bool both = detail::Eliminator<T>::finalizes_both(sc);
      if (report.trace) report.trace->push_back({vk, vl, pair.parent_kind, sc, d[vk], d[vl], dk, dl, both});
      std::swap(d[vk], dk);
      std::swap(d[vl], dl);
      tree.remove_leaf(pair.k);
      if (both) {
        // The pair were the root's only children: nothing is left to eliminate.
        if (tree.leaf_count() == 1) break;
        tree.remove_leaf(tree.leaf_of_vertex(vl));
      }
#ifdef COSPECTRAL_CHECK_TREE
      if (!tree.empty()) tree.validate();
#endif
    }
    report.tree_work = tree.work();
  }

  report.counts = sign_counts<T>(std::span<const T>(report.values), options.zero_tolerance);
  return report;
}

/// One line per iteration: `iter k l parent subcase alpha beta dk dl`,
/// tab-separated, rationals as `p/q`.
template <typename T>
void write_trace(std::ostream& os, const std::vector<IterationRecord<T>>& trace) {
  std::size_t iter = 1;
  for (const auto& r : trace) {
    os << iter++ << '\t' << r.k << '\t' << r.l << '\t' << kind_letter(r.parent_kind) << '\t'
       << subcase_name(r.subcase) << '\t' << ScalarTraits<T>::format(r.alpha) << '\t'
       << ScalarTraits<T>::format(r.beta) << '\t' << ScalarTraits<T>::format(r.new_dk) << '\t'
       << ScalarTraits<T>::format(r.new_dl) << '\n';
  }
}

}  // namespace cospectral
