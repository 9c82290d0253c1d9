#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "cospectral/cotree.hpp"
#include "cospectral/spectral.hpp"

namespace cospectral {

struct CompleteGraph {
  std::size_t n = 1;
};
struct EmptyGraph {
  std::size_t n = 1;
};
/// (r+1 disjoint copies of K2) joined with K_{r+2}; order 3r + 4.
struct EquienergeticGr {
  std::size_t r = 1;
};
struct RandomCotree {
  std::size_t n = 1;
  std::uint64_t seed = 0;
  double join_bias = 0.5;  // probability that the root is a Join
};

using FamilySpec = std::variant<CompleteGraph, EmptyGraph, EquienergeticGr, RandomCotree>;

class FamilyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

// Modulo reduction keeps generated shapes identical across standard libraries.
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) { return rng() % bound; }

inline Cotree star_of_leaves(NodeKind kind, std::size_t n) {
  Cotree t;
  if (n == 1) {
    t.add_node(NodeKind::Leaf, kNoNode);
  } else {
    const NodeIndex root = t.add_node(kind, kNoNode);
    for (std::size_t i = 0; i < n; ++i) t.add_node(NodeKind::Leaf, root);
  }
  t.finalize();
  return t;
}

inline Cotree random_cotree(const RandomCotree& spec) {
  std::mt19937_64 rng(spec.seed);
  Cotree t;
  if (spec.n == 1) {
    t.add_node(NodeKind::Leaf, kNoNode);
    t.finalize();
    return t;
  }
  const double coin = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  const NodeKind root_kind = coin < spec.join_bias ? NodeKind::Join : NodeKind::Union;

  // Each interior node receives a leaf budget >= 2 and splits it into
  // 2..6 positive parts; parts of size 1 become leaves.
  struct Pending {
    NodeIndex node;
    std::size_t budget;
  };
  std::vector<Pending> stack{{t.add_node(root_kind, kNoNode), spec.n}};
  std::vector<std::size_t> cuts;
  while (!stack.empty()) {
    const Pending p = stack.back();
    stack.pop_back();
    const std::size_t max_parts = std::min<std::size_t>(p.budget, 6);
    const std::size_t parts = 2 + static_cast<std::size_t>(bounded(rng, max_parts - 1));
    cuts.clear();
    while (cuts.size() + 1 < parts) {
      const std::size_t c = 1 + static_cast<std::size_t>(bounded(rng, p.budget - 1));
      if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(p.budget);
    const NodeKind child_kind = t.kind(p.node) == NodeKind::Join ? NodeKind::Union : NodeKind::Join;
    std::vector<Pending> interior;
    std::size_t prev = 0;
    for (std::size_t c : cuts) {
      const std::size_t size = c - prev;
      prev = c;
      if (size == 1) {
        t.add_node(NodeKind::Leaf, p.node);
      } else {
        interior.push_back({t.add_node(child_kind, p.node), size});
      }
    }
    stack.insert(stack.end(), interior.begin(), interior.end());
  }
  t.finalize();
  return t;
}

}  // namespace detail

/// Cotree of a named family member.
inline Cotree build(const FamilySpec& spec) {
  return std::visit(
      [](const auto& s) -> Cotree {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, CompleteGraph>) {
          if (s.n < 1) throw FamilyError("complete graph needs n >= 1");
          return detail::star_of_leaves(NodeKind::Join, s.n);
        } else if constexpr (std::is_same_v<S, EmptyGraph>) {
          if (s.n < 1) throw FamilyError("empty graph needs n >= 1");
          return detail::star_of_leaves(NodeKind::Union, s.n);
        } else if constexpr (std::is_same_v<S, EquienergeticGr>) {
          if (s.r < 1) throw FamilyError("G_r needs r >= 1");
          Cotree t;
          const NodeIndex root = t.add_node(NodeKind::Join, kNoNode);
          for (std::size_t i = 0; i < s.r + 2; ++i) t.add_node(NodeKind::Leaf, root);
          const NodeIndex copies = t.add_node(NodeKind::Union, root);
          for (std::size_t i = 0; i < s.r + 1; ++i) {
            const NodeIndex edge = t.add_node(NodeKind::Join, copies);
            t.add_node(NodeKind::Leaf, edge);
            t.add_node(NodeKind::Leaf, edge);
          }
          t.finalize();
          return t;
        } else {
          if (s.n < 1) throw FamilyError("random cotree needs n >= 1");
          if (!(s.join_bias >= 0.0 && s.join_bias <= 1.0)) throw FamilyError("join bias must lie in [0, 1]");
          return detail::random_cotree(s);
        }
      },
      spec);
}

/// Parses `complete:N`, `empty:N`, `gr:R` or `random:N[:SEED[:BIAS]]`.
inline FamilySpec parse_family(std::string_view text) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == ':') {
      parts.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  parts.push_back(current);
  const auto number = [&](std::size_t i) -> std::uint64_t {
    const std::string& p = parts.at(i);
    if (p.empty() || p.find_first_not_of("0123456789") != std::string::npos)
      throw FamilyError("invalid number '" + p + "' in family spec '" + std::string(text) + "'");
    return std::stoull(p);
  };
  const std::string& name = parts.front();
  if (name == "complete" && parts.size() == 2) return CompleteGraph{number(1)};
  if (name == "empty" && parts.size() == 2) return EmptyGraph{number(1)};
  if (name == "gr" && parts.size() == 2) return EquienergeticGr{number(1)};
  if (name == "random" && parts.size() >= 2 && parts.size() <= 4) {
    RandomCotree r{number(1), parts.size() > 2 ? number(2) : 0, 0.5};
    if (parts.size() > 3) {
      try {
        r.join_bias = std::stod(parts[3]);
      } catch (const std::exception&) {
        throw FamilyError("invalid join bias in '" + std::string(text) + "'");
      }
    }
    return r;
  }
  throw FamilyError("unknown family spec '" + std::string(text) +
                    "' (expected complete:N, empty:N, gr:R or random:N[:SEED[:BIAS]])");
}

/// True when some interior node has two or more interior children, i.e. the
/// cotree is not a caterpillar (the graph is not a threshold graph).
inline bool has_branching_interior(const Cotree& t) {
  for (NodeIndex v : t.preorder()) {
    if (t.is_leaf(v)) continue;
    std::size_t interior = 0;
    t.for_each_child(v, [&](NodeIndex c) { interior += !t.is_leaf(c); });
    if (interior >= 2) return true;
  }
  return false;
}

struct GrClaim {
  std::string name;
  std::string expected;
  std::string actual;
  bool pass = false;
};

struct GrSpectrumReport {
  std::size_t r = 0;
  std::size_t n = 0;
  Rational energy;
  std::vector<GrClaim> claims;

  bool all_pass() const {
    return std::all_of(claims.begin(), claims.end(), [](const GrClaim& c) { return c.pass; });
  }
};

/// Checks the exact spectrum of G_r claim by claim: inertia, the
/// multiplicities of -1, 1, 2r+3 and -(r+1), that those four eigenvalues
/// exhaust the spectrum, and that the assembled energy equals 2n - 2.
inline GrSpectrumReport verify_gr_spectrum(std::size_t r) {
  if (r < 1) throw FamilyError("G_r needs r >= 1");
  const Cotree t = build(EquienergeticGr{r});
  GrSpectrumReport rep;
  rep.r = r;
  rep.n = t.order();
  const auto add = [&](std::string name, auto expected, auto actual) {
    std::ostringstream e, a;
    e << expected;
    a << actual;
    rep.claims.push_back({std::move(name), e.str(), a.str(), expected == actual});
  };
  const Rational largest(static_cast<long>(2 * r + 3));
  const Rational smallest(-static_cast<long>(r + 1));

  add("inertia", Inertia{r + 1, 0, 2 * r + 3}, inertia_by_algorithm(t));
  const std::size_t m_minus_one = multiplicity(t, Rational(-1));
  const std::size_t m_one = multiplicity(t, Rational(1));
  const std::size_t m_largest = multiplicity(t, largest);
  const std::size_t m_smallest = multiplicity(t, smallest);
  add("m(-1)", 2 * (r + 1), m_minus_one);
  add("m(1)", r, m_one);
  add("m(2r+3)", std::size_t{1}, m_largest);
  add("m(-(r+1))", std::size_t{1}, m_smallest);
  add("spectrum exhausted", rep.n, m_minus_one + m_one + m_largest + m_smallest);
  rep.energy = Rational(static_cast<unsigned long>(m_minus_one + m_one)) +
               largest * static_cast<unsigned long>(m_largest) -
               smallest * static_cast<unsigned long>(m_smallest);
  add("energy = 2n - 2", Rational(static_cast<unsigned long>(2 * rep.n - 2)), rep.energy);
  return rep;
}

}  // namespace cospectral
