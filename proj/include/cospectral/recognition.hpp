#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "cospectral/cotree.hpp"

namespace cospectral {

class EdgeListError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Simple undirected graph on vertices 0..n-1 with sorted adjacency lists.
class EdgeListGraph {
 public:
  explicit EdgeListGraph(std::size_t n) : adjacency_(n) {
    if (n == 0) throw EdgeListError("graph must have at least one vertex");
  }

  std::size_t order() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edges_; }

  void add_edge(std::size_t u, std::size_t v) {
    if (u >= order() || v >= order())
      throw EdgeListError("vertex id out of range in edge " + std::to_string(u) + " " + std::to_string(v));
    if (u == v) throw EdgeListError("self-loop at vertex " + std::to_string(u));
    auto& nu = adjacency_[u];
    const auto it = std::lower_bound(nu.begin(), nu.end(), static_cast<std::int32_t>(v));
    if (it != nu.end() && *it == static_cast<std::int32_t>(v))
      throw EdgeListError("duplicate edge " + std::to_string(u) + " " + std::to_string(v));
    nu.insert(it, static_cast<std::int32_t>(v));
    auto& nv = adjacency_[v];
    nv.insert(std::lower_bound(nv.begin(), nv.end(), static_cast<std::int32_t>(u)), static_cast<std::int32_t>(u));
    ++edges_;
  }

  bool adjacent(std::size_t u, std::size_t v) const {
    const auto& nu = adjacency_[u];
    return std::binary_search(nu.begin(), nu.end(), static_cast<std::int32_t>(v));
  }

  const std::vector<std::int32_t>& neighbors(std::size_t v) const { return adjacency_[v]; }

 private:
  std::vector<std::vector<std::int32_t>> adjacency_;
  std::size_t edges_ = 0;
};

/// Reads `n m` followed by m lines `u v`; `#` starts a comment.
inline EdgeListGraph parse_edge_list(std::string_view text) {
  std::vector<std::string> lines;
  {
    std::string current;
    for (char c : text) {
      if (c == '\n') {
        lines.push_back(std::move(current));
        current.clear();
      } else {
        current.push_back(c);
      }
    }
    lines.push_back(std::move(current));
  }
  std::vector<std::pair<std::size_t, std::string>> records;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string line = lines[i];
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    records.emplace_back(i + 1, std::move(line));
  }
  if (records.empty()) throw EdgeListError("missing header line 'n m'");

  const auto read_pair = [](const std::pair<std::size_t, std::string>& rec, const char* what) {
    std::istringstream in(rec.second);
    long long a = 0, b = 0;
    std::string rest;
    if (!(in >> a >> b) || (in >> rest) || a < 0 || b < 0)
      throw EdgeListError(std::string("malformed ") + what + " on line " + std::to_string(rec.first));
    return std::pair<std::size_t, std::size_t>(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
  };

  const auto [n, m] = read_pair(records.front(), "header");
  if (n == 0) throw EdgeListError("malformed header: n must be at least 1");
  if (records.size() - 1 != m)
    throw EdgeListError("malformed header: declared " + std::to_string(m) + " edges, found " +
                        std::to_string(records.size() - 1));
  EdgeListGraph g(n);
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto [u, v] = read_pair(records[i], "edge");
    g.add_edge(u, v);
  }
  return g;
}

/// Rejection result: an induced path a-b-c-d.
struct NotCograph {
  std::array<std::int32_t, 4> witness{};
};

namespace detail {

// Searches an induced P4 inside `vertices` by trying every edge b-c as the
// middle edge. Always succeeds on a connected, co-connected vertex set of
// size >= 2, which is exactly where decomposition stalls.
inline NotCograph find_p4(const EdgeListGraph& g, const std::vector<std::int32_t>& vertices,
                          const std::vector<char>& in_set) {
  for (std::int32_t b : vertices) {
    for (std::int32_t c : g.neighbors(b)) {
      if (!in_set[c] || c == b) continue;
      std::vector<std::int32_t> left, right;
      for (std::int32_t a : g.neighbors(b))
        if (in_set[a] && a != c && !g.adjacent(a, c)) left.push_back(a);
      if (left.empty()) continue;
      for (std::int32_t d : g.neighbors(c))
        if (in_set[d] && d != b && !g.adjacent(d, b)) right.push_back(d);
      for (std::int32_t a : left)
        for (std::int32_t d : right)
          if (a != d && !g.adjacent(a, d)) return NotCograph{{a, b, c, d}};
    }
  }
  throw std::logic_error("no induced P4 in a prime vertex set");
}

// Connected components of G[vertices] (complement = false) or of its
// complement (complement = true). O(|vertices|^2) worst case.
inline std::vector<std::vector<std::int32_t>> components(const EdgeListGraph& g,
                                                         const std::vector<std::int32_t>& vertices,
                                                         bool complement) {
  std::vector<std::vector<std::int32_t>> out;
  std::vector<std::int32_t> unvisited = vertices;
  std::vector<char> mark(g.order(), 0);
  while (!unvisited.empty()) {
    std::vector<std::int32_t> comp{unvisited.back()};
    unvisited.pop_back();
    for (std::size_t head = 0; head < comp.size(); ++head) {
      const std::int32_t v = comp[head];
      for (std::int32_t u : g.neighbors(v)) mark[u] = 1;
      std::vector<std::int32_t> keep;
      keep.reserve(unvisited.size());
      for (std::int32_t u : unvisited) {
        const bool reachable = complement ? !mark[u] : mark[u];
        (reachable ? comp : keep).push_back(u);
      }
      unvisited.swap(keep);
      for (std::int32_t u : g.neighbors(v)) mark[u] = 0;
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

}  // namespace detail

/// Builds the minimal cotree of `g` (leaf i holds vertex i), or returns an
/// induced P4 when `g` is not a cograph.
///
/// A disconnected graph decomposes into a Union of its components, a
/// connected graph with disconnected complement into a Join of its
/// co-components. Component subtrees then automatically alternate in kind.
inline std::variant<Cotree, NotCograph> recognize(const EdgeListGraph& g) {
  Cotree t;
  std::vector<char> in_set(g.order(), 0);

  struct Task {
    std::vector<std::int32_t> vertices;
    NodeIndex parent;
  };
  std::vector<Task> stack;
  std::vector<std::int32_t> all(g.order());
  for (std::size_t i = 0; i < g.order(); ++i) all[i] = static_cast<std::int32_t>(i);
  stack.push_back({std::move(all), kNoNode});

  while (!stack.empty()) {
    Task task = std::move(stack.back());
    stack.pop_back();
    if (task.vertices.size() == 1) {
      t.add_node(NodeKind::Leaf, task.parent, task.vertices.front());
      continue;
    }
    for (auto v : task.vertices) in_set[v] = 1;
    auto parts = detail::components(g, task.vertices, false);
    NodeKind kind = NodeKind::Union;
    if (parts.size() == 1) {
      parts = detail::components(g, task.vertices, true);
      kind = NodeKind::Join;
      if (parts.size() == 1) return detail::find_p4(g, task.vertices, in_set);
    }
    for (auto v : task.vertices) in_set[v] = 0;
    const NodeIndex node = t.add_node(kind, task.parent);
    // Reverse push keeps children in ascending order of their least vertex.
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) stack.push_back({std::move(*it), node});
  }
  t.finalize();
  return t;
}

}  // namespace cospectral
