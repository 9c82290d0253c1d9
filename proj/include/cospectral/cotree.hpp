#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cospectral {

enum class NodeKind : std::uint8_t { Union, Join, Leaf };

using NodeIndex = std::int32_t;
inline constexpr NodeIndex kNoNode = -1;

inline constexpr char kind_letter(NodeKind k) {
  return k == NodeKind::Join ? 'J' : k == NodeKind::Union ? 'U' : 'x';
}

/// Structural violation of the cotree invariants.
class CotreeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax error in the cotree text format; `offset()` is the byte position.
class CotreeParseError : public CotreeError {
 public:
  CotreeParseError(const std::string& what, std::size_t offset)
      : CotreeError(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Two leaves under a common parent. `k` is eliminated, `l` survives.
struct SiblingPair {
  NodeIndex k = kNoNode;
  NodeIndex l = kNoNode;
  NodeIndex parent = kNoNode;
  NodeKind parent_kind = NodeKind::Union;
};

/// Minimal (alternating) cotree stored in an index-addressed node pool.
///
/// Children form an intrusive doubly linked list, so unlinking a leaf and
/// collapsing a two-child parent are O(1). Interior nodes never change depth
/// under the maximal-depth removal rules, which lets the deepest sibling pair
/// be found through a single depth-sorted cursor over the interior nodes.
class Cotree {
 public:
  struct Node {
    NodeKind kind = NodeKind::Leaf;
    bool alive = false;
    std::int32_t vertex = -1;
    NodeIndex parent = kNoNode;
    NodeIndex first_child = kNoNode;
    NodeIndex last_child = kNoNode;
    NodeIndex prev = kNoNode;
    NodeIndex next = kNoNode;
    std::int32_t child_count = 0;
    std::int32_t depth = 0;
  };

  /// Interior nodes ranked in post-order with their children stored
  /// contiguously. A child entry `c >= 0` is leaf slot `c`; `c < 0` is
  /// interior rank `~c`. Leaf slots number the leaves in the order they
  /// appear in `child`. The root has the last rank. `level_order` lists the
  /// ranks in selection order: deepest first, ties in pre-order.
  struct EliminationPlan {
    std::vector<std::uint32_t> first;   // children of rank r: child[first[r], first[r + 1])
    std::vector<NodeKind> kind;
    std::vector<std::int32_t> parent;   // rank, or -1 at the root
    std::vector<std::int32_t> child;
    std::vector<std::int32_t> vertex_of_slot;
    std::vector<std::int32_t> level_order;
    /// The same tree as one byte per entry: each rank in post-order as a
    /// header (kUnionHeader or kJoinHeader) followed by its children, kLeaf or
    /// kInterior; kEnd closes the stream. Leaf slots are implicit, counting
    /// up from 0, and interior children refer to the most recent unconsumed
    /// ranks.
    std::vector<std::uint8_t> stream;
    bool slots_are_vertices = false;    // vertex_of_slot is the identity

    static constexpr std::uint8_t kLeaf = 0, kInterior = 1, kUnionHeader = 2, kJoinHeader = 3, kEnd = 4;

    std::size_t interior_count() const noexcept { return kind.size(); }
  };

  Cotree() = default;

  static Cotree single_leaf() {
    Cotree t;
    t.add_node(NodeKind::Leaf, kNoNode);
    t.finalize();
    return t;
  }

  // -- construction ---------------------------------------------------------

  /// Appends a node as the last child of `parent` (or as the root when
  /// `parent == kNoNode`). Leaves may carry an explicit vertex id; otherwise
  /// ids are assigned left to right by finalize().
  NodeIndex add_node(NodeKind kind, NodeIndex parent, std::int32_t vertex = -1) {
    if (parent == kNoNode) {
      if (root_ != kNoNode) throw CotreeError("cotree already has a root");
    } else {
      check_alive(parent);
      if (nodes_[parent].kind == NodeKind::Leaf) throw CotreeError("a leaf cannot have children");
    }
    NodeIndex id;
    if (!free_.empty()) {
      id = free_.back();
      free_.pop_back();
      nodes_[id] = Node{};
    } else {
      id = static_cast<NodeIndex>(nodes_.size());
      nodes_.emplace_back();
    }
    Node& node = nodes_[id];
    node.kind = kind;
    node.alive = true;
    node.vertex = kind == NodeKind::Leaf ? vertex : -1;
    if (parent == kNoNode) {
      root_ = id;
    } else {
      append_child(parent, id);
      node.depth = nodes_[parent].depth + 1;
    }
    if (kind == NodeKind::Leaf) ++leaf_count_;
    finalized_ = false;
    return id;
  }

  /// Validates the structure, assigns or checks leaf ids, computes depths
  /// and prepares deepest-pair selection.
  ///
  /// When every leaf was added without an id, ids 0..n-1 are assigned in
  /// left-to-right order. Otherwise all ids must be present and distinct.
  void finalize() {
    if (root_ == kNoNode || leaf_count_ == 0) throw CotreeError("cotree has no leaves");
    const auto order = preorder();
    bool any_id = false;
    bool all_id = true;
    for (NodeIndex v : order) {
      if (nodes_[v].kind != NodeKind::Leaf) continue;
      if (nodes_[v].vertex >= 0)
        any_id = true;
      else
        all_id = false;
    }
    if (!any_id) {
      std::int32_t next_id = 0;
      for (NodeIndex v : order)
        if (nodes_[v].kind == NodeKind::Leaf) nodes_[v].vertex = next_id++;
    } else if (!all_id) {
      throw CotreeError("leaf vertex ids must be given for all leaves or none");
    }
    order_n_ = leaf_count_;
    leaf_of_vertex_.assign(order_n_, kNoNode);
    for (NodeIndex v : order) {
      const Node& node = nodes_[v];
      if (node.kind != NodeKind::Leaf) continue;
      if (node.vertex < 0 || static_cast<std::size_t>(node.vertex) >= order_n_ ||
          leaf_of_vertex_[node.vertex] != kNoNode)
        throw CotreeError("leaf vertex ids must be distinct and cover 0..n-1");
      leaf_of_vertex_[node.vertex] = v;
    }
    validate();
    rebuild_selection_order();
    build_plan();
    finalized_ = true;
  }

  // -- queries --------------------------------------------------------------

  /// Number of leaves currently in the tree.
  std::size_t leaf_count() const noexcept { return leaf_count_; }
  /// Number of vertices of the graph the tree was built for.
  std::size_t order() const noexcept { return order_n_; }
  NodeIndex root() const noexcept { return root_; }
  bool empty() const noexcept { return leaf_count_ == 0; }

  const Node& node(NodeIndex v) const {
    check_alive(v);
    return nodes_[v];
  }
  NodeKind kind(NodeIndex v) const { return node(v).kind; }
  bool is_leaf(NodeIndex v) const { return node(v).kind == NodeKind::Leaf; }
  std::int32_t vertex(NodeIndex v) const { return node(v).vertex; }
  NodeIndex parent(NodeIndex v) const { return node(v).parent; }
  std::int32_t depth(NodeIndex v) const { return node(v).depth; }
  std::size_t child_count(NodeIndex v) const { return static_cast<std::size_t>(node(v).child_count); }
  bool contains(NodeIndex v) const noexcept {
    return v >= 0 && static_cast<std::size_t>(v) < nodes_.size() && nodes_[v].alive;
  }

  /// Node holding graph vertex `vertex`, or kNoNode once it has been removed.
  NodeIndex leaf_of_vertex(std::int32_t vertex) const {
    if (vertex < 0 || static_cast<std::size_t>(vertex) >= leaf_of_vertex_.size())
      throw CotreeError("vertex id out of range");
    return leaf_of_vertex_[vertex];
  }

  template <typename Fn>
  void for_each_child(NodeIndex v, Fn&& fn) const {
    for (NodeIndex c = node(v).first_child; c != kNoNode; c = nodes_[c].next) fn(c);
  }

  std::vector<NodeIndex> children(NodeIndex v) const {
    std::vector<NodeIndex> out;
    out.reserve(child_count(v));
    for_each_child(v, [&](NodeIndex c) { out.push_back(c); });
    return out;
  }

  /// Live nodes in pre-order (parents before children, left to right).
  std::vector<NodeIndex> preorder() const {
    std::vector<NodeIndex> out;
    if (root_ == kNoNode) return out;
    std::vector<NodeIndex> stack{root_};
    while (!stack.empty()) {
      const NodeIndex v = stack.back();
      stack.pop_back();
      out.push_back(v);
      for (NodeIndex c = nodes_[v].last_child; c != kNoNode; c = nodes_[c].prev) stack.push_back(c);
    }
    return out;
  }

  /// True while the tree is exactly as finalized, so plan() describes it.
  bool has_plan() const noexcept { return finalized_ && plan_valid_; }

  const EliminationPlan& plan() const {
    if (!has_plan()) throw CotreeError("elimination plan is only available on an unmodified finalized cotree");
    return plan_;
  }

  /// Node-pool touches performed by selection and removal since the tree was
  /// finalized; used to measure the linear work bound.
  std::size_t work() const noexcept { return work_; }

  // -- the operations used by the diagonalizer ------------------------------

  /// Leftmost interior node of maximal depth together with its two leftmost
  /// children. That node's children are necessarily all leaves.
  SiblingPair deepest_sibling_pair() const {
    if (leaf_count_ < 2) throw CotreeError("deepest_sibling_pair needs at least two leaves");
    if (!finalized_) throw CotreeError("cotree is not finalized");
    if (order_dirty_) rebuild_selection_order();
    while (cursor_ < selection_order_.size()) {
      const NodeIndex w = selection_order_[cursor_];
      ++work_;
      if (nodes_[w].alive && nodes_[w].kind != NodeKind::Leaf) {
        const NodeIndex k = nodes_[w].first_child;
        return SiblingPair{k, nodes_[k].next, w, nodes_[w].kind};
      }
      ++cursor_;
    }
    throw CotreeError("no interior node left although two leaves remain");
  }

  /// Removes leaf `v`, restoring a minimal cotree:
  ///  - parent keeps >= 2 children: `v` is unlinked;
  ///  - parent `w` had two children and is not the root: the survivor takes
  ///    `w`'s place under `w`'s parent (an interior survivor has the same kind
  ///    as that parent and is merged into it);
  ///  - parent is the root with two children: the survivor becomes the root.
  void remove_leaf(NodeIndex v) {
    check_alive(v);
    if (nodes_[v].kind != NodeKind::Leaf) throw CotreeError("remove_leaf: node is not a leaf");
    if (leaf_count_ < 2) throw CotreeError("remove_leaf: cannot remove the last leaf");
    plan_valid_ = false;
    const NodeIndex w = nodes_[v].parent;
    unlink_child(w, v);
    leaf_of_vertex_[nodes_[v].vertex] = kNoNode;
    release(v);
    --leaf_count_;
    ++work_;
    if (nodes_[w].child_count >= 2) return;

    const NodeIndex u = nodes_[w].first_child;
    const NodeIndex g = nodes_[w].parent;
    unlink_child(w, u);
    if (g == kNoNode) {
      release(w);
      root_ = u;
      nodes_[u].parent = kNoNode;
      shift_subtree_depth(u, -nodes_[u].depth);
      return;
    }
    insert_before(g, u, w);
    unlink_child(g, w);
    release(w);
    if (nodes_[u].kind == NodeKind::Leaf) {
      nodes_[u].depth = nodes_[g].depth + 1;
      ++work_;
      return;
    }
    // Interior survivor: same kind as g, so its children join g in place.
    while (nodes_[u].first_child != kNoNode) {
      const NodeIndex c = nodes_[u].first_child;
      unlink_child(u, c);
      insert_before(g, c, u);
      shift_subtree_depth(c, -2);
    }
    unlink_child(g, u);
    release(u);
  }

  /// Throws CotreeError on any violation of the minimal-cotree invariants.
  void validate() const {
    if (root_ == kNoNode || !nodes_[root_].alive) throw CotreeError("cotree has no root");
    if (nodes_[root_].parent != kNoNode) throw CotreeError("root has a parent");
    std::size_t leaves = 0;
    std::vector<NodeIndex> stack{root_};
    while (!stack.empty()) {
      const NodeIndex v = stack.back();
      stack.pop_back();
      const Node& node = nodes_[v];
      if (!node.alive) throw CotreeError("dead node reachable from root");
      const std::int32_t expected_depth = node.parent == kNoNode ? 0 : nodes_[node.parent].depth + 1;
      if (node.depth != expected_depth) throw CotreeError("stale depth");
      if (node.kind == NodeKind::Leaf) {
        if (node.child_count != 0) throw CotreeError("leaf with children");
        if (!leaf_of_vertex_.empty() &&
            (node.vertex < 0 || static_cast<std::size_t>(node.vertex) >= leaf_of_vertex_.size() ||
             leaf_of_vertex_[node.vertex] != v))
          throw CotreeError("leaf vertex index out of sync");
        ++leaves;
        continue;
      }
      if (node.child_count < 2) throw CotreeError("interior node with fewer than two children");
      std::int32_t counted = 0;
      NodeIndex prev = kNoNode;
      for (NodeIndex c = node.first_child; c != kNoNode; c = nodes_[c].next) {
        const Node& child = nodes_[c];
        if (child.parent != v || child.prev != prev) throw CotreeError("broken child links");
        if (child.kind == node.kind) throw CotreeError("alternation violation: nested " + std::string(1, kind_letter(node.kind)));
        stack.push_back(c);
        prev = c;
        ++counted;
      }
      if (counted != node.child_count || prev != node.last_child) throw CotreeError("broken child count");
    }
    if (leaves != leaf_count_) throw CotreeError("leaf count mismatch");
  }

 private:
  void check_alive(NodeIndex v) const {
    if (!contains(v)) throw CotreeError("node " + std::to_string(v) + " is not in the cotree");
  }

  void append_child(NodeIndex p, NodeIndex c) {
    Node& parent = nodes_[p];
    Node& child = nodes_[c];
    child.parent = p;
    child.prev = parent.last_child;
    child.next = kNoNode;
    if (parent.last_child != kNoNode)
      nodes_[parent.last_child].next = c;
    else
      parent.first_child = c;
    parent.last_child = c;
    ++parent.child_count;
  }

  // Links `c` into `p`'s child list immediately before `before`.
  void insert_before(NodeIndex p, NodeIndex c, NodeIndex before) {
    Node& parent = nodes_[p];
    Node& child = nodes_[c];
    const NodeIndex prev = nodes_[before].prev;
    child.parent = p;
    child.prev = prev;
    child.next = before;
    nodes_[before].prev = c;
    if (prev != kNoNode)
      nodes_[prev].next = c;
    else
      parent.first_child = c;
    ++parent.child_count;
  }

  void unlink_child(NodeIndex p, NodeIndex c) {
    Node& parent = nodes_[p];
    Node& child = nodes_[c];
    if (child.prev != kNoNode)
      nodes_[child.prev].next = child.next;
    else
      parent.first_child = child.next;
    if (child.next != kNoNode)
      nodes_[child.next].prev = child.prev;
    else
      parent.last_child = child.prev;
    child.parent = child.prev = child.next = kNoNode;
    --parent.child_count;
  }

  void release(NodeIndex v) {
    nodes_[v].alive = false;
    free_.push_back(v);
  }

  void shift_subtree_depth(NodeIndex v, std::int32_t delta) {
    if (delta == 0) return;
    if (nodes_[v].kind != NodeKind::Leaf && nodes_[v].first_child != kNoNode) {
      // A whole interior subtree moved; interior depths are no longer static.
      bool has_interior_child = false;
      for (NodeIndex c = nodes_[v].first_child; c != kNoNode; c = nodes_[c].next)
        has_interior_child |= nodes_[c].kind != NodeKind::Leaf;
      if (has_interior_child || delta != -nodes_[v].depth) order_dirty_ = true;
    }
    std::vector<NodeIndex> stack{v};
    while (!stack.empty()) {
      const NodeIndex x = stack.back();
      stack.pop_back();
      nodes_[x].depth += delta;
      ++work_;
      for (NodeIndex c = nodes_[x].first_child; c != kNoNode; c = nodes_[c].next) stack.push_back(c);
    }
  }

  // Interior nodes sorted by depth descending, ties in pre-order.
  void rebuild_selection_order() const {
    std::vector<NodeIndex> interior;
    std::int32_t max_depth = 0;
    for (NodeIndex v : preorder()) {
      if (nodes_[v].kind == NodeKind::Leaf) continue;
      interior.push_back(v);
      max_depth = std::max(max_depth, nodes_[v].depth);
    }
    std::vector<std::size_t> start(static_cast<std::size_t>(max_depth) + 2, 0);
    for (NodeIndex v : interior) ++start[static_cast<std::size_t>(max_depth - nodes_[v].depth) + 1];
    for (std::size_t i = 1; i < start.size(); ++i) start[i] += start[i - 1];
    selection_order_.assign(interior.size(), kNoNode);
    for (NodeIndex v : interior) selection_order_[start[static_cast<std::size_t>(max_depth - nodes_[v].depth)]++] = v;
    cursor_ = 0;
    order_dirty_ = false;
  }

  void build_plan() {
    // Reversing a right-to-left pre-order gives the left-to-right post-order.
    std::vector<NodeIndex> post;
    std::vector<NodeIndex> stack{root_};
    while (!stack.empty()) {
      const NodeIndex v = stack.back();
      stack.pop_back();
      if (nodes_[v].kind == NodeKind::Leaf) continue;
      post.push_back(v);
      for (NodeIndex c = nodes_[v].first_child; c != kNoNode; c = nodes_[c].next) stack.push_back(c);
    }
    std::reverse(post.begin(), post.end());

    std::vector<std::int32_t> rank(nodes_.size(), -1);
    for (std::size_t r = 0; r < post.size(); ++r) rank[post[r]] = static_cast<std::int32_t>(r);
    plan_ = EliminationPlan{};
    plan_.first.reserve(post.size() + 1);
    plan_.kind.reserve(post.size());
    plan_.parent.reserve(post.size());
    plan_.child.reserve(nodes_.size() - 1);
    plan_.vertex_of_slot.reserve(leaf_count_);
    plan_.stream.reserve(nodes_.size() + post.size());
    using P = EliminationPlan;
    for (NodeIndex w : post) {
      const Node& node = nodes_[w];
      plan_.first.push_back(static_cast<std::uint32_t>(plan_.child.size()));
      plan_.kind.push_back(node.kind);
      plan_.parent.push_back(node.parent == kNoNode ? -1 : rank[node.parent]);
      plan_.stream.push_back(node.kind == NodeKind::Join ? P::kJoinHeader : P::kUnionHeader);
      for (NodeIndex c = node.first_child; c != kNoNode; c = nodes_[c].next) {
        if (nodes_[c].kind == NodeKind::Leaf) {
          plan_.child.push_back(static_cast<std::int32_t>(plan_.vertex_of_slot.size()));
          plan_.vertex_of_slot.push_back(nodes_[c].vertex);
          plan_.stream.push_back(P::kLeaf);
        } else {
          plan_.child.push_back(~rank[c]);
          plan_.stream.push_back(P::kInterior);
        }
      }
    }
    plan_.first.push_back(static_cast<std::uint32_t>(plan_.child.size()));
    plan_.stream.push_back(P::kEnd);
    if (post.empty()) plan_.vertex_of_slot.push_back(nodes_[root_].vertex);
    plan_.slots_are_vertices = true;
    for (std::size_t i = 0; i < plan_.vertex_of_slot.size(); ++i)
      plan_.slots_are_vertices &= plan_.vertex_of_slot[i] == static_cast<std::int32_t>(i);
    plan_.level_order.reserve(selection_order_.size());
    for (NodeIndex w : selection_order_) plan_.level_order.push_back(rank[w]);
    plan_valid_ = true;
  }

  std::vector<Node> nodes_;
  std::vector<NodeIndex> free_;
  std::vector<NodeIndex> leaf_of_vertex_;
  NodeIndex root_ = kNoNode;
  std::size_t leaf_count_ = 0;
  std::size_t order_n_ = 0;
  bool finalized_ = false;
  bool plan_valid_ = false;
  EliminationPlan plan_;

  // Selection cache. Logically const: it only skips nodes already removed.
  mutable std::vector<NodeIndex> selection_order_;
  mutable std::size_t cursor_ = 0;
  mutable bool order_dirty_ = false;
  mutable std::size_t work_ = 0;
};

/// Copying variant of Cotree::remove_leaf.
inline Cotree remove_leaf(Cotree t, NodeIndex v) {
  t.remove_leaf(v);
  return t;
}

inline SiblingPair deepest_sibling_pair(const Cotree& t) { return t.deepest_sibling_pair(); }

/// A uniformly random sibling pair among all interior nodes of maximal depth,
/// with random roles. O(n) per call; used to probe selection-order invariance.
template <typename Rng>
SiblingPair random_deepest_sibling_pair(const Cotree& t, Rng& rng) {
  if (t.leaf_count() < 2) throw CotreeError("random_deepest_sibling_pair needs at least two leaves");
  std::vector<NodeIndex> deepest;
  std::int32_t best = -1;
  for (NodeIndex v : t.preorder()) {
    if (t.is_leaf(v)) continue;
    if (t.depth(v) > best) {
      best = t.depth(v);
      deepest.clear();
    }
    if (t.depth(v) == best) deepest.push_back(v);
  }
  const NodeIndex w = deepest[std::uniform_int_distribution<std::size_t>(0, deepest.size() - 1)(rng)];
  const auto kids = t.children(w);
  std::uniform_int_distribution<std::size_t> pick(0, kids.size() - 1);
  const std::size_t a = pick(rng);
  std::size_t b = pick(rng);
  while (b == a) b = pick(rng);
  return SiblingPair{kids[a], kids[b], w, t.kind(w)};
}

// -- text format -------------------------------------------------------------

/// Parses `cotree := "x" | "(" ("J"|"U") cotree cotree cotree* ")"`.
/// Whitespace separates tokens freely and `#` starts a line comment.
inline Cotree parse_cotree(std::string_view text) {
  Cotree t;
  std::vector<NodeIndex> open;
  std::size_t pos = 0;
  bool done = false;

  const auto skip_blank = [&] {
    while (pos < text.size()) {
      const char c = text[pos];
      if (c == '#') {
        while (pos < text.size() && text[pos] != '\n') ++pos;
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++pos;
      } else {
        break;
      }
    }
  };

  while (true) {
    skip_blank();
    if (pos >= text.size()) break;
    if (done) throw CotreeParseError("trailing input after cotree", pos);
    const char c = text[pos];
    const NodeIndex parent = open.empty() ? kNoNode : open.back();
    if (c == 'x') {
      t.add_node(NodeKind::Leaf, parent);
      ++pos;
      if (open.empty()) done = true;
    } else if (c == '(') {
      ++pos;
      skip_blank();
      if (pos >= text.size()) throw CotreeParseError("expected node kind 'J' or 'U'", pos);
      NodeKind kind;
      if (text[pos] == 'J')
        kind = NodeKind::Join;
      else if (text[pos] == 'U')
        kind = NodeKind::Union;
      else
        throw CotreeParseError("expected node kind 'J' or 'U'", pos);
      ++pos;
      open.push_back(t.add_node(kind, parent));
    } else if (c == ')') {
      if (open.empty()) throw CotreeParseError("unbalanced ')'", pos);
      if (t.child_count(open.back()) < 2)
        throw CotreeParseError("interior node with fewer than two children", pos);
      open.pop_back();
      ++pos;
      if (open.empty()) done = true;
    } else {
      throw CotreeParseError(std::string("unexpected character '") + c + "'", pos);
    }
  }
  if (!open.empty()) throw CotreeParseError("unterminated node", pos);
  if (t.leaf_count() == 0) throw CotreeParseError("empty cotree", pos);
  t.finalize();
  return t;
}

/// Canonical text: single spaces, no comments. Inverse of parse_cotree up to
/// leaf labels (leaves are numbered left to right on re-parse).
inline std::string serialize_cotree(const Cotree& t) {
  std::string out;
  if (t.empty()) return out;
  struct Frame {
    NodeIndex node;
    NodeIndex next_child;
  };
  std::vector<Frame> stack;
  const auto emit = [&](NodeIndex v) {
    if (!out.empty() && out.back() != '(') out.push_back(' ');
    if (t.is_leaf(v)) {
      out.push_back('x');
      return;
    }
    out.push_back('(');
    out.push_back(kind_letter(t.kind(v)));
    stack.push_back({v, t.node(v).first_child});
  };
  emit(t.root());
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next_child == kNoNode) {
      out.push_back(')');
      stack.pop_back();
      continue;
    }
    const NodeIndex c = f.next_child;
    f.next_child = t.node(c).next;
    emit(c);
  }
  return out;
}

}  // namespace cospectral
