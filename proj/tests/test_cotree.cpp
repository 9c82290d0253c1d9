#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "cospectral/cospectral.hpp"

using namespace cospectral;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Cotree example9() { return parse_cotree(read_file(std::string(COSPECTRAL_DATA_DIR) + "/example9.ct")); }

}  // namespace

TEST(CotreeParse, SingleLeaf) {
  const Cotree t = parse_cotree("x");
  EXPECT_EQ(t.order(), 1u);
  EXPECT_EQ(t.leaf_count(), 1u);
  EXPECT_TRUE(t.is_leaf(t.root()));
  EXPECT_EQ(serialize_cotree(t), "x");
}

TEST(CotreeParse, WhitespaceAndComments) {
  const Cotree t = parse_cotree("  # a comment\n( J\tx\n  (U x x) )  # trailing\n");
  EXPECT_EQ(serialize_cotree(t), "(J x (U x x))");
  EXPECT_EQ(t.order(), 3u);
}

TEST(CotreeParse, LeavesNumberedLeftToRight) {
  const Cotree t = parse_cotree("(U (J x x) x)");
  const auto kids = t.children(t.root());
  ASSERT_EQ(kids.size(), 2u);
  EXPECT_EQ(t.vertex(kids[1]), 2);
  const auto inner = t.children(kids[0]);
  EXPECT_EQ(t.vertex(inner[0]), 0);
  EXPECT_EQ(t.vertex(inner[1]), 1);
}

TEST(CotreeParse, Errors) {
  const std::vector<std::pair<std::string, std::size_t>> cases = {
      {"", 0}, {"(J x)", 4}, {"(J x x", 6}, {"(Q x x)", 1}, {"x x", 2}, {"(J x y)", 5}, {")", 0},
  };
  for (const auto& [text, offset] : cases) {
    try {
      parse_cotree(text);
      ADD_FAILURE() << "accepted '" << text << "'";
    } catch (const CotreeParseError& e) {
      EXPECT_EQ(e.offset(), offset) << text << ": " << e.what();
    }
  }
}

TEST(CotreeParse, RejectsNonAlternating) {
  EXPECT_THROW(parse_cotree("(J x (J x x))"), CotreeError);
  EXPECT_THROW(parse_cotree("(U (U x x) x)"), CotreeError);
}

TEST(CotreeParse, RoundTripRandom) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Cotree t = build(RandomCotree{1 + seed % 60, seed, 0.5});
    const std::string s = serialize_cotree(t);
    EXPECT_EQ(serialize_cotree(parse_cotree(s)), s);
  }
}

TEST(Cotree, DeepestPairOnExample) {
  const Cotree t = example9();
  const SiblingPair p = deepest_sibling_pair(t);
  EXPECT_EQ(p.parent_kind, NodeKind::Union);
  EXPECT_EQ(t.vertex(p.k), 1);
  EXPECT_EQ(t.vertex(p.l), 2);
  EXPECT_EQ(t.depth(p.parent), 3);
}

TEST(Cotree, DeepestPairNeedsTwoLeaves) { EXPECT_THROW(deepest_sibling_pair(parse_cotree("x")), CotreeError); }

TEST(CotreeRemove, SurvivorLeafReplacesParent) {
  Cotree t = parse_cotree("(J x (U x x))");
  t.remove_leaf(t.leaf_of_vertex(1));
  t.validate();
  EXPECT_EQ(serialize_cotree(t), "(J x x)");
  EXPECT_EQ(t.depth(t.leaf_of_vertex(2)), 1);
  EXPECT_EQ(t.leaf_of_vertex(1), kNoNode);
}

TEST(CotreeRemove, RootPromotion) {
  Cotree t = parse_cotree("(U x x)");
  t.remove_leaf(t.leaf_of_vertex(0));
  t.validate();
  EXPECT_EQ(serialize_cotree(t), "x");
  EXPECT_THROW(t.remove_leaf(t.root()), CotreeError);
}

TEST(CotreeRemove, InteriorSurvivorMerges) {
  // Removing the lone leaf beside (J x x) under U would nest J in J.
  Cotree t = parse_cotree("(J x (U x (J x x)))");
  t.remove_leaf(t.leaf_of_vertex(1));
  t.validate();
  EXPECT_EQ(serialize_cotree(t), "(J x x x)");
}

TEST(CotreeRemove, RootWithInteriorSurvivor) {
  Cotree t = parse_cotree("(U x (J x x))");
  t.remove_leaf(t.leaf_of_vertex(0));
  t.validate();
  EXPECT_EQ(serialize_cotree(t), "(J x x)");
  EXPECT_EQ(t.depth(t.root()), 0);
}

TEST(CotreeRemove, FunctionalFormLeavesInputIntact) {
  const Cotree t = parse_cotree("(J x x x)");
  const Cotree u = remove_leaf(t, t.leaf_of_vertex(0));
  EXPECT_EQ(t.leaf_count(), 3u);
  EXPECT_EQ(u.leaf_count(), 2u);
  EXPECT_TRUE(t.has_plan());
  EXPECT_FALSE(u.has_plan());
}

TEST(CotreeRemove, RejectsInterior) {
  Cotree t = parse_cotree("(J x (U x x))");
  EXPECT_THROW(t.remove_leaf(t.root()), CotreeError);
}

TEST(CotreeRemove, RandomEliminationKeepsInvariants) {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 200; ++iter) {
    Cotree t = build(RandomCotree{2 + rng() % 80, rng(), 0.5});
    while (t.leaf_count() > 1) {
      const SiblingPair p = random_deepest_sibling_pair(t, rng);
      ASSERT_TRUE(t.is_leaf(p.k));
      ASSERT_TRUE(t.is_leaf(p.l));
      t.remove_leaf(p.k);
      t.validate();
    }
  }
}

TEST(CotreeRemove, SelectionWorkIsLinear) {
  for (std::size_t n : {1000u, 4000u, 16000u}) {
    Cotree t = build(RandomCotree{n, 3, 0.5});
    while (t.leaf_count() > 1) t.remove_leaf(t.deepest_sibling_pair().k);
    EXPECT_LE(t.work(), 8 * n) << n;
  }
}

TEST(CotreePlan, ShapeMatchesTree) {
  const Cotree t = example9();
  const auto& p = t.plan();
  EXPECT_EQ(p.interior_count(), 6u);
  EXPECT_EQ(p.first.size(), 7u);
  EXPECT_EQ(p.child.size(), 14u);  // every node but the root
  EXPECT_EQ(p.vertex_of_slot.size(), 9u);
  EXPECT_EQ(p.parent.back(), -1);
  EXPECT_EQ(p.kind.back(), NodeKind::Join);
  EXPECT_EQ(p.level_order.size(), 6u);
  // Slots follow post-order, which starts at the deepest Union over 1 and 2.
  EXPECT_FALSE(p.slots_are_vertices);
  EXPECT_EQ(p.vertex_of_slot[0], 1);
  EXPECT_EQ(p.vertex_of_slot[1], 2);
  EXPECT_EQ(p.stream.size(), 14u + 6u + 1u);
}

TEST(CotreePlan, SingleLeaf) {
  const Cotree t = parse_cotree("x");
  const auto& p = t.plan();
  EXPECT_EQ(p.interior_count(), 0u);
  EXPECT_EQ(p.vertex_of_slot, std::vector<std::int32_t>{0});
}
