#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "cospectral/cospectral.hpp"

using namespace cospectral;
using namespace cospectral::oracle;

namespace {

void expect_spectrum(const std::vector<double>& got, const std::vector<double>& want) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-9) << i;
}

}  // namespace

TEST(Oracle, AdjacencyFromCotree) {
  const auto a = adjacency_from_cotree(parse_cotree("(J x (U x x))"));
  EXPECT_EQ(a.size(), 3u);
  EXPECT_EQ(a.edge_count(), 2u);
  EXPECT_EQ(a(0, 1), 1.0);
  EXPECT_EQ(a(1, 2), 0.0);
  EXPECT_EQ(a(1, 1), 0.0);
  EXPECT_TRUE(a.is_symmetric());
}

TEST(Oracle, KnownSpectra) {
  expect_spectrum(eigenvalues_dense(adjacency_from_cotree(build(CompleteGraph{4}))), {3, -1, -1, -1});
  expect_spectrum(eigenvalues_dense(adjacency_from_cotree(parse_cotree("(J (U x x) (U x x))"))), {2, 0, 0, -2});
  expect_spectrum(eigenvalues_dense(adjacency_from_cotree(build(EquienergeticGr{1}))), {5, 1, -1, -1, -1, -1, -2});
  expect_spectrum(eigenvalues_dense(adjacency_from_cotree(parse_cotree("x"))), {0});
  // Star K_{1,3}: +-sqrt(3), 0, 0.
  expect_spectrum(eigenvalues_dense(adjacency_from_cotree(parse_cotree("(J x (U x x x))"))),
                  {std::sqrt(3.0), 0, 0, -std::sqrt(3.0)});
}

TEST(Oracle, TraceAndSquareTrace) {
  const Cotree t = build(RandomCotree{30, 4});
  const auto a = adjacency_from_cotree(t);
  const auto evs = eigenvalues_dense(a);
  EXPECT_NEAR(std::accumulate(evs.begin(), evs.end(), 0.0), 0.0, 1e-9);
  double sq = 0;
  for (double ev : evs) sq += ev * ev;
  EXPECT_NEAR(sq, 2.0 * static_cast<double>(a.edge_count()), 1e-8);
  EXPECT_TRUE(std::is_sorted(evs.rbegin(), evs.rend()));
}

TEST(Oracle, Cap) {
  const Cotree t = build(CompleteGraph{20});
  EXPECT_THROW(adjacency_from_cotree(t, 10), OracleError);
  EXPECT_THROW(eigenvalues_dense(adjacency_from_cotree(t), 10), OracleError);
  EXPECT_NO_THROW(adjacency_from_cotree(t, 20));
}

TEST(Oracle, SingleEdge) {
  DenseSymmetric m(2);
  m.set(0, 1, 1.0);
  EXPECT_TRUE(m.is_symmetric());
  EXPECT_NEAR(eigenvalues_dense(m).front(), 1.0, 1e-12);
}

TEST(Oracle, RelativeCounts) {
  const std::vector<double> evs = {2.0, 1e-12, -1.0, -1.0};
  EXPECT_EQ(count_relative(evs, 0.0), (RelativeCounts{1, 1, 2}));
  EXPECT_EQ(count_relative(evs, -1.0), (RelativeCounts{2, 2, 0}));
  EXPECT_TRUE(is_clean_probe(evs, 0.5));
  EXPECT_FALSE(is_clean_probe(evs, 2.0 + 5e-9));
  EXPECT_THROW(count_relative(evs, 2.0 + 5e-9), OracleError);
  EXPECT_THROW(count_relative(evs, 0.0, 0.0), OracleError);
}
