#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "gog/augment.hpp"
#include "test_util.hpp"

namespace gog {
namespace {

Graph big_graph(int edges) {
  // Disjoint edges (2i, 2i+1).
  std::vector<Edge> e;
  for (int i = 0; i < edges; ++i) e.push_back({2 * i, 2 * i + 1});
  return test::uniform_graph(2 * edges, e);
}

TEST(RemoveEdges, ZeroRatioIsIdentity) {
  Rng rng(1);
  const Graph g = test::cycle_graph(7);
  const Graph out = remove_edges(g, 0.0, rng);
  EXPECT_EQ(out.edges(), g.edges());
  EXPECT_EQ(out.features(), g.features());
}

TEST(RemoveEdges, EdgelessGraphUnchanged) {
  Rng rng(1);
  const Graph g = test::uniform_graph(4, {});
  EXPECT_EQ(remove_edges(g, 0.5, rng).edge_count(), 0u);
}

TEST(RemoveEdges, KeptCountIsBinomial) {
  const Graph g = big_graph(1000);
  const double n = 1000, p = 0.5, mean = n * p, sigma = std::sqrt(n * p * (1 - p));
  double total = 0;
  int outside = 0;
  const int seeds = 200;
  for (int s = 0; s < seeds; ++s) {
    Rng rng(static_cast<std::uint64_t>(s));
    const Graph out = remove_edges(g, 0.5, rng);
    const double kept = static_cast<double>(out.edge_count());
    total += kept;
    if (std::abs(kept - mean) > 3 * sigma) ++outside;
    for (const auto& e : out.edges()) ASSERT_TRUE(std::binary_search(g.edges().begin(), g.edges().end(), e));
  }
  // Expected number of 3-sigma excursions in 200 draws is about 0.5.
  EXPECT_LE(outside, 3);
  EXPECT_NEAR(total / seeds, mean, 3 * sigma / std::sqrt(seeds));
}

TEST(MaskFeatures, ZeroRatioIsIdentity) {
  Rng rng(2);
  const Graph g = test::labeled_graph(3, {{0, 1}}, {0, 1, 2}, 3);
  EXPECT_EQ(mask_node_features(g, 0.0, rng).features(), g.features());
}

TEST(MaskFeatures, NearOneZeroesEverythingKeepsEdges) {
  Rng rng(3);
  const Graph g = test::labeled_graph(4, {{0, 1}, {2, 3}}, {0, 1, 2, 0}, 3);
  const Graph out = mask_node_features(g, 1.0 - 1e-12, rng);
  EXPECT_EQ(out.features().norm(), 0.0);
  EXPECT_EQ(out.edges(), g.edges());
  EXPECT_EQ(out.label(), g.label());
}

TEST(MaskFeatures, MaskedFractionIsBinomial) {
  const int n = 10000;
  const Graph g(n, {}, Matrix::Ones(n, 1), {}, 0);
  Rng rng(4);
  const Graph out = mask_node_features(g, 0.2, rng);
  int masked = 0;
  for (int v = 0; v < n; ++v) {
    const double x = out.features()(v, 0);
    ASSERT_TRUE(x == 0.0 || x == 1.0);
    masked += x == 0.0;
  }
  const double sigma = std::sqrt(n * 0.2 * 0.8);
  EXPECT_NEAR(masked, 0.2 * n, 3 * sigma);
}

TEST(AugmentSet, NoneGivesCopies) {
  const Graph g = test::cycle_graph(5);
  const auto out = augment_set(g, {.strategy = AugmentStrategy::None, .ratio = 0.5, .count = 2}, {});
  ASSERT_EQ(out.size(), 2u);
  for (const auto& v : out) {
    EXPECT_EQ(v.edges(), g.edges());
    EXPECT_EQ(v.features(), g.features());
  }
}

TEST(AugmentSet, SameKeySameVariants) {
  Rng rng(7);
  const Graph g = test::random_graph(rng, 30, 0.2, 3);
  const AugmentConfig cfg{.strategy = AugmentStrategy::RemoveEdges, .ratio = 0.3, .count = 2, .seed = 11};
  const auto a = augment_set(g, cfg, {1, 2, 3});
  const auto b = augment_set(g, cfg, {1, 2, 3});
  for (int t = 0; t < 2; ++t) EXPECT_EQ(a[t].edges(), b[t].edges());
  // Variants of one key differ from each other and from another key.
  EXPECT_NE(a[0].edges(), a[1].edges());
  EXPECT_NE(a[0].edges(), augment_set(g, cfg, {1, 2, 4})[0].edges());
}

TEST(AugmentSet, IndependentOfCallOrder) {
  Rng rng(8);
  std::vector<Graph> graphs;
  for (int i = 0; i < 5; ++i) graphs.push_back(test::random_graph(rng, 20, 0.3, 2));
  const AugmentConfig cfg{.strategy = AugmentStrategy::MaskNodeFeatures, .ratio = 0.4, .count = 3, .seed = 5};
  std::vector<std::vector<Graph>> forward, backward(5);
  for (int i = 0; i < 5; ++i) forward.push_back(augment_set(graphs[i], cfg, {0, 0, static_cast<std::uint64_t>(i)}));
  for (int i = 4; i >= 0; --i) backward[i] = augment_set(graphs[i], cfg, {0, 0, static_cast<std::uint64_t>(i)});
  for (int i = 0; i < 5; ++i)
    for (int t = 0; t < 3; ++t) EXPECT_EQ(forward[i][t].features(), backward[i][t].features());
}

TEST(AugmentSet, RemovalOnlyShrinks) {
  Rng rng(9);
  const Graph g = test::random_graph(rng, 18, 0.25, 7, 1);
  const auto out = augment_set(g, {.strategy = AugmentStrategy::RemoveEdges, .ratio = 0.1, .count = 2, .seed = 1}, {});
  for (const auto& v : out) {
    EXPECT_LE(v.edge_count(), g.edge_count());
    EXPECT_EQ(v.node_count(), g.node_count());
    EXPECT_EQ(v.label(), 1);
  }
}

TEST(AugmentSet, RejectsBadConfig) {
  const Graph g = test::path_graph(3);
  EXPECT_THROW(augment_set(g, {.ratio = 1.0}, {}), std::invalid_argument);
  EXPECT_THROW(augment_set(g, {.ratio = -0.1}, {}), std::invalid_argument);
  EXPECT_THROW(augment_set(g, {.count = 0}, {}), std::invalid_argument);
}

}  // namespace
}  // namespace gog
