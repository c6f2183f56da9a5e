#include "chroma3d/matching.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <random>

using namespace chroma3d;

namespace {

// Floyd-Warshall over bulk nodes; boundary nodes may only end a path.
std::vector<std::vector<std::int64_t>> all_pairs(const WeightedGraph& g) {
  const int n = g.num_nodes();
  const std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::vector<std::int64_t>> d(n, std::vector<std::int64_t>(n, inf));
  for (int v = 0; v < n; ++v) d[v][v] = 0;
  for (const auto& e : g.edges()) {
    d[e.u][e.v] = std::min(d[e.u][e.v], e.weight);
    d[e.v][e.u] = std::min(d[e.v][e.u], e.weight);
  }
  for (int m = 0; m < n; ++m) {
    if (g.is_boundary(m)) continue;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][m] + d[m][j]);
    }
  }
  return d;
}

// Minimum over all ways to pair defects or send them to the boundary.
std::int64_t brute_force(const SyndromeGraph& sg) {
  const int k = sg.size();
  const std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> best(1 << k, inf);
  best[0] = 0;
  for (int mask = 1; mask < (1 << k); ++mask) {
    int i = 0;
    while (!(mask & (1 << i))) ++i;
    const int rest = mask & ~(1 << i);
    if (sg.boundary_weight[i] != kUnreachable && best[rest] < inf) {
      best[mask] = std::min(best[mask], best[rest] + sg.boundary_weight[i]);
    }
    for (int j = i + 1; j < k; ++j) {
      if (!(rest & (1 << j)) || sg.weight(i, j) == kUnreachable) continue;
      const int r2 = rest & ~(1 << j);
      if (best[r2] < inf) best[mask] = std::min(best[mask], best[r2] + sg.weight(i, j));
    }
  }
  return best[(1 << k) - 1];
}

WeightedGraph random_graph(std::mt19937_64& rng, int n, int extra_edges, bool boundary, bool unit) {
  std::vector<char> is_boundary(n, 0);
  if (boundary) {
    is_boundary[n - 1] = 1;
    if (n > 6) is_boundary[n - 2] = 1;
  }
  std::vector<WeightedGraph::Edge> edges;
  int payload = 0;
  auto weight = [&] { return unit ? std::int64_t{1} : static_cast<std::int64_t>(rng() % 10); };
  for (int v = 1; v < n; ++v) {
    edges.push_back({static_cast<int>(rng() % v), v, weight(), payload++});
  }
  for (int e = 0; e < extra_edges; ++e) {
    int u = static_cast<int>(rng() % n), v = static_cast<int>(rng() % n);
    if (u == v) continue;
    edges.push_back({u, v, weight(), payload++});
  }
  return WeightedGraph(is_boundary, edges);
}

std::vector<int> pick_defects(std::mt19937_64& rng, const WeightedGraph& g, int count) {
  std::vector<int> bulk;
  for (int v = 0; v < g.num_nodes(); ++v) {
    if (!g.is_boundary(v)) bulk.push_back(v);
  }
  std::shuffle(bulk.begin(), bulk.end(), rng);
  bulk.resize(std::min<int>(count, bulk.size()));
  return bulk;
}

}  // namespace

TEST(matching, path_graph_weight_two) {
  WeightedGraph g({0, 0, 0}, {{0, 1, 1, 10}, {1, 2, 1, 11}});
  auto sg = syndrome_graph(g, std::vector<int>{0, 2});
  EXPECT_EQ(sg.weight(0, 1), 2);
  EXPECT_EQ(sg.path(0, 1), (std::vector<int>{10, 11}));
  auto m = mwpm(sg);
  ASSERT_EQ(m.pairs.size(), 1u);
  EXPECT_EQ(m.total_weight, 2);
}

TEST(matching, boundary_edge_weight_one) {
  WeightedGraph g({0, 1}, {{0, 1, 1, 7}});
  auto sg = syndrome_graph(g, std::vector<int>{0});
  EXPECT_EQ(sg.boundary_weight[0], 1);
  auto m = mwpm(sg);
  ASSERT_EQ(m.pairs.size(), 1u);
  EXPECT_EQ(m.pairs[0].b, kBoundary);
  EXPECT_EQ(m.pairs[0].path, std::vector<int>{7});
}

TEST(matching, empty_defects) {
  WeightedGraph g({0, 0}, {{0, 1, 1, 0}});
  auto m = mwpm(syndrome_graph(g, std::vector<int>{}));
  EXPECT_TRUE(m.pairs.empty());
  EXPECT_EQ(m.total_weight, 0);
}

TEST(matching, four_defects_unique_optimum) {
  // A=0, B=1, C=2, D=3 joined through private hubs so pair distances are exact
  std::vector<WeightedGraph::Edge> edges = {
      {0, 1, 1, 0}, {2, 3, 1, 1}, {0, 2, 5, 2}, {0, 3, 5, 3}, {1, 2, 5, 4}, {1, 3, 5, 5}};
  WeightedGraph g({0, 0, 0, 0}, edges);
  auto m = mwpm(syndrome_graph(g, std::vector<int>{0, 1, 2, 3}));
  ASSERT_EQ(m.pairs.size(), 2u);
  EXPECT_EQ(m.pairs[0].a, 0);
  EXPECT_EQ(m.pairs[0].b, 1);
  EXPECT_EQ(m.pairs[1].a, 2);
  EXPECT_EQ(m.pairs[1].b, 3);
  EXPECT_EQ(m.total_weight, 2);
}

TEST(matching, odd_without_boundary_is_infeasible) {
  WeightedGraph g({0, 0, 0}, {{0, 1, 1, 0}, {1, 2, 1, 1}});
  auto sg = syndrome_graph(g, std::vector<int>{0, 1, 2});
  EXPECT_THROW(mwpm(sg), MatchingError);
}

TEST(matching, isolated_defect_is_structural_error) {
  WeightedGraph g({0, 0, 0}, {{0, 1, 1, 0}});
  EXPECT_THROW(syndrome_graph(g, std::vector<int>{0, 2}), MatchingError);
}

TEST(matching, pair_weights_match_floyd_warshall) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const bool unit = trial % 2 == 0;
    auto g = random_graph(rng, 20, 15, trial % 3 != 0, unit);
    auto defects = pick_defects(rng, g, 6);
    auto sg = syndrome_graph(g, defects);
    auto d = all_pairs(g);
    for (int i = 0; i < sg.size(); ++i) {
      for (int j = 0; j < sg.size(); ++j) {
        if (i == j) continue;
        EXPECT_EQ(sg.weight(i, j), d[sg.defects[i]][sg.defects[j]]);
        // realized path weight equals the distance
        std::int64_t w = 0;
        for (int p : sg.path(i, j)) w += g.edges()[p].weight;
        EXPECT_EQ(w, sg.weight(i, j));
      }
      if (g.has_boundary()) {
        std::int64_t best = std::numeric_limits<std::int64_t>::max();
        for (int b = 0; b < g.num_nodes(); ++b) {
          if (g.is_boundary(b)) best = std::min(best, d[sg.defects[i]][b]);
        }
        EXPECT_EQ(sg.boundary_weight[i], best);
      }
    }
  }
}

TEST(matching, blossom_equals_brute_force_1000) {
  std::mt19937_64 rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const bool boundary = trial % 2 == 0;
    const int n = 8 + static_cast<int>(rng() % 14);
    auto g = random_graph(rng, n, static_cast<int>(rng() % 12), boundary, trial % 5 == 0);
    int count = 1 + static_cast<int>(rng() % 8);
    if (!boundary && count % 2 == 1) ++count;
    count = std::min(count, 8);
    auto defects = pick_defects(rng, g, count);
    if (!boundary && defects.size() % 2 == 1) defects.pop_back();
    auto sg = syndrome_graph(g, defects);
    auto m = mwpm(sg);
    EXPECT_EQ(m.total_weight, brute_force(sg)) << "trial " << trial;
    std::vector<int> seen;
    for (const auto& p : m.pairs) {
      seen.push_back(p.a);
      if (p.b != kBoundary) seen.push_back(p.b);
    }
    std::sort(seen.begin(), seen.end());
    EXPECT_EQ(seen, sg.defects);
    ++checked;
  }
  EXPECT_EQ(checked, 1000);
}

TEST(matching, scaling_preserves_argmin) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    auto g = random_graph(rng, 16, 10, true, false);
    auto defects = pick_defects(rng, g, 6);
    auto m1 = mwpm(syndrome_graph(g, defects));
    std::vector<WeightedGraph::Edge> scaled = g.edges();
    for (auto& e : scaled) e.weight *= 3;
    std::vector<char> boundary(g.num_nodes());
    for (int v = 0; v < g.num_nodes(); ++v) boundary[v] = g.is_boundary(v);
    WeightedGraph g3(boundary, scaled);
    auto m3 = mwpm(syndrome_graph(g3, defects));
    EXPECT_EQ(m3.total_weight, 3 * m1.total_weight);
  }
}

TEST(matching, max_weight_matching_small) {
  // path 0-1-2-3 with a heavy middle edge
  std::vector<BlossomEdge> edges = {{0, 1, 5}, {1, 2, 11}, {2, 3, 5}};
  auto mate = max_weight_matching(4, edges, false);
  EXPECT_EQ(mate, (std::vector<int>{-1, 2, 1, -1}));
  mate = max_weight_matching(4, edges, true);
  EXPECT_EQ(mate, (std::vector<int>{1, 0, 3, 2}));
}
