#include <algorithm>
#include <deque>
#include <queue>

#include "chroma3d/matching.h"

namespace chroma3d {

WeightedGraph::WeightedGraph(std::vector<char> is_boundary, std::vector<Edge> edges)
    : is_boundary_(std::move(is_boundary)), edges_(std::move(edges)) {
  const int n = num_nodes();
  has_boundary_ = std::any_of(is_boundary_.begin(), is_boundary_.end(), [](char b) { return b != 0; });
  std::vector<int> degree(n + 1, 0);
  for (const auto& e : edges_) {
    if (e.u == e.v || e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) {
      throw MatchingError("graph edge has invalid endpoints");
    }
    if (e.weight < 0) throw MatchingError("graph edge has negative weight");
    unit_ = unit_ && e.weight == 1;
    ++degree[e.u];
    ++degree[e.v];
  }
  offset_.assign(n + 1, 0);
  for (int v = 0; v < n; ++v) offset_[v + 1] = offset_[v] + degree[v];
  adj_.resize(offset_[n]);
  std::vector<int> fill(offset_.begin(), offset_.end() - 1);
  std::vector<int> order(edges_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return edges_[a].payload < edges_[b].payload; });
  for (int k : order) {
    adj_[fill[edges_[k].u]++] = {edges_[k].v, k};
    adj_[fill[edges_[k].v]++] = {edges_[k].u, k};
  }
}

std::vector<int> SyndromeGraph::trace(int source, int target) const {
  const int n = graph->num_nodes();
  std::vector<int> payloads;
  int node = target;
  const int root = defects[source];
  while (node != root) {
    const int k = parent_edge[static_cast<std::size_t>(source) * n + node];
    const auto& e = graph->edges()[k];
    payloads.push_back(e.payload);
    node = e.u == node ? e.v : e.u;
  }
  std::reverse(payloads.begin(), payloads.end());
  return payloads;
}

std::vector<int> SyndromeGraph::path(int i, int j) const {
  if (i > j) std::swap(i, j);
  return trace(i, defects[j]);
}

std::vector<int> SyndromeGraph::boundary_path(int i) const { return trace(i, boundary_node[i]); }

SyndromeGraph syndrome_graph(const WeightedGraph& g, std::span<const int> defects) {
  SyndromeGraph sg;
  sg.graph = &g;
  sg.defects.assign(defects.begin(), defects.end());
  std::sort(sg.defects.begin(), sg.defects.end());
  if (std::adjacent_find(sg.defects.begin(), sg.defects.end()) != sg.defects.end()) {
    throw MatchingError("defect listed twice");
  }
  const int k = sg.size();
  const int n = g.num_nodes();
  for (int d : sg.defects) {
    if (d < 0 || d >= n) throw MatchingError("defect is not a graph node");
    if (g.is_boundary(d)) throw MatchingError("defect sits on a boundary node");
  }
  sg.pair_weight.assign(static_cast<std::size_t>(k) * k, kUnreachable);
  sg.boundary_weight.assign(k, kUnreachable);
  sg.boundary_node.assign(k, -1);
  sg.parent_edge.assign(static_cast<std::size_t>(k) * n, -1);

  std::vector<int> defect_index(n, -1);
  for (int i = 0; i < k; ++i) defect_index[sg.defects[i]] = i;
  std::vector<std::int64_t> dist(n, -1);
  std::vector<int> touched;

  for (int i = 0; i < k; ++i) {
    int* parent = sg.parent_edge.data() + static_cast<std::size_t>(i) * n;
    for (int v : touched) dist[v] = -1;
    touched.clear();
    const int src = sg.defects[i];
    dist[src] = 0;
    touched.push_back(src);
    int targets_left = k - 1;
    bool boundary_left = g.has_boundary();
    auto settle = [&](int v) {
      if (g.is_boundary(v)) {
        if (sg.boundary_node[i] < 0) {
          sg.boundary_node[i] = v;
          sg.boundary_weight[i] = dist[v];
          boundary_left = false;
        }
        return false;
      }
      const int j = defect_index[v];
      if (j >= 0 && j != i) {
        sg.pair_weight[static_cast<std::size_t>(i) * k + j] = dist[v];
        --targets_left;
      }
      return true;
    };
    if (g.unit_weights()) {
      std::deque<int> queue{src};
      settle(src);
      while (!queue.empty() && (targets_left > 0 || boundary_left)) {
        const int u = queue.front();
        queue.pop_front();
        for (const auto& [v, e] : g.neighbors(u)) {
          if (dist[v] >= 0) continue;
          dist[v] = dist[u] + 1;
          parent[v] = e;
          touched.push_back(v);
          if (settle(v)) queue.push_back(v);
        }
      }
    } else {
      using Item = std::pair<std::int64_t, int>;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
      std::vector<char> done(n, 0);
      heap.push({0, src});
      while (!heap.empty() && (targets_left > 0 || boundary_left)) {
        const auto [du, u] = heap.top();
        heap.pop();
        if (done[u] || du != dist[u]) continue;
        done[u] = 1;
        if (!settle(u)) continue;
        for (const auto& [v, e] : g.neighbors(u)) {
          const std::int64_t nd = du + g.edges()[e].weight;
          if (dist[v] < 0 || nd < dist[v]) {
            if (dist[v] < 0) touched.push_back(v);
            dist[v] = nd;
            parent[v] = e;
            heap.push({nd, v});
          }
        }
      }
    }
  }
  // the weight matrix is symmetric; keep the tree of the smaller index
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < i; ++j) {
      sg.pair_weight[static_cast<std::size_t>(i) * k + j] = sg.pair_weight[static_cast<std::size_t>(j) * k + i];
    }
  }
  for (int i = 0; i < k; ++i) {
    bool reachable = sg.boundary_weight[i] != kUnreachable;
    for (int j = 0; j < k && !reachable; ++j) reachable = j != i && sg.weight(i, j) != kUnreachable;
    if (!reachable && k > 0) {
      throw MatchingError("defect at node " + std::to_string(sg.defects[i]) +
                          " cannot reach another defect or a boundary");
    }
  }
  return sg;
}

Matching mwpm(const SyndromeGraph& sg) {
  Matching out;
  const int k = sg.size();
  if (k == 0) return out;
  const bool with_boundary = sg.graph->has_boundary();
  if (!with_boundary && k % 2 != 0) throw MatchingError("odd number of defects and no boundary");

  std::int64_t top = 0;
  for (int i = 0; i < k; ++i) {
    top = std::max(top, sg.boundary_weight[i]);
    for (int j = i + 1; j < k; ++j) top = std::max(top, sg.weight(i, j));
  }
  const std::int64_t big = top + 1;
  std::vector<BlossomEdge> edges;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const std::int64_t w = sg.weight(i, j);
      if (w == kUnreachable) continue;
      // a pair costlier than sending both ends to the boundary is never optimal
      const std::int64_t bi = sg.boundary_weight[i], bj = sg.boundary_weight[j];
      if (with_boundary && bi != kUnreachable && bj != kUnreachable && w > bi + bj) continue;
      edges.push_back({i, j, big - w});
    }
  }
  if (with_boundary) {
    for (int i = 0; i < k; ++i) {
      if (sg.boundary_weight[i] != kUnreachable) edges.push_back({i, k + i, big - sg.boundary_weight[i]});
    }
    for (int i = 0; i < k; ++i) {
      for (int j = i + 1; j < k; ++j) edges.push_back({k + i, k + j, big});
    }
  }
  const int nv = with_boundary ? 2 * k : k;
  const auto mate = max_weight_matching(nv, edges, true);
  if (std::any_of(mate.begin(), mate.end(), [](int m) { return m < 0; })) {
    throw MatchingError("no perfect matching exists for this defect set");
  }
  for (int i = 0; i < k; ++i) {
    const int m = mate[i];
    if (m == k + i) {
      MatchedPair p{sg.defects[i], kBoundary, sg.boundary_weight[i], sg.boundary_path(i)};
      out.total_weight += p.weight;
      out.pairs.push_back(std::move(p));
    } else if (m > i && m < k) {
      MatchedPair p{sg.defects[i], sg.defects[m], sg.weight(i, m), sg.path(i, m)};
      out.total_weight += p.weight;
      out.pairs.push_back(std::move(p));
    } else if (m >= k) {
      throw MatchingError("defect matched to a foreign boundary copy");
    }
  }
  return out;
}

}  // namespace chroma3d
