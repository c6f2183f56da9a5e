#ifndef CHROMA3D_MATCHING_H_
#define CHROMA3D_MATCHING_H_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace chroma3d {

class MatchingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Undirected graph with integer weights. Adjacency lists are ordered by payload.
class WeightedGraph {
 public:
  struct Edge {
    int u;
    int v;
    std::int64_t weight;
    int payload;
  };

  WeightedGraph() = default;
  WeightedGraph(std::vector<char> is_boundary, std::vector<Edge> edges);

  int num_nodes() const { return static_cast<int>(is_boundary_.size()); }
  bool is_boundary(int node) const { return is_boundary_[node] != 0; }
  bool has_boundary() const { return has_boundary_; }
  bool unit_weights() const { return unit_; }
  const std::vector<Edge>& edges() const { return edges_; }
  // (neighbor, edge index) pairs of `node`
  std::span<const std::pair<int, int>> neighbors(int node) const {
    return {adj_.data() + offset_[node], adj_.data() + offset_[node + 1]};
  }

 private:
  std::vector<char> is_boundary_;
  std::vector<Edge> edges_;
  std::vector<int> offset_;
  std::vector<std::pair<int, int>> adj_;
  bool has_boundary_ = false;
  bool unit_ = true;
};

inline constexpr int kBoundary = -1;
inline constexpr std::int64_t kUnreachable = -1;

// Complete graph over defects plus the virtual boundary. Shortest paths run
// through bulk nodes only; a boundary node ends a path.
struct SyndromeGraph {
  const WeightedGraph* graph = nullptr;
  std::vector<int> defects;
  std::vector<std::int64_t> pair_weight;      // k*k, kUnreachable when disconnected
  std::vector<std::int64_t> boundary_weight;  // kUnreachable when no boundary is reachable
  std::vector<int> boundary_node;
  std::vector<int> parent_edge;               // k*N shortest path trees

  int size() const { return static_cast<int>(defects.size()); }
  std::int64_t weight(int i, int j) const { return pair_weight[static_cast<std::size_t>(i) * size() + j]; }
  // Edge payloads along the realized path, from defect j back to defect i.
  std::vector<int> path(int i, int j) const;
  std::vector<int> boundary_path(int i) const;

 private:
  std::vector<int> trace(int source, int target) const;
};

struct MatchedPair {
  int a;  // defect node
  int b;  // defect node or kBoundary
  std::int64_t weight;
  std::vector<int> path;  // edge payloads
};

struct Matching {
  std::vector<MatchedPair> pairs;
  std::int64_t total_weight = 0;
};

SyndromeGraph syndrome_graph(const WeightedGraph& g, std::span<const int> defects);
Matching mwpm(const SyndromeGraph& sg);

// Maximum-weight matching on a general graph (Edmonds' blossom algorithm with
// dual variables). Returns mate[v] or -1. With max_cardinality the matching
// has maximum size first, maximum weight second.
struct BlossomEdge {
  int u;
  int v;
  std::int64_t weight;
};
std::vector<int> max_weight_matching(int num_vertices, const std::vector<BlossomEdge>& edges, bool max_cardinality);

}  // namespace chroma3d

#endif  // CHROMA3D_MATCHING_H_
