#pragma once

// Simple undirected graphs on vertices 0..n-1 (reports add 1).

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace magtorus {

struct Edge {
  int u = 0;  // u < v
  int v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

class Graph {
 public:
  Graph() = default;
  // 0-based pairs in any orientation. Rejects loops, duplicates and
  // out-of-range labels; connectivity is not required here.
  Graph(int n, const std::vector<std::pair<int, int>>& edges);

  static Graph from_one_based(int n, const std::vector<std::pair<int, int>>& edges);

  int n() const noexcept { return n_; }
  int edge_count() const noexcept { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }
  const std::vector<int>& neighbors(int v) const { return adj_[static_cast<std::size_t>(v)]; }
  int degree(int v) const { return static_cast<int>(neighbors(v).size()); }

  // Index into edges(), or -1.
  int edge_index(int a, int b) const;
  bool has_edge(int a, int b) const { return edge_index(a, b) >= 0; }

  // Component id per vertex, ids numbered by smallest member.
  std::vector<int> component_ids() const;
  int components() const;
  bool connected() const { return n_ > 0 && components() == 1; }

  // |E| - n + (number of components).
  int betti() const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
  std::vector<std::vector<int>> adj_edge_;  // parallel to adj_
};

struct InducedSubgraph {
  Graph graph;
  std::vector<int> to_parent;       // local vertex -> parent vertex
  std::vector<int> to_local;        // parent vertex -> local vertex or -1
  std::vector<int> edge_to_parent;  // local edge -> parent edge
};

InducedSubgraph induced_subgraph(const Graph& g, std::span<const int> vs);

// BFS spanning forest: from the smallest unvisited vertex, neighbours in
// ascending order. Returns edge indices in discovery order.
std::vector<int> bfs_spanning_forest(const Graph& g);

bool is_admissible_support(const Graph& g, std::span<const int> v_n);

// Sorted by size descending, then lexicographically.
std::vector<std::vector<int>> enumerate_admissible_supports(const Graph& g);

// Complements of independent sets whose induced subgraph is connected.
// Only meaningful for 3-regular graphs.
std::vector<std::vector<int>> admissible_supports_3regular(const Graph& g);

struct SupportPartition {
  std::vector<int> v_n, v_zn, v_zz;          // sorted vertex lists
  std::vector<int> e_nn, e_zn, e_zz;         // sorted edge indices
  std::vector<int> tree_edges;               // sorted
  std::vector<int> free_nn, free_zn, free_zz;
  std::vector<int> zn_tree_edge;             // parallel to v_zn
  std::vector<int> free_edges() const;       // sorted union of the free sets
  std::vector<char> vertex_class;            // 0 = N, 1 = ZN, 2 = ZZ
};

SupportPartition partition_for_support(const Graph& g, std::span<const int> v_n);
SupportPartition whole_graph_partition(const Graph& g);

// Oriented coefficient vector (entries -1, 0, 1 indexed by edge) of the cycle
// closing free_edge through the spanning tree. The free edge is traversed
// from its smaller to its larger endpoint.
std::vector<int> fundamental_cycle(const Graph& g, std::span<const int> tree_edges, int free_edge);

std::uint64_t spanning_tree_count(const Graph& g);

}  // namespace magtorus
