#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "graphomic/numcore/matrix.hpp"

namespace graphomic {

/// Undirected edge stored once with i < j.
struct Edge {
  Index i = 0;
  Index j = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected weighted graph over nodes 0..n-1 with optional node and edge
/// type tags. Self-loops and duplicate edges are rejected.
class Graph {
 public:
  explicit Graph(Index n_nodes = 0);

  Index n_nodes() const noexcept { return n_; }
  std::size_t n_edges() const noexcept { return edges_.size(); }

  /// Adds {i, j}; throws ContractError on self-loops, duplicates or bad ids.
  void add_edge(Index i, Index j, double weight = 1.0, int type = 0);
  /// Adds {i, j} unless already present; returns whether it was added.
  bool try_add_edge(Index i, Index j, double weight = 1.0, int type = 0);
  bool has_edge(Index i, Index j) const;

  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<int>& edge_types() const noexcept { return edge_types_; }
  void set_weight(std::size_t edge, double w) { weights_.at(edge) = w; }

  /// Empty when the graph is homogeneous.
  const std::vector<int>& node_types() const noexcept { return node_types_; }
  void set_node_types(std::vector<int> types);

  std::vector<Index> degrees() const;
  /// Reorders edges lexicographically (weights and types follow).
  void sort_edges();

 private:
  std::uint64_t key(Index i, Index j) const;

  Index n_;
  std::vector<Edge> edges_;
  std::vector<double> weights_;
  std::vector<int> edge_types_;
  std::vector<int> node_types_;
  std::unordered_set<std::uint64_t> keys_;
};

/// D'^{-1/2} (A + I) D'^{-1/2} with A the weighted adjacency and D' the
/// weighted degrees of A + I.
class NormalizedAdjacency {
 public:
  explicit NormalizedAdjacency(const Graph& graph);

  Index size() const noexcept { return sparse_.rows(); }
  const SparseMatrix& sparse() const noexcept { return sparse_; }
  Matrix dense() const { return Matrix(sparse_); }

 private:
  SparseMatrix sparse_;
};

NormalizedAdjacency normalize_adjacency(const Graph& graph);

/// Mean-pooling variant D'^{-1} (A + I); every row sums to 1.
Matrix mean_pool_adjacency(const Graph& graph);

/// Fraction of edges whose endpoints share a label. Throws
/// UndefinedMetricError for an edgeless graph.
double edge_homophily(const Graph& graph, std::span<const int> labels);

struct GraphStats {
  std::size_t edges = 0;
  Index isolated = 0;
  /// degree -> number of nodes with that degree
  std::map<Index, Index> degree_histogram;
  /// label class -> edge homophily; empty without labels or edges
  std::map<std::string, double> homophily;
};

GraphStats graph_stats(const Graph& graph,
                       const std::map<std::string, std::vector<int>>* labels = nullptr);

}  // namespace graphomic
