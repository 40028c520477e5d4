#include "graphomic/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "graphomic/errors.hpp"

namespace graphomic {

Graph::Graph(Index n_nodes) : n_(n_nodes) {
  if (n_nodes < 0) throw ContractError("Graph: negative node count");
}

std::uint64_t Graph::key(Index i, Index j) const {
  return static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(n_) +
         static_cast<std::uint64_t>(j);
}

bool Graph::try_add_edge(Index i, Index j, double weight, int type) {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) {
    throw ContractError("Graph: edge (" + std::to_string(i) + ", " + std::to_string(j) +
                        ") outside " + std::to_string(n_) + " nodes");
  }
  if (i == j) throw ContractError("Graph: self-loop at node " + std::to_string(i));
  if (i > j) std::swap(i, j);
  if (!keys_.insert(key(i, j)).second) return false;
  edges_.push_back({i, j});
  weights_.push_back(weight);
  edge_types_.push_back(type);
  return true;
}

void Graph::add_edge(Index i, Index j, double weight, int type) {
  if (!try_add_edge(i, j, weight, type)) {
    throw ContractError("Graph: duplicate edge (" + std::to_string(std::min(i, j)) + ", " +
                        std::to_string(std::max(i, j)) + ")");
  }
}

bool Graph::has_edge(Index i, Index j) const {
  if (i == j || i < 0 || j < 0 || i >= n_ || j >= n_) return false;
  if (i > j) std::swap(i, j);
  return keys_.contains(key(i, j));
}

void Graph::set_node_types(std::vector<int> types) {
  if (!types.empty() && static_cast<Index>(types.size()) != n_) {
    throw DimensionError("Graph: node type vector length " + std::to_string(types.size()) +
                         " for " + std::to_string(n_) + " nodes");
  }
  node_types_ = std::move(types);
}

std::vector<Index> Graph::degrees() const {
  std::vector<Index> deg(static_cast<std::size_t>(n_), 0);
  for (const auto& e : edges_) {
    ++deg[static_cast<std::size_t>(e.i)];
    ++deg[static_cast<std::size_t>(e.j)];
  }
  return deg;
}

void Graph::sort_edges() {
  std::vector<std::size_t> order(edges_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [this](std::size_t a, std::size_t b) { return edges_[a] < edges_[b]; });
  std::vector<Edge> e;
  std::vector<double> w;
  std::vector<int> t;
  e.reserve(order.size());
  w.reserve(order.size());
  t.reserve(order.size());
  for (auto k : order) {
    e.push_back(edges_[k]);
    w.push_back(weights_[k]);
    t.push_back(edge_types_[k]);
  }
  edges_ = std::move(e);
  weights_ = std::move(w);
  edge_types_ = std::move(t);
}

NormalizedAdjacency::NormalizedAdjacency(const Graph& graph) {
  const Index n = graph.n_nodes();
  std::vector<double> degree(static_cast<std::size_t>(n), 1.0);
  const auto& edges = graph.edges();
  const auto& weights = graph.weights();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    degree[static_cast<std::size_t>(edges[k].i)] += weights[k];
    degree[static_cast<std::size_t>(edges[k].j)] += weights[k];
  }
  std::vector<double> inv_sqrt(degree.size());
  for (std::size_t i = 0; i < degree.size(); ++i) {
    if (!(degree[i] > 0.0)) throw NumericError("normalize_adjacency: non-positive degree");
    inv_sqrt[i] = 1.0 / std::sqrt(degree[i]);
  }
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(n) + 2 * edges.size());
  for (Index i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    triplets.emplace_back(i, i, inv_sqrt[u] * inv_sqrt[u]);
  }
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto i = static_cast<std::size_t>(edges[k].i);
    const auto j = static_cast<std::size_t>(edges[k].j);
    const double v = inv_sqrt[i] * weights[k] * inv_sqrt[j];
    triplets.emplace_back(edges[k].i, edges[k].j, v);
    triplets.emplace_back(edges[k].j, edges[k].i, v);
  }
  sparse_.resize(n, n);
  sparse_.setFromTriplets(triplets.begin(), triplets.end());
  sparse_.makeCompressed();
}

NormalizedAdjacency normalize_adjacency(const Graph& graph) { return NormalizedAdjacency(graph); }

Matrix mean_pool_adjacency(const Graph& graph) {
  const Index n = graph.n_nodes();
  Matrix a = Matrix::Identity(n, n);
  const auto& edges = graph.edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    a(edges[k].i, edges[k].j) += graph.weights()[k];
    a(edges[k].j, edges[k].i) += graph.weights()[k];
  }
  for (Index i = 0; i < n; ++i) a.row(i) /= a.row(i).sum();
  return a;
}

double edge_homophily(const Graph& graph, std::span<const int> labels) {
  if (static_cast<Index>(labels.size()) != graph.n_nodes()) {
    throw DimensionError("edge_homophily: " + std::to_string(labels.size()) + " labels for " +
                         std::to_string(graph.n_nodes()) + " nodes");
  }
  if (graph.n_edges() == 0) throw UndefinedMetricError("edge_homophily: graph has no edges");
  std::size_t same = 0;
  for (const auto& e : graph.edges()) {
    if (labels[static_cast<std::size_t>(e.i)] == labels[static_cast<std::size_t>(e.j)]) ++same;
  }
  return static_cast<double>(same) / static_cast<double>(graph.n_edges());
}

GraphStats graph_stats(const Graph& graph, const std::map<std::string, std::vector<int>>* labels) {
  GraphStats stats;
  stats.edges = graph.n_edges();
  for (Index d : graph.degrees()) {
    ++stats.degree_histogram[d];
    if (d == 0) ++stats.isolated;
  }
  if (labels != nullptr && graph.n_edges() > 0) {
    for (const auto& [name, y] : *labels) stats.homophily[name] = edge_homophily(graph, y);
  }
  return stats;
}

}  // namespace graphomic
