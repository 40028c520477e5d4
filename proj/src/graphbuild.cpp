#include "graphomic/graphbuild.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "graphomic/errors.hpp"

namespace graphomic {

Matrix euclidean_distances(const Matrix& X) {
  const Index n = X.rows();
  if (n < 2) throw ContractError("euclidean_distances: need at least 2 rows");
  Matrix d = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      double acc = 0.0;
      for (Index f = 0; f < X.cols(); ++f) {
        const double diff = X(i, f) - X(j, f);
        acc += diff * diff;
      }
      d(i, j) = d(j, i) = std::sqrt(acc);
    }
  }
  return d;
}

Graph knn_edges_from_distances(const Matrix& distances, int k) {
  const Index n = distances.rows();
  if (k < 1 || k > n - 1) {
    throw ContractError("knn_edges: k=" + std::to_string(k) + " outside [1, " +
                        std::to_string(n - 1) + "]");
  }
  Graph g(n);
  std::vector<std::pair<double, Index>> cand;
  cand.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    cand.clear();
    for (Index j = 0; j < n; ++j) {
      if (j != i) cand.emplace_back(distances(i, j), j);
    }
    std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
    for (int m = 0; m < k; ++m) g.try_add_edge(i, cand[static_cast<std::size_t>(m)].second);
  }
  g.sort_edges();
  return g;
}

Graph knn_edges(const Matrix& X, int k) {
  if (k < 1 || k > X.rows() - 1) {
    throw ContractError("knn_edges: k=" + std::to_string(k) + " outside [1, " +
                        std::to_string(X.rows() - 1) + "]");
  }
  return knn_edges_from_distances(euclidean_distances(X), k);
}

Graph radius_edges_from_distances(const Matrix& distances, double r) {
  if (!(r > 0.0)) throw ContractError("radius_edges: r must be positive");
  const Index n = distances.rows();
  Graph g(n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (distances(i, j) < r) g.add_edge(i, j);
    }
  }
  return g;
}

Graph radius_edges(const Matrix& X, double r) {
  if (!(r > 0.0)) throw ContractError("radius_edges: r must be positive");
  return radius_edges_from_distances(euclidean_distances(X), r);
}

Graph hybrid_edges_from_distances(const Matrix& distances, int k, double r) {
  Graph g = knn_edges_from_distances(distances, k);
  const Graph radius = radius_edges_from_distances(distances, r);
  for (const auto& e : radius.edges()) g.try_add_edge(e.i, e.j);
  g.sort_edges();
  return g;
}

Graph hybrid_edges(const Matrix& X, int k, double r) {
  if (k < 1 || k > X.rows() - 1) {
    throw ContractError("hybrid_edges: k=" + std::to_string(k) + " outside [1, " +
                        std::to_string(X.rows() - 1) + "]");
  }
  if (!(r > 0.0)) throw ContractError("hybrid_edges: r must be positive");
  return hybrid_edges_from_distances(euclidean_distances(X), k, r);
}

Graph exp_edge_weight(const Graph& graph, const Matrix& distances) {
  if (distances.rows() != graph.n_nodes() || distances.cols() != graph.n_nodes()) {
    throw DimensionError("exp_edge_weight: distance matrix " + shape_string(distances) + " for " +
                         std::to_string(graph.n_nodes()) + " nodes");
  }
  Graph out = graph;
  for (std::size_t k = 0; k < out.n_edges(); ++k) {
    const auto& e = out.edges()[k];
    out.set_weight(k, std::exp(-distances(e.i, e.j)));
  }
  return out;
}

}  // namespace graphomic
