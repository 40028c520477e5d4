#pragma once

#include "graphomic/graph.hpp"

namespace graphomic {

/// d(i,j) = sqrt(sum_f (X[i,f] - X[j,f])^2); symmetric with zero diagonal.
Matrix euclidean_distances(const Matrix& X);

/// Union-symmetrised k-nearest-neighbour graph. Ties go to the lower index.
/// Requires 1 <= k <= N-1.
Graph knn_edges(const Matrix& X, int k);
Graph knn_edges_from_distances(const Matrix& distances, int k);

/// Edge iff distance < r (strict). Requires r > 0.
Graph radius_edges(const Matrix& X, double r);
Graph radius_edges_from_distances(const Matrix& distances, double r);

/// Union of the KNN and radius graphs.
Graph hybrid_edges(const Matrix& X, int k, double r);
Graph hybrid_edges_from_distances(const Matrix& distances, int k, double r);

/// Returns a copy of `graph` with weight exp(-d(i,j)) on every edge.
Graph exp_edge_weight(const Graph& graph, const Matrix& distances);

}  // namespace graphomic
