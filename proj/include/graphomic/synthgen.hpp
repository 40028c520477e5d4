#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "graphomic/graph.hpp"
#include "graphomic/numcore/matrix.hpp"

namespace graphomic {

/// Two-class, two-modality Gaussian generator settings.
///
/// Class A samples modality alpha from N(mu_alpha - theta_alpha, sigma^2 I) and
/// class B from N(mu_alpha + theta_alpha, sigma^2 I); likewise for beta. The
/// entries of mu_alpha / mu_beta are drawn once from the given uniform ranges.
/// `sigma_alpha` / `sigma_beta`, when non-empty, override `sigma` per dimension.
struct SynthConfig {
  Index n_per_class = 500;
  Index dim_alpha = 50;
  Index dim_beta = 30;
  double mu_alpha_lo = -1.0;
  double mu_alpha_hi = 1.0;
  double mu_beta_lo = -0.5;
  double mu_beta_hi = 0.5;
  double theta_alpha = 0.3;
  double theta_beta = 0.3;
  double sigma = 1.0;
  std::vector<double> sigma_alpha;
  std::vector<double> sigma_beta;
  std::uint64_t seed = 0;

  /// Throws ContractError on invalid settings.
  void validate() const;
};

struct Modality {
  std::string name;
  Matrix X;
  bool categorical = false;
  std::vector<std::string> feature_names;
};

struct LabelClass {
  std::string name;
  std::vector<int> y;
  int class_count = 0;
  /// Original label strings, indexed by class id.
  std::vector<std::string> class_names;
};

/// Aligned feature matrices over the same N objects plus label vectors.
struct MultiModalDataset {
  std::vector<std::string> sample_ids;
  std::vector<Modality> modalities;
  std::vector<LabelClass> labels;

  Index n() const noexcept { return static_cast<Index>(sample_ids.size()); }
  const Modality& modality(const std::string& name) const;
  const LabelClass& label(const std::string& name) const;
  /// Throws DataError when rows, ids or label ranges are inconsistent.
  void validate() const;
};

/// Per-class means the generator uses for `cfg` (rows: class A, class B).
struct SynthMeans {
  Matrix alpha;
  Matrix beta;
};
SynthMeans synthetic_means(const SynthConfig& cfg);

/// Modalities "alpha" and "beta", label class "synthetic" (A = 0, B = 1),
/// class A rows first.
MultiModalDataset sample_synthetic_dataset(const SynthConfig& cfg);

struct PcaProjection {
  Matrix projection;  // N x 2
  Matrix components;  // F x 2, unit columns
  RowVector explained_variance;
  /// 1 - accuracy of a nearest-centroid split in the 2-D projection.
  double overlap = 0.0;
};

/// Top-2 principal components by power iteration with deflation; class
/// overlap measured with `labels`.
PcaProjection pca_separation_check(const Matrix& X, std::span<const int> labels);
PcaProjection pca_separation_check(const MultiModalDataset& dataset, const std::string& modality);

/// Edge counts by class pair; purple = class 0, yellow = class 1.
struct ClassPairCounts {
  std::size_t purple_purple = 0;  // z
  std::size_t purple_yellow = 0;  // x
  std::size_t yellow_yellow = 0;  // y

  std::size_t total() const noexcept { return purple_purple + purple_yellow + yellow_yellow; }
  /// Normalised probabilities Z, X, Y = count / total.
  double p_purple_purple() const;
  double p_purple_yellow() const;
  double p_yellow_yellow() const;
};

/// Samples exactly the requested numbers of distinct edges of each class pair
/// uniformly without replacement. Throws CapacityError if infeasible.
Graph sample_class_pair_edges(std::span<const int> labels, const ClassPairCounts& counts,
                              std::uint64_t seed);

/// Counts realising homophily round(h * total)/total with the intra edges
/// split evenly between the two classes.
ClassPairCounts homophily_counts(double target_h, std::size_t total_edges);

Graph sample_graph_with_homophily(std::span<const int> labels, double target_h,
                                  std::size_t total_edges, std::uint64_t seed);

}  // namespace graphomic
