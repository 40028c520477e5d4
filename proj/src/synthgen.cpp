#include "graphomic/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "graphomic/errors.hpp"
#include "graphomic/numcore/rng.hpp"

namespace graphomic {

void SynthConfig::validate() const {
  if (n_per_class < 2) throw ContractError("SynthConfig: n_per_class must be >= 2");
  if (dim_alpha < 2 || dim_beta < 2) throw ContractError("SynthConfig: dims must be >= 2");
  if (!(sigma > 0.0)) throw ContractError("SynthConfig: sigma must be > 0");
  if (theta_alpha < 0.0 || theta_beta < 0.0) throw ContractError("SynthConfig: theta must be >= 0");
  if (mu_alpha_lo > mu_alpha_hi || mu_beta_lo > mu_beta_hi) {
    throw ContractError("SynthConfig: empty mu range");
  }
  auto check = [](const std::vector<double>& s, Index dim, const char* name) {
    if (s.empty()) return;
    if (static_cast<Index>(s.size()) != dim) {
      throw ContractError(std::string("SynthConfig: ") + name + " length must equal its dim");
    }
    for (double v : s) {
      if (!(v > 0.0)) throw ContractError(std::string("SynthConfig: ") + name + " must be > 0");
    }
  };
  check(sigma_alpha, dim_alpha, "sigma_alpha");
  check(sigma_beta, dim_beta, "sigma_beta");
}

const Modality& MultiModalDataset::modality(const std::string& name) const {
  for (const auto& m : modalities) {
    if (m.name == name) return m;
  }
  throw DataError("unknown modality '" + name + "'");
}

const LabelClass& MultiModalDataset::label(const std::string& name) const {
  for (const auto& l : labels) {
    if (l.name == name) return l;
  }
  throw DataError("unknown label class '" + name + "'");
}

void MultiModalDataset::validate() const {
  for (const auto& m : modalities) {
    if (m.X.rows() != n()) {
      throw DataError("modality '" + m.name + "' has " + std::to_string(m.X.rows()) +
                      " rows, expected " + std::to_string(n()));
    }
  }
  for (const auto& l : labels) {
    if (static_cast<Index>(l.y.size()) != n()) {
      throw DataError("label class '" + l.name + "' has wrong length");
    }
    std::vector<std::size_t> counts(static_cast<std::size_t>(std::max(l.class_count, 0)), 0);
    for (int v : l.y) {
      if (v < 0 || v >= l.class_count) {
        throw DataError("label class '" + l.name + "' has value outside 0.." +
                        std::to_string(l.class_count - 1));
      }
      ++counts[static_cast<std::size_t>(v)];
    }
    for (std::size_t c = 0; c < counts.size(); ++c) {
      if (counts[c] == 0) {
        throw DataError("label class '" + l.name + "' has empty class " + std::to_string(c));
      }
    }
  }
}

namespace {

RowVector draw_center(Rng& rng, Index dim, double lo, double hi) {
  RowVector mu(dim);
  for (Index i = 0; i < dim; ++i) mu(i) = lo == hi ? lo : rng.uniform(lo, hi);
  return mu;
}

Matrix sample_block(Rng& rng, const RowVector& mean, double sigma, const std::vector<double>& per_dim,
                    Index rows) {
  Matrix x(rows, mean.cols());
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < mean.cols(); ++c) {
      const double s = per_dim.empty() ? sigma : per_dim[static_cast<std::size_t>(c)];
      x(r, c) = mean(c) + s * rng.normal();
    }
  }
  return x;
}

std::vector<std::string> feature_names(Index dim) {
  std::vector<std::string> names;
  for (Index i = 0; i < dim; ++i) names.push_back("f" + std::to_string(i));
  return names;
}

}  // namespace

SynthMeans synthetic_means(const SynthConfig& cfg) {
  cfg.validate();
  Rng root(cfg.seed);
  Rng centers = root.derive(1);
  const RowVector mu_a = draw_center(centers, cfg.dim_alpha, cfg.mu_alpha_lo, cfg.mu_alpha_hi);
  const RowVector mu_b = draw_center(centers, cfg.dim_beta, cfg.mu_beta_lo, cfg.mu_beta_hi);
  SynthMeans means;
  means.alpha.resize(2, cfg.dim_alpha);
  means.alpha.row(0) = (mu_a.array() - cfg.theta_alpha).matrix();
  means.alpha.row(1) = (mu_a.array() + cfg.theta_alpha).matrix();
  means.beta.resize(2, cfg.dim_beta);
  means.beta.row(0) = (mu_b.array() - cfg.theta_beta).matrix();
  means.beta.row(1) = (mu_b.array() + cfg.theta_beta).matrix();
  return means;
}

MultiModalDataset sample_synthetic_dataset(const SynthConfig& cfg) {
  const SynthMeans means = synthetic_means(cfg);
  Rng samples = Rng(cfg.seed).derive(2);
  const Index n = cfg.n_per_class;

  MultiModalDataset ds;
  Modality alpha{"alpha", Matrix(2 * n, cfg.dim_alpha), false, feature_names(cfg.dim_alpha)};
  Modality beta{"beta", Matrix(2 * n, cfg.dim_beta), false, feature_names(cfg.dim_beta)};
  for (Index c = 0; c < 2; ++c) {
    alpha.X.middleRows(c * n, n) =
        sample_block(samples, means.alpha.row(c), cfg.sigma, cfg.sigma_alpha, n);
    beta.X.middleRows(c * n, n) =
        sample_block(samples, means.beta.row(c), cfg.sigma, cfg.sigma_beta, n);
  }
  ds.modalities.push_back(std::move(alpha));
  ds.modalities.push_back(std::move(beta));

  LabelClass label{"synthetic", std::vector<int>(static_cast<std::size_t>(2 * n), 0), 2, {"A", "B"}};
  std::fill(label.y.begin() + n, label.y.end(), 1);
  ds.labels.push_back(std::move(label));

  for (Index i = 0; i < 2 * n; ++i) ds.sample_ids.push_back("s" + std::to_string(i));
  return ds;
}

namespace {

/// Power iteration for the dominant eigenvector of symmetric `c`, kept
/// orthogonal to `against` (Gram-Schmidt every step).
RowVector dominant_direction(const Matrix& c, const std::vector<RowVector>& against) {
  const Index f = c.rows();
  RowVector v(f);
  for (Index i = 0; i < f; ++i) v(i) = 1.0 + 0.01 * static_cast<double>(i % 7);
  auto orthogonalize = [&](RowVector& x) {
    for (const auto& u : against) x -= x.dot(u) * u;
  };
  orthogonalize(v);
  v.normalize();
  for (int iter = 0; iter < 200; ++iter) {
    RowVector next = (c * v.transpose()).transpose();
    orthogonalize(next);
    const double norm = next.norm();
    if (norm == 0.0) break;
    next /= norm;
    if (next.dot(v) < 0) next = -next;
    const double change = (next - v).norm();
    v = next;
    if (change < 1e-9) break;
  }
  orthogonalize(v);
  v.normalize();
  return v;
}

}  // namespace

PcaProjection pca_separation_check(const Matrix& X, std::span<const int> labels) {
  if (X.cols() < 2) throw ContractError("pca_separation_check: need at least 2 features");
  if (static_cast<Index>(labels.size()) != X.rows()) {
    throw DimensionError("pca_separation_check: label count mismatch");
  }
  const RowVector mean = X.colwise().mean();
  const Matrix centered = X.rowwise() - mean;
  const Matrix cov = (centered.transpose() * centered) / std::max<double>(1.0, X.rows() - 1.0);

  std::vector<RowVector> comps;
  PcaProjection out;
  out.explained_variance.resize(2);
  Matrix deflated = cov;
  for (int k = 0; k < 2; ++k) {
    RowVector v = dominant_direction(deflated, comps);
    const double lambda = v * cov * v.transpose();
    out.explained_variance(k) = lambda;
    deflated -= lambda * v.transpose() * v;
    comps.push_back(v);
  }
  out.components.resize(X.cols(), 2);
  out.components.col(0) = comps[0].transpose();
  out.components.col(1) = comps[1].transpose();
  out.projection = centered * out.components;

  // Nearest-centroid split in the projected plane.
  const int classes = *std::max_element(labels.begin(), labels.end()) + 1;
  Matrix centroids = Matrix::Zero(classes, 2);
  std::vector<double> counts(static_cast<std::size_t>(classes), 0.0);
  for (Index i = 0; i < X.rows(); ++i) {
    centroids.row(labels[static_cast<std::size_t>(i)]) += out.projection.row(i);
    counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])] += 1.0;
  }
  for (int c = 0; c < classes; ++c) {
    if (counts[static_cast<std::size_t>(c)] > 0) centroids.row(c) /= counts[static_cast<std::size_t>(c)];
  }
  Index correct = 0;
  for (Index i = 0; i < X.rows(); ++i) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int c = 0; c < classes; ++c) {
      if (counts[static_cast<std::size_t>(c)] == 0) continue;
      const double d = (out.projection.row(i) - centroids.row(c)).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    if (best == labels[static_cast<std::size_t>(i)]) ++correct;
  }
  out.overlap = 1.0 - static_cast<double>(correct) / static_cast<double>(X.rows());
  return out;
}

PcaProjection pca_separation_check(const MultiModalDataset& dataset, const std::string& modality) {
  if (dataset.labels.empty()) throw ContractError("pca_separation_check: dataset has no labels");
  return pca_separation_check(dataset.modality(modality).X, dataset.labels.front().y);
}

double ClassPairCounts::p_purple_purple() const {
  return total() == 0 ? 0.0 : static_cast<double>(purple_purple) / static_cast<double>(total());
}
double ClassPairCounts::p_purple_yellow() const {
  return total() == 0 ? 0.0 : static_cast<double>(purple_yellow) / static_cast<double>(total());
}
double ClassPairCounts::p_yellow_yellow() const {
  return total() == 0 ? 0.0 : static_cast<double>(yellow_yellow) / static_cast<double>(total());
}

namespace {

/// Floyd's algorithm: `count` distinct values from [0, universe), in draw order.
std::vector<std::uint64_t> sample_distinct(Rng& rng, std::uint64_t universe, std::size_t count) {
  std::vector<std::uint64_t> out;
  out.reserve(count);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(count * 2);
  for (std::uint64_t j = universe - count; j < universe; ++j) {
    const std::uint64_t t = rng.below(j + 1);
    const std::uint64_t pick = seen.contains(t) ? j : t;
    seen.insert(pick);
    out.push_back(pick);
  }
  return out;
}

/// Index k of the pair (a, b), a < b, in the order (0,1), (0,2), (1,2), (0,3), ...
std::pair<std::uint64_t, std::uint64_t> triangular_pair(std::uint64_t k) {
  auto b = static_cast<std::uint64_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(k))) / 2.0);
  while (b * (b - 1) / 2 > k) --b;
  while ((b + 1) * b / 2 <= k) ++b;
  return {k - b * (b - 1) / 2, b};
}

}  // namespace

Graph sample_class_pair_edges(std::span<const int> labels, const ClassPairCounts& counts,
                              std::uint64_t seed) {
  std::vector<Index> purple;
  std::vector<Index> yellow;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 0) {
      purple.push_back(static_cast<Index>(i));
    } else if (labels[i] == 1) {
      yellow.push_back(static_cast<Index>(i));
    } else {
      throw ContractError("sample_class_pair_edges: labels must be binary (0/1)");
    }
  }
  const auto np = static_cast<std::uint64_t>(purple.size());
  const auto ny = static_cast<std::uint64_t>(yellow.size());
  const std::uint64_t cap_pp = np * (np - (np > 0 ? 1 : 0)) / 2;
  const std::uint64_t cap_yy = ny * (ny - (ny > 0 ? 1 : 0)) / 2;
  const std::uint64_t cap_py = np * ny;
  auto require = [](std::size_t want, std::uint64_t cap, const char* what) {
    if (want > cap) {
      throw CapacityError(std::string("sample_class_pair_edges: ") + std::to_string(want) + " " +
                          what + " edges requested, only " + std::to_string(cap) + " pairs exist");
    }
  };
  require(counts.purple_purple, cap_pp, "purple-purple");
  require(counts.yellow_yellow, cap_yy, "yellow-yellow");
  require(counts.purple_yellow, cap_py, "purple-yellow");

  Rng rng(seed);
  Graph g(static_cast<Index>(labels.size()));
  for (auto k : sample_distinct(rng, cap_pp, counts.purple_purple)) {
    const auto [a, b] = triangular_pair(k);
    g.add_edge(purple[a], purple[b]);
  }
  for (auto k : sample_distinct(rng, cap_yy, counts.yellow_yellow)) {
    const auto [a, b] = triangular_pair(k);
    g.add_edge(yellow[a], yellow[b]);
  }
  for (auto k : sample_distinct(rng, cap_py, counts.purple_yellow)) {
    g.add_edge(purple[k / ny], yellow[k % ny]);
  }
  g.sort_edges();
  return g;
}

ClassPairCounts homophily_counts(double target_h, std::size_t total_edges) {
  if (!(target_h >= 0.0 && target_h <= 1.0)) {
    throw ContractError("homophily target must lie in [0, 1]");
  }
  const auto intra = static_cast<std::size_t>(std::llround(target_h * static_cast<double>(total_edges)));
  ClassPairCounts c;
  c.purple_purple = (intra + 1) / 2;
  c.yellow_yellow = intra / 2;
  c.purple_yellow = total_edges - intra;
  return c;
}

Graph sample_graph_with_homophily(std::span<const int> labels, double target_h,
                                  std::size_t total_edges, std::uint64_t seed) {
  return sample_class_pair_edges(labels, homophily_counts(target_h, total_edges), seed);
}

}  // namespace graphomic
