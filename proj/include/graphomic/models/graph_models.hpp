#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "graphomic/graph.hpp"
#include "graphomic/models/embedding.hpp"
#include "graphomic/nn/layers.hpp"
#include "graphomic/nn/losses.hpp"

namespace graphomic {

enum class Integration { avg, dense };

struct GraphModelSpec {
  int conv_layers = 2;
  Index ls = 64;
  Index ds = 128;
  /// Empty selects the per-model default: avg for 2G-DGI, dense for Hetero-DGI.
  std::optional<Integration> integration;
  /// CNC-VGAE only.
  nn::Regularizer reg{nn::Regularizer::Kind::kl};
  int epochs = 150;
  double learning_rate = 1e-3;

  void validate() const;
};

// ---- DGI building blocks ----

struct Corruption {
  Matrix features;
  std::vector<Index> permutation;
};

/// out.row(i) = X.row(perm[i]).
Matrix permute_rows(const Matrix& X, std::span<const Index> perm);
/// Random row permutation of X; the graph is left untouched.
Corruption corrupt(const Matrix& X, std::uint64_t seed);

/// sigmoid(column mean of H), 1 x ls.
Var readout(const Var& H);
RowVector readout(const Matrix& H);

/// Bilinear scorer: logit_i = h_i W s^T.
class Discriminator {
 public:
  Discriminator(Index ls, Rng& rng);
  /// N x 1 logits.
  Var logits(Tape& tape, const Var& H, const Var& summary);
  /// N x 1 probabilities, no tape.
  Matrix scores(const Matrix& H, const RowVector& summary) const;
  std::vector<Parameter*> parameters() { return {&weight_}; }
  Parameter& weight() noexcept { return weight_; }

 private:
  Parameter weight_;
};

/// `layers` GCN layers with PReLU; the first maps in -> width, the rest width -> width.
class GcnStack {
 public:
  GcnStack(Index in, Index width, int layers, Rng& rng, const std::string& name);
  Var forward(Tape& tape, const NormalizedAdjacency& adj, const Var& x);
  std::vector<Parameter*> parameters();
  std::size_t depth() const noexcept { return layers_.size(); }

 private:
  std::vector<nn::GcnLayer> layers_;
};

/// Merges two N x ls blocks: (H1 + H2) / 2, or Dense(2ls -> ls) on [H1 | H2].
class IntegrationLayer {
 public:
  IntegrationLayer(Integration kind, Index ls, Rng& rng);
  Var forward(Tape& tape, const Var& h1, const Var& h2);
  std::vector<Parameter*> parameters();
  Integration kind() const noexcept { return kind_; }

 private:
  Integration kind_;
  nn::Dense dense_;
};

/// 2N nodes: rows 0..N-1 (type 1) carry g1, rows N..2N-1 (type 2) carry g2,
/// plus N cross edges (i, N+i) of weight 1 and type 3.
Graph build_hetero_graph(const Graph& g1, const Graph& g2);

/// Splits a 2N x ls matrix into its two N x ls type blocks.
std::pair<Var, Var> split_types(const Var& H);

// ---- models ----

class CncVgae {
 public:
  CncVgae(Index in, const GraphModelSpec& spec, std::uint64_t seed);
  std::vector<double> train(const Matrix& X, const Graph& graph);
  Embedding encode(const Matrix& X, const Graph& graph);
  /// Training-mode loss for one forward pass; exposed for gradient checks.
  Var loss(Tape& tape, const Matrix& X, const NormalizedAdjacency& adj, const Matrix& target,
           Rng& rng);
  std::vector<Parameter*> parameters();

 private:
  GraphModelSpec spec_;
  std::uint64_t seed_;
  std::vector<nn::GcnLayer> shared_;
  std::unique_ptr<nn::GcnLayer> mu_head_;
  std::unique_ptr<nn::GcnLayer> logvar_head_;
  bool trained_ = false;
};

/// Mean discriminator probability on real and corrupted nodes.
struct DgiScoreGap {
  double positive = 0.0;
  double negative = 0.0;
  double gap() const noexcept { return positive - negative; }
};

class CncDgi {
 public:
  CncDgi(Index in, const GraphModelSpec& spec, std::uint64_t seed);
  std::vector<double> train(const Matrix& X, const Graph& graph);
  Embedding encode(const Matrix& X, const Graph& graph);
  const DgiScoreGap& final_scores() const noexcept { return scores_; }

 private:
  GraphModelSpec spec_;
  std::uint64_t seed_;
  Rng init_;
  GcnStack encoder_;
  Discriminator discriminator_;
  DgiScoreGap scores_;
  bool trained_ = false;
};

class TwoGraphDgi {
 public:
  /// `shared_init` draws both GCN stacks from the same stream (needs in1 == in2).
  TwoGraphDgi(Index in1, Index in2, const GraphModelSpec& spec, std::uint64_t seed,
              bool shared_init = false);
  std::vector<double> train(const Matrix& x1, const Graph& g1, const Matrix& x2, const Graph& g2);
  Embedding encode(const Matrix& x1, const Graph& g1, const Matrix& x2, const Graph& g2);
  /// Per-branch eval-mode outputs before integration.
  std::pair<Matrix, Matrix> branch_outputs(const Matrix& x1, const Graph& g1, const Matrix& x2,
                                           const Graph& g2);
  const DgiScoreGap& final_scores() const noexcept { return scores_; }

 private:
  GraphModelSpec spec_;
  std::uint64_t seed_;
  Rng init_;
  GcnStack encoder1_;
  GcnStack encoder2_;
  IntegrationLayer integration_;
  Discriminator discriminator_;
  DgiScoreGap scores_;
  bool trained_ = false;
};

class HeteroDgi {
 public:
  HeteroDgi(Index in1, Index in2, const GraphModelSpec& spec, std::uint64_t seed);
  /// `hetero` comes from build_hetero_graph.
  std::vector<double> train(const Matrix& x1, const Matrix& x2, const Graph& hetero);
  Embedding encode(const Matrix& x1, const Matrix& x2, const Graph& hetero);
  const DgiScoreGap& final_scores() const noexcept { return scores_; }

 private:
  Var embed(Tape& tape, const NormalizedAdjacency& adj, const Matrix& x1, const Matrix& x2);

  GraphModelSpec spec_;
  std::uint64_t seed_;
  Rng init_;
  nn::Dense project1_;
  nn::Dense project2_;
  GcnStack encoder_;
  IntegrationLayer integration_;
  Discriminator discriminator_;
  DgiScoreGap scores_;
  bool trained_ = false;
};

Embedding train_cnc_vgae(const Matrix& x1, const Matrix& x2, const Graph& graph,
                         const GraphModelSpec& spec, std::uint64_t seed);
Embedding train_cnc_dgi(const Matrix& x1, const Matrix& x2, const Graph& graph,
                        const GraphModelSpec& spec, std::uint64_t seed);
Embedding train_2g_dgi(const Matrix& x1, const Graph& g1, const Matrix& x2, const Graph& g2,
                       const GraphModelSpec& spec, std::uint64_t seed);
Embedding train_hetero_dgi(const Matrix& x1, const Graph& g1, const Matrix& x2, const Graph& g2,
                           const GraphModelSpec& spec, std::uint64_t seed);

}  // namespace graphomic
