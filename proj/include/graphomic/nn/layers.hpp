#pragma once

#include <string>
#include <vector>

#include "graphomic/graph.hpp"
#include "graphomic/numcore/ops.hpp"
#include "graphomic/numcore/rng.hpp"
#include "graphomic/numcore/tape.hpp"

namespace graphomic::nn {

using ad::Activation;

enum class Mode { train, eval };

/// U(-a, a) with a = sqrt(6 / (fan_in + fan_out)).
Matrix glorot_uniform(Index fan_in, Index fan_out, Rng& rng);

/// activation(x W + b). A PReLU activation owns a learnable 1x1 slope (init 0.25).
class Dense {
 public:
  Dense(Index in, Index out, Activation activation, Rng& rng, std::string name = "dense");

  Var forward(Tape& tape, const Var& x);
  std::vector<Parameter*> parameters();

  Index in_features() const noexcept { return weight_.value.rows(); }
  Index out_features() const noexcept { return weight_.value.cols(); }
  Parameter& weight() noexcept { return weight_; }
  Parameter& bias() noexcept { return bias_; }

 private:
  Parameter weight_;
  Parameter bias_;
  Parameter slope_;
  Activation activation_;
};

/// activation(A_hat X W); no bias term.
class GcnLayer {
 public:
  GcnLayer(Index in, Index out, Activation activation, Rng& rng, std::string name = "gcn");

  Var forward(Tape& tape, const NormalizedAdjacency& adj, const Var& x);
  std::vector<Parameter*> parameters();

  Index in_features() const noexcept { return weight_.value.rows(); }
  Index out_features() const noexcept { return weight_.value.cols(); }
  Parameter& weight() noexcept { return weight_; }
  Parameter& slope() noexcept { return slope_; }

 private:
  Parameter weight_;
  Parameter slope_;
  Activation activation_;
};

/// Per-feature standardisation with learnable scale/shift. Training mode uses
/// batch statistics and updates running ones (running = m*running + (1-m)*batch).
class BatchNorm {
 public:
  explicit BatchNorm(Index features, double momentum = 0.9, double eps = 1e-5,
                     std::string name = "batchnorm");

  Var forward(Tape& tape, const Var& x, Mode mode);
  std::vector<Parameter*> parameters();

  const RowVector& running_mean() const noexcept { return running_mean_; }
  const RowVector& running_var() const noexcept { return running_var_; }

 private:
  Parameter gamma_;
  Parameter beta_;
  RowVector running_mean_;
  RowVector running_var_;
  double momentum_;
  double eps_;
};

/// Inverted dropout: zeroes entries with probability `rate` and rescales the
/// survivors by 1/(1-rate) in training; identity in eval.
class Dropout {
 public:
  explicit Dropout(double rate = 0.2);
  Var forward(Tape& tape, const Var& x, Mode mode, Rng& rng) const;
  double rate() const noexcept { return rate_; }

 private:
  double rate_;
};

/// z = mu + exp(logvar / 2) * eps, eps ~ N(0, I).
Var reparameterize(Tape& tape, const Var& mu, const Var& logvar, Rng& rng);

/// Collects parameters from several layers into one list.
template <typename... Layers>
std::vector<Parameter*> collect_parameters(Layers&... layers) {
  std::vector<Parameter*> out;
  (
      [&] {
        auto p = layers.parameters();
        out.insert(out.end(), p.begin(), p.end());
      }(),
      ...);
  return out;
}

}  // namespace graphomic::nn
