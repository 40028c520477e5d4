#pragma once

#include "graphomic/numcore/rng.hpp"
#include "graphomic/numcore/tape.hpp"

namespace graphomic::nn {

enum class ReconKind { mse, bce };

enum class MmdEstimator {
  /// All pairs including i == j (V-statistic); always >= 0, exactly 0 for P == Q.
  biased,
  /// Same-set terms skip i == j; cross term skips matched pairs when counts agree.
  unbiased,
};

struct Regularizer {
  enum class Kind { kl, mmd };
  Kind kind = Kind::mmd;
  /// Gaussian kernel bandwidth sigma_k; <= 0 selects sigma_k^2 = latent_dim / 2.
  double bandwidth = 0.0;
  MmdEstimator estimator = MmdEstimator::biased;
};

/// sigma_k with sigma_k^2 = latent_dim / 2.
double default_mmd_bandwidth(Index latent_dim);

/// Mean over entries of (x - x_hat)^2.
Var mse(const Var& x, const Var& x_hat);

/// -mean[x log x_hat + (1-x) log(1-x_hat)], x_hat clamped to [1e-7, 1-1e-7].
/// Throws ContractError when x leaves [0, 1].
Var bce(const Var& x, const Var& x_hat);

Var reconstruction_loss(const Var& x, const Var& x_hat, ReconKind kind);

/// KL(N(mu, diag(exp(logvar))) || N(0, I)), summed over latent dims and
/// averaged over rows.
Var kl_diag_gaussian(const Var& mu, const Var& logvar);

/// Gaussian-kernel MMD between sample sets, k(a,b) = exp(-|a-b|^2 / (2 s^2)).
Var mmd(const Var& z, const Var& prior, double bandwidth,
        MmdEstimator estimator = MmdEstimator::biased);

/// KL term uses (mu, logvar); MMD compares `z` against fresh N(0, I) draws
/// from `rng` (one per row of z).
Var regularizer_loss(const Var& mu, const Var& logvar, const Var& z, const Regularizer& reg,
                     Rng& rng);

struct VaeLoss {
  Var total;
  Var reconstruction;
  Var regularization;
};

/// reconstruction + beta * regularization.
VaeLoss vae_loss(const Var& x, const Var& x_hat, const Var& mu, const Var& logvar, const Var& z,
                 double beta, ReconKind recon, const Regularizer& reg, Rng& rng);

/// Weighted BCE between sigmoid(Z Z^T) and the binary target, positive
/// weight (N^2 - P) / P where P counts the positive entries.
Var vgae_reconstruction(const Var& z, const Matrix& adjacency_target);

/// vgae_reconstruction(z) + kl_diag_gaussian(mu, logvar) / N.
Var vgae_loss(const Var& z, const Matrix& adjacency_target, const Var& mu, const Var& logvar);

/// -(1/(N+M)) [sum log pos + sum log(1 - neg)] for scores already in (0,1).
Var dgi_loss(const Var& pos_scores, const Var& neg_scores);

/// dgi_loss on sigmoid(pos_logits), sigmoid(neg_logits), in stable form.
Var dgi_loss_from_logits(const Var& pos_logits, const Var& neg_logits);

}  // namespace graphomic::nn
