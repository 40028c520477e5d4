#include "graphomic/nn/losses.hpp"

#include <cmath>

#include "graphomic/errors.hpp"
#include "graphomic/numcore/ops.hpp"

namespace graphomic::nn {

double default_mmd_bandwidth(Index latent_dim) {
  return std::sqrt(static_cast<double>(latent_dim) / 2.0);
}

Var mse(const Var& x, const Var& x_hat) {
  require_same_shape(x.value(), x_hat.value(), "mse");
  return ad::mean(ad::square(ad::sub(x, x_hat)));
}

Var bce(const Var& x, const Var& x_hat) {
  require_same_shape(x.value(), x_hat.value(), "bce");
  if ((x.value().array() < 0.0).any() || (x.value().array() > 1.0).any()) {
    throw ContractError("bce: targets must lie in [0, 1]");
  }
  constexpr double eps = 1e-7;
  const Var p = ad::clamp(x_hat, eps, 1.0 - eps);
  const Var pos = ad::mul(x, ad::log(p));
  const Var neg = ad::mul(ad::shift(ad::neg(x), 1.0), ad::log(ad::shift(ad::neg(p), 1.0)));
  return ad::neg(ad::mean(ad::add(pos, neg)));
}

Var reconstruction_loss(const Var& x, const Var& x_hat, ReconKind kind) {
  return kind == ReconKind::mse ? mse(x, x_hat) : bce(x, x_hat);
}

Var kl_diag_gaussian(const Var& mu, const Var& logvar) {
  require_same_shape(mu.value(), logvar.value(), "kl_diag_gaussian");
  // 0.5 * sum(exp(lv) + mu^2 - 1 - lv) / rows
  const Var terms = ad::sub(ad::add(ad::exp(logvar), ad::square(mu)), ad::shift(logvar, 1.0));
  return ad::scale(ad::sum(terms), 0.5 / static_cast<double>(mu.rows()));
}

namespace {

Var kernel(const Var& a, const Var& b, double bandwidth) {
  return ad::exp(ad::scale(ad::pairwise_sq_dists(a, b), -1.0 / (2.0 * bandwidth * bandwidth)));
}

/// Mean of k over pairs, optionally skipping the diagonal.
Var kernel_mean(const Var& k, bool skip_diagonal) {
  if (!skip_diagonal) return ad::mean(k);
  const Index n = k.rows();
  const Index m = k.cols();
  if (n != m || n < 2) throw ContractError("mmd: unbiased estimator needs >= 2 matched samples");
  Matrix mask = Matrix::Ones(n, m);
  mask.diagonal().setZero();
  const Var masked = ad::mul(k, k.tape().constant(std::move(mask)));
  return ad::scale(ad::sum(masked), 1.0 / static_cast<double>(n * (n - 1)));
}

}  // namespace

Var mmd(const Var& z, const Var& prior, double bandwidth, MmdEstimator estimator) {
  if (z.cols() != prior.cols()) {
    throw DimensionError("mmd: feature widths " + shape_string(z.value()) + " vs " +
                         shape_string(prior.value()));
  }
  if (!(bandwidth > 0.0)) throw ContractError("mmd: bandwidth must be > 0");
  const bool unbiased = estimator == MmdEstimator::unbiased;
  const Var kpp = kernel_mean(kernel(prior, prior, bandwidth), unbiased);
  const Var kqq = kernel_mean(kernel(z, z, bandwidth), unbiased);
  const bool matched = unbiased && z.rows() == prior.rows();
  const Var kpq = kernel_mean(kernel(prior, z, bandwidth), matched);
  return ad::sub(ad::add(kpp, kqq), ad::scale(kpq, 2.0));
}

Var regularizer_loss(const Var& mu, const Var& logvar, const Var& z, const Regularizer& reg,
                     Rng& rng) {
  if (reg.kind == Regularizer::Kind::kl) return kl_diag_gaussian(mu, logvar);
  const double bw = reg.bandwidth > 0.0 ? reg.bandwidth : default_mmd_bandwidth(z.cols());
  const Var prior = z.tape().constant(rng.normal_matrix(z.rows(), z.cols()));
  return mmd(z, prior, bw, reg.estimator);
}

VaeLoss vae_loss(const Var& x, const Var& x_hat, const Var& mu, const Var& logvar, const Var& z,
                 double beta, ReconKind recon, const Regularizer& reg, Rng& rng) {
  if (beta < 0.0) throw ContractError("vae_loss: beta must be >= 0");
  VaeLoss out;
  out.reconstruction = reconstruction_loss(x, x_hat, recon);
  out.regularization = regularizer_loss(mu, logvar, z, reg, rng);
  out.total = ad::add(out.reconstruction, ad::scale(out.regularization, beta));
  return out;
}

Var vgae_reconstruction(const Var& z, const Matrix& adjacency_target) {
  const Index n = z.rows();
  if (adjacency_target.rows() != n || adjacency_target.cols() != n) {
    throw DimensionError("vgae_reconstruction: target " + shape_string(adjacency_target) +
                         " for " + std::to_string(n) + " nodes");
  }
  const double positives = adjacency_target.sum();
  if (!(positives > 0.0)) throw ContractError("vgae_reconstruction: target has no positive entries");
  const double total = static_cast<double>(n) * static_cast<double>(n);
  const double pos_weight = (total - positives) / positives;
  const Var logits = ad::matmul(z, ad::transpose(z));
  return ad::bce_with_logits(logits, adjacency_target, pos_weight);
}

Var vgae_loss(const Var& z, const Matrix& adjacency_target, const Var& mu, const Var& logvar) {
  return ad::add(vgae_reconstruction(z, adjacency_target),
                 ad::scale(kl_diag_gaussian(mu, logvar), 1.0 / static_cast<double>(z.rows())));
}

Var dgi_loss(const Var& pos_scores, const Var& neg_scores) {
  const double total = static_cast<double>(pos_scores.value().size() + neg_scores.value().size());
  const Var pos = ad::sum(ad::log(pos_scores));
  const Var neg = ad::sum(ad::log(ad::shift(ad::neg(neg_scores), 1.0)));
  return ad::scale(ad::add(pos, neg), -1.0 / total);
}

Var dgi_loss_from_logits(const Var& pos_logits, const Var& neg_logits) {
  const auto n = static_cast<double>(pos_logits.value().size());
  const auto m = static_cast<double>(neg_logits.value().size());
  const Var pos = ad::bce_with_logits(pos_logits, Matrix::Ones(pos_logits.rows(), pos_logits.cols()));
  const Var neg = ad::bce_with_logits(neg_logits, Matrix::Zero(neg_logits.rows(), neg_logits.cols()));
  return ad::add(ad::scale(pos, n / (n + m)), ad::scale(neg, m / (n + m)));
}

}  // namespace graphomic::nn
