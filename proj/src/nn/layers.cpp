#include "graphomic/nn/layers.hpp"

#include <cmath>

#include "graphomic/errors.hpp"

namespace graphomic::nn {

Matrix glorot_uniform(Index fan_in, Index fan_out, Rng& rng) {
  const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  return rng.uniform_matrix(fan_in, fan_out, -a, a);
}

Dense::Dense(Index in, Index out, Activation activation, Rng& rng, std::string name)
    : weight_(name + ".W", glorot_uniform(in, out, rng)),
      bias_(name + ".b", Matrix::Zero(1, out)),
      slope_(name + ".slope", Matrix::Constant(1, 1, 0.25)),
      activation_(activation) {}

Var Dense::forward(Tape& tape, const Var& x) {
  if (x.cols() != in_features()) {
    throw DimensionError(weight_.name + ": input " + shape_string(x.value()) + ", expected " +
                         std::to_string(in_features()) + " columns");
  }
  const Var w = tape.parameter(weight_);
  const Var b = tape.parameter(bias_);
  const Var pre = ad::add(ad::matmul(x, w), b);
  if (activation_ == Activation::prelu) {
    const Var s = tape.parameter(slope_);
    return ad::prelu(pre, s);
  }
  return ad::activate(pre, activation_);
}

std::vector<Parameter*> Dense::parameters() {
  std::vector<Parameter*> p{&weight_, &bias_};
  if (activation_ == Activation::prelu) p.push_back(&slope_);
  return p;
}

GcnLayer::GcnLayer(Index in, Index out, Activation activation, Rng& rng, std::string name)
    : weight_(name + ".W", glorot_uniform(in, out, rng)),
      slope_(name + ".slope", Matrix::Constant(1, 1, 0.25)),
      activation_(activation) {}

Var GcnLayer::forward(Tape& tape, const NormalizedAdjacency& adj, const Var& x) {
  if (x.cols() != in_features()) {
    throw DimensionError(weight_.name + ": input " + shape_string(x.value()) + ", expected " +
                         std::to_string(in_features()) + " columns");
  }
  const Var w = tape.parameter(weight_);
  const Var pre = ad::propagate(adj.sparse(), ad::matmul(x, w));
  if (activation_ == Activation::prelu) return ad::prelu(pre, tape.parameter(slope_));
  return ad::activate(pre, activation_);
}

std::vector<Parameter*> GcnLayer::parameters() {
  std::vector<Parameter*> p{&weight_};
  if (activation_ == Activation::prelu) p.push_back(&slope_);
  return p;
}

BatchNorm::BatchNorm(Index features, double momentum, double eps, std::string name)
    : gamma_(name + ".gamma", Matrix::Ones(1, features)),
      beta_(name + ".beta", Matrix::Zero(1, features)),
      running_mean_(RowVector::Zero(features)),
      running_var_(RowVector::Ones(features)),
      momentum_(momentum),
      eps_(eps) {}

Var BatchNorm::forward(Tape& tape, const Var& x, Mode mode) {
  if (x.cols() != gamma_.value.cols()) {
    throw DimensionError(gamma_.name + ": input " + shape_string(x.value()));
  }
  Var normalized;
  if (mode == Mode::train) {
    if (x.rows() < 2) throw ContractError(gamma_.name + ": training batch needs >= 2 rows");
    const Var mu = ad::col_mean(x);
    const Var centered = ad::sub(x, mu);
    const Var var = ad::col_mean(ad::square(centered));
    normalized = ad::div(centered, ad::sqrt(ad::shift(var, eps_)));
    running_mean_ = momentum_ * running_mean_ + (1.0 - momentum_) * RowVector(mu.value());
    running_var_ = momentum_ * running_var_ + (1.0 - momentum_) * RowVector(var.value());
  } else {
    const Var mu = tape.constant(running_mean_);
    const Var denom = tape.constant((running_var_.array() + eps_).sqrt().matrix());
    normalized = ad::div(ad::sub(x, mu), denom);
  }
  return ad::add(ad::mul(normalized, tape.parameter(gamma_)), tape.parameter(beta_));
}

std::vector<Parameter*> BatchNorm::parameters() { return {&gamma_, &beta_}; }

Dropout::Dropout(double rate) : rate_(rate) {
  if (rate < 0.0 || rate >= 1.0) throw ContractError("Dropout: rate must lie in [0, 1)");
}

Var Dropout::forward(Tape& tape, const Var& x, Mode mode, Rng& rng) const {
  if (mode == Mode::eval || rate_ == 0.0) return x;
  const double keep = 1.0 - rate_;
  Matrix mask(x.rows(), x.cols());
  for (Index i = 0; i < mask.size(); ++i) mask.data()[i] = rng.bernoulli(keep) ? 1.0 / keep : 0.0;
  return ad::mul(x, tape.constant(std::move(mask)));
}

Var reparameterize(Tape& tape, const Var& mu, const Var& logvar, Rng& rng) {
  require_same_shape(mu.value(), logvar.value(), "reparameterize");
  const Var eps = tape.constant(rng.normal_matrix(mu.rows(), mu.cols()));
  return ad::add(mu, ad::mul(ad::exp(ad::scale(logvar, 0.5)), eps));
}

}  // namespace graphomic::nn
