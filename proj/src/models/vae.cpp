#include "graphomic/models/vae.hpp"

#include <algorithm>
#include <numeric>

#include "graphomic/errors.hpp"
#include "graphomic/numcore/adam.hpp"

namespace graphomic {

using nn::Mode;

void VaeSpec::validate() const {
  if (ds <= 0 || ls <= 0) throw ConfigError("VAE widths must be positive");
  if (!(beta >= 0.0)) throw ConfigError("VAE beta must be >= 0");
  if (epochs <= 0) throw ConfigError("VAE epochs must be positive");
  if (batch_size < 2) throw ConfigError("VAE batch size must be >= 2");
  if (!(learning_rate > 0.0)) throw ConfigError("VAE learning rate must be positive");
}

namespace {

Index total_width(const std::vector<InputBlock>& blocks) {
  if (blocks.empty()) throw ContractError("VAE needs at least one input block");
  Index w = 0;
  for (const auto& b : blocks) {
    if (b.width <= 0) throw DimensionError("VAE input block has zero width");
    w += b.width;
  }
  return w;
}

}  // namespace

Vae::Vae(std::vector<InputBlock> blocks, const VaeSpec& spec, Rng& init)
    : blocks_(std::move(blocks)),
      spec_(spec),
      input_width_(total_width(blocks_)),
      encoder_(input_width_, spec.ds, ad::Activation::elu, init, "enc"),
      encoder_bn_(spec.ds, 0.9, 1e-5, "enc_bn"),
      mu_head_(spec.ds, spec.ls, ad::Activation::identity, init, "mu"),
      logvar_head_(spec.ds, spec.ls, ad::Activation::identity, init, "logvar"),
      decoder_(spec.ls, spec.ds, ad::Activation::elu, init, "dec"),
      decoder_bn_(spec.ds, 0.9, 1e-5, "dec_bn"),
      output_(spec.ds, input_width_, ad::Activation::identity, init, "out"),
      dropout_(0.2) {
  spec_.validate();
}

std::vector<Parameter*> Vae::parameters() {
  return nn::collect_parameters(encoder_, encoder_bn_, mu_head_, logvar_head_, decoder_,
                                decoder_bn_, output_);
}

nn::VaeLoss Vae::batch_loss(Tape& tape, const Matrix& batch, Rng& rng) {
  if (batch.cols() != input_width_) {
    throw DimensionError("VAE input " + shape_string(batch) + ", expected " +
                         std::to_string(input_width_) + " columns");
  }
  const Var x = tape.constant(batch);
  Var h = encoder_.forward(tape, x);
  h = encoder_bn_.forward(tape, h, Mode::train);
  h = dropout_.forward(tape, h, Mode::train, rng);
  const Var mu = mu_head_.forward(tape, h);
  const Var logvar = logvar_head_.forward(tape, h);
  const Var z = nn::reparameterize(tape, mu, logvar, rng);

  Var d = decoder_.forward(tape, z);
  d = decoder_bn_.forward(tape, d, Mode::train);
  d = dropout_.forward(tape, d, Mode::train, rng);
  const Var out = output_.forward(tape, d);

  Var recon;
  Index offset = 0;
  for (const auto& b : blocks_) {
    Var xhat = ad::slice_cols(out, offset, b.width);
    if (b.recon == nn::ReconKind::bce) xhat = ad::sigmoid(xhat);
    const Var term = nn::reconstruction_loss(ad::slice_cols(x, offset, b.width), xhat, b.recon);
    recon = recon.valid() ? ad::add(recon, term) : term;
    offset += b.width;
  }
  const Var reg = nn::regularizer_loss(mu, logvar, z, spec_.reg, rng);
  return {ad::add(recon, ad::scale(reg, spec_.beta)), recon, reg};
}

std::vector<double> Vae::fit(const Matrix& X, Rng& rng) {
  if (X.cols() != input_width_) {
    throw DimensionError("VAE input " + shape_string(X) + ", expected " +
                         std::to_string(input_width_) + " columns");
  }
  if (X.rows() < 2) throw DimensionError("VAE training needs at least 2 rows");
  require_finite(X, "VAE input");

  Adam opt(parameters(), spec_.learning_rate);
  const Index n = X.rows();
  std::vector<double> history;
  history.reserve(static_cast<std::size_t>(spec_.epochs));
  for (int epoch = 0; epoch < spec_.epochs; ++epoch) {
    const std::vector<Index> order = rng.permutation(n);
    double total = 0.0;
    Index begin = 0;
    while (begin < n) {
      Index count = std::min(spec_.batch_size, n - begin);
      // A trailing batch of one row cannot be batch-normalised; fold it in.
      if (n - begin - count == 1) ++count;
      Matrix batch(count, X.cols());
      for (Index r = 0; r < count; ++r) batch.row(r) = X.row(order[static_cast<std::size_t>(begin + r)]);
      Tape tape;
      const nn::VaeLoss loss = batch_loss(tape, batch, rng);
      opt.zero_grad();
      tape.backward(loss.total);
      opt.step();
      total += loss.total.value()(0, 0) * static_cast<double>(count);
      begin += count;
    }
    history.push_back(total / static_cast<double>(n));
  }
  trained_ = true;
  return history;
}

Matrix Vae::encode(const Matrix& X) {
  if (!trained_) throw ContractError("VAE encode called before training");
  if (X.cols() != input_width_) {
    throw DimensionError("VAE input " + shape_string(X) + ", expected " +
                         std::to_string(input_width_) + " columns");
  }
  Tape tape;
  Rng unused(0);
  Var h = encoder_.forward(tape, tape.constant(X));
  h = encoder_bn_.forward(tape, h, Mode::eval);
  h = dropout_.forward(tape, h, Mode::eval, unused);
  return mu_head_.forward(tape, h).value();
}

CncVae::CncVae(Index width1, nn::ReconKind recon1, Index width2, nn::ReconKind recon2,
               const VaeSpec& spec, std::uint64_t seed)
    : seed_(seed),
      init_(Rng(seed).derive(11)),
      vae_({{width1, recon1}, {width2, recon2}}, spec, init_) {}

std::vector<double> CncVae::train(const Matrix& x1, const Matrix& x2) {
  if (x1.rows() != x2.rows()) {
    throw DimensionError("modalities disagree on sample count: " + shape_string(x1) + " vs " +
                         shape_string(x2));
  }
  Rng rng = Rng(seed_).derive(12);
  return vae_.fit(hconcat(x1, x2), rng);
}

Embedding CncVae::encode(const Matrix& x1, const Matrix& x2) {
  if (x1.rows() != x2.rows()) throw DimensionError("modalities disagree on sample count");
  return {vae_.encode(hconcat(x1, x2)), "cnc_vae", {}, 1};
}

HVae::HVae(std::vector<InputBlock> modalities, const VaeSpec& spec, std::uint64_t seed)
    : seed_(seed), spec_(spec) {
  spec_.validate();
  if (modalities.size() < 2) throw ContractError("H-VAE needs at least two modalities");
  Rng init = Rng(seed).derive(21);
  for (const auto& m : modalities) {
    low_.push_back(std::make_unique<Vae>(std::vector<InputBlock>{m}, spec_, init));
  }
  const Index high_width = spec_.ls * static_cast<Index>(modalities.size());
  high_ = std::make_unique<Vae>(std::vector<InputBlock>{{high_width, nn::ReconKind::mse}}, spec_,
                                init);
}

Matrix HVae::low_level_means(std::span<const Matrix> modalities) {
  std::vector<Matrix> means;
  means.reserve(modalities.size());
  for (std::size_t m = 0; m < modalities.size(); ++m) means.push_back(low_[m]->encode(modalities[m]));
  Matrix out = means.front();
  for (std::size_t m = 1; m < means.size(); ++m) out = hconcat(out, means[m]);
  return out;
}

std::vector<double> HVae::train(std::span<const Matrix> modalities) {
  if (modalities.size() != low_.size()) {
    throw DimensionError("H-VAE built for " + std::to_string(low_.size()) + " modalities, got " +
                         std::to_string(modalities.size()));
  }
  for (const auto& m : modalities) {
    if (m.rows() != modalities.front().rows()) {
      throw DimensionError("modalities disagree on sample count");
    }
  }
  Rng rng = Rng(seed_).derive(22);
  networks_trained_ = 0;
  for (std::size_t m = 0; m < modalities.size(); ++m) {
    low_[m]->fit(modalities[m], rng);
    ++networks_trained_;
  }
  const std::vector<double> history = high_->fit(low_level_means(modalities), rng);
  ++networks_trained_;
  return history;
}

Embedding HVae::encode(std::span<const Matrix> modalities) {
  if (modalities.size() != low_.size()) throw DimensionError("H-VAE modality count mismatch");
  if (!high_->trained()) throw ContractError("H-VAE encode called before training");
  return {high_->encode(low_level_means(modalities)), "h_vae", {}, networks_trained_};
}

Embedding train_cnc_vae(const Matrix& x1, const Matrix& x2, const VaeSpec& spec,
                        std::uint64_t seed, nn::ReconKind recon1, nn::ReconKind recon2) {
  CncVae model(x1.cols(), recon1, x2.cols(), recon2, spec, seed);
  std::vector<double> history = model.train(x1, x2);
  Embedding e = model.encode(x1, x2);
  e.loss_history = std::move(history);
  return e;
}

Embedding train_h_vae(std::span<const Matrix> modalities, std::span<const nn::ReconKind> recon,
                      const VaeSpec& spec, std::uint64_t seed) {
  if (recon.size() != modalities.size()) {
    throw DimensionError("one reconstruction kind per modality required");
  }
  std::vector<InputBlock> blocks;
  for (std::size_t m = 0; m < modalities.size(); ++m) blocks.push_back({modalities[m].cols(), recon[m]});
  HVae model(std::move(blocks), spec, seed);
  std::vector<double> history = model.train(modalities);
  Embedding e = model.encode(modalities);
  e.loss_history = std::move(history);
  return e;
}

}  // namespace graphomic
