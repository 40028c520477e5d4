#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "graphomic/models/embedding.hpp"
#include "graphomic/nn/layers.hpp"
#include "graphomic/nn/losses.hpp"

namespace graphomic {

struct VaeSpec {
  Index ds = 128;
  Index ls = 32;
  double beta = 25.0;
  nn::Regularizer reg{};
  int epochs = 150;
  Index batch_size = 64;
  double learning_rate = 1e-3;

  /// ds in {128,256,512}, ls in {32,64}, beta in {1,25,50,100} are the
  /// studied grid; validate() only enforces positivity.
  void validate() const;
};

/// Contiguous column block of the input and its reconstruction loss.
struct InputBlock {
  Index width = 0;
  nn::ReconKind recon = nn::ReconKind::mse;
};

/// Single VAE: Dense(ds, ELU) + BatchNorm + Dropout(0.2) -> (mu, logvar) heads
/// of width ls; the decoder mirrors it. BCE blocks get a sigmoid output.
class Vae {
 public:
  Vae(std::vector<InputBlock> blocks, const VaeSpec& spec, Rng& init);

  /// Mini-batch Adam training; returns the mean loss of every epoch.
  std::vector<double> fit(const Matrix& X, Rng& rng);
  /// Eval-mode posterior means (N x ls).
  Matrix encode(const Matrix& X);
  bool trained() const noexcept { return trained_; }
  Index input_width() const noexcept { return input_width_; }

  /// Loss on one batch (training mode); exposed for gradient checks.
  nn::VaeLoss batch_loss(Tape& tape, const Matrix& batch, Rng& rng);
  std::vector<Parameter*> parameters();

 private:
  std::vector<InputBlock> blocks_;
  VaeSpec spec_;
  Index input_width_;
  nn::Dense encoder_;
  nn::BatchNorm encoder_bn_;
  nn::Dense mu_head_;
  nn::Dense logvar_head_;
  nn::Dense decoder_;
  nn::BatchNorm decoder_bn_;
  nn::Dense output_;
  nn::Dropout dropout_;
  bool trained_ = false;
};

/// One VAE over [X1 | X2].
class CncVae {
 public:
  CncVae(Index width1, nn::ReconKind recon1, Index width2, nn::ReconKind recon2,
         const VaeSpec& spec, std::uint64_t seed);
  std::vector<double> train(const Matrix& x1, const Matrix& x2);
  Embedding encode(const Matrix& x1, const Matrix& x2);

 private:
  std::uint64_t seed_;
  Rng init_;
  Vae vae_;
};

/// One low-level VAE per modality, then a high-level VAE on the concatenated
/// low-level means: N + 1 networks for N modalities.
class HVae {
 public:
  HVae(std::vector<InputBlock> modalities, const VaeSpec& spec, std::uint64_t seed);
  std::vector<double> train(std::span<const Matrix> modalities);
  Embedding encode(std::span<const Matrix> modalities);
  int networks_trained() const noexcept { return networks_trained_; }
  Index high_level_input_width() const { return high_->input_width(); }

 private:
  Matrix low_level_means(std::span<const Matrix> modalities);

  std::uint64_t seed_;
  VaeSpec spec_;
  std::vector<std::unique_ptr<Vae>> low_;
  std::unique_ptr<Vae> high_;
  int networks_trained_ = 0;
};

Embedding train_cnc_vae(const Matrix& x1, const Matrix& x2, const VaeSpec& spec,
                        std::uint64_t seed, nn::ReconKind recon1 = nn::ReconKind::mse,
                        nn::ReconKind recon2 = nn::ReconKind::mse);

Embedding train_h_vae(std::span<const Matrix> modalities, std::span<const nn::ReconKind> recon,
                      const VaeSpec& spec, std::uint64_t seed);

}  // namespace graphomic
