#pragma once

#include <cstdint>
#include <vector>

#include "graphomic/numcore/tape.hpp"

namespace graphomic {

struct AdamState {
  std::int64_t step = 0;
  Matrix first_moment;
  Matrix second_moment;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// One bias-corrected Adam update of `param` in place. Moments are lazily
/// shaped on the first call.
void adam_step(Matrix& param, const Matrix& grad, AdamState& state);

/// Adam over a fixed parameter set.
class Adam {
 public:
  explicit Adam(std::vector<Parameter*> params, double learning_rate = 1e-3);

  void zero_grad();
  /// Applies adam_step to every parameter with its accumulated gradient.
  void step();

  const std::vector<Parameter*>& parameters() const noexcept { return params_; }

 private:
  std::vector<Parameter*> params_;
  std::vector<AdamState> states_;
};

}  // namespace graphomic
