#include "graphomic/numcore/adam.hpp"

#include <cmath>

#include "graphomic/errors.hpp"

namespace graphomic {

void adam_step(Matrix& param, const Matrix& grad, AdamState& state) {
  require_same_shape(param, grad, "adam_step");
  if (state.first_moment.size() == 0) {
    state.first_moment = Matrix::Zero(param.rows(), param.cols());
    state.second_moment = Matrix::Zero(param.rows(), param.cols());
  }
  require_same_shape(param, state.first_moment, "adam_step");
  ++state.step;
  state.first_moment = state.beta1 * state.first_moment + (1.0 - state.beta1) * grad;
  state.second_moment =
      state.beta2 * state.second_moment + (1.0 - state.beta2) * grad.cwiseProduct(grad);
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  param.array() -= state.learning_rate * (state.first_moment.array() / c1) /
                   ((state.second_moment.array() / c2).sqrt() + state.epsilon);
  require_finite(param, "adam_step");
}

Adam::Adam(std::vector<Parameter*> params, double learning_rate)
    : params_(std::move(params)), states_(params_.size()) {
  for (auto& s : states_) s.learning_rate = learning_rate;
  zero_grad();
}

void Adam::zero_grad() {
  for (auto* p : params_) p->zero_grad();
}

void Adam::step() {
  for (std::size_t i = 0; i < params_.size(); ++i) {
    adam_step(params_[i]->value, params_[i]->grad, states_[i]);
  }
}

}  // namespace graphomic
