#include "graphomic/numcore/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "graphomic/errors.hpp"

namespace graphomic {
namespace {

double evaluate(const ScalarFunction& f, const std::vector<Matrix>& inputs) {
  Tape tape;
  std::vector<Var> vars;
  vars.reserve(inputs.size());
  for (const auto& m : inputs) vars.push_back(tape.constant(m));
  const Var out = f(tape, vars);
  if (out.rows() != 1 || out.cols() != 1) throw ContractError("finite_diff_check: non-scalar f");
  return out.value()(0, 0);
}

}  // namespace

double finite_diff_check(const ScalarFunction& f, const std::vector<Matrix>& inputs, double step) {
  std::vector<Matrix> analytic;
  {
    Tape tape;
    std::vector<Var> vars;
    for (const auto& m : inputs) vars.push_back(tape.variable(m));
    const Var loss = f(tape, vars);
    tape.backward(loss);
    for (const auto& v : vars) analytic.push_back(v.grad());
  }

  double worst = 0.0;
  std::vector<Matrix> probe = inputs;
  for (std::size_t k = 0; k < probe.size(); ++k) {
    for (Index i = 0; i < probe[k].size(); ++i) {
      const double original = probe[k].data()[i];
      probe[k].data()[i] = original + step;
      const double up = evaluate(f, probe);
      probe[k].data()[i] = original - step;
      const double down = evaluate(f, probe);
      probe[k].data()[i] = original;
      const double numeric = (up - down) / (2.0 * step);
      const double err =
          std::abs(analytic[k].data()[i] - numeric) / std::max(1.0, std::abs(numeric));
      worst = std::max(worst, err);
    }
  }
  return worst;
}

}  // namespace graphomic
