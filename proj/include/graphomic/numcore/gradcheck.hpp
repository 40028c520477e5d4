#pragma once

#include <functional>
#include <span>
#include <vector>

#include "graphomic/numcore/tape.hpp"

namespace graphomic {

/// Builds a scalar loss on `tape` from one Var per input matrix. Must be
/// deterministic: any randomness has to be re-seeded identically per call.
using ScalarFunction = std::function<Var(Tape&, std::span<const Var>)>;

/// Compares reverse-mode gradients of `f` with central finite differences.
/// Returns max over all coordinates of |analytic - numeric| / max(1, |numeric|).
double finite_diff_check(const ScalarFunction& f, const std::vector<Matrix>& inputs,
                         double step = 1e-5);

}  // namespace graphomic
