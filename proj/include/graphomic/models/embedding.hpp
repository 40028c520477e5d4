#pragma once

#include <string>
#include <vector>

#include "graphomic/numcore/matrix.hpp"

namespace graphomic {

/// N x ls latent representation; row i belongs to input object i.
struct Embedding {
  Matrix H;
  std::string model;
  /// Mean training loss per epoch of the final (or only) network.
  std::vector<double> loss_history;
  int networks_trained = 1;
};

}  // namespace graphomic
