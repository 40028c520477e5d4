#include "graphomic/eval/naive_bayes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "graphomic/errors.hpp"

namespace graphomic {

void GaussianNb::fit(const Matrix& H, std::span<const int> y) {
  if (static_cast<Index>(y.size()) != H.rows()) {
    throw DimensionError("NB fit: " + std::to_string(y.size()) + " labels for " +
                         shape_string(H) + " features");
  }
  require_finite(H, "NB features");
  classes_.assign(y.begin(), y.end());
  std::sort(classes_.begin(), classes_.end());
  classes_.erase(std::unique(classes_.begin(), classes_.end()), classes_.end());
  if (classes_.size() < 2) throw DataError("NB fit needs at least two classes in training data");

  const auto n_classes = static_cast<Index>(classes_.size());
  means_ = Matrix::Zero(n_classes, H.cols());
  variances_ = Matrix::Zero(n_classes, H.cols());
  std::vector<double> counts(classes_.size(), 0.0);
  auto slot = [&](int label) {
    return static_cast<Index>(std::lower_bound(classes_.begin(), classes_.end(), label) -
                              classes_.begin());
  };
  for (Index i = 0; i < H.rows(); ++i) {
    const Index c = slot(y[static_cast<std::size_t>(i)]);
    means_.row(c) += H.row(i);
    counts[static_cast<std::size_t>(c)] += 1.0;
  }
  for (Index c = 0; c < n_classes; ++c) means_.row(c) /= counts[static_cast<std::size_t>(c)];
  for (Index i = 0; i < H.rows(); ++i) {
    const Index c = slot(y[static_cast<std::size_t>(i)]);
    variances_.row(c) += (H.row(i) - means_.row(c)).array().square().matrix();
  }
  log_priors_.resize(classes_.size());
  for (Index c = 0; c < n_classes; ++c) {
    const double n_c = counts[static_cast<std::size_t>(c)];
    variances_.row(c) = (variances_.row(c) / n_c).array().max(kVarianceFloor).matrix();
    log_priors_[static_cast<std::size_t>(c)] = std::log(n_c / static_cast<double>(H.rows()));
  }
}

Matrix GaussianNb::log_joint(const Matrix& H) const {
  if (classes_.empty()) throw ContractError("NB used before fit");
  if (H.cols() != means_.cols()) {
    throw DimensionError("NB predict: " + shape_string(H) + ", fitted on " +
                         std::to_string(means_.cols()) + " features");
  }
  const double log_two_pi = std::log(2.0 * std::numbers::pi);
  Matrix out(H.rows(), means_.rows());
  for (Index c = 0; c < means_.rows(); ++c) {
    const Eigen::ArrayXd var = variances_.row(c).transpose().array();
    const double norm = -0.5 * (var.log() + log_two_pi).sum();
    for (Index i = 0; i < H.rows(); ++i) {
      const Eigen::ArrayXd diff = (H.row(i) - means_.row(c)).transpose().array();
      out(i, c) = log_priors_[static_cast<std::size_t>(c)] + norm - 0.5 * (diff.square() / var).sum();
    }
  }
  return out;
}

std::vector<int> GaussianNb::predict(const Matrix& H) const {
  const Matrix joint = log_joint(H);
  std::vector<int> out(static_cast<std::size_t>(H.rows()));
  for (Index i = 0; i < joint.rows(); ++i) {
    Index best = 0;
    for (Index c = 1; c < joint.cols(); ++c) {
      if (joint(i, c) > joint(i, best)) best = c;
    }
    out[static_cast<std::size_t>(i)] = classes_[static_cast<std::size_t>(best)];
  }
  return out;
}

std::vector<int> gaussian_nb(const Matrix& train_H, std::span<const int> train_y,
                             const Matrix& test_H) {
  GaussianNb nb;
  nb.fit(train_H, train_y);
  return nb.predict(test_H);
}

double accuracy(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size()) {
    throw DimensionError("accuracy: " + std::to_string(predicted.size()) + " predictions vs " +
                         std::to_string(truth.size()) + " labels");
  }
  if (truth.empty()) throw DimensionError("accuracy of an empty prediction set");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

}  // namespace graphomic
