#pragma once

#include <span>
#include <vector>

#include "graphomic/numcore/matrix.hpp"

namespace graphomic {

/// Gaussian Naive Bayes with per-class, per-feature variances floored at 1e-9.
class GaussianNb {
 public:
  static constexpr double kVarianceFloor = 1e-9;

  /// Throws DataError when fewer than two classes are present.
  void fit(const Matrix& H, std::span<const int> y);
  /// Column c holds log prior + log likelihood of class classes()[c].
  Matrix log_joint(const Matrix& H) const;
  /// Argmax of log_joint; ties go to the smallest class id.
  std::vector<int> predict(const Matrix& H) const;

  const std::vector<int>& classes() const noexcept { return classes_; }
  const Matrix& means() const noexcept { return means_; }
  const Matrix& variances() const noexcept { return variances_; }
  const std::vector<double>& log_priors() const noexcept { return log_priors_; }

 private:
  std::vector<int> classes_;
  Matrix means_;
  Matrix variances_;
  std::vector<double> log_priors_;
};

std::vector<int> gaussian_nb(const Matrix& train_H, std::span<const int> train_y,
                             const Matrix& test_H);

/// Fraction of equal entries; throws DimensionError on length mismatch or empty input.
double accuracy(std::span<const int> predicted, std::span<const int> truth);

}  // namespace graphomic
