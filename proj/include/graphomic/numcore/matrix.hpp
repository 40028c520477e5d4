#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstddef>
#include <string>
#include <string_view>

namespace graphomic {

/// Dense row-major real matrix; row = sample, column = feature.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowVector = Eigen::Matrix<double, 1, Eigen::Dynamic, Eigen::RowMajor>;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Index = Eigen::Index;

std::string shape_string(const Matrix& m);

/// Throws NumericError naming `op` if any entry of `m` is NaN or Inf.
void require_finite(const Matrix& m, std::string_view op);

/// Throws DimensionError unless both shapes are equal.
void require_same_shape(const Matrix& a, const Matrix& b, std::string_view op);

/// Column-wise concatenation [a | b]; row counts must agree.
Matrix hconcat(const Matrix& a, const Matrix& b);

}  // namespace graphomic
