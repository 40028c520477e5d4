#include "graphomic/numcore/matrix.hpp"

#include "graphomic/errors.hpp"

namespace graphomic {

std::string shape_string(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_finite(const Matrix& m, std::string_view op) {
  if (!m.allFinite()) {
    throw NumericError(std::string(op) + ": produced a non-finite value");
  }
}

void require_same_shape(const Matrix& a, const Matrix& b, std::string_view op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(op) + ": shape mismatch " + shape_string(a) + " vs " +
                         shape_string(b));
  }
}

Matrix hconcat(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw DimensionError("hconcat: row mismatch " + shape_string(a) + " vs " + shape_string(b));
  }
  Matrix out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

}  // namespace graphomic
