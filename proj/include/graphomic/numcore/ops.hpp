#pragma once

#include <span>
#include <vector>

#include "graphomic/numcore/tape.hpp"

namespace graphomic::ad {

enum class Activation { identity, sigmoid, elu, prelu, relu };

// Linear algebra
Var matmul(const Var& a, const Var& b);
/// adj * x with a constant sparse left operand (graph propagation).
/// `adj` is held by reference and must outlive backward().
Var propagate(const SparseMatrix& adj, const Var& x);
Var transpose(const Var& a);

// Elementwise binary ops. The right operand may be the same shape, a 1xC row
// vector, an Rx1 column vector, or a 1x1 scalar; it is broadcast over the left.
Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);
Var div(const Var& a, const Var& b);

Var scale(const Var& a, double s);
Var shift(const Var& a, double c);
Var neg(const Var& a);

// Elementwise unary ops
Var exp(const Var& a);
Var log(const Var& a);
Var square(const Var& a);
Var sqrt(const Var& a);
Var sigmoid(const Var& a);
/// x for x >= 0, alpha*(e^x - 1) otherwise.
Var elu(const Var& a, double alpha = 1.0);
Var relu(const Var& a);
/// x for x >= 0, slope*x otherwise; `slope` is a learnable 1x1 node.
Var prelu(const Var& a, const Var& slope);
/// Gradient passes only where lo < x < hi.
Var clamp(const Var& a, double lo, double hi);
/// `slope` is only read for Activation::prelu.
Var activate(const Var& a, Activation kind, const Var* slope = nullptr);

// Reductions
Var sum(const Var& a);
Var mean(const Var& a);
Var col_sum(const Var& a);
Var col_mean(const Var& a);
Var row_sum(const Var& a);

// Structural
Var concat_cols(std::span<const Var> parts);
Var concat_rows(std::span<const Var> parts);
Var slice_rows(const Var& a, Index begin, Index count);
Var slice_cols(const Var& a, Index begin, Index count);
/// out.row(i) = a.row(index[i]).
Var gather_rows(const Var& a, std::span<const Index> index);

// Fused kernels
/// D(i,j) = ||x_i - y_j||^2.
Var pairwise_sq_dists(const Var& x, const Var& y);
/// Mean over entries of -[w*t*log(sigmoid(l)) + (1-t)*log(1-sigmoid(l))],
/// evaluated in the numerically stable softplus form. `pos_weight` = w.
Var bce_with_logits(const Var& logits, const Matrix& target, double pos_weight = 1.0);

inline Var operator+(const Var& a, const Var& b) { return add(a, b); }
inline Var operator-(const Var& a, const Var& b) { return sub(a, b); }
inline Var operator-(const Var& a) { return neg(a); }

}  // namespace graphomic::ad
