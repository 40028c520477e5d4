#include "graphomic/numcore/ops.hpp"

#include <cmath>
#include <string>

#include "graphomic/errors.hpp"

namespace graphomic::ad {
namespace {

enum class Broadcast { same, row, col, scalar };

Broadcast classify(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() == b.rows() && a.cols() == b.cols()) return Broadcast::same;
  if (b.rows() == 1 && b.cols() == 1) return Broadcast::scalar;
  if (b.rows() == 1 && b.cols() == a.cols()) return Broadcast::row;
  if (b.cols() == 1 && b.rows() == a.rows()) return Broadcast::col;
  throw DimensionError(std::string(op) + ": cannot broadcast " + shape_string(b) + " onto " +
                       shape_string(a));
}

Matrix expand(const Matrix& b, Index rows, Index cols, Broadcast kind) {
  switch (kind) {
    case Broadcast::same:
      return b;
    case Broadcast::row:
      return b.replicate(rows, 1);
    case Broadcast::col:
      return b.replicate(1, cols);
    case Broadcast::scalar:
      return Matrix::Constant(rows, cols, b(0, 0));
  }
  return b;
}

Matrix reduce_to(const Matrix& g, Broadcast kind) {
  switch (kind) {
    case Broadcast::same:
      return g;
    case Broadcast::row:
      return g.colwise().sum();
    case Broadcast::col:
      return g.rowwise().sum();
    case Broadcast::scalar:
      return Matrix::Constant(1, 1, g.sum());
  }
  return g;
}

template <typename Fwd, typename Deriv>
Var unary(const Var& a, const char* op, Fwd fwd, Deriv deriv) {
  Matrix out = a.value().unaryExpr(fwd);
  return a.tape().record(
      std::move(out), {a},
      [a, deriv](Tape& t, const Matrix& g) {
        const Matrix& x = a.value();
        Matrix d(x.rows(), x.cols());
        for (Index i = 0; i < x.size(); ++i) d.data()[i] = deriv(x.data()[i]);
        t.accumulate(a, (g.array() * d.array()).matrix());
      },
      op);
}

double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double logistic(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

Var matmul(const Var& a, const Var& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: " + shape_string(a.value()) + " x " + shape_string(b.value()));
  }
  Matrix out = a.value() * b.value();
  return a.tape().record(
      std::move(out), {a, b},
      [a, b](Tape& t, const Matrix& g) {
        if (a.requires_grad()) t.accumulate(a, g * b.value().transpose());
        if (b.requires_grad()) t.accumulate(b, a.value().transpose() * g);
      },
      "matmul");
}

Var propagate(const SparseMatrix& adj, const Var& x) {
  if (adj.cols() != x.rows()) {
    throw DimensionError("propagate: adjacency " + std::to_string(adj.rows()) + "x" +
                         std::to_string(adj.cols()) + " vs features " + shape_string(x.value()));
  }
  Matrix out = adj * x.value();
  return x.tape().record(
      std::move(out), {x},
      [x, &adj](Tape& t, const Matrix& g) {
        Matrix gx = adj.transpose() * g;
        t.accumulate(x, gx);
      },
      "propagate");
}

Var transpose(const Var& a) {
  Matrix out = a.value().transpose();
  return a.tape().record(
      std::move(out), {a},
      [a](Tape& t, const Matrix& g) { t.accumulate(a, g.transpose()); }, "transpose");
}

Var add(const Var& a, const Var& b) {
  const Broadcast kind = classify(a.value(), b.value(), "add");
  Matrix out = a.value() + expand(b.value(), a.rows(), a.cols(), kind);
  return a.tape().record(
      std::move(out), {a, b},
      [a, b, kind](Tape& t, const Matrix& g) {
        t.accumulate(a, g);
        if (b.requires_grad()) t.accumulate(b, reduce_to(g, kind));
      },
      "add");
}

Var sub(const Var& a, const Var& b) {
  const Broadcast kind = classify(a.value(), b.value(), "sub");
  Matrix out = a.value() - expand(b.value(), a.rows(), a.cols(), kind);
  return a.tape().record(
      std::move(out), {a, b},
      [a, b, kind](Tape& t, const Matrix& g) {
        t.accumulate(a, g);
        if (b.requires_grad()) t.accumulate(b, -reduce_to(g, kind));
      },
      "sub");
}

Var mul(const Var& a, const Var& b) {
  const Broadcast kind = classify(a.value(), b.value(), "mul");
  Matrix out = (a.value().array() * expand(b.value(), a.rows(), a.cols(), kind).array()).matrix();
  return a.tape().record(
      std::move(out), {a, b},
      [a, b, kind](Tape& t, const Matrix& g) {
        if (a.requires_grad()) {
          const Matrix be = expand(b.value(), a.rows(), a.cols(), kind);
          t.accumulate(a, (g.array() * be.array()).matrix());
        }
        if (b.requires_grad()) {
          t.accumulate(b, reduce_to((g.array() * a.value().array()).matrix(), kind));
        }
      },
      "mul");
}

Var div(const Var& a, const Var& b) {
  const Broadcast kind = classify(a.value(), b.value(), "div");
  const Matrix be = expand(b.value(), a.rows(), a.cols(), kind);
  Matrix out = (a.value().array() / be.array()).matrix();
  return a.tape().record(
      std::move(out), {a, b},
      [a, b, kind](Tape& t, const Matrix& g) {
        const Matrix be = expand(b.value(), a.rows(), a.cols(), kind);
        if (a.requires_grad()) t.accumulate(a, (g.array() / be.array()).matrix());
        if (b.requires_grad()) {
          Matrix gb = (-g.array() * a.value().array() / be.array().square()).matrix();
          t.accumulate(b, reduce_to(gb, kind));
        }
      },
      "div");
}

Var scale(const Var& a, double s) {
  Matrix out = a.value() * s;
  return a.tape().record(
      std::move(out), {a}, [a, s](Tape& t, const Matrix& g) { t.accumulate(a, g * s); }, "scale");
}

Var shift(const Var& a, double c) {
  Matrix out = (a.value().array() + c).matrix();
  return a.tape().record(
      std::move(out), {a}, [a](Tape& t, const Matrix& g) { t.accumulate(a, g); }, "shift");
}

Var neg(const Var& a) { return scale(a, -1.0); }

Var exp(const Var& a) {
  Matrix out = a.value().array().exp().matrix();
  return a.tape().record(
      out, {a},
      [a, out](Tape& t, const Matrix& g) { t.accumulate(a, (g.array() * out.array()).matrix()); },
      "exp");
}

Var log(const Var& a) {
  if ((a.value().array() <= 0.0).any()) throw NumericError("log: non-positive argument");
  return unary(
      a, "log", [](double x) { return std::log(x); }, [](double x) { return 1.0 / x; });
}

Var square(const Var& a) {
  return unary(
      a, "square", [](double x) { return x * x; }, [](double x) { return 2.0 * x; });
}

Var sqrt(const Var& a) {
  if ((a.value().array() <= 0.0).any()) throw NumericError("sqrt: non-positive argument");
  return unary(
      a, "sqrt", [](double x) { return std::sqrt(x); },
      [](double x) { return 0.5 / std::sqrt(x); });
}

Var sigmoid(const Var& a) {
  return unary(a, "sigmoid", logistic, [](double x) {
    const double s = logistic(x);
    return s * (1.0 - s);
  });
}

Var elu(const Var& a, double alpha) {
  return unary(
      a, "elu", [alpha](double x) { return x >= 0 ? x : alpha * std::expm1(x); },
      [alpha](double x) { return x >= 0 ? 1.0 : alpha * std::exp(x); });
}

Var relu(const Var& a) {
  return unary(
      a, "relu", [](double x) { return x > 0 ? x : 0.0; },
      [](double x) { return x > 0 ? 1.0 : 0.0; });
}

Var prelu(const Var& a, const Var& slope) {
  if (slope.rows() != 1 || slope.cols() != 1) {
    throw DimensionError("prelu: slope must be 1x1, got " + shape_string(slope.value()));
  }
  const double s = slope.value()(0, 0);
  Matrix out = a.value().unaryExpr([s](double x) { return x >= 0 ? x : s * x; });
  return a.tape().record(
      std::move(out), {a, slope},
      [a, slope](Tape& t, const Matrix& g) {
        const double s = slope.value()(0, 0);
        const Matrix& x = a.value();
        if (a.requires_grad()) {
          Matrix d = x.unaryExpr([s](double v) { return v >= 0 ? 1.0 : s; });
          t.accumulate(a, (g.array() * d.array()).matrix());
        }
        if (slope.requires_grad()) {
          const double gs = (g.array() * x.array().min(0.0)).sum();
          t.accumulate(slope, Matrix::Constant(1, 1, gs));
        }
      },
      "prelu");
}

Var clamp(const Var& a, double lo, double hi) {
  return unary(
      a, "clamp", [lo, hi](double x) { return x < lo ? lo : (x > hi ? hi : x); },
      [lo, hi](double x) { return (x > lo && x < hi) ? 1.0 : 0.0; });
}

Var activate(const Var& a, Activation kind, const Var* slope) {
  switch (kind) {
    case Activation::identity:
      return a;
    case Activation::sigmoid:
      return sigmoid(a);
    case Activation::elu:
      return elu(a);
    case Activation::relu:
      return relu(a);
    case Activation::prelu:
      if (slope == nullptr) throw ContractError("activate: prelu requires a slope node");
      return prelu(a, *slope);
  }
  return a;
}

Var sum(const Var& a) {
  Matrix out = Matrix::Constant(1, 1, a.value().sum());
  return a.tape().record(
      std::move(out), {a},
      [a](Tape& t, const Matrix& g) {
        t.accumulate(a, Matrix::Constant(a.rows(), a.cols(), g(0, 0)));
      },
      "sum");
}

Var mean(const Var& a) {
  const double n = static_cast<double>(a.value().size());
  Matrix out = Matrix::Constant(1, 1, a.value().sum() / n);
  return a.tape().record(
      std::move(out), {a},
      [a, n](Tape& t, const Matrix& g) {
        t.accumulate(a, Matrix::Constant(a.rows(), a.cols(), g(0, 0) / n));
      },
      "mean");
}

Var col_sum(const Var& a) {
  Matrix out = a.value().colwise().sum();
  return a.tape().record(
      std::move(out), {a},
      [a](Tape& t, const Matrix& g) { t.accumulate(a, g.replicate(a.rows(), 1)); }, "col_sum");
}

Var col_mean(const Var& a) { return scale(col_sum(a), 1.0 / static_cast<double>(a.rows())); }

Var row_sum(const Var& a) {
  Matrix out = a.value().rowwise().sum();
  return a.tape().record(
      std::move(out), {a},
      [a](Tape& t, const Matrix& g) { t.accumulate(a, g.replicate(1, a.cols())); }, "row_sum");
}

Var concat_cols(std::span<const Var> parts) {
  if (parts.empty()) throw ContractError("concat_cols: no operands");
  const Index rows = parts.front().rows();
  Index cols = 0;
  for (const auto& p : parts) {
    if (p.rows() != rows) throw DimensionError("concat_cols: row counts differ");
    cols += p.cols();
  }
  Matrix out(rows, cols);
  Index offset = 0;
  for (const auto& p : parts) {
    out.middleCols(offset, p.cols()) = p.value();
    offset += p.cols();
  }
  std::vector<Var> parents(parts.begin(), parts.end());
  return parts.front().tape().record(
      std::move(out), parents,
      [parents](Tape& t, const Matrix& g) {
        Index off = 0;
        for (const auto& p : parents) {
          if (p.requires_grad()) t.accumulate(p, g.middleCols(off, p.cols()));
          off += p.cols();
        }
      },
      "concat_cols");
}

Var concat_rows(std::span<const Var> parts) {
  if (parts.empty()) throw ContractError("concat_rows: no operands");
  const Index cols = parts.front().cols();
  Index rows = 0;
  for (const auto& p : parts) {
    if (p.cols() != cols) throw DimensionError("concat_rows: column counts differ");
    rows += p.rows();
  }
  Matrix out(rows, cols);
  Index offset = 0;
  for (const auto& p : parts) {
    out.middleRows(offset, p.rows()) = p.value();
    offset += p.rows();
  }
  std::vector<Var> parents(parts.begin(), parts.end());
  return parts.front().tape().record(
      std::move(out), parents,
      [parents](Tape& t, const Matrix& g) {
        Index off = 0;
        for (const auto& p : parents) {
          if (p.requires_grad()) t.accumulate(p, g.middleRows(off, p.rows()));
          off += p.rows();
        }
      },
      "concat_rows");
}

Var slice_rows(const Var& a, Index begin, Index count) {
  if (begin < 0 || count < 0 || begin + count > a.rows()) {
    throw DimensionError("slice_rows: [" + std::to_string(begin) + ", +" + std::to_string(count) +
                         ") out of " + shape_string(a.value()));
  }
  Matrix out = a.value().middleRows(begin, count);
  return a.tape().record(
      std::move(out), {a},
      [a, begin, count](Tape& t, const Matrix& g) {
        Matrix full = Matrix::Zero(a.rows(), a.cols());
        full.middleRows(begin, count) = g;
        t.accumulate(a, full);
      },
      "slice_rows");
}

Var slice_cols(const Var& a, Index begin, Index count) {
  if (begin < 0 || count < 0 || begin + count > a.cols()) {
    throw DimensionError("slice_cols: [" + std::to_string(begin) + ", +" + std::to_string(count) +
                         ") out of " + shape_string(a.value()));
  }
  Matrix out = a.value().middleCols(begin, count);
  return a.tape().record(
      std::move(out), {a},
      [a, begin, count](Tape& t, const Matrix& g) {
        Matrix full = Matrix::Zero(a.rows(), a.cols());
        full.middleCols(begin, count) = g;
        t.accumulate(a, full);
      },
      "slice_cols");
}

Var gather_rows(const Var& a, std::span<const Index> index) {
  std::vector<Index> idx(index.begin(), index.end());
  Matrix out(static_cast<Index>(idx.size()), a.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] < 0 || idx[i] >= a.rows()) throw DimensionError("gather_rows: index out of range");
    out.row(static_cast<Index>(i)) = a.value().row(idx[i]);
  }
  return a.tape().record(
      std::move(out), {a},
      [a, idx](Tape& t, const Matrix& g) {
        Matrix full = Matrix::Zero(a.rows(), a.cols());
        for (std::size_t i = 0; i < idx.size(); ++i) full.row(idx[i]) += g.row(static_cast<Index>(i));
        t.accumulate(a, full);
      },
      "gather_rows");
}

Var pairwise_sq_dists(const Var& x, const Var& y) {
  if (x.cols() != y.cols()) {
    throw DimensionError("pairwise_sq_dists: feature widths " + shape_string(x.value()) + " vs " +
                         shape_string(y.value()));
  }
  const Matrix& xv = x.value();
  const Matrix& yv = y.value();
  Matrix out(xv.rows(), yv.rows());
  for (Index i = 0; i < xv.rows(); ++i) {
    for (Index j = 0; j < yv.rows(); ++j) out(i, j) = (xv.row(i) - yv.row(j)).squaredNorm();
  }
  return x.tape().record(
      std::move(out), {x, y},
      [x, y](Tape& t, const Matrix& g) {
        const Matrix& xv = x.value();
        const Matrix& yv = y.value();
        // d/dx_i = 2 * sum_j g_ij (x_i - y_j); d/dy_j = 2 * sum_i g_ij (y_j - x_i)
        if (x.requires_grad()) {
          Matrix gx = 2.0 * (g.rowwise().sum().asDiagonal() * xv - g * yv);
          t.accumulate(x, gx);
        }
        if (y.requires_grad()) {
          Matrix gy = 2.0 * (g.colwise().sum().transpose().asDiagonal() * yv - g.transpose() * xv);
          t.accumulate(y, gy);
        }
      },
      "pairwise_sq_dists");
}

Var bce_with_logits(const Var& logits, const Matrix& target, double pos_weight) {
  require_same_shape(logits.value(), target, "bce_with_logits");
  const Matrix& l = logits.value();
  const double n = static_cast<double>(l.size());
  double total = 0.0;
  for (Index i = 0; i < l.size(); ++i) {
    const double x = l.data()[i];
    const double tv = target.data()[i];
    total += pos_weight * tv * softplus(-x) + (1.0 - tv) * softplus(x);
  }
  Matrix out = Matrix::Constant(1, 1, total / n);
  return logits.tape().record(
      std::move(out), {logits},
      [logits, target, pos_weight, n](Tape& t, const Matrix& g) {
        const Matrix& l = logits.value();
        Matrix d(l.rows(), l.cols());
        for (Index i = 0; i < l.size(); ++i) {
          const double s = logistic(l.data()[i]);
          const double tv = target.data()[i];
          d.data()[i] = (pos_weight * tv * (s - 1.0) + (1.0 - tv) * s) * g(0, 0) / n;
        }
        t.accumulate(logits, d);
      },
      "bce_with_logits");
}

}  // namespace graphomic::ad
