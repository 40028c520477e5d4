#include "graphomic/numcore/tape.hpp"

#include "graphomic/errors.hpp"

namespace graphomic {

Parameter::Parameter(std::string n, Matrix v)
    : name(std::move(n)), value(std::move(v)), grad(Matrix::Zero(value.rows(), value.cols())) {}

void Parameter::zero_grad() { grad.setZero(value.rows(), value.cols()); }

const Matrix& Var::value() const { return tape_->nodes_[id_].value; }

Matrix Var::grad() const {
  const auto& node = tape_->nodes_[id_];
  if (node.grad.size() == 0) return Matrix::Zero(node.value.rows(), node.value.cols());
  return node.grad;
}

bool Var::requires_grad() const { return tape_->nodes_[id_].requires_grad; }

Var Tape::push(Node node) {
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

Var Tape::constant(Matrix value) {
  require_finite(value, "constant");
  Node n;
  n.value = std::move(value);
  return push(std::move(n));
}

Var Tape::variable(Matrix value) {
  require_finite(value, "variable");
  Node n;
  n.value = std::move(value);
  n.requires_grad = true;
  return push(std::move(n));
}

Var Tape::parameter(Parameter& p) {
  require_finite(p.value, p.name.empty() ? "parameter" : p.name);
  Node n;
  n.value = p.value;
  n.requires_grad = true;
  n.param = &p;
  return push(std::move(n));
}

Var Tape::record(Matrix value, std::initializer_list<Var> parents, BackwardFn fn,
                 std::string_view op) {
  return record(std::move(value), std::vector<Var>(parents), std::move(fn), op);
}

Var Tape::record(Matrix value, const std::vector<Var>& parents, BackwardFn fn,
                 std::string_view op) {
  require_finite(value, op);
  Node n;
  n.value = std::move(value);
  for (const auto& p : parents) {
    if (p.tape_ != this) throw ContractError(std::string(op) + ": operand from another tape");
    n.requires_grad = n.requires_grad || nodes_[p.id_].requires_grad;
  }
  if (n.requires_grad) n.backward = std::move(fn);
  return push(std::move(n));
}

void Tape::accumulate(const Var& v, const Matrix& g) {
  Node& node = nodes_[v.id_];
  if (!node.requires_grad) return;
  if (g.rows() != node.value.rows() || g.cols() != node.value.cols()) {
    throw DimensionError("backward: gradient " + shape_string(g) + " for value " +
                         shape_string(node.value));
  }
  if (node.grad.size() == 0) {
    node.grad = g;
  } else {
    node.grad += g;
  }
}

void Tape::backward(const Var& loss) {
  if (loss.tape_ != this) throw ContractError("backward: loss belongs to another tape");
  const Matrix& lv = nodes_[loss.id_].value;
  if (lv.rows() != 1 || lv.cols() != 1) {
    throw ContractError("backward: loss must be 1x1, got " + shape_string(lv));
  }
  for (auto& n : nodes_) n.grad.resize(0, 0);
  visits_ = 0;
  nodes_[loss.id_].grad = Matrix::Ones(1, 1);
  for (std::size_t i = loss.id_ + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (n.grad.size() == 0) continue;
    require_finite(n.grad, "backward");
    if (n.backward) {
      // Rules only write to parents, which have smaller ids.
      n.backward(*this, n.grad);
      ++visits_;
    }
    if (n.param != nullptr) {
      if (n.param->grad.rows() != n.value.rows() || n.param->grad.cols() != n.value.cols()) {
        n.param->zero_grad();
      }
      n.param->grad += n.grad;
    }
  }
}

}  // namespace graphomic
