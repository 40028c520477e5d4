#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "graphomic/numcore/matrix.hpp"

namespace graphomic {

/// A trainable tensor living outside any tape. Tape::backward adds into `grad`.
struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;

  Parameter() = default;
  Parameter(std::string n, Matrix v);
  void zero_grad();
};

class Tape;

/// Handle to one recorded node. Cheap to copy; valid while its tape lives.
class Var {
 public:
  Var() = default;

  const Matrix& value() const;
  /// Accumulated gradient; zeros if backward never reached this node.
  Matrix grad() const;
  Index rows() const { return value().rows(); }
  Index cols() const { return value().cols(); }
  bool requires_grad() const;
  bool valid() const noexcept { return tape_ != nullptr; }
  Tape& tape() const { return *tape_; }
  std::size_t id() const noexcept { return id_; }

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}
  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

/// Reverse-mode record over whole matrices.
///
/// Nodes are appended in evaluation order, so reverse insertion order is a
/// reverse topological order; backward() walks it once.
class Tape {
 public:
  /// Receives d(loss)/d(output) and pushes contributions to the parents via accumulate().
  using BackwardFn = std::function<void(Tape&, const Matrix&)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Matrix value);
  Var variable(Matrix value);
  /// Leaf bound to `p`; backward() adds this node's gradient into p.grad.
  Var parameter(Parameter& p);

  /// Appends an op result. `op` names the operation in NumericError messages.
  /// `fn` is dropped when no parent requires a gradient.
  Var record(Matrix value, std::initializer_list<Var> parents, BackwardFn fn, std::string_view op);
  Var record(Matrix value, const std::vector<Var>& parents, BackwardFn fn, std::string_view op);

  /// Adds `g` to the gradient of `v` (no-op when v does not require grad).
  void accumulate(const Var& v, const Matrix& g);

  /// Requires a 1x1 loss. Seeds d(loss)/d(loss)=1 and propagates to every
  /// requires-grad node, then flushes parameter gradients.
  void backward(const Var& loss);

  std::size_t size() const noexcept { return nodes_.size(); }
  /// Number of backward rules executed by the last backward() call.
  std::size_t backward_visits() const noexcept { return visits_; }

 private:
  friend class Var;
  struct Node {
    Matrix value;
    Matrix grad;
    bool requires_grad = false;
    BackwardFn backward;
    Parameter* param = nullptr;
  };

  Var push(Node node);

  std::vector<Node> nodes_;
  std::size_t visits_ = 0;
};

}  // namespace graphomic
