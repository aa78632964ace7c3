#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <utility>
#include <vector>

#include "ctxrl/nn/tensor.hpp"

namespace ctxrl::nn {

template <typename Scalar>
class BasicTape;

/// Handle to a node on a tape. Cheap to copy; valid as long as the tape lives.
template <typename Scalar>
struct BasicVar {
  BasicTape<Scalar>* tape = nullptr;
  std::size_t id = 0;

  const TensorX<Scalar>& value() const { return tape->value(*this); }
  const TensorX<Scalar>& grad() const { return tape->grad(*this); }
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  bool requires_grad() const { return tape->requires_grad(*this); }
};

/// A dynamically recorded computation. Nodes are appended in evaluation order,
/// so creation order is a topological order and `backward` simply walks it in
/// reverse, visiting each node at most once.
template <typename Scalar>
class BasicTape {
 public:
  using Tensor = TensorX<Scalar>;
  using Var = BasicVar<Scalar>;
  using BackwardFn = std::function<void(BasicTape&, const Tensor&)>;

  BasicTape() { nodes_.reserve(256); }
  BasicTape(const BasicTape&) = delete;
  BasicTape& operator=(const BasicTape&) = delete;

  /// Leaf that never receives a gradient.
  Var constant(Tensor value) { return push(std::move(value), false, {}); }

  /// Leaf whose gradient is tracked (parameters, inputs under test).
  Var variable(Tensor value) { return push(std::move(value), true, {}); }

  /// Records an op output. `backward` runs only if some input needs a gradient.
  Var record(Tensor value, std::initializer_list<Var> inputs, BackwardFn backward) {
    bool needs = false;
    for (const Var& in : inputs) needs = needs || nodes_[in.id].requires_grad;
    return push(std::move(value), needs, needs ? std::move(backward) : BackwardFn{});
  }

  const Tensor& value(Var v) const { return nodes_[v.id].value; }
  bool requires_grad(Var v) const { return nodes_[v.id].requires_grad; }

  /// Gradient of the last `backward` loss. Zero-filled when the node was never reached.
  const Tensor& grad(Var v) const {
    const Node& n = nodes_[v.id];
    if (!n.has_grad) {
      n.grad.setZero(n.value.rows(), n.value.cols());
      n.has_grad = true;
    }
    return n.grad;
  }

  /// Adds `g` into the gradient of `id`. Lazy expressions are not evaluated when
  /// the target does not track gradients.
  template <typename Derived>
  void accumulate(std::size_t id, const Eigen::MatrixBase<Derived>& g) {
    Node& n = nodes_[id];
    if (!n.requires_grad) return;
    if (!n.has_grad) {
      n.grad = g;
      n.has_grad = true;
    } else {
      n.grad += g;
    }
  }

  void backward(Var loss) {
    if (loss.tape != this) throw ContractError("backward: loss belongs to another tape");
    const Node& l = nodes_[loss.id];
    if (l.value.rows() != 1 || l.value.cols() != 1) {
      throw ContractError("backward: loss must be scalar, got " + shape_string(l.value));
    }
    for (Node& n : nodes_) {
      n.has_grad = false;
    }
    if (!l.requires_grad) return;
    nodes_[loss.id].grad = Tensor::Ones(1, 1);
    nodes_[loss.id].has_grad = true;
    for (std::size_t i = loss.id + 1; i-- > 0;) {
      Node& n = nodes_[i];
      if (!n.has_grad || !n.backward) continue;
      // The node's own grad is final once every consumer (later ids) has run.
      n.backward(*this, n.grad);
    }
  }

  std::size_t size() const noexcept { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    mutable Tensor grad;
    mutable bool has_grad = false;
    bool requires_grad = false;
    BackwardFn backward;
  };

  Var push(Tensor value, bool requires_grad, BackwardFn backward) {
    Node n;
    n.value = std::move(value);
    n.requires_grad = requires_grad;
    n.backward = std::move(backward);
    nodes_.push_back(std::move(n));
    return Var{this, nodes_.size() - 1};
  }

  std::vector<Node> nodes_;
};

using Tape = BasicTape<double>;
using Var = BasicVar<double>;

}  // namespace ctxrl::nn
