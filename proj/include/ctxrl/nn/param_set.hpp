#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ctxrl/nn/tape.hpp"

namespace ctxrl::nn {

enum class NetworkKind { kMlp, kLstm };

/// Layer layout of a network. For `kMlp`, `hidden` lists the ReLU layer widths.
/// For `kLstm`, all but the last entry of `hidden` are ReLU encoder layers and
/// the last entry is the LSTM cell width; a linear projection to `output`
/// reads the hidden state.
struct Topology {
  NetworkKind kind = NetworkKind::kMlp;
  int input = 0;
  std::vector<int> hidden;
  int output = 0;

  friend bool operator==(const Topology&, const Topology&) = default;
};

/// Ordered, uniquely named collection of tensors plus the topology they realize.
/// Insertion order is the canonical order for serialization and optimizers.
template <typename Scalar>
class BasicParamSet {
 public:
  using Tensor = TensorX<Scalar>;

  struct Entry {
    std::string name;
    Tensor value;
  };

  BasicParamSet() = default;
  explicit BasicParamSet(Topology topology) : topology_(std::move(topology)) {}

  void add(std::string name, Tensor value) {
    if (index_.contains(name)) throw ContractError("duplicate parameter name '" + name + "'");
    index_.emplace(name, entries_.size());
    entries_.push_back({std::move(name), std::move(value)});
  }

  bool contains(std::string_view name) const { return index_.contains(std::string(name)); }

  std::size_t index_of(std::string_view name) const { return lookup(name); }

  Tensor& operator[](std::string_view name) { return entries_[lookup(name)].value; }
  const Tensor& operator[](std::string_view name) const { return entries_[lookup(name)].value; }

  Entry& at(std::size_t i) { return entries_.at(i); }
  const Entry& at(std::size_t i) const { return entries_.at(i); }

  std::size_t size() const noexcept { return entries_.size(); }
  auto begin() { return entries_.begin(); }
  auto end() { return entries_.end(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  const Topology& topology() const noexcept { return topology_; }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (const auto& e : entries_) n += static_cast<std::size_t>(e.value.size());
    return n;
  }

  /// Same names in the same order, every tensor zeroed.
  BasicParamSet zeros_like() const {
    BasicParamSet out(topology_);
    for (const auto& e : entries_) out.add(e.name, Tensor::Zero(e.value.rows(), e.value.cols()));
    return out;
  }

  bool same_layout(const BasicParamSet& other) const {
    if (other.size() != size()) return false;
    for (std::size_t i = 0; i < size(); ++i) {
      const auto& a = entries_[i];
      const auto& b = other.entries_[i];
      if (a.name != b.name || a.value.rows() != b.value.rows() || a.value.cols() != b.value.cols()) {
        return false;
      }
    }
    return true;
  }

  friend bool operator==(const BasicParamSet& a, const BasicParamSet& b) {
    if (!(a.topology_ == b.topology_) || !a.same_layout(b)) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a.entries_[i].value != b.entries_[i].value) return false;
    }
    return true;
  }

 private:
  std::size_t lookup(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) throw ContractError("unknown parameter '" + std::string(name) + "'");
    return it->second;
  }

  Topology topology_;
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

using ParamSet = BasicParamSet<double>;

/// A ParamSet placed on a tape: one Var per entry, aligned with entry order.
template <typename Scalar>
class BasicBoundParams {
 public:
  BasicBoundParams(BasicTape<Scalar>& tape, const BasicParamSet<Scalar>& params, bool trainable)
      : params_(&params) {
    vars_.reserve(params.size());
    for (const auto& e : params) {
      vars_.push_back(trainable ? tape.variable(e.value) : tape.constant(e.value));
    }
  }

  BasicVar<Scalar> operator[](std::string_view name) const { return vars_[params_->index_of(name)]; }
  BasicVar<Scalar> at(std::size_t i) const { return vars_.at(i); }

  const BasicParamSet<Scalar>& params() const noexcept { return *params_; }
  const Topology& topology() const noexcept { return params_->topology(); }

  /// Gradients after `tape.backward`, as a ParamSet-shaped map. Entries that the
  /// loss never reached come back as exact zeros.
  BasicParamSet<Scalar> gradients() const {
    BasicParamSet<Scalar> out(params_->topology());
    for (std::size_t i = 0; i < vars_.size(); ++i) out.add(params_->at(i).name, vars_[i].grad());
    return out;
  }

 private:
  const BasicParamSet<Scalar>* params_;
  std::vector<BasicVar<Scalar>> vars_;
};

using BoundParams = BasicBoundParams<double>;

/// Runs `tape.backward(loss)` and collects gradients for every bound set.
template <typename Scalar>
BasicParamSet<Scalar> backprop(BasicTape<Scalar>& tape, BasicVar<Scalar> loss,
                               const BasicBoundParams<Scalar>& bound) {
  tape.backward(loss);
  return bound.gradients();
}

}  // namespace ctxrl::nn
