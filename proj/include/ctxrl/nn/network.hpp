#pragma once

#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <utility>

#include "ctxrl/nn/ops.hpp"
#include "ctxrl/nn/param_set.hpp"

namespace ctxrl::nn {

/// Hidden and cell state carried between LSTM steps.
template <typename Scalar>
struct BasicLstmState {
  BasicVar<Scalar> hidden;
  BasicVar<Scalar> cell;
};

template <typename Scalar>
struct BasicNetworkOutput {
  BasicVar<Scalar> output;
  std::optional<BasicLstmState<Scalar>> state;
};

using LstmState = BasicLstmState<double>;
using NetworkOutput = BasicNetworkOutput<double>;

namespace detail {

inline std::string layer_name(std::size_t i, const char* what) {
  return "layer" + std::to_string(i) + "." + what;
}

template <typename Scalar, typename Rng>
TensorX<Scalar> uniform_tensor(Eigen::Index rows, Eigen::Index cols, Scalar bound, Rng& rng) {
  std::uniform_real_distribution<Scalar> dist(-bound, bound);
  TensorX<Scalar> t(rows, cols);
  for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = dist(rng);
  return t;
}

inline void validate_topology(const Topology& topo) {
  if (topo.input <= 0 || topo.output <= 0) throw DimensionError("topology: widths must be positive");
  for (int h : topo.hidden) {
    if (h <= 0) throw DimensionError("topology: hidden widths must be positive");
  }
  if (topo.kind == NetworkKind::kLstm && topo.hidden.empty()) {
    throw DimensionError("topology: LSTM needs a cell width");
  }
}

}  // namespace detail

/// Allocates parameters for `topo`, initialized like PyTorch's defaults:
/// U(-1/sqrt(fan_in), 1/sqrt(fan_in)) for dense layers, U(-1/sqrt(H), 1/sqrt(H))
/// for LSTM weights.
template <typename Scalar = double, typename Rng>
BasicParamSet<Scalar> init_network(const Topology& topo, Rng& rng) {
  detail::validate_topology(topo);
  BasicParamSet<Scalar> p(topo);
  const bool lstm = topo.kind == NetworkKind::kLstm;
  const std::size_t dense = lstm ? topo.hidden.size() - 1 : topo.hidden.size();
  int width = topo.input;
  for (std::size_t i = 0; i < dense; ++i) {
    const Scalar bound = Scalar(1) / std::sqrt(static_cast<Scalar>(width));
    p.add(detail::layer_name(i, "weight"), detail::uniform_tensor<Scalar>(width, topo.hidden[i], bound, rng));
    p.add(detail::layer_name(i, "bias"), detail::uniform_tensor<Scalar>(1, topo.hidden[i], bound, rng));
    width = topo.hidden[i];
  }
  if (lstm) {
    const int cell = topo.hidden.back();
    const Scalar bound = Scalar(1) / std::sqrt(static_cast<Scalar>(cell));
    p.add("lstm.w_input", detail::uniform_tensor<Scalar>(width, 4 * cell, bound, rng));
    p.add("lstm.w_hidden", detail::uniform_tensor<Scalar>(cell, 4 * cell, bound, rng));
    p.add("lstm.bias", detail::uniform_tensor<Scalar>(1, 4 * cell, bound, rng));
    p.add("proj.weight", detail::uniform_tensor<Scalar>(cell, topo.output, bound, rng));
    p.add("proj.bias", detail::uniform_tensor<Scalar>(1, topo.output, bound, rng));
  } else {
    const Scalar bound = Scalar(1) / std::sqrt(static_cast<Scalar>(width));
    p.add(detail::layer_name(dense, "weight"), detail::uniform_tensor<Scalar>(width, topo.output, bound, rng));
    p.add(detail::layer_name(dense, "bias"), detail::uniform_tensor<Scalar>(1, topo.output, bound, rng));
  }
  return p;
}

/// Same layout as `init_network` with every tensor zero.
template <typename Scalar = double>
BasicParamSet<Scalar> zero_network(const Topology& topo) {
  std::mt19937_64 rng(0);
  return init_network<Scalar>(topo, rng).zeros_like();
}

/// Zero hidden and cell state for a batch of `rows`.
template <typename Scalar>
BasicLstmState<Scalar> zero_lstm_state(BasicTape<Scalar>& tape, const Topology& topo, Eigen::Index rows) {
  const int cell = topo.hidden.back();
  return {tape.constant(TensorX<Scalar>::Zero(rows, cell)), tape.constant(TensorX<Scalar>::Zero(rows, cell))};
}

/// Encoder stack only (the ReLU layers in front of an LSTM cell). Exposed so a
/// whole sequence can be encoded in one batched pass.
template <typename Scalar>
BasicVar<Scalar> apply_lstm_encoder(const BasicBoundParams<Scalar>& net, BasicVar<Scalar> input) {
  const Topology& topo = net.topology();
  BasicVar<Scalar> h = input;
  for (std::size_t i = 0; i + 1 < topo.hidden.size(); ++i) {
    h = relu(affine(h, net[detail::layer_name(i, "weight")], net[detail::layer_name(i, "bias")]));
  }
  return h;
}

/// One LSTM step on already-encoded input. Gate layout in the packed weights is
/// (input, forget, candidate, output).
template <typename Scalar>
BasicLstmState<Scalar> lstm_cell(const BasicBoundParams<Scalar>& net, BasicVar<Scalar> encoded,
                                 const BasicLstmState<Scalar>& prev) {
  const Eigen::Index cell = net.topology().hidden.back();
  auto gates = affine(encoded, net["lstm.w_input"], net["lstm.bias"]) + matmul(prev.hidden, net["lstm.w_hidden"]);
  auto in_gate = sigmoid(slice_cols(gates, 0, cell));
  auto forget_gate = sigmoid(slice_cols(gates, cell, cell));
  auto candidate = tanh(slice_cols(gates, 2 * cell, cell));
  auto out_gate = sigmoid(slice_cols(gates, 3 * cell, cell));
  auto c = forget_gate * prev.cell + in_gate * candidate;
  auto h = out_gate * tanh(c);
  return {h, c};
}

template <typename Scalar>
BasicVar<Scalar> lstm_projection(const BasicBoundParams<Scalar>& net, BasicVar<Scalar> hidden) {
  return affine(hidden, net["proj.weight"], net["proj.bias"]);
}

/// Forward pass. MLPs ignore `state`. LSTMs consume one time step of `input`,
/// start from zeros when `state` is empty, and return the projection of the new
/// hidden state together with (hidden, cell).
template <typename Scalar>
BasicNetworkOutput<Scalar> apply_network(const BasicBoundParams<Scalar>& net, BasicVar<Scalar> input,
                                         std::optional<BasicLstmState<Scalar>> state = std::nullopt) {
  const Topology& topo = net.topology();
  if (input.cols() != topo.input) {
    throw DimensionError("apply_network: input width " + std::to_string(input.cols()) + ", expected " +
                         std::to_string(topo.input));
  }
  if (topo.kind == NetworkKind::kLstm) {
    auto prev = state ? *state : zero_lstm_state(*input.tape, topo, input.rows());
    if (prev.hidden.rows() != input.rows()) throw DimensionError("apply_network: recurrent state batch mismatch");
    auto next = lstm_cell(net, apply_lstm_encoder(net, input), prev);
    return {lstm_projection(net, next.hidden), next};
  }
  BasicVar<Scalar> h = input;
  const std::size_t layers = topo.hidden.size();
  for (std::size_t i = 0; i < layers; ++i) {
    h = relu(affine(h, net[detail::layer_name(i, "weight")], net[detail::layer_name(i, "bias")]));
  }
  h = affine(h, net[detail::layer_name(layers, "weight")], net[detail::layer_name(layers, "bias")]);
  return {h, std::nullopt};
}

}  // namespace ctxrl::nn
