#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "ctxrl/nn/param_set.hpp"

namespace ctxrl::nn {

struct AdamConfig {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

template <typename Scalar>
struct BasicAdamState {
  AdamConfig config;
  BasicParamSet<Scalar> m;
  BasicParamSet<Scalar> v;
  std::int64_t step = 0;
};

using AdamState = BasicAdamState<double>;

template <typename Scalar>
BasicAdamState<Scalar> make_adam_state(const BasicParamSet<Scalar>& params, AdamConfig config = {}) {
  return {config, params.zeros_like(), params.zeros_like(), 0};
}

/// One bias-corrected Adam update, in place:
///   m <- b1 m + (1 - b1) g,  v <- b2 v + (1 - b2) g^2,
///   p <- p - lr * (m / (1 - b1^t)) / (sqrt(v / (1 - b2^t)) + eps).
template <typename Scalar>
void adam_step(BasicParamSet<Scalar>& params, const BasicParamSet<Scalar>& grads, BasicAdamState<Scalar>& state) {
  if (!params.same_layout(grads) || !params.same_layout(state.m) || !params.same_layout(state.v)) {
    throw DimensionError("adam_step: parameter, gradient and moment layouts differ");
  }
  const auto& c = state.config;
  state.step += 1;
  const Scalar t = static_cast<Scalar>(state.step);
  const Scalar bias1 = Scalar(1) - std::pow(Scalar(c.beta1), t);
  const Scalar bias2 = Scalar(1) - std::pow(Scalar(c.beta2), t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& p = params.at(i).value;
    const auto& g = grads.at(i).value;
    auto& m = state.m.at(i).value;
    auto& v = state.v.at(i).value;
    m = Scalar(c.beta1) * m + Scalar(1 - c.beta1) * g;
    v = Scalar(c.beta2) * v + Scalar(1 - c.beta2) * g.cwiseProduct(g);
    p.array() -= Scalar(c.lr) * (m.array() / bias1) / ((v.array() / bias2).sqrt() + Scalar(c.eps));
  }
}

}  // namespace ctxrl::nn
