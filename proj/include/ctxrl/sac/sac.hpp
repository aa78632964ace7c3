#pragma once

#include <vector>

#include "ctxrl/nn/adam.hpp"
#include "ctxrl/nn/network.hpp"
#include "ctxrl/util/random.hpp"

namespace ctxrl::sac {

using nn::ParamSet;
using nn::Tape;
using nn::Tensor;
using nn::Var;
using nn::Vector;

inline constexpr double kLogStdMin = -20.0;
inline constexpr double kLogStdMax = 2.0;

struct SacConfig {
  std::vector<int> hidden{256, 256};
  double actor_lr = 3e-4;
  double critic_lr = 3e-4;
  double alpha_lr = 3e-4;
  double gamma = 0.99;
  double tau = 0.005;
  int batch_size = 256;
  int warmup_steps = 1000;
  double initial_alpha = 1.0;
  bool critics_see_context = true;
};

/// Input widths of a learner. `context` is the width appended after the state
/// for the active conditioning mode (0 for agnostic).
struct SacDims {
  int obs = 0;
  int context = 0;
  int action = 0;

  int actor_input() const { return obs + context; }
  int critic_input(bool sees_context) const { return obs + (sees_context ? context : 0) + action; }
};

struct SacParams {
  ParamSet actor;  // trunk -> [mean | log_std]
  ParamSet q1, q2;
  ParamSet q1_target, q2_target;
  ParamSet log_alpha;  // single 1x1 entry "log_alpha"
};

struct SacOptimizers {
  nn::AdamState actor, q1, q2, alpha;
};

struct SacAgent {
  SacConfig config;
  SacDims dims;
  double target_entropy = 0.0;
  SacParams params;
  SacOptimizers optim;

  double alpha() const;
};

/// Fresh learner; targets start as copies of the online critics.
SacAgent make_agent(const SacConfig& config, const SacDims& dims, Rng& rng);

/// Tanh-squashed Gaussian policy sample on a tape.
struct PolicySample {
  Var action;    // B x A, in (-1, 1)
  Var log_prob;  // B x 1, density of the squashed action
  Var mean;      // pre-squash mean
  Var log_std;   // clamped
};

/// `noise` supplies the standard-normal draws (B x A). Deterministic mode uses
/// tanh(mean); log_prob is then evaluated at the mean.
PolicySample policy_forward(const nn::BoundParams& actor, Var input, const Tensor& noise, bool deterministic);

/// log N(u; mean, std) - sum log(1 - tanh(u)^2), per row, with the stable
/// identity log(1 - tanh(u)^2) = 2 (log 2 - u - softplus(-2u)).
Var squashed_log_prob(Var pre_tanh, Var mean, Var log_std);

struct ActResult {
  Vector action;    // environment units (unit action times the bound)
  Vector unit;      // in (-1, 1), what the buffer and critics see
  double log_prob = 0.0;
};

/// One composed observation -> action. Throws DimensionError on an input of the
/// wrong width.
ActResult act(const SacAgent& agent, const Vector& input, const Vector& action_bound, Rng& rng, bool deterministic);

Tensor standard_normal(Eigen::Index rows, Eigen::Index cols, Rng& rng);

/// A minibatch in tensor form. `context` rows align with the batch and hold
/// what the critics see (already detached).
struct SacBatch {
  Tensor obs;       // B x |s|
  Tensor action;    // B x A (unit)
  Tensor reward;    // B x 1
  Tensor next_obs;  // B x |s|
  Tensor done;      // B x 1, 1 cuts the bootstrap
  Tensor context;   // B x k, k may be 0
};

/// y = r + gamma (1 - done) (min(Q1', Q2')(s' + c, a') - alpha log pi(a' | s' + c)).
Tensor td_target(const SacAgent& agent, const SacBatch& batch, const Tensor& next_noise);

struct CriticStep {
  double loss = 0.0;
  double q_mean = 0.0;
};

/// Loss 0.5 (mse(Q1, y) + mse(Q2, y)), one Adam step on each critic.
CriticStep critic_update(SacAgent& agent, const SacBatch& batch, const Tensor& target);

/// Actor objective on a caller-owned tape so that context inputs recorded on
/// the same tape (PL estimates) receive gradient. Critics are bound as
/// constants; `actor` must be bound to `agent.params.actor` on `tape`.
struct ActorObjective {
  Var loss;      // mean(alpha log pi - min(Q1, Q2))
  Var log_prob;  // B x 1
};
ActorObjective actor_objective(const SacAgent& agent, const nn::BoundParams& actor, Var obs, Var actor_context,
                               const Tensor& critic_context, const Tensor& noise, double alpha);

/// Temperature loss -mean(log_alpha (log_pi + target_entropy)), one Adam step.
double temperature_update(SacAgent& agent, const Tensor& log_prob);

/// target <- tau online + (1 - tau) target. tau outside [0, 1] is a ConfigError.
void soft_update(ParamSet& target, const ParamSet& online, double tau);

struct SacLosses {
  double critic = 0.0;
  double actor = 0.0;
  double temperature = 0.0;
  double alpha = 0.0;
  double log_prob = 0.0;
};

/// Full update for fixed context inputs (oracle / agnostic, or tests): critic,
/// actor, temperature, then Polyak averaging.
SacLosses sac_update(SacAgent& agent, const SacBatch& batch, Rng& rng);

/// Composes the actor input rows [obs | context].
Tensor compose_rows(const Tensor& obs, const Tensor& context);

}  // namespace ctxrl::sac
