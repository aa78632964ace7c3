#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ctxrl/envs/context_space.hpp"
#include "ctxrl/nn/adam.hpp"
#include "ctxrl/nn/network.hpp"
#include "ctxrl/replay/replay_buffer.hpp"

namespace ctxrl::context {

using nn::ParamSet;
using nn::Tape;
using nn::Tensor;
using nn::Var;
using nn::Vector;

enum class Conditioning { kOracle, kAgnostic, kEstimated };
enum class Supervision { kNone, kGroundTruth, kForwardPrediction, kPolicyLoss };
enum class Architecture { kFfAvg, kLstm };

std::string to_string(Conditioning c);
std::string to_string(Supervision s);
std::string to_string(Architecture a);
/// Throw ConfigError(field, ...) on unknown names.
Conditioning parse_conditioning(const std::string& s, const std::string& field);
Supervision parse_supervision(const std::string& s, const std::string& field);
Architecture parse_architecture(const std::string& s, const std::string& field);

struct ContextConfig {
  Conditioning conditioning = Conditioning::kOracle;
  Supervision supervision = Supervision::kNone;
  Architecture architecture = Architecture::kFfAvg;
  int latent_dim = 0;  // 0: |c| for GT, |c| + 1 otherwise
  int set_size = 10;   // N
  std::vector<int> estimator_hidden{16, 16};
  std::vector<int> predictor_hidden{16, 16};
  double lr = 3e-4;
};

/// Number of context columns the policy sees.
int policy_context_width(const ContextConfig& config, int context_dims);
/// Resolved latent width for estimated conditioning.
int resolved_latent_dim(const ContextConfig& config, int context_dims);

/// Throws ConfigError when strategy and mode disagree (an estimator with
/// oracle/agnostic, estimated without a strategy, GT with a latent width other
/// than |c|).
void validate(const ContextConfig& config, int context_dims);

/// Estimator topology. FF+AVG: per-transition MLP (hidden) -> latent.
/// LSTM: all but the last hidden width are ReLU encoder layers in front of a
/// cell of the last width, then a linear projection of the final hidden state.
nn::Topology estimator_topology(const ContextConfig& config, int transition_width, int latent_dim);
/// p_f: [s | a | c_hat] -> s'.
nn::Topology predictor_topology(const ContextConfig& config, int obs_dim, int action_dim, int latent_dim);

/// Estimator, predictor and their optimizers. Present only for estimated
/// conditioning; the predictor only for FP.
struct ContextModel {
  ContextConfig config;
  int obs_dim = 0;
  int action_dim = 0;
  int context_dims = 0;
  int latent_dim = 0;
  ParamSet estimator;
  std::optional<ParamSet> predictor;
  nn::AdamState estimator_optim;
  std::optional<nn::AdamState> predictor_optim;

  int transition_width() const { return 2 * obs_dim + action_dim; }
};

ContextModel make_context_model(const ContextConfig& config, int obs_dim, int action_dim, int context_dims, Rng& rng);

/// Per-transition features [s | a | s'].
Vector transition_features(const replay::Transition& t);

/// Packs B sets of N transitions for `estimate`. FF+AVG rows are set-major
/// (row b*N + j); LSTM rows are time-major (row j*B + b) so each time step is a
/// contiguous block. All sets must hold exactly N members.
Tensor pack_sets(const std::vector<replay::ContextSet>& sets, Architecture arch, std::size_t n);
/// Same packing from raw feature rows (one set per entry).
Tensor pack_feature_sets(const std::vector<Tensor>& sets, Architecture arch);

/// c_hat for B packed sets of N: B x latent. Throws DimensionError on a width
/// mismatch.
Var estimate(const nn::BoundParams& estimator, Architecture arch, Var packed, Eigen::Index sets, Eigen::Index n);

/// Convenience: one set, no gradients. An empty set is the cold-start marker
/// and yields the zero vector.
Vector estimate_context(const ContextModel& model, const replay::ContextSet& set);
Vector estimate_from_features(const ContextModel& model, const Tensor& features);

/// GT: mean over the batch of ||c_hat - c||^2 (c normalized to [-1, 1]).
Var ground_truth_loss(Var c_hat, const Tensor& normalized_context);
/// FP: mean over the batch of ||p_f(s, a, c_hat) - s'||^2.
Var forward_prediction_loss(const nn::BoundParams& predictor, Var c_hat, const Tensor& obs, const Tensor& action,
                            const Tensor& next_obs);

/// PL: the actor loss itself. Throws ContractError when `c_hat` (the estimate
/// that fed the actor) carries no gradient path.
Var policy_loss_signal(Var actor_loss, Var c_hat);

/// Policy input rows for one batch or one step: Agnostic -> s, Oracle -> s | c,
/// Estimated -> s | c_hat. Throws ContractError when a non-agnostic mode has no
/// context, DimensionError on a width mismatch.
Vector compose_policy_input(const Vector& obs, Conditioning mode, const std::optional<Vector>& context,
                            int expected_context_width);

}  // namespace ctxrl::context
