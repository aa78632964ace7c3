#pragma once

#include <filesystem>
#include <cmath>
#include <functional>
#include <optional>

#include "ctxrl/context/context.hpp"
#include "ctxrl/replay/replay_buffer.hpp"
#include "ctxrl/sac/sac.hpp"
#include "ctxrl/trainer/run_config.hpp"

namespace ctxrl::trainer {

/// Learner state at one training step.
struct Checkpoint {
  std::int64_t step = 0;
  std::int64_t episode = 0;
  std::string config_hash;
  sac::SacAgent agent;
  std::optional<context::ContextModel> model;
  std::string rng_env, rng_policy, rng_buffer, rng_update;
};

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& cp);
/// Throws IntegrityError on corruption and when the stored config hash differs
/// from `config.hash()`.
Checkpoint load_checkpoint(const std::filesystem::path& path, const RunConfig& config);

/// Learners as configured, before any update.
sac::SacAgent make_run_agent(const RunConfig& config, const envs::Environment& env, Rng& rng);
std::optional<context::ContextModel> make_run_model(const RunConfig& config, const envs::Environment& env, Rng& rng);

/// Gradient snapshots for routing checks.
struct RoutingRecord {
  nn::ParamSet estimator_from_actor;  // actor-loss gradient on the estimator
  nn::ParamSet actor_from_context;    // context-loss gradient on the actor
};

struct UpdateReport {
  sac::SacLosses sac;
  double context_loss = std::nan("");
  std::optional<RoutingRecord> routing;
};

/// One training update: critic step, actor step (PL also
/// steps the estimator on the actor loss), temperature step, Polyak averaging,
/// then the GT/FP estimator step. `sets[i]` is the context set for `batch[i]`.
UpdateReport joint_update(sac::SacAgent& agent, context::ContextModel* model, const envs::ContextSpace& space,
                          const std::vector<const replay::Transition*>& batch,
                          const std::vector<replay::ContextSet>& sets, Rng& rng, bool record_routing = false);

/// Per-step context fed to the policy during training rollouts.
std::optional<nn::Vector> training_context(const RunConfig& config, const context::ContextModel* model,
                                           const envs::ContextSpace& space, const replay::ReplayBuffer& buffer,
                                           const envs::ContextVector& context, Rng& rng, bool* cold_start = nullptr);

struct TrainingHooks {
  /// Called after every environment step with (step, episode, context_id).
  std::function<void(std::int64_t, std::int64_t, int)> on_step;
  /// Called with every transition right after insertion.
  std::function<void(const replay::Transition&, bool cold_start)> on_insert;
};

struct TrainingResult {
  std::vector<std::int64_t> checkpoint_steps;
  std::int64_t episodes = 0;
  std::int64_t updates = 0;
};

/// Runs the training loop and writes into `run_dir`:
///   config.json, losses.csv, train_contexts.csv, checkpoints/step_<k>.ckpt.
/// Non-finite losses or states abort with a FaultError naming the step.
TrainingResult run_training(const RunConfig& config, const std::filesystem::path& run_dir,
                            const TrainingHooks& hooks = {});

}  // namespace ctxrl::trainer
