#pragma once

#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "ctxrl/envs/context_space.hpp"
#include "ctxrl/util/random.hpp"

namespace ctxrl::envs {

struct StepResult {
  Vector observation;
  double reward = 0.0;
  bool terminated = false;  // success (pushing) or natural end
  bool truncated = false;   // step cap reached
  bool failed = false;      // infeasible command or fault

  bool episode_over() const noexcept { return terminated || truncated || failed; }
  /// Whether the value bootstrap must be cut for this transition.
  bool terminal() const noexcept { return terminated || failed; }
};

/// Stateful contextual environment. Actions are passed in environment units
/// (already scaled by `action_bound`).
class Environment {
 public:
  virtual ~Environment() = default;

  virtual std::string id() const = 0;
  virtual int observation_dim() const = 0;
  virtual int action_dim() const = 0;
  virtual Vector action_bound() const = 0;
  virtual int max_steps() const = 0;
  virtual const ContextSpace& context_space() const = 0;

  /// Throws ConfigError when the context lies outside the space.
  virtual Vector reset(const ContextVector& context, Rng& rng) = 0;
  virtual StepResult step(const Vector& action, Rng& rng) = 0;

  /// Whether the current episode reached its goal (pushing); false otherwise.
  virtual bool success() const { return false; }
  /// Reward added when an episode ends in a fault.
  virtual double failure_penalty() const { return 0.0; }
  /// Object-goal distance on the true state, for tasks that have one.
  virtual std::optional<double> goal_distance() const { return std::nullopt; }

  /// Column names and values for episode trace CSVs.
  virtual std::vector<std::string> trace_header() const = 0;
  virtual std::vector<double> trace_row() const = 0;

  virtual std::unique_ptr<Environment> clone() const = 0;
};

/// Builds an environment from the `env` block of a run config. Throws
/// ConfigError with a field path on bad input.
std::unique_ptr<Environment> make_environment(const nlohmann::json& env_config);

/// The same block with every default written out. Throws like make_environment.
nlohmann::json materialize_env_config(const nlohmann::json& env_config);

/// Materialized defaults for "pendulum" or "pushing".
nlohmann::json default_env_config(const std::string& id);

/// Step-by-step CSV of an episode: step, the env's trace columns, the action,
/// reward and flags.
class EpisodeTrace {
 public:
  EpisodeTrace(const Environment& env, int action_dim);
  void record(const Environment& env, int step, const Vector& action, const StepResult& result);
  std::string csv() const;

 private:
  std::string header_;
  std::string rows_;
};

}  // namespace ctxrl::envs
