#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "ctxrl/context/context.hpp"
#include "ctxrl/envs/environment.hpp"
#include "ctxrl/sac/sac.hpp"

namespace ctxrl::trainer {

struct TrainingConfig {
  std::int64_t total_steps = 100'000;
  std::uint64_t seed = 0;
  std::size_t replay_capacity = 1'000'000;
  int checkpoints = 50;
  double window_start = 0.75;  // fraction of total_steps
  double window_end = 1.0;
};

/// Everything one training run needs. `json()` is the materialized form with
/// every default written out; the hash is taken over its canonical dump.
struct RunConfig {
  std::string name = "run";
  nlohmann::json env;  // materialized env block
  context::ContextConfig policy;
  sac::SacConfig sac;
  TrainingConfig training;
  std::vector<envs::ContextVector> train_contexts;

  nlohmann::json json() const;
  std::string hash() const;
};

/// Parses and validates; unknown or mistyped fields raise ConfigError with the
/// dotted field path.
RunConfig parse_run_config(const nlohmann::json& j);

/// 64-bit FNV-1a of `text`, as 16 hex digits.
std::string fnv1a_hex(std::string_view text);

/// Steps at which checkpoints are written: `count` evenly spaced points over
/// (start, end] of the run, deduplicated, ascending.
std::vector<std::int64_t> checkpoint_steps(const TrainingConfig& t);

nlohmann::json contexts_to_json(const std::vector<envs::ContextVector>& contexts);
std::vector<envs::ContextVector> contexts_from_json(const nlohmann::json& j, const envs::ContextSpace& space,
                                                    const std::string& field);

}  // namespace ctxrl::trainer
