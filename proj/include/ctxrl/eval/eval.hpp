#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ctxrl/context/context.hpp"
#include "ctxrl/envs/environment.hpp"
#include "ctxrl/sac/sac.hpp"

namespace ctxrl::eval {

using envs::ContextSpace;
using envs::ContextVector;

// ---------------------------------------------------------------- context sets

/// Latin hypercube: per dimension, the n samples fall one per equal-width
/// stratum, strata order permuted independently per dimension. Ids are 0..n-1.
std::vector<ContextVector> lhs_sample(int n, const ContextSpace& space, std::uint64_t seed);

struct ContextSetTriple {
  std::vector<ContextVector> train, validation, test;
  std::uint64_t train_seed = 0, validation_seed = 0, test_seed = 0;
};

/// Three LHS draws with distinct derived seeds.
ContextSetTriple generate_context_sets(const ContextSpace& space, int n_train, int n_validation, int n_test,
                                       std::uint64_t seed);

nlohmann::json triple_to_json(const ContextSetTriple& t, const ContextSpace& space);
ContextSetTriple triple_from_json(const nlohmann::json& j, const ContextSpace& space);

// ---------------------------------------------------------------- rollouts

/// Frozen policy for evaluation.
struct PolicySnapshot {
  std::int64_t step = 0;
  sac::SacAgent agent;
  std::optional<context::ContextModel> model;
  context::Conditioning conditioning = context::Conditioning::kOracle;
  int set_size = 10;
};

struct EpisodeResult {
  int context_id = -1;
  int episode = 0;
  double episode_return = 0.0;
  int steps = 0;
  bool success = false;
  bool failed = false;
  bool fault = false;
  double final_distance = std::nan("");  // pushing only
};

/// Context estimate at evaluation time from the current episode's transitions
/// (`window`, oldest first): zero when empty, N draws with replacement when
/// fewer than N, otherwise the latest N. Throws ContractError when a member
/// belongs to another episode.
nn::Vector evaluation_estimate(const context::ContextModel& model, const std::vector<replay::Transition>& window,
                               std::int64_t episode_tag, int set_size, Rng& rng);

/// One deterministic-action episode. Env faults end the episode as failed
/// with the env's failure penalty added.
EpisodeResult run_episode(const PolicySnapshot& policy, envs::Environment& env, const ContextVector& context,
                          int episode, Rng& rng, envs::EpisodeTrace* trace = nullptr);

/// Episode seed: derive_seed(run_seed, {step, context_id, episode}).
std::uint64_t episode_seed(std::uint64_t run_seed, std::int64_t step, int context_id, int episode);

/// `episodes` episodes on each context, fanned out over `jobs` threads.
/// Results are ordered by (context, episode) regardless of scheduling.
std::vector<EpisodeResult> evaluate(const PolicySnapshot& policy, const envs::Environment& env,
                                    const std::vector<ContextVector>& contexts, int episodes, std::uint64_t run_seed,
                                    int jobs = 1);

double mean_return(const std::vector<EpisodeResult>& results);
double success_rate(const std::vector<EpisodeResult>& results);

struct CheckpointScore {
  std::int64_t step = 0;
  double mean_return = 0.0;
};

/// Index of the highest mean return; exact ties go to the later step. The
/// result does not depend on the order of `scores`. Throws ContractError when
/// empty.
std::size_t select_best_checkpoint(const std::vector<CheckpointScore>& scores);

// ---------------------------------------------------------------- statistics

/// I_x(a, b) by Lentz's continued fraction. Absolute error below 1e-10 for
/// the parameter ranges used here.
double regularized_incomplete_beta(double a, double b, double x);
double student_t_cdf(double t, double df);

struct WelchResult {
  bool defined = false;
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
};

/// Two-sided Welch test. `defined` is false when a sample has fewer than two
/// values or both variances are zero.
WelchResult welch_t_test(const std::vector<double>& a, const std::vector<double>& b);

double sample_mean(const std::vector<double>& v);
/// ddof = 1; NaN below two values.
double sample_std(const std::vector<double>& v);

// ---------------------------------------------------------------- report

struct SeedResult {
  std::uint64_t seed = 0;
  double mean_return = 0.0;
  std::optional<double> success_rate;
  std::int64_t episodes = 0;
  std::int64_t selected_step = 0;
  std::string config_hash;
};

struct CellResults {
  std::string policy;          // e.g. "oracle", "pl"
  std::string estimator;       // "-" or "ff_avg" / "lstm"
  std::string context_config;  // e.g. "g"
  std::vector<std::uint64_t> expected_seeds;
  std::vector<SeedResult> seeds;

  std::string label() const;
};

struct Report {
  std::string csv;
  nlohmann::json summary;
};

/// Rows (policy, estimator, context-config, mean, std, best, n_seeds, missing
/// seeds, p vs baseline), plus success columns when `with_success`. Missing
/// seeds are listed, never imputed. Formatting is fixed so equal inputs give
/// byte-identical output.
Report build_report(const std::string& experiment, const std::vector<CellResults>& cells,
                    const std::string& baseline_label, bool with_success);

}  // namespace ctxrl::eval
