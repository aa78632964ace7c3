#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ctxrl/trainer/run_config.hpp"

namespace ctxrl::cli {

/// One policy of the experiment matrix.
struct PolicyCell {
  std::string label;        // run directory name and report key, e.g. "pl-lstm"
  std::string policy;       // "oracle", "agnostic", or the strategy name
  std::string estimator;    // "-" or the estimator architecture
  nlohmann::json settings;  // the run config's "policy" section
};

struct ExperimentManifest {
  std::string experiment;
  nlohmann::json env;  // materialized
  int n_train = 7, n_validation = 7, n_test = 7;
  std::uint64_t context_seed = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<PolicyCell> cells;
  nlohmann::json sac = nlohmann::json::object();
  nlohmann::json training = nlohmann::json::object();
  int validation_episodes = 3;
  int test_episodes = 3;
  std::string baseline = "agnostic";
  bool success_metric = false;  // pushing reports success-rate columns
  int set_size = 10;

  std::string context_config() const;  // varied dims joined by '+'
  nlohmann::json json() const;
  std::string hash() const;
};

/// Throws ConfigError naming the offending field.
ExperimentManifest parse_manifest(const nlohmann::json& j);
ExperimentManifest load_manifest(const std::filesystem::path& path);

struct StageOptions {
  std::filesystem::path runs_root = "runs";
  bool force = false;
  int jobs = 1;
  bool traces = false;  // test stage: per-episode trajectory CSVs
  /// Progress lines; defaults to stderr.
  std::function<void(const std::string&)> log;
};

std::filesystem::path experiment_dir(const ExperimentManifest& m, const StageOptions& o);
std::filesystem::path run_dir(const ExperimentManifest& m, const PolicyCell& cell, std::uint64_t seed,
                              const StageOptions& o);

/// Full run configuration of one (cell, seed) on the given training contexts.
trainer::RunConfig cell_config(const ExperimentManifest& m, const PolicyCell& cell, std::uint64_t seed,
                               const std::vector<envs::ContextVector>& train_contexts);

/// Stages. Each is idempotent: an artifact that already holds the same content
/// is left alone, and a differing one is only replaced under `force`
/// (IntegrityError otherwise).
void gen_contexts(const ExperimentManifest& m, const StageOptions& o);
void train(const ExperimentManifest& m, const StageOptions& o);
void select(const ExperimentManifest& m, const StageOptions& o);
void test(const ExperimentManifest& m, const StageOptions& o);
void report(const ExperimentManifest& m, const StageOptions& o);
void run_all(const ExperimentManifest& m, const StageOptions& o);

}  // namespace ctxrl::cli
