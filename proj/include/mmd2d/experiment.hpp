#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmd2d/config.hpp"
#include "mmd2d/game.hpp"
#include "mmd2d/metrics.hpp"

namespace mmd2d {

/// Seed of trial `index` under base seed `base`.
std::uint64_t trial_seed(std::uint64_t base, std::uint64_t index);

/// Places nodes, fills caches, then per frame: associates, drops links that
/// are blocked or have nothing to send, filters feasible beamwidths, selects
/// beamwidths, evaluates SINR with fading against every transmitting link,
/// and delivers whole segments. Unserved demand is charged to cellular.
/// Fully determined by (config, index).
TrialMetrics run_trial(const ExperimentConfig& config, std::uint64_t index);

/// The beamwidth game of the first frame of trial `index`.
GameBuild first_frame_game(const ExperimentConfig& config, std::uint64_t index);

struct RunResult {
  std::string label;
  ExperimentConfig config;
  std::vector<TrialMetrics> trials;
  Aggregate summary;
  bool all_converged() const;
};

/// Trials 0..n-1 on `workers` threads (0 takes the config value). Results
/// are stored by index, so the worker count never changes them.
RunResult monte_carlo(const ExperimentConfig& config, unsigned workers = 0);

struct SweepPoint {
  nlohmann::json value;
  RunResult result;
};

/// One run per value of `path`, all sharing the base seed.
std::vector<SweepPoint> sweep(const nlohmann::json& document, const std::string& path,
                              const std::vector<nlohmann::json>& values, unsigned workers = 0);

/// Every (association, beamwidth strategy) combination on common seeds.
std::vector<RunResult> compare(const nlohmann::json& document,
                               const std::vector<std::string>& associations,
                               const std::vector<std::string>& strategies, unsigned workers = 0);

struct OracleRow {
  std::uint64_t trial = 0;
  std::size_t players = 0;
  std::uint64_t profiles = 0;
  double lll_potential = 0.0;
  double optimum = 0.0;
  double ratio = 1.0;  // Theta_LLL / Theta*, 1 when both are zero
  int iterations = 0;
  bool converged = false;
  bool optimal = false;  // reached Theta* within 1e-9 relative
  bool nash = false;
};

/// LLL against exhaustive search on the first-frame game of every trial.
/// Throws ParameterError when a game exceeds the exhaustive budget.
std::vector<OracleRow> oracle_check(const ExperimentConfig& config);

}  // namespace mmd2d
