#include "mmd2d/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace mmd2d {

bool RunResult::all_converged() const {
  return std::all_of(trials.begin(), trials.end(),
                     [](const TrialMetrics& t) { return t.lll_converged; });
}

RunResult monte_carlo(const ExperimentConfig& config, unsigned workers) {
  if (workers == 0) workers = config.workers;
  workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), config.trials));

  RunResult out;
  out.label = config.name;
  out.config = config;
  out.trials.resize(config.trials);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  auto work = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= config.trials) return;
      try {
        out.trials[i] = run_trial(config, i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_lock);
        if (!failure) failure = std::current_exception();
        next.store(config.trials);
        return;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  out.summary = aggregate(out.trials);
  return out;
}

std::vector<SweepPoint> sweep(const nlohmann::json& document, const std::string& path,
                              const std::vector<nlohmann::json>& values, unsigned workers) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  std::vector<SweepPoint> out;
  for (const auto& v : values) {
    nlohmann::json doc = document;
    set_parameter(doc, path, v);
    ExperimentConfig config = parse_config(doc);
    RunResult r = monte_carlo(config, workers);
    r.label = path + "=" + v.dump();
    out.push_back({v, std::move(r)});
  }
  return out;
}

std::vector<RunResult> compare(const nlohmann::json& document,
                               const std::vector<std::string>& associations,
                               const std::vector<std::string>& strategies, unsigned workers) {
  if (associations.empty() || strategies.empty())
    throw ConfigError("compare needs at least one association and one beamwidth strategy");
  std::vector<RunResult> out;
  for (const auto& a : associations) {
    for (const auto& s : strategies) {
      nlohmann::json doc = document;
      set_parameter(doc, "association.algorithm", a);
      set_parameter(doc, "beamwidth.strategy", s);
      RunResult r = monte_carlo(parse_config(doc), workers);
      r.label = a + "+" + s;
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<OracleRow> oracle_check(const ExperimentConfig& config) {
  std::vector<OracleRow> rows;
  for (std::size_t i = 0; i < config.trials; ++i) {
    GameBuild gb = first_frame_game(config, i);
    const BeamwidthGame& game = gb.game;
    OracleRow row;
    row.trial = i;
    row.players = game.players();
    row.profiles = game.profile_count();
    if (row.profiles > config.exhaustive_budget)
      throw ParameterError("trial " + std::to_string(i) + " has " + std::to_string(row.profiles) +
                           " profiles, above the exhaustive budget of " +
                           std::to_string(config.exhaustive_budget));
    ExhaustiveResult best = exhaustive_optimum(game, config.exhaustive_budget);
    Rng rng(derive_seed({trial_seed(config.seed, i), 0x6f7261636c65ULL}));
    LllOptions options = config.lll;
    options.record_trace = false;
    LllResult lll = lll_run(game, options, rng);
    row.lll_potential = lll.potential;
    row.optimum = best.potential;
    row.iterations = lll.iterations;
    row.converged = lll.converged;
    double scale = std::max(1.0, std::abs(best.potential));
    row.optimal = std::abs(lll.potential - best.potential) <= 1e-9 * scale;
    row.ratio = best.potential == 0.0 ? (lll.potential == 0.0 ? 1.0 : 0.0)
                                      : lll.potential / best.potential;
    row.nash = game.players() == 0 || is_nash_equilibrium(game, lll.profile);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace mmd2d
