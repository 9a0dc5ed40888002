#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mmd2d/channel.hpp"
#include "mmd2d/geometry.hpp"
#include "mmd2d/linkdyn.hpp"
#include "mmd2d/random.hpp"

namespace mmd2d {

/// An established pair entering beamwidth selection.
struct GameLink {
  int tx_id = -1;
  int rx_id = -1;
  Position tx;
  Position rx;
  RelativeMotion motion;
  double requested_bits = 0.0;  // delta^p_l, fixed at association time
};

struct GameParams {
  ChannelParams channel;
  TimingBudget timing;
  double wide_beamwidth = deg_to_rad(90.0);         // psi, both ends
  double coverage = 50.0;                           // d_T
  double interference_threshold = dbm_to_watts(-90.0);  // I_T, W
  /// Bits/s per utility unit. The Boltzmann temperature is measured in these units.
  double rate_unit = 1e7;
};

/// LOS flag of the path from link i's transmitter to link j's receiver.
using PathLos = std::function<bool(std::size_t tx_link, std::size_t rx_link)>;

/// Action index per player.
using Profile = std::vector<std::size_t>;

/// Links whose transmitter is within d_T of l's receiver, has LOS to it, and
/// would deliver at least I_T there with unit fading and every antenna at
/// `classification_beamwidth`. Not symmetrised.
std::vector<std::size_t> neighborhood(std::size_t l, std::span<const GameLink> links,
                                      const GameParams& params, const PathLos& los,
                                      double classification_beamwidth);

/// Mutual closure: i in H_l iff l in H_i.
std::vector<std::vector<std::size_t>> symmetrize(const std::vector<std::vector<std::size_t>>& raw);

/// Beamwidth-selection potential game. Each player is a link whose two ends
/// share one beamwidth. Utilities use unit fading and count interference only
/// from the player's neighbourhood, so they are deterministic per profile.
class BeamwidthGame {
 public:
  BeamwidthGame() = default;
  BeamwidthGame(std::vector<GameLink> links, std::vector<std::vector<double>> action_sets,
                GameParams params, const PathLos& los);

  std::size_t players() const { return links_.size(); }
  const GameLink& link(std::size_t l) const { return links_[l]; }
  const std::vector<double>& actions(std::size_t l) const { return actions_[l]; }
  const std::vector<std::size_t>& neighbors(std::size_t l) const { return neighbors_[l]; }
  const std::vector<std::vector<std::size_t>>& neighborhoods() const { return neighbors_; }
  const GameParams& params() const { return params_; }

  /// Rate r_l in bits/s including gamma, with interference restricted to H_l.
  double rate(std::size_t l, const Profile& profile) const;
  /// Penalty scalar C_l: the best interference-free rate over l's actions.
  double penalty_scalar(std::size_t l) const { return penalty_scalar_[l]; }
  double stability_time(std::size_t l, std::size_t action) const { return stability_[l][action]; }
  double alignment_time(std::size_t l, std::size_t action) const { return alignment_[l][action]; }
  bool penalty_active(std::size_t l, const Profile& profile) const;

  /// u_l, in utility units.
  double individual_utility(std::size_t l, const Profile& profile) const;
  /// U_l = u_l + sum over H_l of u_i.
  double total_utility(std::size_t l, const Profile& profile) const;
  /// U_l for every action of l with the others held fixed.
  std::vector<double> action_utilities(std::size_t l, const Profile& profile) const;
  /// Theta = sum of u_l.
  double potential(const Profile& profile) const;

  std::vector<double> beamwidths(const Profile& profile) const;
  /// Number of joint profiles, saturating at UINT64_MAX.
  std::uint64_t profile_count() const;
  bool valid(const Profile& profile) const;

 private:
  struct NeighborTerm {
    std::size_t source;          // interfering player
    std::vector<double> power;   // [a_source * |A_l| + a_l], W
  };
  double utility_from(std::size_t l, std::size_t action, double interference) const;

  std::vector<GameLink> links_;
  std::vector<std::vector<double>> actions_;
  GameParams params_;
  std::vector<std::vector<std::size_t>> neighbors_;
  std::vector<std::vector<NeighborTerm>> terms_;
  std::vector<std::vector<double>> signal_, stability_, alignment_, gamma_;
  std::vector<double> penalty_scalar_;
};

/// Feasible common beamwidths of each link; players with an empty set are
/// dropped. `player_link[p]` maps players back to input links.
struct GameBuild {
  BeamwidthGame game;
  std::vector<std::size_t> player_link;
  std::vector<std::size_t> infeasible_links;
};

GameBuild build_game(std::span<const GameLink> links, std::span<const double> beamwidth_set,
                     const GameParams& params, const PathLos& los);

/// Softmax of U / tau, max-shifted.
std::vector<double> boltzmann_update(std::span<const double> utilities, double tau);

/// Random-order greedy independent set of size at most `cap`.
std::vector<std::size_t> select_update_set(const std::vector<std::vector<std::size_t>>& neighborhoods,
                                           std::size_t cap, Rng& rng);

struct TauSchedule {
  enum class Kind { InverseIteration, Fixed };
  Kind kind = Kind::InverseIteration;
  double value = 1.0;  // fixed tau, or the numerator c in c / k
  double at(int k) const { return kind == Kind::Fixed ? value : value / k; }
};

struct TracePoint {
  int iteration = 0;
  double potential = 0.0;
  double best_response_gap = 0.0;
  bool operator==(const TracePoint&) const = default;
};

struct LllOptions {
  TauSchedule tau;
  std::size_t update_cap = 8;
  int stagnation_window = 50;  // T_max
  double prob_threshold = 0.99;
  int max_iterations = 5000;
  bool record_trace = false;
  /// Disables both stopping rules; runs exactly max_iterations.
  bool run_to_budget = false;
  /// Called after every iteration with the current profile.
  std::function<void(int, const Profile&)> observer;
};

struct LllResult {
  Profile profile;
  int iterations = 0;
  bool converged = false;
  double potential = 0.0;
  std::vector<TracePoint> trace;
};

/// Synchronous log-linear learning. Each iteration a random independent set
/// of players evaluates U_l over its actions against the frozen profile,
/// refreshes its mixed strategy with the Boltzmann rule and samples from it.
/// Stops when Theta has not moved for T_max iterations at a profile with no
/// profitable unilateral deviation, or when every player's current action
/// carries at least prob_threshold mass under the current temperature. On
/// budget exhaustion the best profile seen is returned, unconverged.
LllResult lll_run(const BeamwidthGame& game, const LllOptions& options, Rng& rng);

/// max over l of (max_a U_l(a) - U_l(a_l)).
double best_response_gap(const BeamwidthGame& game, const Profile& profile);

struct ExhaustiveResult {
  Profile profile;
  double potential = 0.0;
};

/// Global maximiser of Theta; ties go to the lexicographically smallest
/// profile. Throws when the profile count exceeds `budget`.
ExhaustiveResult exhaustive_optimum(const BeamwidthGame& game, std::uint64_t budget = 10'000'000);

/// No player gains more than tol * max(1, |U_l|) by deviating alone.
bool is_nash_equilibrium(const BeamwidthGame& game, const Profile& profile, double tol = 1e-9);

/// Mixed-radix index of a profile, first player most significant.
std::uint64_t profile_index(const BeamwidthGame& game, const Profile& profile);
Profile profile_at(const BeamwidthGame& game, std::uint64_t index);

/// pi(a) proportional to exp(Theta(a) / tau), indexed by profile_index.
std::vector<double> stationary_distribution(const BeamwidthGame& game, double tau,
                                            std::uint64_t budget = 10'000);

/// Every player at the action nearest to `beamwidth` (ties to the narrower).
Profile cbws(const BeamwidthGame& game, double beamwidth);
/// Independent uniform actions.
Profile rbws(const BeamwidthGame& game, Rng& rng);

}  // namespace mmd2d
