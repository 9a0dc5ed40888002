#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mmd2d/content.hpp"
#include "mmd2d/geometry.hpp"
#include "mmd2d/linkdyn.hpp"

namespace mmd2d {

enum class AssociationAlgorithm { Hpa, Daa, Mda, Rpa };

AssociationAlgorithm parse_association(const std::string& name);
const char* to_string(AssociationAlgorithm a);

enum class UnmatchedReason { NoFeasibleDT, NoContent, AckTimeout, SwitchedToCellular };

const char* to_string(UnmatchedReason r);

/// One-to-one assignment of transmitters to requesters (node ids).
struct Matching {
  std::vector<std::pair<int, int>> pairs;  // (tx id, rx id)
  std::map<int, UnmatchedReason> unmatched;
  int proposal_rounds = 0;
  int proposals = 0;
  /// Signalling time charged against each matched link's transmission window.
  double overhead = 0.0;

  bool is_one_to_one() const;
  std::optional<int> transmitter_of(int requester) const;
};

/// Normalisation factors T^S_max and delta_max of the requester utility.
/// A non-positive availability_norm means "use the requester's |R|".
struct PAUtilityParams {
  double stability_norm = 60.0;
  double availability_norm = 0.0;
};

/// T^S / T^S_max + delta / delta_max.
double pa_utility(double stability, double availability, const PAUtilityParams& params);

using LosOracle = std::function<bool(const Node& tx, const Node& rx)>;

/// Everything a peer-association round looks at. `requests[i]` belongs to
/// `requesters[i]`.
struct AssociationInput {
  std::vector<Node> transmitters;
  std::vector<Node> requesters;
  std::vector<SegmentSet> requests;
  const CacheState* caches = nullptr;
  LosOracle los;
  double coverage = 50.0;               // d_T
  double narrowest_beamwidth = deg_to_rad(15.0);
  TimingBudget timing;
  PAUtilityParams utility;
  /// Whether the MDA/RPA/DAA baselines can see mmWave blockage when choosing.
  bool baselines_los_aware = false;
};

/// M(n): transmitters within d_T (inclusive) with a LOS path.
std::vector<std::size_t> feasible_transmitters(const Node& requester,
                                               const std::vector<Node>& transmitters,
                                               double coverage, const LosOracle& los);

/// Transmitters within d_T, blockage ignored.
std::vector<std::size_t> in_range_transmitters(const Node& requester,
                                               const std::vector<Node>& transmitters,
                                               double coverage);

/// Requester utility toward a transmitter, with T^S at the narrowest beamwidth.
double requester_utility(const AssociationInput& in, std::size_t requester, std::size_t transmitter);

/// One frame of heuristic peer association. Each requester picks the
/// feasible, content-holding transmitter of highest utility; a transmitter
/// selected by several requesters acknowledges the one that values it most
/// (ties to the lower requester id).
Matching hpa_round(const AssociationInput& in);

/// Requester-proposing deferred acceptance with utility-based preferences on
/// both sides. Overhead is proposal rounds x (T_R + T_D + T_ACK).
Matching daa_match(const AssociationInput& in);

/// Greedy one-to-one by ascending pair distance. Content-unaware.
Matching mda_match(const AssociationInput& in);

/// Requesters in random order each take a uniformly random unclaimed candidate.
Matching rpa_match(const AssociationInput& in, Rng& rng);

Matching associate(AssociationAlgorithm algorithm, const AssociationInput& in, Rng& rng);

/// Preference structure used by deferred acceptance; exposed for the
/// stability check.
struct PreferenceTable {
  /// For each requester index, acceptable transmitter indices best first.
  std::vector<std::vector<std::size_t>> requester_prefs;
  /// score[r][t]: utility of pair (r, t); NaN when unacceptable.
  std::vector<std::vector<double>> score;
};

PreferenceTable build_preferences(const AssociationInput& in);

/// Deferred acceptance over an explicit table. Pairs are (tx index, rx index).
struct DeferredAcceptanceResult {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  int rounds = 0;
  int proposals = 0;
};

DeferredAcceptanceResult deferred_acceptance(const PreferenceTable& prefs, std::size_t transmitters);

/// True when some acceptable (r, t) both prefer each other to their partners.
bool has_blocking_pair(const PreferenceTable& prefs, std::size_t transmitters,
                       const std::vector<std::pair<std::size_t, std::size_t>>& pairs);

/// Counts a failed attempt (t_n += 1). Marks the requester as switched to
/// cellular once f consecutive attempts have failed.
void record_failure(RequestState& state);

}  // namespace mmd2d
