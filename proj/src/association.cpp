#include "mmd2d/association.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <tuple>

namespace mmd2d {

AssociationAlgorithm parse_association(const std::string& name) {
  if (name == "hpa") return AssociationAlgorithm::Hpa;
  if (name == "daa") return AssociationAlgorithm::Daa;
  if (name == "mda") return AssociationAlgorithm::Mda;
  if (name == "rpa") return AssociationAlgorithm::Rpa;
  throw ParameterError("unknown association algorithm '" + name + "'");
}

const char* to_string(AssociationAlgorithm a) {
  switch (a) {
    case AssociationAlgorithm::Hpa: return "hpa";
    case AssociationAlgorithm::Daa: return "daa";
    case AssociationAlgorithm::Mda: return "mda";
    case AssociationAlgorithm::Rpa: return "rpa";
  }
  return "?";
}

const char* to_string(UnmatchedReason r) {
  switch (r) {
    case UnmatchedReason::NoFeasibleDT: return "no_feasible_dt";
    case UnmatchedReason::NoContent: return "no_content";
    case UnmatchedReason::AckTimeout: return "ack_timeout";
    case UnmatchedReason::SwitchedToCellular: return "switched_to_cellular";
  }
  return "?";
}

bool Matching::is_one_to_one() const {
  std::set<int> txs, rxs;
  for (auto [tx, rx] : pairs) {
    if (!txs.insert(tx).second || !rxs.insert(rx).second) return false;
    if (unmatched.count(rx)) return false;
  }
  return true;
}

std::optional<int> Matching::transmitter_of(int requester) const {
  for (auto [tx, rx] : pairs)
    if (rx == requester) return tx;
  return std::nullopt;
}

double pa_utility(double stability, double availability, const PAUtilityParams& params) {
  if (!(params.stability_norm > 0.0) || !(params.availability_norm > 0.0))
    throw ParameterError("utility normalisation factors must be positive");
  return stability / params.stability_norm + availability / params.availability_norm;
}

std::vector<std::size_t> in_range_transmitters(const Node& requester,
                                               const std::vector<Node>& transmitters,
                                               double coverage) {
  if (!(coverage > 0.0)) throw ParameterError("coverage distance must be positive");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < transmitters.size(); ++i) {
    const double d = distance(requester.position, transmitters[i].position);
    if (d > 0.0 && d <= coverage) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> feasible_transmitters(const Node& requester,
                                               const std::vector<Node>& transmitters,
                                               double coverage, const LosOracle& los) {
  auto out = in_range_transmitters(requester, transmitters, coverage);
  std::erase_if(out, [&](std::size_t i) { return !los(transmitters[i], requester); });
  return out;
}

namespace {

std::size_t availability_of(const AssociationInput& in, std::size_t r, std::size_t t) {
  auto it = in.caches->find(in.transmitters[t].id);
  if (it == in.caches->end()) return 0;
  return availability(it->second, in.requests[r]);
}

double stability_of(const AssociationInput& in, std::size_t r, std::size_t t) {
  const Node& rx = in.requesters[r];
  const Node& tx = in.transmitters[t];
  return link_stability_time(distance(rx.position, tx.position), in.narrowest_beamwidth,
                             relative_motion(rx, tx), in.timing.misalignment_threshold);
}

std::vector<std::size_t> baseline_candidates(const AssociationInput& in, std::size_t r) {
  if (in.baselines_los_aware)
    return feasible_transmitters(in.requesters[r], in.transmitters, in.coverage, in.los);
  return in_range_transmitters(in.requesters[r], in.transmitters, in.coverage);
}

}  // namespace

double requester_utility(const AssociationInput& in, std::size_t r, std::size_t t) {
  PAUtilityParams params = in.utility;
  if (params.availability_norm <= 0.0)
    params.availability_norm = std::max<double>(1.0, static_cast<double>(in.requests[r].size()));
  // Unbounded stability saturates the normalised term.
  const double ts = std::min(stability_of(in, r, t), params.stability_norm);
  return pa_utility(ts, static_cast<double>(availability_of(in, r, t)), params);
}

Matching hpa_round(const AssociationInput& in) {
  Matching m;
  struct Choice {
    std::size_t requester;
    double utility;
  };
  std::map<std::size_t, std::vector<Choice>> proposals;

  for (std::size_t r = 0; r < in.requesters.size(); ++r) {
    const auto feasible = feasible_transmitters(in.requesters[r], in.transmitters, in.coverage, in.los);
    if (feasible.empty()) {
      m.unmatched[in.requesters[r].id] = UnmatchedReason::NoFeasibleDT;
      continue;
    }
    std::optional<std::size_t> best;
    double best_u = -std::numeric_limits<double>::infinity();
    for (std::size_t t : feasible) {
      if (availability_of(in, r, t) == 0) continue;
      const double u = requester_utility(in, r, t);
      if (u > best_u || (u == best_u && in.transmitters[t].id < in.transmitters[*best].id)) {
        best_u = u;
        best = t;
      }
    }
    if (!best) {
      m.unmatched[in.requesters[r].id] = UnmatchedReason::NoContent;
      continue;
    }
    proposals[*best].push_back({r, best_u});
  }

  for (auto& [t, choices] : proposals) {
    auto winner = std::max_element(choices.begin(), choices.end(), [&](const Choice& a, const Choice& b) {
      if (a.utility != b.utility) return a.utility < b.utility;
      return in.requesters[a.requester].id > in.requesters[b.requester].id;
    });
    m.pairs.emplace_back(in.transmitters[t].id, in.requesters[winner->requester].id);
    for (const auto& c : choices)
      if (c.requester != winner->requester)
        m.unmatched[in.requesters[c.requester].id] = UnmatchedReason::AckTimeout;
  }
  std::sort(m.pairs.begin(), m.pairs.end(), [](auto a, auto b) { return a.second < b.second; });
  m.proposal_rounds = 1;
  m.proposals = static_cast<int>(m.pairs.size());
  m.overhead = in.timing.association_round();
  return m;
}

PreferenceTable build_preferences(const AssociationInput& in) {
  PreferenceTable p;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  p.score.assign(in.requesters.size(), std::vector<double>(in.transmitters.size(), nan));
  p.requester_prefs.resize(in.requesters.size());
  for (std::size_t r = 0; r < in.requesters.size(); ++r) {
    for (std::size_t t : baseline_candidates(in, r)) {
      if (availability_of(in, r, t) == 0) continue;
      p.score[r][t] = requester_utility(in, r, t);
      p.requester_prefs[r].push_back(t);
    }
    std::stable_sort(p.requester_prefs[r].begin(), p.requester_prefs[r].end(),
                     [&](std::size_t a, std::size_t b) { return p.score[r][a] > p.score[r][b]; });
  }
  return p;
}

DeferredAcceptanceResult deferred_acceptance(const PreferenceTable& prefs, std::size_t transmitters) {
  const std::size_t n = prefs.requester_prefs.size();
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> next(n, 0), held_by(transmitters, kNone);
  std::vector<bool> engaged(n, false);

  // Transmitter t prefers r over s.
  auto prefers = [&](std::size_t t, std::size_t r, std::size_t s) {
    const double a = prefs.score[r][t], b = prefs.score[s][t];
    if (a != b) return a > b;
    return r < s;
  };

  DeferredAcceptanceResult res;
  for (;;) {
    std::vector<std::pair<std::size_t, std::size_t>> round;  // (requester, transmitter)
    for (std::size_t r = 0; r < n; ++r)
      if (!engaged[r] && next[r] < prefs.requester_prefs[r].size())
        round.emplace_back(r, prefs.requester_prefs[r][next[r]++]);
    if (round.empty()) break;
    ++res.rounds;
    res.proposals += static_cast<int>(round.size());
    for (auto [r, t] : round) {
      const std::size_t cur = held_by[t];
      if (cur == kNone) {
        held_by[t] = r;
        engaged[r] = true;
      } else if (prefers(t, r, cur)) {
        held_by[t] = r;
        engaged[r] = true;
        engaged[cur] = false;
      }
    }
  }
  for (std::size_t t = 0; t < transmitters; ++t)
    if (held_by[t] != kNone) res.pairs.emplace_back(t, held_by[t]);
  return res;
}

bool has_blocking_pair(const PreferenceTable& prefs, std::size_t transmitters,
                       const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> partner_of_rx(prefs.requester_prefs.size(), kNone);
  std::vector<std::size_t> partner_of_tx(transmitters, kNone);
  for (auto [t, r] : pairs) {
    partner_of_rx[r] = t;
    partner_of_tx[t] = r;
  }
  for (std::size_t r = 0; r < prefs.requester_prefs.size(); ++r) {
    for (std::size_t t : prefs.requester_prefs[r]) {
      if (t == partner_of_rx[r]) break;  // everything after is worse for r
      const std::size_t cur = partner_of_tx[t];
      if (cur == kNone) return true;
      const double mine = prefs.score[r][t], theirs = prefs.score[cur][t];
      if (mine > theirs || (mine == theirs && r < cur)) return true;
    }
  }
  return false;
}

Matching daa_match(const AssociationInput& in) {
  const auto prefs = build_preferences(in);
  const auto da = deferred_acceptance(prefs, in.transmitters.size());
  Matching m;
  std::vector<bool> matched(in.requesters.size(), false);
  for (auto [t, r] : da.pairs) {
    m.pairs.emplace_back(in.transmitters[t].id, in.requesters[r].id);
    matched[r] = true;
  }
  for (std::size_t r = 0; r < in.requesters.size(); ++r) {
    if (matched[r]) continue;
    m.unmatched[in.requesters[r].id] = prefs.requester_prefs[r].empty()
                                           ? UnmatchedReason::NoFeasibleDT
                                           : UnmatchedReason::AckTimeout;
  }
  std::sort(m.pairs.begin(), m.pairs.end(), [](auto a, auto b) { return a.second < b.second; });
  m.proposal_rounds = std::max(1, da.rounds);
  m.proposals = da.proposals;
  m.overhead = m.proposal_rounds * in.timing.association_round();
  return m;
}

Matching mda_match(const AssociationInput& in) {
  std::vector<std::tuple<double, int, int, std::size_t, std::size_t>> cand;  // (d, rx id, tx id, r, t)
  std::vector<bool> any(in.requesters.size(), false);
  for (std::size_t r = 0; r < in.requesters.size(); ++r) {
    for (std::size_t t : baseline_candidates(in, r)) {
      cand.emplace_back(distance(in.requesters[r].position, in.transmitters[t].position),
                        in.requesters[r].id, in.transmitters[t].id, r, t);
      any[r] = true;
    }
  }
  std::sort(cand.begin(), cand.end());
  std::vector<bool> tx_used(in.transmitters.size(), false), rx_used(in.requesters.size(), false);
  Matching m;
  for (const auto& [d, rid, tid, r, t] : cand) {
    if (tx_used[t] || rx_used[r]) continue;
    tx_used[t] = rx_used[r] = true;
    m.pairs.emplace_back(tid, rid);
  }
  for (std::size_t r = 0; r < in.requesters.size(); ++r)
    if (!rx_used[r])
      m.unmatched[in.requesters[r].id] = any[r] ? UnmatchedReason::AckTimeout : UnmatchedReason::NoFeasibleDT;
  std::sort(m.pairs.begin(), m.pairs.end(), [](auto a, auto b) { return a.second < b.second; });
  m.proposal_rounds = 1;
  m.proposals = static_cast<int>(m.pairs.size());
  m.overhead = in.timing.association_round();
  return m;
}

Matching rpa_match(const AssociationInput& in, Rng& rng) {
  std::vector<std::size_t> order(in.requesters.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<bool> tx_used(in.transmitters.size(), false);
  Matching m;
  for (std::size_t r : order) {
    const auto cands = baseline_candidates(in, r);
    std::vector<std::size_t> free;
    for (std::size_t t : cands)
      if (!tx_used[t]) free.push_back(t);
    if (free.empty()) {
      m.unmatched[in.requesters[r].id] =
          cands.empty() ? UnmatchedReason::NoFeasibleDT : UnmatchedReason::AckTimeout;
      continue;
    }
    const std::size_t pick = free[static_cast<std::size_t>(uniform01(rng) * free.size())];
    tx_used[pick] = true;
    m.pairs.emplace_back(in.transmitters[pick].id, in.requesters[r].id);
  }
  std::sort(m.pairs.begin(), m.pairs.end(), [](auto a, auto b) { return a.second < b.second; });
  m.proposal_rounds = 1;
  m.proposals = static_cast<int>(m.pairs.size());
  m.overhead = in.timing.association_round();
  return m;
}

Matching associate(AssociationAlgorithm algorithm, const AssociationInput& in, Rng& rng) {
  switch (algorithm) {
    case AssociationAlgorithm::Hpa: return hpa_round(in);
    case AssociationAlgorithm::Daa: return daa_match(in);
    case AssociationAlgorithm::Mda: return mda_match(in);
    case AssociationAlgorithm::Rpa: return rpa_match(in, rng);
  }
  throw ParameterError("unknown association algorithm");
}

void record_failure(RequestState& state) {
  ++state.failure_counter;
  if (state.failure_counter >= state.max_trials) state.switched_to_cellular = true;
}

}  // namespace mmd2d
