#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "mmd2d/content.hpp"
#include "mmd2d/experiment.hpp"

namespace mmd2d {

namespace {

enum Stream : std::uint64_t {
  kPlacement = 1,
  kCaches,
  kRequests,
  kMobility,
  kAssociation,
  kGame,
  kLos,
  kFading,
};

constexpr std::size_t kNoRequester = std::numeric_limits<std::size_t>::max();

std::uint64_t key(int id) { return static_cast<std::uint64_t>(static_cast<std::int64_t>(id)); }

/// A link admitted to beamwidth selection.
struct Candidate {
  GameLink link;
  std::size_t requester = kNoRequester;
  std::uint64_t segment_bits = 0;
  std::size_t available = 0;  // segments the transmitter can serve
};

class TrialRunner {
 public:
  TrialRunner(const ExperimentConfig& config, std::uint64_t index)
      : cfg_(config), seed_(trial_seed(config.seed, index)) {
    metrics_.trial = index;
    metrics_.seed = seed_;
  }

  TrialMetrics run() {
    setup();
    if (cfg_.scenario == Scenario::Links) {
      auto candidates = link_candidates();
      evaluate(0, candidates, 0.0);
    } else {
      for (int frame = 0; frame < cfg_.max_frames; ++frame) {
        std::vector<Candidate> candidates;
        double overhead = 0.0;
        if (!network_candidates(frame, candidates, overhead)) break;
        evaluate(frame, candidates, overhead);
      }
    }
    finish();
    return std::move(metrics_);
  }

  GameBuild first_game() {
    setup();
    std::vector<Candidate> candidates;
    double overhead = 0.0;
    if (cfg_.scenario == Scenario::Links)
      candidates = link_candidates();
    else
      network_candidates(0, candidates, overhead);
    return build(0, candidates);
  }

 private:
  bool los(int frame, int a, int b, double d) const {
    SplitMix64 gen(derive_seed({seed_, kLos, static_cast<std::uint64_t>(frame),
                                key(std::min(a, b)), key(std::max(a, b))}));
    return sample_los(cfg_.channel.blockage_beta, d, gen);
  }

  double fading(int frame, int tx, int rx) const {
    SplitMix64 gen(derive_seed({seed_, kFading, static_cast<std::uint64_t>(frame), key(tx), key(rx)}));
    return sample_fading(cfg_.channel.nakagami_shape, gen);
  }

  void setup() {
    Rng placement(derive_seed({seed_, kPlacement}));
    catalog_ = ContentCatalog::uniform(cfg_.catalog_size, cfg_.segments, cfg_.content_bits);
    switch (cfg_.scenario) {
      case Scenario::Network: {
        auto nodes = place_uniform(cfg_.arena, cfg_.user_density, cfg_.transmitter_probability,
                                   cfg_.mobility, placement);
        for (auto& n : nodes)
          (n.role == Role::Transmitter ? transmitters_ : requesters_).push_back(n);
        break;
      }
      case Scenario::TestRequester: {
        transmitters_ = place_uniform(cfg_.arena, cfg_.transmitter_density, 1.0, cfg_.mobility,
                                      placement);
        Node dr;
        dr.id = static_cast<int>(transmitters_.size());
        dr.role = Role::Requester;
        dr.trajectory = draw_trajectory(cfg_.mobility, placement);
        requesters_.push_back(dr);
        break;
      }
      case Scenario::Links: {
        place_links(placement);
        break;
      }
    }
    metrics_.transmitters = static_cast<int>(transmitters_.size());
    metrics_.requesters = static_cast<int>(requesters_.size());
    if (cfg_.scenario == Scenario::Links) return;

    std::vector<int> ids;
    for (const auto& t : transmitters_) ids.push_back(t.id);
    Rng cache_rng(derive_seed({seed_, kCaches}));
    caches_ = populate_caches(ids, catalog_, cfg_.cache_probability, cfg_.partial_fraction,
                              cache_rng);
    Rng request_rng(derive_seed({seed_, kRequests}));
    std::uniform_int_distribution<int> pick(0, cfg_.catalog_size - 1);
    for (const auto& r : requesters_) {
      int content = cfg_.scenario == Scenario::TestRequester ? 0 : pick(request_rng);
      RequestState s;
      s.node = r.id;
      s.request = SegmentSet::full(catalog_.at(content));
      s.original_segments = static_cast<int>(s.request.size());
      s.max_trials = cfg_.max_trials;
      metrics_.demanded_bits += s.request.size() * catalog_.at(content).segment_bits;
      requests_.push_back(std::move(s));
    }
  }

  void place_links(Rng& rng) {
    std::size_t count = static_cast<std::size_t>(cfg_.link_count);
    if (cfg_.link_count == 0) {
      std::poisson_distribution<std::size_t> poisson(expected_node_count(cfg_.arena, cfg_.link_density));
      count = poisson(rng);
    }
    std::uniform_real_distribution<double> span(cfg_.link_distance_min, cfg_.link_distance_max);
    for (std::size_t k = 0; k < count; ++k) {
      Node tx, rx;
      tx.id = static_cast<int>(2 * k);
      rx.id = tx.id + 1;
      tx.role = Role::Transmitter;
      rx.role = Role::Requester;
      tx.position = draw_position(cfg_.arena, rng);
      do {
        double d = span(rng);
        double angle = kPi - 2.0 * kPi * uniform01(rng);
        rx.position = {tx.position.x + d * std::cos(angle), tx.position.y + d * std::sin(angle)};
      } while (!cfg_.arena.contains(rx.position));
      tx.trajectory = draw_trajectory(cfg_.mobility, rng);
      rx.trajectory = draw_trajectory(cfg_.mobility, rng);
      double bits = cfg_.link_data_max_bits * uniform01(rng);
      std::uint64_t segment_bits = std::max<std::uint64_t>(1, std::llround(bits / cfg_.segments));
      transmitters_.push_back(tx);
      requesters_.push_back(rx);
      link_segment_bits_.push_back(segment_bits);
      metrics_.demanded_bits += segment_bits * cfg_.segments;
    }
  }

  std::vector<Candidate> link_candidates() {
    std::vector<Candidate> out;
    for (std::size_t k = 0; k < transmitters_.size(); ++k) {
      const Node& tx = transmitters_[k];
      const Node& rx = requesters_[k];
      Candidate c;
      c.link = {tx.id, rx.id, tx.position, rx.position, relative_motion(rx, tx),
                static_cast<double>(link_segment_bits_[k] * cfg_.segments)};
      c.segment_bits = link_segment_bits_[k];
      c.available = static_cast<std::size_t>(cfg_.segments);
      out.push_back(c);
    }
    return out;
  }

  /// False when no requester is still waiting.
  bool network_candidates(int frame, std::vector<Candidate>& out, double& overhead) {
    if (frame > 0) {
      Rng move(derive_seed({seed_, kMobility, static_cast<std::uint64_t>(frame)}));
      for (auto& n : transmitters_) n.trajectory = draw_trajectory(cfg_.mobility, move);
      for (auto& n : requesters_) n.trajectory = draw_trajectory(cfg_.mobility, move);
    }
    AssociationInput in;
    std::vector<std::size_t> active;
    for (std::size_t r = 0; r < requests_.size(); ++r) {
      const RequestState& s = requests_[r];
      if (s.switched_to_cellular || s.request.empty()) continue;
      active.push_back(r);
      in.requesters.push_back(requesters_[r]);
      in.requests.push_back(s.request);
    }
    if (active.empty()) return false;
    in.transmitters = transmitters_;
    in.caches = &caches_;
    in.los = [this, frame](const Node& tx, const Node& rx) {
      return los(frame, tx.id, rx.id, distance(tx.position, rx.position));
    };
    in.coverage = cfg_.coverage;
    in.narrowest_beamwidth = cfg_.beamwidths.front();
    in.timing = cfg_.timing;
    in.utility = cfg_.pa_utility;
    in.baselines_los_aware = cfg_.baselines_los_aware;

    Rng assoc_rng(derive_seed({seed_, kAssociation, static_cast<std::uint64_t>(frame)}));
    Matching matching = associate(cfg_.association, in, assoc_rng);
    overhead = matching.overhead;

    std::vector<char> paired(active.size(), 0);
    for (auto [tx_id, rx_id] : matching.pairs) {
      std::size_t slot = 0;
      while (in.requesters[slot].id != rx_id) ++slot;
      paired[slot] = 1;
      std::size_t r = active[slot];
      matched_.insert(rx_id);
      const Node& rx = requesters_[r];
      const Node& tx = *std::find_if(transmitters_.begin(), transmitters_.end(),
                                     [&](const Node& n) { return n.id == tx_id; });
      double d = distance(tx.position, rx.position);
      bool link_los = los(frame, tx.id, rx.id, d);
      const Cache& cache = caches_.at(tx.id);
      std::size_t available = availability(cache, requests_[r].request);
      std::uint64_t segment_bits = catalog_.at(requests_[r].request.content()).segment_bits;
      if (!link_los || available == 0 || !(d > 0.0)) {
        LinkOutcome o;
        o.frame = frame;
        o.tx_id = tx.id;
        o.rx_id = rx.id;
        o.distance = d;
        o.los = link_los;
        o.requested_bits = static_cast<double>(available * segment_bits);
        o.window_throughput = window_throughput(0.0, 0.0, o.requested_bits);
        metrics_.link_outcomes.push_back(o);
        record_failure(requests_[r]);
        continue;
      }
      Candidate c;
      c.link = {tx.id, rx.id, tx.position, rx.position, relative_motion(rx, tx),
                static_cast<double>(available * segment_bits)};
      c.requester = r;
      c.segment_bits = segment_bits;
      c.available = available;
      out.push_back(c);
    }
    for (std::size_t slot = 0; slot < active.size(); ++slot)
      if (!paired[slot]) record_failure(requests_[active[slot]]);
    return true;
  }

  PathLos path_los(int frame, const std::vector<Candidate>& cands) const {
    return [this, frame, &cands](std::size_t i, std::size_t j) {
      const GameLink& a = cands[i].link;
      const GameLink& b = cands[j].link;
      return los(frame, a.tx_id, b.rx_id, distance(a.tx, b.rx));
    };
  }

  GameBuild build(int frame, const std::vector<Candidate>& cands) const {
    std::vector<GameLink> links;
    for (const auto& c : cands) links.push_back(c.link);
    return build_game(links, cfg_.beamwidths, game_params(cfg_), path_los(frame, cands));
  }

  Profile choose(int frame, const BeamwidthGame& game) {
    Rng rng(derive_seed({seed_, kGame, static_cast<std::uint64_t>(frame)}));
    switch (cfg_.strategy.kind) {
      case BeamStrategy::Kind::Cbws: return cbws(game, cfg_.strategy.beamwidth);
      case BeamStrategy::Kind::Rbws: return rbws(game, rng);
      case BeamStrategy::Kind::Exhaustive: return exhaustive_optimum(game, cfg_.exhaustive_budget).profile;
      case BeamStrategy::Kind::Lll: break;
    }
    LllOptions options = cfg_.lll;
    options.record_trace = cfg_.trace && !traced_;
    LllResult r = lll_run(game, options, rng);
    metrics_.lll_iterations += r.iterations;
    metrics_.lll_runs += 1;
    metrics_.lll_converged = metrics_.lll_converged && r.converged;
    if (options.record_trace) {
      metrics_.theta_trace = std::move(r.trace);
      traced_ = true;
    }
    return r.profile;
  }

  void evaluate(int frame, const std::vector<Candidate>& cands, double overhead) {
    GameBuild gb = build(frame, cands);
    const BeamwidthGame& game = gb.game;

    for (std::size_t k : gb.infeasible_links) {
      const Candidate& c = cands[k];
      LinkOutcome o;
      o.frame = frame;
      o.tx_id = c.link.tx_id;
      o.rx_id = c.link.rx_id;
      o.distance = distance(c.link.tx, c.link.rx);
      o.requested_bits = c.link.requested_bits;
      o.window_throughput = window_throughput(0.0, 0.0, o.requested_bits);
      metrics_.link_outcomes.push_back(o);
      if (c.requester != kNoRequester) record_failure(requests_[c.requester]);
    }
    if (game.players() == 0) return;

    Profile profile = choose(frame, game);
    metrics_.potential += game.potential(profile);
    std::vector<ActiveLink> active;
    for (std::size_t p = 0; p < game.players(); ++p) {
      const GameLink& gl = game.link(p);
      double phi = game.actions(p)[profile[p]];
      active.push_back(make_active_link(gl.tx, gl.rx, phi, phi, cfg_.wide_beamwidth));
    }
    FadingLookup fade = [&](std::size_t i, std::size_t j) {
      return fading(frame, game.link(i).tx_id, game.link(j).rx_id);
    };
    LosLookup path = [&](std::size_t i, std::size_t j) {
      return los(frame, game.link(i).tx_id, game.link(j).rx_id,
                 distance(game.link(i).tx, game.link(j).rx));
    };

    for (std::size_t p = 0; p < game.players(); ++p) {
      const Candidate& c = cands[gb.player_link[p]];
      std::size_t a = profile[p];
      double ts = game.stability_time(p, a);
      double ta = game.alignment_time(p, a);
      double s = sinr(cfg_.channel, active, p, fade, path);
      double rate = data_rate(cfg_.channel, s, alignment_efficiency(ta, ts).gamma);

      LinkOutcome o;
      o.frame = frame;
      o.tx_id = c.link.tx_id;
      o.rx_id = c.link.rx_id;
      o.distance = distance(c.link.tx, c.link.rx);
      o.beamwidth = game.actions(p)[a];
      o.sinr = s;
      o.rate = rate;
      o.requested_bits = c.link.requested_bits;
      o.window_throughput = window_throughput(rate, ts, o.requested_bits);
      o.stability_time = ts;
      o.alignment_time = ta;
      o.penalty_active = game.penalty_active(p, profile);

      double window = ts - ta - overhead;
      std::size_t segments = 0;
      if (window > 0.0 && rate > 0.0) {
        double fit = std::floor(rate * window / static_cast<double>(c.segment_bits));
        segments = fit >= static_cast<double>(c.available) ? c.available
                                                           : static_cast<std::size_t>(fit);
      }
      o.delivered_bits = segments * c.segment_bits;
      metrics_.delivered_segments += segments;
      metrics_.d2d_bits += o.delivered_bits;
      metrics_.link_outcomes.push_back(o);

      if (c.requester == kNoRequester) continue;
      RequestState& state = requests_[c.requester];
      if (segments > 0) {
        state = update_request(std::move(state),
                               deliverable(caches_.at(c.link.tx_id), state.request, segments));
      } else {
        record_failure(state);
      }
    }
  }

  void finish() {
    TrialMetrics& m = metrics_;
    m.links = static_cast<int>(m.link_outcomes.size());
    m.cellular_bits = m.demanded_bits - m.d2d_bits;
    std::size_t with_xi = 0, with_ts = 0;
    double ts_sum = 0.0;
    for (const auto& o : m.link_outcomes) {
      m.sum_rate += o.rate;
      if (o.window_throughput && std::isfinite(*o.window_throughput)) {
        m.sum_throughput += *o.window_throughput;
        ++with_xi;
      }
      if (o.rate > 0.0 && std::isfinite(o.stability_time)) {
        ts_sum += o.stability_time;
        ++with_ts;
      }
    }
    if (with_xi > 0) m.mean_throughput = m.sum_throughput / with_xi;
    if (with_ts > 0) m.mean_stability_time = ts_sum / with_ts;
    if (cfg_.scenario == Scenario::Links) {
      m.matched_requesters = m.requesters;
    } else {
      m.matched_requesters = static_cast<int>(matched_.size());
    }
    if (m.requesters > 0) m.matched_fraction = static_cast<double>(m.matched_requesters) / m.requesters;
  }

  const ExperimentConfig& cfg_;
  std::uint64_t seed_;
  TrialMetrics metrics_;
  ContentCatalog catalog_;
  std::vector<Node> transmitters_;
  std::vector<Node> requesters_;
  std::vector<std::uint64_t> link_segment_bits_;
  CacheState caches_;
  std::vector<RequestState> requests_;
  std::set<int> matched_;
  bool traced_ = false;
};

}  // namespace

std::uint64_t trial_seed(std::uint64_t base, std::uint64_t index) {
  return derive_seed({base, index});
}

TrialMetrics run_trial(const ExperimentConfig& config, std::uint64_t index) {
  return TrialRunner(config, index).run();
}

GameBuild first_frame_game(const ExperimentConfig& config, std::uint64_t index) {
  return TrialRunner(config, index).first_game();
}

}  // namespace mmd2d
