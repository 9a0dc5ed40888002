#include "mmd2d/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mmd2d {

namespace {

Endpoint endpoint(const Position& at, const Position& toward, double beamwidth, double wide) {
  return Endpoint{at, DirectionalAntenna{beamwidth, wide, bearing(at, toward)}};
}

double expected_interference(const GameParams& params, const GameLink& source,
                             const GameLink& victim, double source_beamwidth,
                             double victim_beamwidth) {
  Endpoint tx = endpoint(source.tx, source.rx, source_beamwidth, params.wide_beamwidth);
  Endpoint rx = endpoint(victim.rx, victim.tx, victim_beamwidth, params.wide_beamwidth);
  return interference_power(params.channel, tx, rx, 1.0, true);
}

std::size_t sample_index(std::span<const double> probabilities, Rng& rng) {
  double u = uniform01(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    acc += probabilities[i];
    if (u < acc) return i;
  }
  // Rounding left u above the running sum; take the last action with mass.
  for (std::size_t i = probabilities.size(); i-- > 0;)
    if (probabilities[i] > 0.0) return i;
  return 0;
}

bool same_potential(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

std::vector<std::size_t> neighborhood(std::size_t l, std::span<const GameLink> links,
                                      const GameParams& params, const PathLos& los,
                                      double classification_beamwidth) {
  std::vector<std::size_t> out;
  const GameLink& victim = links[l];
  for (std::size_t i = 0; i < links.size(); ++i) {
    if (i == l) continue;
    double d = distance(links[i].tx, victim.rx);
    if (!(d > 0.0) || d > params.coverage) continue;
    if (!los(i, l)) continue;
    double power = expected_interference(params, links[i], victim, classification_beamwidth,
                                         classification_beamwidth);
    if (power >= params.interference_threshold) out.push_back(i);
  }
  return out;
}

std::vector<std::vector<std::size_t>> symmetrize(const std::vector<std::vector<std::size_t>>& raw) {
  std::vector<std::vector<std::size_t>> out(raw.size());
  for (std::size_t l = 0; l < raw.size(); ++l) {
    for (std::size_t i : raw[l]) {
      out[l].push_back(i);
      out[i].push_back(l);
    }
  }
  for (auto& h : out) {
    std::sort(h.begin(), h.end());
    h.erase(std::unique(h.begin(), h.end()), h.end());
  }
  return out;
}

BeamwidthGame::BeamwidthGame(std::vector<GameLink> links,
                             std::vector<std::vector<double>> action_sets, GameParams params,
                             const PathLos& los)
    : links_(std::move(links)), actions_(std::move(action_sets)), params_(std::move(params)) {
  if (actions_.size() != links_.size())
    throw ParameterError("one action set per link is required");
  params_.channel.validate();
  params_.timing.validate();
  if (!(params_.rate_unit > 0.0)) throw ParameterError("rate unit must be positive");

  const std::size_t n = links_.size();
  double widest = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    if (actions_[l].empty()) throw ParameterError("every player needs at least one action");
    if (!(distance(links_[l].tx, links_[l].rx) > 0.0))
      throw ParameterError("link endpoints coincide");
    for (double phi : actions_[l]) {
      if (!(phi > 0.0) || phi > params_.wide_beamwidth)
        throw ParameterError("beamwidth must lie in (0, psi]");
      widest = std::max(widest, phi);
    }
  }

  std::vector<std::vector<std::size_t>> raw(n);
  for (std::size_t l = 0; l < n; ++l) raw[l] = neighborhood(l, links_, params_, los, widest);
  neighbors_ = symmetrize(raw);

  const ChannelParams& ch = params_.channel;
  const TimingBudget& tb = params_.timing;
  signal_.resize(n);
  stability_.resize(n);
  alignment_.resize(n);
  gamma_.resize(n);
  penalty_scalar_.assign(n, 0.0);
  terms_.resize(n);
  for (std::size_t l = 0; l < n; ++l) {
    const GameLink& gl = links_[l];
    double d = distance(gl.tx, gl.rx);
    double pl = path_loss(ch, d);
    for (double phi : actions_[l]) {
      double g = main_lobe_gain(phi);
      double ts = link_stability_time(d, phi, gl.motion, tb.misalignment_threshold);
      double ta = mmd2d::alignment_time(params_.wide_beamwidth, params_.wide_beamwidth, phi, phi,
                                 tb.t_pilot);
      double gamma = alignment_efficiency(ta, ts).gamma;
      double s = ch.tx_power * g * g * pl;
      signal_[l].push_back(s);
      stability_[l].push_back(ts);
      alignment_[l].push_back(ta);
      gamma_[l].push_back(gamma);
      penalty_scalar_[l] =
          std::max(penalty_scalar_[l], data_rate(ch, s / ch.noise_power(), gamma));
    }
    for (std::size_t i : neighbors_[l]) {
      NeighborTerm term{i, {}};
      term.power.reserve(actions_[i].size() * actions_[l].size());
      for (double phi_i : actions_[i])
        for (double phi_l : actions_[l])
          term.power.push_back(expected_interference(params_, links_[i], gl, phi_i, phi_l));
      terms_[l].push_back(std::move(term));
    }
  }
}

double BeamwidthGame::utility_from(std::size_t l, std::size_t action, double interference) const {
  const ChannelParams& ch = params_.channel;
  double r = data_rate(ch, signal_[l][action] / (ch.noise_power() + interference),
                       gamma_[l][action]);
  double delta = links_[l].requested_bits;
  double penalty = 0.0;
  if (delta > 0.0) {
    double window = stability_[l][action] - alignment_[l][action];
    if (!(r > 0.0)) {
      penalty = 1.0;
    } else {
      double needed = delta / r;
      if (needed > window) penalty = std::min(1.0, std::abs(1.0 - window / needed));
    }
  }
  return (r - penalty_scalar_[l] * penalty) / params_.rate_unit;
}

double BeamwidthGame::rate(std::size_t l, const Profile& profile) const {
  std::size_t a = profile[l];
  double interference = 0.0;
  for (const auto& t : terms_[l])
    interference += t.power[profile[t.source] * actions_[l].size() + a];
  const ChannelParams& ch = params_.channel;
  return data_rate(ch, signal_[l][a] / (ch.noise_power() + interference), gamma_[l][a]);
}

bool BeamwidthGame::penalty_active(std::size_t l, const Profile& profile) const {
  double delta = links_[l].requested_bits;
  if (!(delta > 0.0)) return false;
  double r = rate(l, profile);
  if (!(r > 0.0)) return true;
  std::size_t a = profile[l];
  return delta / r > stability_[l][a] - alignment_[l][a];
}

double BeamwidthGame::individual_utility(std::size_t l, const Profile& profile) const {
  std::size_t a = profile[l];
  double interference = 0.0;
  for (const auto& t : terms_[l])
    interference += t.power[profile[t.source] * actions_[l].size() + a];
  return utility_from(l, a, interference);
}

double BeamwidthGame::total_utility(std::size_t l, const Profile& profile) const {
  double total = individual_utility(l, profile);
  for (std::size_t i : neighbors_[l]) total += individual_utility(i, profile);
  return total;
}

std::vector<double> BeamwidthGame::action_utilities(std::size_t l, const Profile& profile) const {
  Profile trial = profile;
  std::vector<double> out(actions_[l].size());
  for (std::size_t a = 0; a < out.size(); ++a) {
    trial[l] = a;
    out[a] = total_utility(l, trial);
  }
  return out;
}

double BeamwidthGame::potential(const Profile& profile) const {
  double total = 0.0;
  for (std::size_t l = 0; l < players(); ++l) total += individual_utility(l, profile);
  return total;
}

std::vector<double> BeamwidthGame::beamwidths(const Profile& profile) const {
  std::vector<double> out(profile.size());
  for (std::size_t l = 0; l < profile.size(); ++l) out[l] = actions_[l][profile[l]];
  return out;
}

std::uint64_t BeamwidthGame::profile_count() const {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t count = 1;
  for (const auto& a : actions_) {
    if (count > kMax / a.size()) return kMax;
    count *= a.size();
  }
  return count;
}

bool BeamwidthGame::valid(const Profile& profile) const {
  if (profile.size() != players()) return false;
  for (std::size_t l = 0; l < profile.size(); ++l)
    if (profile[l] >= actions_[l].size()) return false;
  return true;
}

GameBuild build_game(std::span<const GameLink> links, std::span<const double> beamwidth_set,
                     const GameParams& params, const PathLos& los) {
  GameBuild out;
  std::vector<GameLink> players;
  std::vector<std::vector<double>> sets;
  for (std::size_t k = 0; k < links.size(); ++k) {
    const GameLink& gl = links[k];
    double d = distance(gl.tx, gl.rx);
    auto stability_at = [&](double phi) {
      return link_stability_time(d, phi, gl.motion, params.timing.misalignment_threshold);
    };
    auto feasible = feasible_common_beamwidths(beamwidth_set, params.wide_beamwidth,
                                               params.wide_beamwidth, params.timing.t_pilot,
                                               stability_at);
    if (feasible.empty() || !(d > 0.0)) {
      out.infeasible_links.push_back(k);
      continue;
    }
    out.player_link.push_back(k);
    players.push_back(gl);
    sets.push_back(std::move(feasible));
  }
  const std::vector<std::size_t>& map = out.player_link;
  PathLos mapped = [&map, &los](std::size_t i, std::size_t j) { return los(map[i], map[j]); };
  out.game = BeamwidthGame(std::move(players), std::move(sets), params, mapped);
  return out;
}

std::vector<double> boltzmann_update(std::span<const double> utilities, double tau) {
  if (!(tau > 0.0)) throw ParameterError("temperature must be positive");
  if (utilities.empty()) return {};
  double top = *std::max_element(utilities.begin(), utilities.end());
  std::vector<double> p(utilities.size());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::exp((utilities[i] - top) / tau);
    total += p[i];
  }
  for (double& x : p) x /= total;
  return p;
}

std::vector<std::size_t> select_update_set(const std::vector<std::vector<std::size_t>>& neighborhoods,
                                           std::size_t cap, Rng& rng) {
  std::vector<std::size_t> order(neighborhoods.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<char> blocked(neighborhoods.size(), 0);
  std::vector<std::size_t> chosen;
  for (std::size_t l : order) {
    if (chosen.size() >= cap) break;
    if (blocked[l]) continue;
    chosen.push_back(l);
    blocked[l] = 1;
    for (std::size_t i : neighborhoods[l]) blocked[i] = 1;
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

double best_response_gap(const BeamwidthGame& game, const Profile& profile) {
  double gap = 0.0;
  for (std::size_t l = 0; l < game.players(); ++l) {
    auto u = game.action_utilities(l, profile);
    gap = std::max(gap, *std::max_element(u.begin(), u.end()) - u[profile[l]]);
  }
  return gap;
}

LllResult lll_run(const BeamwidthGame& game, const LllOptions& options, Rng& rng) {
  if (options.update_cap == 0) throw ParameterError("update cap must be positive");
  if (options.max_iterations < 1) throw ParameterError("iteration budget must be positive");
  if (options.stagnation_window < 1) throw ParameterError("stagnation window must be positive");
  LllResult result;
  const std::size_t n = game.players();
  if (n == 0) {
    result.converged = true;
    return result;
  }

  Profile profile(n);
  for (std::size_t l = 0; l < n; ++l) {
    std::uniform_int_distribution<std::size_t> pick(0, game.actions(l).size() - 1);
    profile[l] = pick(rng);
  }
  double theta = game.potential(profile);
  Profile best = profile;
  double best_theta = theta;
  int stagnant = 0;

  for (int k = 1; k <= options.max_iterations; ++k) {
    const double tau = options.tau.at(k);
    auto update = select_update_set(game.neighborhoods(), options.update_cap, rng);
    Profile next = profile;
    for (std::size_t l : update) {
      auto p = boltzmann_update(game.action_utilities(l, profile), tau);
      next[l] = sample_index(p, rng);
    }
    profile = std::move(next);
    double new_theta = game.potential(profile);
    stagnant = same_potential(new_theta, theta) ? stagnant + 1 : 0;
    theta = new_theta;
    if (theta > best_theta) {
      best_theta = theta;
      best = profile;
    }
    result.iterations = k;
    if (options.observer) options.observer(k, profile);

    bool settled = false;
    bool equilibrium = true;
    if (options.record_trace || !options.run_to_budget) {
      double gap = 0.0;
      bool confident = true;
      for (std::size_t l = 0; l < n; ++l) {
        auto u = game.action_utilities(l, profile);
        double current = u[profile[l]];
        double excess = *std::max_element(u.begin(), u.end()) - current;
        gap = std::max(gap, excess);
        if (excess > 1e-9 * std::max(1.0, std::abs(current))) equilibrium = false;
        if (confident && boltzmann_update(u, tau)[profile[l]] < options.prob_threshold)
          confident = false;
      }
      if (options.record_trace) result.trace.push_back({k, theta, gap});
      settled = confident;
    }
    if (options.run_to_budget) continue;
    // A stagnant potential only counts once no player has a profitable deviation.
    if (!settled && stagnant >= options.stagnation_window) settled = equilibrium;
    if (settled) {
      result.converged = true;
      result.profile = profile;
      result.potential = theta;
      return result;
    }
  }
  if (options.run_to_budget) {
    result.profile = profile;
    result.potential = theta;
  } else {
    result.profile = best;
    result.potential = best_theta;
  }
  return result;
}

ExhaustiveResult exhaustive_optimum(const BeamwidthGame& game, std::uint64_t budget) {
  if (game.profile_count() > budget)
    throw ParameterError("profile space exceeds the exhaustive search budget");
  const std::size_t n = game.players();
  Profile profile(n, 0);
  ExhaustiveResult out{profile, game.potential(profile)};
  while (true) {
    std::size_t l = n;
    while (l-- > 0) {
      if (++profile[l] < game.actions(l).size()) break;
      profile[l] = 0;
    }
    if (l == static_cast<std::size_t>(-1)) break;
    double theta = game.potential(profile);
    if (theta > out.potential) out = {profile, theta};
  }
  return out;
}

bool is_nash_equilibrium(const BeamwidthGame& game, const Profile& profile, double tol) {
  if (!game.valid(profile)) throw ParameterError("profile does not match the game");
  for (std::size_t l = 0; l < game.players(); ++l) {
    auto u = game.action_utilities(l, profile);
    double current = u[profile[l]];
    double slack = tol * std::max(1.0, std::abs(current));
    for (double v : u)
      if (v > current + slack) return false;
  }
  return true;
}

std::uint64_t profile_index(const BeamwidthGame& game, const Profile& profile) {
  if (!game.valid(profile)) throw ParameterError("profile does not match the game");
  std::uint64_t index = 0;
  for (std::size_t l = 0; l < profile.size(); ++l)
    index = index * game.actions(l).size() + profile[l];
  return index;
}

Profile profile_at(const BeamwidthGame& game, std::uint64_t index) {
  Profile profile(game.players());
  for (std::size_t l = profile.size(); l-- > 0;) {
    std::uint64_t radix = game.actions(l).size();
    profile[l] = static_cast<std::size_t>(index % radix);
    index /= radix;
  }
  return profile;
}

std::vector<double> stationary_distribution(const BeamwidthGame& game, double tau,
                                            std::uint64_t budget) {
  std::uint64_t count = game.profile_count();
  if (count > budget) throw ParameterError("profile space exceeds the enumeration budget");
  std::vector<double> theta(count);
  for (std::uint64_t i = 0; i < count; ++i) theta[i] = game.potential(profile_at(game, i));
  return boltzmann_update(theta, tau);
}

Profile cbws(const BeamwidthGame& game, double beamwidth) {
  Profile profile(game.players());
  for (std::size_t l = 0; l < profile.size(); ++l) {
    const auto& a = game.actions(l);
    std::size_t best = 0;
    for (std::size_t i = 1; i < a.size(); ++i) {
      double di = std::abs(a[i] - beamwidth), db = std::abs(a[best] - beamwidth);
      if (di < db || (di == db && a[i] < a[best])) best = i;
    }
    profile[l] = best;
  }
  return profile;
}

Profile rbws(const BeamwidthGame& game, Rng& rng) {
  Profile profile(game.players());
  for (std::size_t l = 0; l < profile.size(); ++l) {
    std::uniform_int_distribution<std::size_t> pick(0, game.actions(l).size() - 1);
    profile[l] = pick(rng);
  }
  return profile;
}

}  // namespace mmd2d
