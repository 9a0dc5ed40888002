#include "mmd2d/channel.hpp"

#include <cmath>

namespace mmd2d {

namespace {
constexpr double kLobeExponent = 2.028;
}

ChannelParams ChannelParams::from_db(double intercept_db, double exponent, double nakagami_shape,
                                     double beta, double bandwidth_hz, double noise_dbm_hz,
                                     double tx_power_dbm) {
  ChannelParams p;
  p.pathloss_intercept = db_to_linear(intercept_db);
  p.pathloss_exponent = exponent;
  p.nakagami_shape = nakagami_shape;
  p.blockage_beta = beta;
  p.bandwidth = bandwidth_hz;
  p.noise_density = dbm_to_watts(noise_dbm_hz);
  p.tx_power = dbm_to_watts(tx_power_dbm);
  p.validate();
  return p;
}

void ChannelParams::validate() const {
  if (!(pathloss_exponent >= 0.0)) throw ParameterError("path-loss exponent must be >= 0");
  if (!(nakagami_shape >= 0.5)) throw ParameterError("Nakagami shape must be >= 0.5");
  if (!(blockage_beta >= 0.0)) throw ParameterError("blockage beta must be >= 0");
  if (!(bandwidth > 0.0)) throw ParameterError("bandwidth must be positive");
  if (!(pathloss_intercept > 0.0)) throw ParameterError("path-loss intercept must be positive");
  if (!(tx_power > 0.0)) throw ParameterError("transmit power must be positive");
}

const char* to_string(GainClass c) {
  switch (c) {
    case GainClass::MainMain: return "GG";
    case GainClass::MainSide: return "Gg";
    case GainClass::SideMain: return "gG";
    case GainClass::SideSide: return "gg";
  }
  return "?";
}

double main_lobe_gain(double phi) {
  if (!(phi > 0.0)) throw ParameterError("beamwidth must be positive");
  return kPi * std::pow(10.0, kLobeExponent) / (42.64 * phi + kPi);
}

double side_lobe_gain(double phi) { return std::pow(10.0, -kLobeExponent) * main_lobe_gain(phi); }

double antenna_gain(const DirectionalAntenna& antenna, double offset) {
  const double phi = antenna.narrow_beamwidth;
  const double peak = main_lobe_gain(phi);
  if (std::abs(offset) <= phi) {
    const double rho = kLobeExponent * std::log(10.0) / (phi * phi);
    return peak * std::exp(-rho * offset * offset);
  }
  return std::pow(10.0, -kLobeExponent) * peak;
}

double path_loss(const ChannelParams& params, double d) {
  if (!(d > 0.0)) throw ParameterError("path loss is undefined at zero distance");
  return params.pathloss_intercept * std::pow(d, -params.pathloss_exponent);
}

double los_probability(double beta, double d) {
  if (beta < 0.0 || d < 0.0) throw ParameterError("beta and distance must be non-negative");
  return std::exp(-beta * d);
}

InterferenceGain classify_interference_gain(const Endpoint& interferer, const Endpoint& victim) {
  const double tx_offset =
      normalize_angle(bearing(interferer.position, victim.position) - interferer.antenna.boresight);
  const double rx_offset =
      normalize_angle(bearing(victim.position, interferer.position) - victim.antenna.boresight);
  const bool tx_main = std::abs(tx_offset) <= interferer.antenna.narrow_beamwidth;
  const bool rx_main = std::abs(rx_offset) <= victim.antenna.narrow_beamwidth;

  InterferenceGain g;
  g.tx_gain = antenna_gain(interferer.antenna, tx_offset);
  g.rx_gain = antenna_gain(victim.antenna, rx_offset);
  if (tx_main && rx_main) g.gain_class = GainClass::MainMain;
  else if (tx_main) g.gain_class = GainClass::MainSide;
  else if (rx_main) g.gain_class = GainClass::SideMain;
  else g.gain_class = GainClass::SideSide;
  return g;
}

double interference_power(const ChannelParams& params, const Endpoint& interferer,
                          const Endpoint& victim, double fading, bool los) {
  if (!los) return 0.0;
  const double d = distance(interferer.position, victim.position);
  const auto g = classify_interference_gain(interferer, victim);
  return params.tx_power * fading * g.product() * path_loss(params, d);
}

double signal_power(const ChannelParams& params, const ActiveLink& link, double fading) {
  const double d = distance(link.tx.position, link.rx.position);
  return params.tx_power * fading * main_lobe_gain(link.tx.antenna.narrow_beamwidth) *
         main_lobe_gain(link.rx.antenna.narrow_beamwidth) * path_loss(params, d);
}

double sinr(const ChannelParams& params, std::span<const ActiveLink> links, std::size_t victim,
            const FadingLookup& fading, const LosLookup& los) {
  const double signal = signal_power(params, links[victim], fading(victim, victim));
  double denom = params.noise_power();
  for (std::size_t i = 0; i < links.size(); ++i) {
    if (i == victim || !los(i, victim)) continue;
    denom += interference_power(params, links[i].tx, links[victim].rx, fading(i, victim), true);
  }
  return signal / denom;
}

double data_rate(const ChannelParams& params, double sinr_value, double alignment_efficiency) {
  if (!(alignment_efficiency >= 0.0 && alignment_efficiency <= 1.0))
    throw ParameterError("alignment efficiency must lie in [0, 1]");
  return alignment_efficiency * params.bandwidth * std::log2(1.0 + sinr_value);
}

ActiveLink make_active_link(const Position& tx, const Position& rx, double tx_beamwidth,
                            double rx_beamwidth, double wide_beamwidth) {
  ActiveLink l;
  l.tx.position = tx;
  l.rx.position = rx;
  l.tx.antenna = {tx_beamwidth, wide_beamwidth, bearing(tx, rx)};
  l.rx.antenna = {rx_beamwidth, wide_beamwidth, bearing(rx, tx)};
  return l;
}

}  // namespace mmd2d
