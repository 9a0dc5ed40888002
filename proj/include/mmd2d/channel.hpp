#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mmd2d/geometry.hpp"
#include "mmd2d/random.hpp"

namespace mmd2d {

/// Gaussian main lobe with a constant side-lobe floor.
///
/// `narrow_beamwidth` is the main-lobe half width phi: offsets with |theta| <= phi
/// are in the main lobe. Peak gain G = pi 10^2.028 / (42.64 phi + pi) and side
/// lobe g = 10^-2.028 G, so the pattern is continuous at |theta| = phi.
struct DirectionalAntenna {
  double narrow_beamwidth = deg_to_rad(15.0);  // phi, rad
  double wide_beamwidth = deg_to_rad(90.0);    // psi, rad
  double boresight = 0.0;                      // rad, (-pi, pi]
};

/// Linear channel parameters. Build from the dB form with `from_db`.
struct ChannelParams {
  double pathloss_intercept = db_to_linear(-61.7);  // C, linear
  double pathloss_exponent = 2.0;
  double nakagami_shape = 3.0;                      // N_h
  double blockage_beta = 0.0027;                    // 1/m
  double bandwidth = 100e6;                         // Hz
  double noise_density = dbm_to_watts(-174.0);      // W/Hz
  double tx_power = dbm_to_watts(15.0);             // W

  static ChannelParams from_db(double intercept_db, double exponent, double nakagami_shape,
                               double beta, double bandwidth_hz, double noise_dbm_hz,
                               double tx_power_dbm);
  double noise_power() const { return noise_density * bandwidth; }
  void validate() const;
};

enum class GainClass { MainMain, MainSide, SideMain, SideSide };

const char* to_string(GainClass c);

/// An antenna at a location, as needed to classify directional interference.
struct Endpoint {
  Position position;
  DirectionalAntenna antenna;
};

struct InterferenceGain {
  GainClass gain_class = GainClass::SideSide;
  double tx_gain = 0.0;
  double rx_gain = 0.0;
  double product() const { return tx_gain * rx_gain; }
};

double main_lobe_gain(double narrow_beamwidth);
double side_lobe_gain(double narrow_beamwidth);
double antenna_gain(const DirectionalAntenna& antenna, double offset);

double path_loss(const ChannelParams& params, double d);

/// Gamma(N_h, 1/N_h) power gain, unit mean.
template <class Gen>
double sample_fading(double shape, Gen& gen) {
  if (!(shape >= 0.5)) throw ParameterError("Nakagami shape must be >= 0.5");
  std::gamma_distribution<double> dist(shape, 1.0 / shape);
  return dist(gen);
}

double los_probability(double beta, double d);

template <class Gen>
bool sample_los(double beta, double d, Gen& gen) {
  return uniform01(gen) < los_probability(beta, d);
}

/// Tx gain is main-lobe iff the victim sits within +-phi of the interferer's
/// boresight; likewise for the victim's reception gain toward the interferer.
InterferenceGain classify_interference_gain(const Endpoint& interferer, const Endpoint& victim);

/// P h g_I PL(d). Zero for NLOS paths.
double interference_power(const ChannelParams& params, const Endpoint& interferer,
                          const Endpoint& victim, double fading, bool los);

/// A transmitting pair with its current antenna state.
struct ActiveLink {
  Endpoint tx;
  Endpoint rx;
};

/// h for the path from link i's transmitter to link j's receiver.
using FadingLookup = std::function<double(std::size_t tx_link, std::size_t rx_link)>;
/// LOS flag for the path from link i's transmitter to link j's receiver (i != j).
using LosLookup = std::function<bool(std::size_t tx_link, std::size_t rx_link)>;

/// Received signal power at the receiver of `victim` from its own transmitter,
/// boresights assumed mutually aligned.
double signal_power(const ChannelParams& params, const ActiveLink& link, double fading);

/// SINR at `victim`'s receiver with every other link in `links` transmitting.
double sinr(const ChannelParams& params, std::span<const ActiveLink> links, std::size_t victim,
            const FadingLookup& fading, const LosLookup& los);

/// gamma B log2(1 + SINR).
double data_rate(const ChannelParams& params, double sinr_value, double alignment_efficiency);

/// Points both antennas of a pair at each other.
ActiveLink make_active_link(const Position& tx, const Position& rx, double tx_beamwidth,
                            double rx_beamwidth, double wide_beamwidth);

}  // namespace mmd2d
