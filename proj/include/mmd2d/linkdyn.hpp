#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "mmd2d/geometry.hpp"

namespace mmd2d {

/// Control-channel slot durations and the misalignment threshold alpha.
struct TimingBudget {
  double t_pilot = 10e-6;  // T_P
  double t_reply = 1e-3;   // T_R
  double t_decide = 1e-3;  // T_D
  double t_ack = 1e-3;     // T_ACK
  double misalignment_threshold = 0.5;  // alpha in (0, 1]

  /// One PDB-reply / decision / ACK exchange.
  double association_round() const { return t_reply + t_decide + t_ack; }
  void validate() const;
};

/// A matched transmitter-requester pair.
struct D2DLink {
  int tx = -1;
  int rx = -1;
  Position tx_position;
  Position rx_position;
  double distance = 0.0;
  bool los = true;
  RelativeMotion motion;
  double stability_time = kInfinity;  // T^S at the beamwidth under evaluation
  double alignment_time = 0.0;        // T^A
  int requested_segments = 0;         // delta^p: segments the tx can serve
};

/// Receiver pointing error after dt seconds: V dt sin(mu) / d.
double pointing_error(const RelativeMotion& motion, double d, double dt);

/// Time until the Gaussian gain ratio G(dmu)/G(0) falls to alpha. Returns
/// +infinity when V sin(mu) = 0.
double link_stability_time(double d, double rx_beamwidth, const RelativeMotion& motion,
                           double alpha);

/// Number of narrow sectors inside a wide sector. Ratios within 1e-9 of an
/// integer snap to it.
int sector_count(double wide, double narrow);

/// ceil(psi_m/phi_m) ceil(psi_n/phi_n) T_P.
double alignment_time(double psi_m, double psi_n, double phi_m, double phi_n, double t_pilot);

struct BeamwidthPair {
  double tx = 0.0;
  double rx = 0.0;
  bool operator==(const BeamwidthPair&) const = default;
};

/// Pairs from action_set x action_set with phi_m phi_n >= psi_m psi_n T_P / T^S,
/// phi <= psi on both ends, and T^A <= T^S.
std::vector<BeamwidthPair> feasible_beamwidths(std::span<const double> action_set, double psi_m,
                                               double psi_n, double t_pilot, double stability);

/// Common-beamwidth variant: both ends adopt phi, and T^S is evaluated at phi.
std::vector<double> feasible_common_beamwidths(std::span<const double> action_set, double psi_m,
                                               double psi_n, double t_pilot,
                                               const std::function<double(double)>& stability_at);

struct AlignmentEfficiency {
  double gamma = 0.0;
  bool feasible = false;
};

/// 1 - T^A / T^S. Infeasible (gamma = 0) when T^A > T^S.
AlignmentEfficiency alignment_efficiency(double alignment, double stability);

}  // namespace mmd2d
