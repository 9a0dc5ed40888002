#include "mmd2d/linkdyn.hpp"

#include <cmath>

namespace mmd2d {

void TimingBudget::validate() const {
  if (!(t_pilot > 0.0)) throw ParameterError("pilot time must be positive");
  if (t_reply < 0.0 || t_decide < 0.0 || t_ack < 0.0)
    throw ParameterError("control slot durations must be non-negative");
  if (!(misalignment_threshold > 0.0 && misalignment_threshold <= 1.0))
    throw ParameterError("misalignment threshold must lie in (0, 1]");
}

double pointing_error(const RelativeMotion& motion, double d, double dt) {
  if (!(d > 0.0)) throw ParameterError("link distance must be positive");
  return motion.relative_speed * dt * std::sin(motion.relative_angle) / d;
}

double link_stability_time(double d, double rx_beamwidth, const RelativeMotion& motion,
                           double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("alpha must lie in (0, 1]");
  if (!(d > 0.0)) throw ParameterError("link distance must be positive");
  const double drift = motion.relative_speed * std::sin(motion.relative_angle);
  const double margin = std::sqrt(std::log(1.0 / alpha) / (2.028 * std::log(10.0)));
  if (drift <= 0.0) return margin == 0.0 ? 0.0 : kInfinity;
  return d * rx_beamwidth / drift * margin;
}

int sector_count(double wide, double narrow) {
  const double ratio = wide / narrow;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9) return static_cast<int>(nearest);
  return static_cast<int>(std::ceil(ratio));
}

double alignment_time(double psi_m, double psi_n, double phi_m, double phi_n, double t_pilot) {
  if (!(phi_m > 0.0 && phi_n > 0.0)) throw ParameterError("beamwidths must be positive");
  if (phi_m > psi_m || phi_n > psi_n)
    throw ParameterError("narrow beamwidth exceeds the wide-level beamwidth");
  return sector_count(psi_m, phi_m) * sector_count(psi_n, phi_n) * t_pilot;
}

namespace {
bool pair_feasible(double phi_m, double phi_n, double psi_m, double psi_n, double t_pilot,
                   double stability) {
  if (phi_m > psi_m || phi_n > psi_n) return false;
  // Equality is feasible; the slack absorbs rounding in the product bound.
  if (!std::isinf(stability) && phi_m * phi_n < psi_m * psi_n * t_pilot / stability * (1.0 - 1e-12))
    return false;
  return alignment_time(psi_m, psi_n, phi_m, phi_n, t_pilot) <= stability;
}
}  // namespace

std::vector<BeamwidthPair> feasible_beamwidths(std::span<const double> action_set, double psi_m,
                                               double psi_n, double t_pilot, double stability) {
  if (!(stability > 0.0)) throw ParameterError("stability time must be positive");
  std::vector<BeamwidthPair> out;
  for (double phi_m : action_set)
    for (double phi_n : action_set)
      if (pair_feasible(phi_m, phi_n, psi_m, psi_n, t_pilot, stability)) out.push_back({phi_m, phi_n});
  return out;
}

std::vector<double> feasible_common_beamwidths(std::span<const double> action_set, double psi_m,
                                               double psi_n, double t_pilot,
                                               const std::function<double(double)>& stability_at) {
  std::vector<double> out;
  for (double phi : action_set) {
    const double ts = stability_at(phi);
    if (ts > 0.0 && pair_feasible(phi, phi, psi_m, psi_n, t_pilot, ts)) out.push_back(phi);
  }
  return out;
}

AlignmentEfficiency alignment_efficiency(double alignment, double stability) {
  if (alignment > stability || !(stability > 0.0)) return {0.0, false};
  if (std::isinf(stability)) return {1.0, true};
  return {1.0 - alignment / stability, true};
}

}  // namespace mmd2d
