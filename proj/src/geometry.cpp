#include "mmd2d/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace mmd2d {

double distance(const Position& a, const Position& b) { return std::hypot(a.x - b.x, a.y - b.y); }

double bearing(const Position& from, const Position& to) {
  return normalize_angle(std::atan2(to.y - from.y, to.x - from.x));
}

Trajectory draw_trajectory(const MobilityParams& mobility, Rng& rng) {
  Trajectory t;
  t.speed = mobility.speed_min + (mobility.speed_max - mobility.speed_min) * uniform01(rng);
  // uniform01 is [0,1), so the heading lands in (-pi, pi].
  t.heading = kPi - 2.0 * kPi * uniform01(rng);
  return t;
}

Position draw_position(const Arena& arena, Rng& rng) {
  const double h = arena.side / 2.0;
  Position p;
  p.x = -h + arena.side * uniform01(rng);
  p.y = -h + arena.side * uniform01(rng);
  return p;
}

double expected_node_count(const Arena& arena, double density_per_km2) {
  return density_per_km2 * arena.area_km2();
}

std::vector<Node> place_uniform(const Arena& arena, double density_per_km2, double role_mix,
                                const MobilityParams& mobility, Rng& rng, int first_id) {
  if (!(arena.side > 0.0)) throw ParameterError("arena side must be positive");
  if (!(role_mix >= 0.0 && role_mix <= 1.0)) throw ParameterError("role_mix must lie in [0, 1]");
  if (density_per_km2 < 0.0) throw ParameterError("density must be non-negative");

  const double mean = expected_node_count(arena, density_per_km2);
  std::vector<Node> nodes;
  if (mean <= 0.0) return nodes;

  std::poisson_distribution<long> count_dist(mean);
  const long count = count_dist(rng);
  nodes.reserve(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) {
    Node n;
    n.id = first_id + static_cast<int>(i);
    n.role = uniform01(rng) < role_mix ? Role::Transmitter : Role::Requester;
    n.position = draw_position(arena, rng);
    n.trajectory = draw_trajectory(mobility, rng);
    nodes.push_back(n);
  }
  return nodes;
}

RelativeMotion relative_motion(const Node& receiver, const Node& transmitter) {
  const double vx = receiver.trajectory.speed * std::cos(receiver.trajectory.heading) -
                    transmitter.trajectory.speed * std::cos(transmitter.trajectory.heading);
  const double vy = receiver.trajectory.speed * std::sin(receiver.trajectory.heading) -
                    transmitter.trajectory.speed * std::sin(transmitter.trajectory.heading);
  RelativeMotion m;
  m.relative_speed = std::hypot(vx, vy);
  if (m.relative_speed == 0.0) return m;

  const double d = distance(receiver.position, transmitter.position);
  if (d == 0.0) return m;
  const double bx = (transmitter.position.x - receiver.position.x) / d;
  const double by = (transmitter.position.y - receiver.position.y) / d;
  const double c = std::clamp((vx * bx + vy * by) / m.relative_speed, -1.0, 1.0);
  m.relative_angle = std::acos(c);
  return m;
}

}  // namespace mmd2d
