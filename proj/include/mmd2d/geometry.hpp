#pragma once

#include <vector>

#include "mmd2d/random.hpp"
#include "mmd2d/units.hpp"

namespace mmd2d {

struct Position {
  double x = 0.0;  // m
  double y = 0.0;  // m
  bool operator==(const Position&) const = default;
};

/// Speed in m/s, heading in (-pi, pi].
struct Trajectory {
  double speed = 0.0;
  double heading = 0.0;
  bool operator==(const Trajectory&) const = default;
};

enum class Role { Transmitter, Requester };

struct Node {
  int id = 0;
  Role role = Role::Transmitter;
  Position position;
  Trajectory trajectory;
  bool operator==(const Node&) const = default;
};

/// Receiver-side relative motion: speed of (v_rx - v_tx) and its unsigned
/// angle to the receiver's boresight (the ray from receiver to transmitter).
struct RelativeMotion {
  double relative_speed = 0.0;  // m/s
  double relative_angle = 0.0;  // rad, [0, pi]
};

/// Speeds are drawn U(speed_min, speed_max), headings U(-pi, pi].
struct MobilityParams {
  double speed_min = mph_to_mps(1.0);
  double speed_max = mph_to_mps(3.0);
};

/// Square arena centred on the origin: [-side/2, side/2]^2.
struct Arena {
  double side = 2000.0;
  double area_km2() const { return side * side * 1e-6; }
  bool contains(const Position& p) const {
    const double h = side / 2.0;
    return p.x >= -h && p.x <= h && p.y >= -h && p.y <= h;
  }
};

double distance(const Position& a, const Position& b);

/// Bearing of b as seen from a, in (-pi, pi].
double bearing(const Position& from, const Position& to);

Trajectory draw_trajectory(const MobilityParams& mobility, Rng& rng);

Position draw_position(const Arena& arena, Rng& rng);

/// Expected node count for a density in nodes/km^2.
double expected_node_count(const Arena& arena, double density_per_km2);

/// Poisson point process of intensity `density_per_km2` over the arena. Each
/// node is a transmitter with probability `role_mix`. Ids are consecutive
/// from `first_id`.
std::vector<Node> place_uniform(const Arena& arena, double density_per_km2, double role_mix,
                                const MobilityParams& mobility, Rng& rng, int first_id = 0);

RelativeMotion relative_motion(const Node& receiver, const Node& transmitter);

}  // namespace mmd2d
