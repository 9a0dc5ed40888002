#include <doctest.h>

#include <cmath>

#include "mmd2d/geometry.hpp"

using namespace mmd2d;

TEST_CASE("distance") {
  CHECK(distance({0, 0}, {3, 4}) == 5.0);
  CHECK(distance({2, -7}, {2, -7}) == 0.0);
  Position a{1.5, -2.0}, b{-4.0, 9.25};
  CHECK(distance(a, b) == distance(b, a));
}

TEST_CASE("place_uniform expected count and determinism") {
  Arena big{10000.0};
  CHECK(expected_node_count(big, 40.0) == doctest::Approx(4000.0));

  Rng rng(7);
  CHECK(place_uniform(Arena{2000.0}, 0.0, 0.5, MobilityParams{}, rng).empty());

  Rng a(42), b(42);
  auto first = place_uniform(Arena{2000.0}, 40.0, 0.5, MobilityParams{}, a);
  auto second = place_uniform(Arena{2000.0}, 40.0, 0.5, MobilityParams{}, b);
  CHECK(first == second);
  CHECK(!first.empty());
}

TEST_CASE("placement is uniform over the arena") {
  Arena arena{2000.0};
  Rng rng(3);
  auto nodes = place_uniform(arena, 4000.0, 0.5, MobilityParams{}, rng);
  REQUIRE(nodes.size() > 10000);
  double sx = 0, sy = 0;
  std::size_t tx = 0;
  for (const auto& n : nodes) {
    CHECK(arena.contains(n.position));
    sx += n.position.x;
    sy += n.position.y;
    tx += n.role == Role::Transmitter;
    CHECK(n.trajectory.speed >= mph_to_mps(1.0));
    CHECK(n.trajectory.speed <= mph_to_mps(3.0));
    CHECK(n.trajectory.heading > -kPi - 1e-12);
    CHECK(n.trajectory.heading <= kPi);
  }
  double n = static_cast<double>(nodes.size());
  double sigma = arena.side / std::sqrt(12.0) / std::sqrt(n);
  CHECK(std::abs(sx / n) < 3 * sigma);
  CHECK(std::abs(sy / n) < 3 * sigma);
  CHECK(std::abs(tx / n - 0.5) < 3 * std::sqrt(0.25 / n));
}

TEST_CASE("relative motion") {
  Node rx{0, Role::Requester, {0, 0}, {0, 0}};
  Node tx{1, Role::Transmitter, {10, 0}, {0, 0}};
  auto still = relative_motion(rx, tx);
  CHECK(still.relative_speed == 0.0);
  CHECK(still.relative_angle == 0.0);

  rx.trajectory = {1.0, kPi / 2};
  auto perp = relative_motion(rx, tx);
  CHECK(perp.relative_speed == doctest::Approx(1.0));
  CHECK(perp.relative_angle == doctest::Approx(kPi / 2));

  rx.trajectory = {1.0, 0.0};
  auto toward = relative_motion(rx, tx);
  CHECK(toward.relative_angle == doctest::Approx(0.0).epsilon(1e-12));

  Node a{0, Role::Requester, {0, 0}, {1.1, 0.3}};
  Node b{1, Role::Transmitter, {25, 40}, {2.0, -2.2}};
  Node a2 = a, b2 = b;
  std::swap(a2.trajectory, b2.trajectory);
  CHECK(relative_motion(a, b).relative_speed ==
        doctest::Approx(relative_motion(a2, b2).relative_speed));
}
