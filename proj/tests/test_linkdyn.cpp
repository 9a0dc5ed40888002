#include <doctest.h>

#include <cmath>

#include "mmd2d/linkdyn.hpp"

using namespace mmd2d;

namespace {
const double kPsi = deg_to_rad(90.0);
}

TEST_CASE("pointing error edge cases") {
  CHECK(pointing_error({1.0, 0.0}, 100.0, 1.0) == 0.0);
  CHECK(pointing_error({1.0, kPi / 2}, 100.0, 0.0) == 0.0);
}

TEST_CASE("stability time") {
  RelativeMotion m{1.0, kPi / 2};
  CHECK(link_stability_time(50.0, kPi / 6, m, 1.0) == 0.0);
  CHECK(link_stability_time(50.0, kPi / 3, m, 0.5) ==
        doctest::Approx(2 * link_stability_time(50.0, kPi / 6, m, 0.5)));
  CHECK(std::isinf(link_stability_time(50.0, kPi / 6, {0.0, 0.0}, 0.5)));
  CHECK(std::isinf(link_stability_time(50.0, kPi / 6, {2.0, 0.0}, 0.5)));
  CHECK_THROWS_AS(link_stability_time(50.0, kPi / 6, m, 0.0), ParameterError);
  CHECK_THROWS_AS(link_stability_time(50.0, kPi / 6, m, 1.5), ParameterError);
}

TEST_CASE("stability time is monotone on the grid") {
  for (double v = 0.5; v <= 3.0; v += 0.5) {
    double prev = 0.0;
    for (double deg = 15; deg <= 45; deg += 10) {
      double ts = link_stability_time(50.0, deg_to_rad(deg), {v, 1.0}, 0.5);
      CHECK(ts > prev);
      prev = ts;
    }
  }
  for (double deg = 15; deg <= 45; deg += 10) {
    double prev = kInfinity;
    for (double v = 0.5; v <= 3.0; v += 0.5) {
      double ts = link_stability_time(50.0, deg_to_rad(deg), {v, 1.0}, 0.5);
      CHECK(ts < prev);
      prev = ts;
    }
    CHECK(link_stability_time(80.0, deg_to_rad(deg), {1, 1}, 0.5) >
          link_stability_time(40.0, deg_to_rad(deg), {1, 1}, 0.5));
    CHECK(link_stability_time(50.0, deg_to_rad(deg), {1, 1}, 0.7) <
          link_stability_time(50.0, deg_to_rad(deg), {1, 1}, 0.4));
  }
}

TEST_CASE("alignment time") {
  CHECK(alignment_time(kPsi, kPsi, kPsi, kPsi, 10e-6) == doctest::Approx(10e-6));
  CHECK(sector_count(kPsi, deg_to_rad(15.0)) == 6);
  CHECK(sector_count(kPsi, deg_to_rad(35.0)) == 3);
  CHECK_THROWS_AS(alignment_time(kPsi, kPsi, deg_to_rad(100.0), kPsi, 10e-6), ParameterError);
  double prev = 0.0;
  for (double deg = 90; deg >= 5; deg -= 1) {
    double ta = alignment_time(kPsi, kPsi, deg_to_rad(deg), deg_to_rad(30.0), 10e-6);
    CHECK(ta >= prev);
    prev = ta;
  }
}

TEST_CASE("feasible beamwidth filtering") {
  std::vector<double> set{deg_to_rad(15.0), deg_to_rad(25.0), deg_to_rad(35.0), deg_to_rad(45.0)};
  CHECK(feasible_beamwidths(set, kPsi, kPsi, 10e-6, kInfinity).size() == 16);

  double widest = set.back();
  double bound = kPsi * kPsi * 10e-6 / (widest * widest);
  CHECK(feasible_beamwidths(set, kPsi, kPsi, 10e-6, bound * (1 - 1e-9)).empty());

  // Boundary equality kept: stability exactly at the 45/45 bound, which also
  // equals T^A = ceil(2) * ceil(2) * T_P.
  double exact = 4 * 10e-6;
  auto at_bound = feasible_beamwidths(set, kPsi, kPsi, 10e-6, exact);
  REQUIRE(at_bound.size() == 1);
  CHECK(at_bound.front() == BeamwidthPair{widest, widest});

  for (double ts : {1e-5, 5e-5, 1e-4, 2e-4, 4e-4, 1e-3}) {
    for (const auto& p : feasible_beamwidths(set, kPsi, kPsi, 10e-6, ts)) {
      CHECK(alignment_time(kPsi, kPsi, p.tx, p.rx, 10e-6) <= ts);
      CHECK(p.tx * p.rx >= kPsi * kPsi * 10e-6 / ts);
    }
  }
}

TEST_CASE("alignment efficiency") {
  CHECK(alignment_efficiency(0.0, 1.0).gamma == 1.0);
  CHECK(alignment_efficiency(1.0, 1.0).gamma == 0.0);
  CHECK(alignment_efficiency(0.5, 1.0).gamma == 0.5);
  CHECK(alignment_efficiency(1e-4, kInfinity).gamma == 1.0);
  auto bad = alignment_efficiency(2.0, 1.0);
  CHECK(bad.gamma == 0.0);
  CHECK_FALSE(bad.feasible);
}
