#include <doctest.h>

#include <cmath>
#include <vector>

#include "mmd2d/channel.hpp"

using namespace mmd2d;

namespace {

Endpoint at(Position p, double phi, double boresight) {
  return Endpoint{p, DirectionalAntenna{phi, deg_to_rad(90.0), boresight}};
}

}  // namespace

TEST_CASE("antenna gain shape") {
  DirectionalAntenna a{deg_to_rad(30.0), deg_to_rad(90.0), 0.0};
  CHECK_THROWS_AS(main_lobe_gain(0.0), ParameterError);
  CHECK_THROWS_AS(main_lobe_gain(-0.1), ParameterError);
  double peak = antenna_gain(a, 0.0);
  for (double t = -kPi; t <= kPi; t += 0.01) {
    CHECK(antenna_gain(a, t) <= peak);
    CHECK(antenna_gain(a, t) == doctest::Approx(antenna_gain(a, -t)));
  }
  double prev = kInfinity;
  for (double deg = 5; deg <= 90; deg += 5) {
    double g = main_lobe_gain(deg_to_rad(deg));
    CHECK(g < prev);
    prev = g;
  }
}

TEST_CASE("path loss") {
  ChannelParams p;
  CHECK(linear_to_db(path_loss(p, 1.0)) == doctest::Approx(-61.7));
  CHECK(linear_to_db(path_loss(p, 10.0)) == doctest::Approx(-81.7));
  CHECK(path_loss(p, 40.0) == doctest::Approx(path_loss(p, 20.0) / 4));
  CHECK_THROWS_AS(path_loss(p, 0.0), ParameterError);
}

TEST_CASE("Nakagami fading moments") {
  Rng rng(11);
  const int n = 1000000;
  double sum = 0, sq = 0;
  for (int i = 0; i < n; ++i) {
    double h = sample_fading(3.0, rng);
    sum += h;
    sq += h * h;
  }
  double mean = sum / n;
  double var = sq / n - mean * mean;
  CHECK(std::abs(mean - 1.0) < 0.01);
  CHECK(std::abs(var - 1.0 / 3.0) < 0.05 / 3.0);

  double sq_large = 0;
  for (int i = 0; i < 10000; ++i) {
    double h = sample_fading(1e5, rng);
    sq_large += (h - 1) * (h - 1);
  }
  CHECK(sq_large / 10000 < 1e-4);
}

TEST_CASE("LOS probability") {
  CHECK(los_probability(0.0027, 0.0) == 1.0);
  CHECK(los_probability(0.0, 1234.0) == 1.0);
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) CHECK(sample_los(0.0, 500.0, rng));
  double prev = 1.0;
  for (double d = 0; d < 500; d += 25) {
    CHECK(los_probability(0.0027, d) <= prev);
    CHECK(los_probability(0.01, d) <= los_probability(0.0027, d));
    prev = los_probability(0.0027, d);
  }
}

TEST_CASE("interference gain classes") {
  double phi = deg_to_rad(20.0);
  // Facing each other along the x axis.
  auto gg = classify_interference_gain(at({0, 0}, phi, 0.0), at({30, 0}, phi, kPi));
  CHECK(gg.gain_class == GainClass::MainMain);
  CHECK(gg.product() == doctest::Approx(main_lobe_gain(phi) * main_lobe_gain(phi)));

  // Backs turned.
  auto ss = classify_interference_gain(at({0, 0}, phi, kPi), at({30, 0}, phi, 0.0));
  CHECK(ss.gain_class == GainClass::SideSide);
  CHECK(ss.product() == doctest::Approx(side_lobe_gain(phi) * side_lobe_gain(phi)));

  auto gs = classify_interference_gain(at({0, 0}, phi, 0.0), at({30, 0}, phi, 0.0));
  CHECK(gs.gain_class == GainClass::MainSide);
  CHECK(gs.product() == doctest::Approx(main_lobe_gain(phi) * side_lobe_gain(phi)));

  auto sg = classify_interference_gain(at({0, 0}, phi, kPi), at({30, 0}, phi, kPi));
  CHECK(sg.gain_class == GainClass::SideMain);
}

TEST_CASE("interference power") {
  ChannelParams p;
  Endpoint i = at({0, 0}, 0.3, 0.0), v = at({40, 0}, 0.3, kPi);
  CHECK(interference_power(p, i, v, 1.0, false) == 0.0);
  double base = interference_power(p, i, v, 1.0, true);
  ChannelParams doubled = p;
  doubled.tx_power *= 2;
  CHECK(interference_power(doubled, i, v, 1.0, true) == doctest::Approx(2 * base));
  Endpoint away = at({0, 0}, 0.3, kPi), away_v = at({40, 0}, 0.3, 0.0);
  CHECK(interference_power(p, away, away_v, 1.0, true) > 0.0);
}

TEST_CASE("SINR against a term-by-term oracle") {
  ChannelParams p;
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 1 + trial % 4;
    std::vector<ActiveLink> links;
    for (std::size_t k = 0; k < n; ++k) {
      Position tx{uniform01(rng) * 200, uniform01(rng) * 200};
      double ang = uniform01(rng) * 2 * kPi;
      Position rx{tx.x + 50 * std::cos(ang), tx.y + 50 * std::sin(ang)};
      double phi = deg_to_rad(15.0 + 10.0 * (k % 4));
      links.push_back(make_active_link(tx, rx, phi, phi, deg_to_rad(90.0)));
    }
    std::vector<double> h(n * n);
    for (auto& x : h) x = sample_fading(3.0, rng);
    std::vector<char> los(n * n);
    for (auto& x : los) x = uniform01(rng) < 0.7;
    FadingLookup fade = [&](std::size_t i, std::size_t j) { return h[i * n + j]; };
    LosLookup path = [&](std::size_t i, std::size_t j) { return los[i * n + j] != 0; };
    for (std::size_t v = 0; v < n; ++v) {
      const ActiveLink& me = links[v];
      double signal = p.tx_power * h[v * n + v] * main_lobe_gain(me.tx.antenna.narrow_beamwidth) *
                      main_lobe_gain(me.rx.antenna.narrow_beamwidth) *
                      p.pathloss_intercept *
                      std::pow(distance(me.tx.position, me.rx.position), -2.0);
      double denom = p.noise_density * p.bandwidth;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == v || !los[i * n + v]) continue;
        const Endpoint& src = links[i].tx;
        double off_tx = normalize_angle(bearing(src.position, me.rx.position) - src.antenna.boresight);
        double off_rx = normalize_angle(bearing(me.rx.position, src.position) - me.rx.antenna.boresight);
        denom += p.tx_power * h[i * n + v] * antenna_gain(src.antenna, off_tx) *
                 antenna_gain(me.rx.antenna, off_rx) * p.pathloss_intercept *
                 std::pow(distance(src.position, me.rx.position), -2.0);
      }
      double got = sinr(p, links, v, fade, path);
      CHECK(std::abs(got - signal / denom) <= 1e-12 * signal / denom);
    }
  }
}

TEST_CASE("SINR responds to interferers and beamwidth") {
  ChannelParams p;
  FadingLookup unit = [](std::size_t, std::size_t) { return 1.0; };
  LosLookup all = [](std::size_t, std::size_t) { return true; };
  std::vector<ActiveLink> one{make_active_link({0, 0}, {50, 0}, 0.5, 0.5, deg_to_rad(90.0))};
  double snr = signal_power(p, one[0], 1.0) / p.noise_power();
  CHECK(sinr(p, one, 0, unit, all) == doctest::Approx(snr));

  auto two = one;
  two.push_back(make_active_link({60, 30}, {60, 90}, 0.5, 0.5, deg_to_rad(90.0)));
  CHECK(sinr(p, two, 0, unit, all) < snr);

  std::vector<ActiveLink> narrow{make_active_link({0, 0}, {50, 0}, 0.3, 0.3, deg_to_rad(90.0))};
  CHECK(sinr(p, narrow, 0, unit, all) > snr);
}

TEST_CASE("data rate") {
  ChannelParams p;
  CHECK(data_rate(p, 0.0, 1.0) == 0.0);
  CHECK(data_rate(p, 5.0, 0.0) == 0.0);
  CHECK(data_rate(p, 1.0, 1.0) == doctest::Approx(100e6));
  CHECK_THROWS_AS(data_rate(p, 1.0, 1.5), ParameterError);
  CHECK_THROWS_AS(data_rate(p, 1.0, -0.1), ParameterError);
}
