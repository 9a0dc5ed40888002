#include <doctest.h>

#include <cmath>
#include <limits>

#include "mmd2d/metrics.hpp"

using namespace mmd2d;

TEST_CASE("eq8 throughput") {
  CHECK(*window_throughput(1e9, 2.0, 1e9) == doctest::Approx(2.0));
  CHECK(*window_throughput(0.0, 2.0, 1e9) == 0.0);
  CHECK_FALSE(window_throughput(1e9, 2.0, 0.0).has_value());
  CHECK(std::isinf(*window_throughput(1e9, kInfinity, 1e9)));
}

TEST_CASE("delivered bits bound") {
  CHECK(delivered_bits(1e9, 2.0, 0.5, 1e12) == doctest::Approx(1.5e9));
  CHECK(delivered_bits(1e9, 2.0, 0.5, 1e6) == doctest::Approx(1e6));
  CHECK(delivered_bits(1e9, 0.4, 0.5, 1e12) == 0.0);
  CHECK(delivered_bits(0.0, 2.0, 0.5, 1e12) == 0.0);
  CHECK(delivered_bits(1e9, kInfinity, 0.5, 3e9) == doctest::Approx(3e9));
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    double r = uniform01(rng) * 1e9, ts = uniform01(rng) * 5, ta = uniform01(rng), q = uniform01(rng) * 4e9;
    double d = delivered_bits(r, ts, ta, q);
    CHECK(d >= 0.0);
    CHECK(d <= q);
    CHECK(d <= std::max(0.0, r * (ts - ta)) + 1e-6);
  }
}

TEST_CASE("aggregation") {
  std::vector<TrialMetrics> trials(4);
  for (int i = 0; i < 4; ++i) {
    trials[i].trial = i;
    trials[i].sum_throughput = i + 1.0;
    trials[i].mean_stability_time = i == 3 ? std::numeric_limits<double>::infinity() : 2.0;
  }
  auto agg = aggregate(trials, 5);
  CHECK(agg.trials == 4);
  const auto& s = agg.metric("sum_throughput");
  CHECK(s.count == 4);
  CHECK(s.mean == doctest::Approx(2.5));
  CHECK(s.std_error == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK(s.min == 1.0);
  CHECK(s.max == 4.0);
  CHECK(agg.metric("mean_stability_time").count == 3);
  CHECK_THROWS(agg.metric("nope"));

  for (const auto& [name, cdf] : agg.cdfs) {
    for (std::size_t k = 1; k < cdf.size(); ++k) {
      CHECK(cdf[k].value >= cdf[k - 1].value);
      CHECK(cdf[k].probability >= cdf[k - 1].probability);
    }
    if (!cdf.empty()) CHECK(cdf.back().probability == 1.0);
  }
  CHECK(aggregate(std::vector<TrialMetrics>{}).metrics.empty());
}

TEST_CASE("aggregation is independent of nothing but the trial list") {
  std::vector<TrialMetrics> trials(10);
  for (int i = 0; i < 10; ++i) trials[i].sum_rate = i * 0.1;
  auto a = aggregate(trials);
  auto b = aggregate(trials);
  CHECK(a.metric("sum_rate").mean == b.metric("sum_rate").mean);
}

TEST_CASE("paired difference") {
  std::vector<double> a{3, 4, 5}, b{1, 1, 1};
  auto d = paired_difference(a, b);
  CHECK(d.mean == doctest::Approx(3.0));
  CHECK(d.std_error == doctest::Approx(std::sqrt(1.0 / 3.0)));
  std::vector<double> c{1};
  CHECK_THROWS_AS(paired_difference(a, c), ParameterError);
}

TEST_CASE("scalar order is fixed") {
  auto s = trial_scalars(TrialMetrics{});
  REQUIRE(s.size() == 17);
  CHECK(s.front().first == "transmitters");
  CHECK(s.back().first == "potential");
}
