#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mmd2d/experiment.hpp"
#include "mmd2d/report.hpp"

using namespace mmd2d;
using nlohmann::json;

namespace {

json small_network() {
  json doc = json::object();
  set_parameter(doc, "scenario.kind", "network");
  set_parameter(doc, "scenario.arena_side_m", 400.0);
  set_parameter(doc, "scenario.user_density_km2", 200.0);
  set_parameter(doc, "content.content_mb", 300.0);
  set_parameter(doc, "content.cache_probability", 0.5);
  set_parameter(doc, "experiment.trials", 12);
  set_parameter(doc, "experiment.max_frames", 3);
  return doc;
}

json small_links() {
  json doc = json::object();
  set_parameter(doc, "scenario.kind", "links");
  set_parameter(doc, "scenario.arena_side_m", 300.0);
  set_parameter(doc, "scenario.link_count", 6);
  set_parameter(doc, "experiment.trials", 8);
  set_parameter(doc, "experiment.max_frames", 2);
  return doc;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config defaults and validation") {
  auto cfg = parse_config(json::object());
  CHECK(cfg.scenario == Scenario::Network);
  CHECK(cfg.beamwidths.size() == 4);
  CHECK(cfg.lll.update_cap == 8);
  CHECK(cfg.lll.stagnation_window == 50);

  CHECK_THROWS_AS(parse_config(json{{"bogus", json::object()}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"channel", {{"nope", 1}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"experiment", {{"trials", "many"}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"content", {{"cache_probability", 1.5}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"beamwidth", {{"strategy", "widest"}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"association", {{"algorithm", "greedy"}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"scenario", {{"kind", "mesh"}}}}), ConfigError);

  CHECK(BeamStrategy::parse("cbws:30").beamwidth == doctest::Approx(deg_to_rad(30)));
  CHECK(BeamStrategy::parse("lll").kind == BeamStrategy::Kind::Lll);
  CHECK_THROWS_AS(BeamStrategy::parse("cbws:"), ConfigError);
  CHECK_THROWS_AS(BeamStrategy::parse("cbws:-3"), ConfigError);
}

TEST_CASE("config hash ignores the worker count") {
  json a = small_links(), b = small_links();
  set_parameter(b, "experiment.workers", 8);
  CHECK(config_hash(parse_config(a)) == config_hash(parse_config(b)));
  set_parameter(b, "experiment.seed", 2);
  CHECK(config_hash(parse_config(a)) != config_hash(parse_config(b)));
}

TEST_CASE("trials are reproducible and independent of order") {
  auto cfg = parse_config(small_network());
  auto first = run_trial(cfg, 5);
  auto again = run_trial(cfg, 5);
  CHECK(first == again);
  run_trial(cfg, 2);
  CHECK(run_trial(cfg, 5) == first);
  CHECK(first.seed == trial_seed(cfg.seed, 5));
  CHECK(trial_seed(1, 0) != trial_seed(1, 1));
  CHECK(trial_seed(1, 0) != trial_seed(2, 0));
}

TEST_CASE("worker count does not change results") {
  auto cfg = parse_config(small_network());
  auto seq = monte_carlo(cfg, 1);
  auto par = monte_carlo(cfg, 4);
  REQUIRE(seq.trials.size() == par.trials.size());
  for (std::size_t i = 0; i < seq.trials.size(); ++i) CHECK(seq.trials[i] == par.trials[i]);
}

TEST_CASE("demand is split between d2d and cellular") {
  for (auto doc : {small_network(), small_links()}) {
    for (const char* assoc : {"hpa", "daa", "mda", "rpa"}) {
      set_parameter(doc, "association.algorithm", assoc);
      auto run = monte_carlo(parse_config(doc), 2);
      std::uint64_t served = 0;
      for (const auto& t : run.trials) served += t.d2d_bits;
      CHECK(served > 0);
      for (const auto& t : run.trials) {
        CHECK(t.d2d_bits + t.cellular_bits == t.demanded_bits);
        CHECK(t.matched_fraction >= 0.0);
        CHECK(t.matched_fraction <= 1.0);
        for (const auto& o : t.link_outcomes) {
          CHECK(static_cast<double>(o.delivered_bits) <= o.requested_bits + 1e-6);
          if (o.rate > 0.0 && o.stability_time > o.alignment_time)
            CHECK(static_cast<double>(o.delivered_bits) <= o.rate * (o.stability_time - o.alignment_time) + 1.0);
          if (o.rate > 0.0) CHECK(o.alignment_time <= o.stability_time);
        }
      }
    }
  }
}

TEST_CASE("no caching sends everything to cellular") {
  json doc = small_network();
  set_parameter(doc, "content.cache_probability", 0.0);
  auto run = monte_carlo(parse_config(doc), 1);
  for (const auto& t : run.trials) {
    CHECK(t.d2d_bits == 0);
    CHECK(t.cellular_bits == t.demanded_bits);
  }
}

TEST_CASE("beamwidth strategies on the links scenario") {
  for (const char* s : {"lll", "rbws", "cbws:15", "cbws:45", "exhaustive"}) {
    json doc = small_links();
    set_parameter(doc, "beamwidth.strategy", s);
    auto run = monte_carlo(parse_config(doc), 1);
    CHECK(run.trials.size() == 8);
    for (const auto& t : run.trials) {
      CHECK(t.links > 0);
      if (std::string(s).starts_with("cbws"))
        for (const auto& o : t.link_outcomes)
          if (o.rate > 0.0) CHECK(o.beamwidth > 0.0);
    }
  }
}

TEST_CASE("oracle check on small games") {
  json doc = small_links();
  set_parameter(doc, "scenario.link_count", 4);
  set_parameter(doc, "experiment.trials", 10);
  auto rows = oracle_check(parse_config(doc));
  CHECK(rows.size() == 10);
  for (const auto& r : rows) {
    CHECK(r.ratio <= 1.0 + 1e-9);
    if (r.converged) CHECK(r.nash);
  }
}

TEST_CASE("sweep and compare") {
  CHECK_THROWS_AS(sweep(small_links(), "channel.blockage_beta", {}), ConfigError);
  CHECK_THROWS_AS(sweep(small_links(), "channel.unknown", {json(1.0)}), ConfigError);
  auto points = sweep(small_links(), "channel.blockage_beta", {json(0.0), json(0.01)});
  REQUIRE(points.size() == 2);
  CHECK(points[1].result.config.channel.blockage_beta == doctest::Approx(0.01));

  CHECK_THROWS_AS(compare(small_links(), {}, {"lll"}), ConfigError);
  auto runs = compare(small_network(), {"hpa", "mda"}, {"cbws:30"});
  REQUIRE(runs.size() == 2);
  CHECK(runs[0].label == "hpa+cbws:30");
  CHECK(runs[0].trials.front().seed == runs[1].trials.front().seed);
}

TEST_CASE("csv output is byte identical across reruns") {
  auto dir = std::filesystem::temp_directory_path() / "mmd2d_test_out";
  std::filesystem::remove_all(dir);
  auto cfg = parse_config(small_links());
  std::vector<RunResult> a{monte_carlo(cfg, 1)}, b{monte_carlo(cfg, 3)};
  write_runs(dir / "a", a, OutputFormat::Csv);
  write_runs(dir / "b", b, OutputFormat::Csv);
  for (const char* f : {"trials.csv", "links.csv", "aggregate.csv", "cdf.csv", "theta_trace.csv"})
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  CHECK(std::filesystem::exists(dir / "a" / "manifest.json"));
  write_runs(dir / "j", a, OutputFormat::Json);
  auto parsed = json::parse(slurp(dir / "j" / "results.json"));
  REQUIRE(parsed.is_array());
  CHECK(parsed.size() == 1);
  CHECK(parsed[0]["trials"].size() == a[0].trials.size());
  std::filesystem::remove_all(dir);
}

TEST_CASE("test requester scenario") {
  json doc = json::object();
  set_parameter(doc, "scenario.kind", "test_requester");
  set_parameter(doc, "scenario.arena_side_m", 300.0);
  set_parameter(doc, "scenario.transmitter_density_km2", 200.0);
  set_parameter(doc, "content.cache_probability", 1.0);
  set_parameter(doc, "experiment.trials", 10);
  set_parameter(doc, "experiment.max_frames", 1);
  auto run = monte_carlo(parse_config(doc), 1);
  for (const auto& t : run.trials) CHECK(t.requesters == 1);
}
