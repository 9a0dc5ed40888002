#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "mmd2d/association.hpp"

using namespace mmd2d;

namespace {

Node node(int id, Role role, double x, double y, double speed = 0.0, double heading = 0.0) {
  return Node{id, role, {x, y}, {speed, heading}};
}

struct Fixture {
  CacheState caches;
  AssociationInput in;
  Fixture() {
    in.caches = &caches;
    in.los = [](const Node&, const Node&) { return true; };
  }
  void cache(int tx, int content, std::vector<int> segments) {
    caches[tx].items.push_back(SegmentSet(content, std::move(segments)));
  }
};

std::vector<int> range(int a, int b) {
  std::vector<int> v;
  for (int i = a; i <= b; ++i) v.push_back(i);
  return v;
}

}  // namespace

TEST_CASE("feasible transmitter set") {
  Node rx = node(100, Role::Requester, 0, 0);
  std::vector<Node> txs{node(0, Role::Transmitter, 50, 0), node(1, Role::Transmitter, 50.001, 0),
                        node(2, Role::Transmitter, 0, 20)};
  LosOracle all = [](const Node&, const Node&) { return true; };
  LosOracle none = [](const Node&, const Node&) { return false; };
  auto f = feasible_transmitters(rx, txs, 50.0, all);
  CHECK(f == std::vector<std::size_t>{0, 2});
  CHECK(feasible_transmitters(rx, txs, 50.0, none).empty());
  CHECK(feasible_transmitters(rx, txs, 10.0, all).empty());
  CHECK(in_range_transmitters(rx, txs, 50.0) == f);
}

TEST_CASE("peer association utility") {
  PAUtilityParams p{60.0, 100.0};
  CHECK(pa_utility(60.0, 100.0, p) == doctest::Approx(2.0));
  CHECK(pa_utility(30.0, 0.0, p) == doctest::Approx(0.5));
  CHECK(pa_utility(30.0, 5.0, p) > pa_utility(30.0, 3.0, p));
  CHECK_THROWS_AS(pa_utility(1.0, 1.0, PAUtilityParams{0.0, 1.0}), ParameterError);
}

TEST_CASE("HPA picks the transmitter with more segments at equal stability") {
  Fixture f;
  f.in.requesters = {node(10, Role::Requester, 0, 0)};
  f.in.requests = {SegmentSet(0, range(1, 10))};
  // Mirror positions, both static: identical stability.
  f.in.transmitters = {node(0, Role::Transmitter, 30, 0), node(1, Role::Transmitter, -30, 0)};
  f.cache(0, 0, range(1, 3));
  f.cache(1, 0, range(1, 5));
  auto m = hpa_round(f.in);
  REQUIRE(m.pairs.size() == 1);
  CHECK(m.transmitter_of(10) == 1);
  CHECK(m.overhead == doctest::Approx(3e-3));
}

TEST_CASE("HPA outcomes") {
  Fixture f;
  f.in.requesters = {node(10, Role::Requester, 0, 0)};
  f.in.requests = {SegmentSet(0, range(1, 10))};
  f.in.transmitters = {node(0, Role::Transmitter, 20, 0)};
  f.cache(0, 0, range(1, 10));
  CHECK(hpa_round(f.in).transmitter_of(10) == 0);

  f.caches.clear();
  auto empty = hpa_round(f.in);
  CHECK(empty.pairs.empty());
  CHECK(empty.unmatched.at(10) == UnmatchedReason::NoContent);

  f.in.transmitters = {node(0, Role::Transmitter, 200, 0)};
  auto far = hpa_round(f.in);
  CHECK(far.unmatched.at(10) == UnmatchedReason::NoFeasibleDT);
}

TEST_CASE("HPA contention goes to the higher utility") {
  Fixture f;
  f.in.transmitters = {node(0, Role::Transmitter, 0, 0)};
  f.cache(0, 0, range(1, 10));
  f.in.requesters = {node(10, Role::Requester, 20, 0, 1.0, kPi / 2),
                     node(11, Role::Requester, -20, 0, 0.0, 0.0)};
  f.in.requests = {SegmentSet(0, range(1, 10)), SegmentSet(0, range(1, 10))};
  auto m = hpa_round(f.in);
  CHECK(m.transmitter_of(11) == 0);
  CHECK(m.unmatched.at(10) == UnmatchedReason::AckTimeout);
  CHECK(m.is_one_to_one());
}

TEST_CASE("switch to cellular after f failed attempts") {
  RequestState s;
  s.max_trials = 3;
  record_failure(s);
  record_failure(s);
  CHECK_FALSE(s.switched_to_cellular);
  record_failure(s);
  CHECK(s.switched_to_cellular);
}

TEST_CASE("MDA takes the nearest, content-unaware") {
  Fixture f;
  f.in.requesters = {node(10, Role::Requester, 0, 0)};
  f.in.requests = {SegmentSet(0, range(1, 10))};
  f.in.transmitters = {node(0, Role::Transmitter, 20, 0), node(1, Role::Transmitter, 10, 0)};
  f.cache(0, 0, range(1, 10));
  auto m = mda_match(f.in);
  CHECK(m.transmitter_of(10) == 1);
  CHECK(availability(f.caches[1], f.in.requests[0]) == 0);

  f.in.transmitters = {node(0, Role::Transmitter, 300, 0)};
  CHECK(mda_match(f.in).pairs.empty());
}

TEST_CASE("RPA selection") {
  Fixture f;
  f.in.requesters = {node(10, Role::Requester, 0, 0)};
  f.in.requests = {SegmentSet(0, range(1, 10))};
  f.in.transmitters = {node(0, Role::Transmitter, 20, 0)};
  Rng rng(4);
  CHECK(rpa_match(f.in, rng).transmitter_of(10) == 0);

  f.in.transmitters = {node(0, Role::Transmitter, 20, 0), node(1, Role::Transmitter, -20, 0),
                       node(2, Role::Transmitter, 0, 20), node(3, Role::Transmitter, 0, -20)};
  std::map<int, int> counts;
  for (std::uint64_t s = 0; s < 10000; ++s) {
    Rng r(derive_seed({s}));
    counts[*rpa_match(f.in, r).transmitter_of(10)]++;
  }
  for (int t = 0; t < 4; ++t) CHECK(std::abs(counts[t] / 10000.0 - 0.25) < 0.02);

  f.in.transmitters.clear();
  CHECK(rpa_match(f.in, rng).pairs.empty());
}

TEST_CASE("deferred acceptance is stable and bounded") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    Fixture f;
    int n = 2 + static_cast<int>(seed % 7);
    for (int i = 0; i < n; ++i) {
      f.in.transmitters.push_back(node(i, Role::Transmitter, uniform01(rng) * 100,
                                       uniform01(rng) * 100, 1.0 + uniform01(rng), uniform01(rng) * 6));
      f.cache(i, 0, range(1, 1 + static_cast<int>(uniform01(rng) * 20)));
    }
    for (int i = 0; i < n; ++i) {
      f.in.requesters.push_back(node(100 + i, Role::Requester, uniform01(rng) * 100,
                                     uniform01(rng) * 100, 1.0 + uniform01(rng), uniform01(rng) * 6));
      f.in.requests.push_back(SegmentSet(0, range(1, 20)));
    }
    f.in.coverage = 80.0;
    auto prefs = build_preferences(f.in);
    auto da = deferred_acceptance(prefs, f.in.transmitters.size());
    CHECK_FALSE(has_blocking_pair(prefs, f.in.transmitters.size(), da.pairs));
    CHECK(da.rounds <= n * n);
    auto m = daa_match(f.in);
    CHECK(m.is_one_to_one());
    CHECK(m.overhead == doctest::Approx(m.proposal_rounds * 3e-3));
    CHECK(hpa_round(f.in).is_one_to_one());
    CHECK(mda_match(f.in).is_one_to_one());
    CHECK(rpa_match(f.in, rng).is_one_to_one());
  }
}

TEST_CASE("DAA and HPA agree on a single pair") {
  Fixture f;
  f.in.requesters = {node(10, Role::Requester, 0, 0)};
  f.in.requests = {SegmentSet(0, range(1, 10))};
  f.in.transmitters = {node(0, Role::Transmitter, 20, 0)};
  f.cache(0, 0, range(1, 10));
  auto h = hpa_round(f.in);
  auto d = daa_match(f.in);
  CHECK(h.pairs == d.pairs);
  CHECK(d.overhead >= h.overhead);
}

TEST_CASE("HPA choices dominate every other feasible transmitter") {
  Rng rng(8);
  Fixture f;
  for (int i = 0; i < 12; ++i) {
    f.in.transmitters.push_back(node(i, Role::Transmitter, uniform01(rng) * 120, uniform01(rng) * 120,
                                     1.0, uniform01(rng) * 6));
    f.cache(i, 0, range(1, 1 + static_cast<int>(uniform01(rng) * 30)));
  }
  for (int i = 0; i < 8; ++i) {
    f.in.requesters.push_back(node(100 + i, Role::Requester, uniform01(rng) * 120,
                                   uniform01(rng) * 120, 1.0, uniform01(rng) * 6));
    f.in.requests.push_back(SegmentSet(0, range(1, 30)));
  }
  auto m = hpa_round(f.in);
  for (std::size_t r = 0; r < f.in.requesters.size(); ++r) {
    auto tx = m.transmitter_of(f.in.requesters[r].id);
    if (!tx) continue;
    double mine = requester_utility(f.in, r, static_cast<std::size_t>(*tx));
    for (std::size_t t : feasible_transmitters(f.in.requesters[r], f.in.transmitters, f.in.coverage, f.in.los))
      if (availability(f.caches[f.in.transmitters[t].id], f.in.requests[r]) > 0)
        CHECK(requester_utility(f.in, r, t) <= mine);
  }
}
