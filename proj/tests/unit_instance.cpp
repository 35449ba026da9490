#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "lineopt/instance.hpp"
#include "lineopt/synthetic.hpp"
#include "test_support.hpp"

using namespace lineopt;
using lineopt::testing::minimal_instance;

TEST_CASE("minimal instance validates and derives four arcs") {
  TransitInstance t = minimal_instance();
  CHECK(t.arcs.size() == 4);
  CHECK(t.num_rapid_arcs == 2);
  CHECK(t.num_slow_arcs == 2);
  CHECK(t.transfer_nodes.empty());
  // traverse time: 1200 m at 70 km/h -> 1.0285 min
  CHECK(t.arc(0).traverse_time == doctest::Approx(1200.0 / (70000.0 / 60.0)));
}

TEST_CASE("arc count is twice the per-mode edge counts") {
  for (unsigned seed : {1u, 2u, 3u}) {
    TransitInstance t = generate_synthetic(seed, SizeClass::tiny);
    CHECK(static_cast<int>(t.arcs.size()) ==
          2 * static_cast<int>(t.rapid_edges.size()) + 2 * static_cast<int>(t.slow_edges.size()));
  }
}

TEST_CASE("walk link derivation respects thresholds") {
  TransitInstance t = minimal_instance();
  t.params.max_walk_rapid = 400.0;
  t.params.max_walk_slow = 300.0;
  t.centroids[0].position = {-350.0, 0.0};  // 350 m from rapid node 0
  t.walk_links.clear();
  validate(t);

  SUBCASE("rapid link within range carries the walking time") {
    auto wt = t.walk_time(0, 0, Mode::rapid);
    REQUIRE(wt.has_value());
    CHECK(*wt == doctest::Approx(350.0 / (5000.0 / 60.0)));  // 4.2 minutes
    CHECK(*wt == doctest::Approx(4.2));
  }
  SUBCASE("slow threshold excludes a 350 m link") {
    TransitInstance s = minimal_instance();
    s.nodes[2].position = {-350.0, 0.0};  // slow node 350 m from centroid 0
    s.centroids[0].position = {0.0, 0.0};
    // keep the centroid away from node positions
    s.centroids[0].position = {-1.0, 1.0};
    s.walk_links.clear();
    validate(s);
    CHECK_FALSE(s.walk_time(0, 2, Mode::slow).has_value());
  }
}

TEST_CASE("equidistant centroid gets a link to both rapid stations") {
  TransitInstance t = minimal_instance();
  t.nodes[1].position = {600, 0};
  t.edges[0].length = 600;
  t.centroids[0].position = {300, 200};  // equidistant from nodes 0 and 1
  t.arcs.clear();
  t.walk_links.clear();
  validate(t);
  CHECK(t.has_walk_link(0, 0, Mode::rapid));
  CHECK(t.has_walk_link(0, 1, Mode::rapid));
}

TEST_CASE("walk links re-derivation is idempotent and respects thresholds exactly") {
  TransitInstance t = generate_synthetic(4, SizeClass::tiny);
  const auto again = derive_walk_links(t);
  REQUIRE(again.size() == t.walk_links.size());
  for (std::size_t i = 0; i < again.size(); ++i) {
    CHECK(again[i].centroid == t.walk_links[i].centroid);
    CHECK(again[i].station == t.walk_links[i].station);
    CHECK(again[i].walk_time == doctest::Approx(t.walk_links[i].walk_time));
    const double dist = distance(t.centroid(again[i].centroid).position,
                                 t.node(again[i].station).position);
    const double cap =
        again[i].mode == Mode::rapid ? t.params.max_walk_rapid : t.params.max_walk_slow;
    CHECK(dist <= cap);
  }
}

TEST_CASE("private utilities follow the factor and the drive time") {
  TransitInstance t = minimal_instance();
  t.centroids[0].position = {0, 3000.0 + 1200.0};  // 3 km from centroid 1? set both explicitly
  t.centroids[0].position = {100, 4000};
  t.centroids[1].position = {100, 1000};  // 3 km apart
  compute_private_utilities(t);
  CHECK(t.demands[0].private_utility == doctest::Approx(12.0));  // 2 * (3/30) * 60

  t.params.private_utility_factor = 1.0;
  compute_private_utilities(t);
  CHECK(t.demands[0].private_utility == doctest::Approx(6.0));

  t.params.private_utility_factor = 2.0;
  t.centroids[1].position = {100, 3500};  // 0.5 km
  compute_private_utilities(t);
  CHECK(t.demands[0].private_utility == doctest::Approx(2.0));
}

TEST_CASE("coincident pair centroids are rejected") {
  TransitInstance t = minimal_instance();
  t.centroids[1].position = t.centroids[0].position;
  CHECK_THROWS_AS(compute_private_utilities(t), ValidationError);
}

TEST_CASE("validation names the offending edge when a mode flag is missing") {
  TransitInstance t = minimal_instance();
  t.nodes[1].in_rapid = false;
  t.nodes[1].in_slow = true;  // keep node membership legal
  t.arcs.clear();
  try {
    validate(t);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("edges[0]") != std::string::npos);
    CHECK(std::string(e.what()).find("edge_mode_consistency") != std::string::npos);
  }
}

TEST_CASE("dangling ids are reported with their schema path") {
  TransitInstance t = minimal_instance();
  t.edges[1].endpoints[1] = 9;
  t.arcs.clear();
  try {
    validate(t);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(e.path() == "edges[1].endpoints");
  }
}

TEST_CASE("centroids may not coincide with candidate stations") {
  TransitInstance t = minimal_instance();
  t.centroids[0].position = t.nodes[0].position;
  CHECK_THROWS_AS(validate(t), ValidationError);
}

TEST_CASE("filter keeps thresholded pairs and always drops empty relations") {
  TransitInstance t = minimal_instance();
  t.demands.clear();
  for (int i = 0; i < 10; ++i) {
    DemandPair w;
    w.id = i;
    w.origin = i % 2;
    w.dest = (i + 1) % 2;
    w.demand = i < 3 ? 0 : i * 10;  // three empty relations
    w.private_utility = 20;
    t.demands.push_back(w);
  }
  validate(t);

  CHECK(filter_by_demand(t, 0).demands.size() == 7);
  CHECK(filter_by_demand(t, 1000).demands.empty());

  // filter(filter(I,a),b) == filter(I, max(a,b))
  for (std::int64_t a : {0, 40, 70}) {
    for (std::int64_t b : {0, 50, 90}) {
      const TransitInstance lhs = filter_by_demand(filter_by_demand(t, a), b);
      const TransitInstance rhs = filter_by_demand(t, std::max(a, b));
      REQUIRE(lhs.demands.size() == rhs.demands.size());
      for (std::size_t i = 0; i < lhs.demands.size(); ++i) {
        CHECK(lhs.demands[i].origin == rhs.demands[i].origin);
        CHECK(lhs.demands[i].demand == rhs.demands[i].demand);
      }
    }
  }
}

TEST_CASE("instance files round-trip through the canonical form") {
  TransitInstance t = generate_synthetic(2, SizeClass::tiny);
  const std::string once = instance_to_json(t);
  TransitInstance back = parse_instance(once);
  const std::string twice = instance_to_json(back);
  CHECK(once == twice);
}

TEST_CASE("zero-demand pairs are dropped at load time") {
  TransitInstance t = minimal_instance();
  DemandPair z;
  z.id = 1;
  z.origin = 1;
  z.dest = 0;
  z.demand = 0;
  z.private_utility = 10;
  t.demands.push_back(z);
  // serialize without validation, then load
  const std::string text = instance_to_json(t);
  TransitInstance back = parse_instance(text);
  CHECK(back.demands.size() == 1);
  CHECK(back.demands[0].demand == 5);
}

TEST_CASE("generator is deterministic") {
  TransitInstance a = generate_synthetic(1, SizeClass::tiny);
  TransitInstance b = generate_synthetic(1, SizeClass::tiny);
  CHECK(instance_to_json(a) == instance_to_json(b));
}

TEST_CASE("tiny instances stay within the enumeration-friendly size box") {
  for (unsigned seed : {1u, 5u, 9u}) {
    TransitInstance t = generate_synthetic(seed, SizeClass::tiny);
    CHECK(t.rapid_nodes.size() <= 6);
    CHECK(t.slow_nodes.size() <= 8);
    CHECK(t.demands.size() <= 12);
  }
}

TEST_CASE("seville-like counts land within ten percent of the reference") {
  TransitInstance t = generate_synthetic(2, SizeClass::seville_like);
  CHECK(std::abs(static_cast<int>(t.nodes.size()) - 97) <= 10);
  CHECK(std::abs(static_cast<int>(t.edges.size()) - 247) <= 25);
  CHECK(std::abs(static_cast<int>(t.centroids.size()) - 73) <= 7);
  // the full ordered demand matrix, minus the empty relations
  CHECK(t.demands.size() > 4000);
  CHECK(t.demands.size() <= 73 * 72);
}

TEST_CASE("schema violations carry field-level paths") {
  CHECK_THROWS_AS(parse_instance("{}"), ValidationError);
  try {
    parse_instance(R"({"params":{"max_rapid_edges":1,"max_slow_edges":1,
      "min_unchanged_slow_edges":0},"nodes":[{"id":0}],"edges":[],"centroids":[],"demands":[]})");
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(e.path() == "nodes[0].x");
  }
}
