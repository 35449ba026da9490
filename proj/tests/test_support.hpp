#ifndef LINEOPT_TEST_SUPPORT_HPP
#define LINEOPT_TEST_SUPPORT_HPP

#include <string>

#include "lineopt/instance.hpp"

namespace lineopt::testing {

// The smallest legal network: one rapid edge, one slow edge, one pair.
inline TransitInstance minimal_instance() {
  TransitInstance t;
  t.name = "minimal";
  t.params.max_rapid_edges = 1;
  t.params.max_slow_edges = 1;
  t.params.min_unchanged_slow_edges = 0;

  Node r0;
  r0.id = 0; r0.position = {0, 0}; r0.in_rapid = true; r0.rapid_origin = true;
  Node r1;
  r1.id = 1; r1.position = {1200, 0}; r1.in_rapid = true; r1.rapid_dest = true;
  Node s0;
  s0.id = 2; s0.position = {0, 800}; s0.in_slow = true; s0.slow_origin = true;
  Node s1;
  s1.id = 3; s1.position = {1200, 800}; s1.in_slow = true; s1.slow_dest = true;
  t.nodes = {r0, r1, s0, s1};

  Edge e0;
  e0.id = 0; e0.endpoints[0] = 0; e0.endpoints[1] = 1; e0.in_rapid = true; e0.length = 1200;
  Edge e1;
  e1.id = 1; e1.endpoints[0] = 2; e1.endpoints[1] = 3; e1.in_slow = true; e1.length = 1200;
  e1.on_old_slow_line = true;
  t.edges = {e0, e1};

  Centroid c0;
  c0.id = 0; c0.position = {-180, 40};
  Centroid c1;
  c1.id = 1; c1.position = {1380, 60};
  t.centroids = {c0, c1};

  DemandPair w;
  w.id = 0; w.origin = 0; w.dest = 1; w.demand = 5; w.private_utility = 30.0;
  t.demands = {w};

  validate(t);
  return t;
}

inline std::string data_path(const std::string& name) {
  return std::string(LINEOPT_DATA_DIR) + "/" + name;
}

}  // namespace lineopt::testing

#endif
