#include "lineopt/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include "lineopt/oracle.hpp"

namespace lineopt {

SizeClass size_class_from(const std::string& name) {
  if (name == "tiny") return SizeClass::tiny;
  if (name == "small") return SizeClass::small;
  if (name == "seville-like" || name == "seville_like") return SizeClass::seville_like;
  throw std::invalid_argument("unknown size class " + name);
}

namespace {

struct Rng {
  std::mt19937 gen;
  explicit Rng(unsigned int seed) : gen(seed) {}
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen);
  }
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }
};

int add_node(TransitInstance& inst, double x, double y, bool rapid, bool slow) {
  Node n;
  n.id = static_cast<int>(inst.nodes.size());
  n.position = {x, y};
  n.in_rapid = rapid;
  n.in_slow = slow;
  inst.nodes.push_back(n);
  return n.id;
}

int add_edge(TransitInstance& inst, int a, int b, bool rapid, bool slow, bool old_line = false) {
  Edge e;
  e.id = static_cast<int>(inst.edges.size());
  e.endpoints[0] = a;
  e.endpoints[1] = b;
  e.in_rapid = rapid;
  e.in_slow = slow;
  e.length = distance(inst.nodes[static_cast<std::size_t>(a)].position,
                      inst.nodes[static_cast<std::size_t>(b)].position);
  e.on_old_slow_line = old_line;
  inst.edges.push_back(e);
  return e.id;
}

int add_centroid(TransitInstance& inst, double x, double y) {
  Centroid c;
  c.id = static_cast<int>(inst.centroids.size());
  c.position = {x, y};
  inst.centroids.push_back(c);
  return c.id;
}

// A forked rapid corridor (origin node splitting into two branches that end
// in the two destination candidates), a slow tree nearby sharing the fork
// area, centroids scattered within walking range.
TransitInstance tiny_attempt(Rng& rng) {
  TransitInstance inst;
  inst.name = "tiny";
  InstanceParams& p = inst.params;
  p.min_station_spacing = 500.0;
  p.max_walk_rapid = 400.0;
  p.max_walk_slow = 300.0;

  const int upper_len = rng.uniform_int(2, 3);
  const int lower_len = upper_len == 3 ? 2 : rng.uniform_int(2, 3);  // at most 6 rapid nodes

  const double step = 820.0;
  const int root = add_node(inst, 0.0, 0.0, true, false);
  inst.nodes[static_cast<std::size_t>(root)].rapid_origin = true;

  std::vector<int> upper{root}, lower{root};
  for (int i = 1; i <= upper_len; ++i) {
    const bool shared = i == upper_len - 1;  // a mid-branch transfer candidate
    const int n = add_node(inst, i * step + rng.uniform(-60, 60), 520.0 + rng.uniform(-60, 60),
                           true, shared);
    add_edge(inst, upper.back(), n, true, false);
    upper.push_back(n);
  }
  inst.nodes[static_cast<std::size_t>(upper.back())].rapid_dest = true;
  for (int i = 1; i <= lower_len; ++i) {
    const bool shared = i == lower_len - 1;
    const int n = add_node(inst, i * step + rng.uniform(-60, 60), -540.0 + rng.uniform(-60, 60),
                           true, shared);
    add_edge(inst, lower.back(), n, true, false);
    lower.push_back(n);
  }
  inst.nodes[static_cast<std::size_t>(lower.back())].rapid_dest = true;

  p.max_rapid_edges = std::max(upper_len, lower_len);

  // Slow tree: a spine passing near both branches plus one or two twigs whose
  // tips widen the slow origin/destination candidate sets.
  const int spine_len = rng.uniform_int(4, 6);
  std::vector<int> spine;
  {
    const int s0 = add_node(inst, -700.0 + rng.uniform(-50, 50), -150 + rng.uniform(-50, 50), false,
                            true);
    inst.nodes[static_cast<std::size_t>(s0)].slow_origin = true;
    spine.push_back(s0);
  }
  // Use the shared rapid nodes as spine anchors so transfers are possible.
  std::vector<int> shared_nodes;
  for (const Node& n : inst.nodes)
    if (n.in_rapid && n.in_slow) shared_nodes.push_back(n.id);
  for (int anchor : shared_nodes) {
    add_edge(inst, spine.back(), anchor, false, true);
    spine.push_back(anchor);
  }
  while (static_cast<int>(spine.size()) < spine_len + 1) {
    const Node& last = inst.nodes[static_cast<std::size_t>(spine.back())];
    const int n = add_node(inst, last.position.x + 650.0 + rng.uniform(-80, 80),
                           last.position.y * 0.4 + rng.uniform(-220, 220), false, true);
    add_edge(inst, spine.back(), n, false, true);
    spine.push_back(n);
  }
  inst.nodes[static_cast<std::size_t>(spine.back())].slow_dest = true;

  // Old slow line: the spine itself.
  for (const Edge& e : inst.edges)
    if (e.in_slow) inst.edges[static_cast<std::size_t>(e.id)].on_old_slow_line = true;

  // Twigs give the re-routing something to decide.
  const int twigs = rng.uniform_int(1, 2);
  for (int tw = 0; tw < twigs; ++tw) {
    const int attach = spine[static_cast<std::size_t>(rng.uniform_int(
        1, static_cast<int>(spine.size()) - 2))];
    const Node& at = inst.nodes[static_cast<std::size_t>(attach)];
    const int tip = add_node(inst, at.position.x + rng.uniform(-250, 250),
                             at.position.y + (tw == 0 ? 700.0 : -700.0) + rng.uniform(-80, 80),
                             false, true);
    add_edge(inst, attach, tip, false, true);
    if (tw == 0) inst.nodes[static_cast<std::size_t>(tip)].slow_dest = true;
    else inst.nodes[static_cast<std::size_t>(tip)].slow_origin = true;
  }

  p.max_slow_edges = static_cast<int>(spine.size());  // spine length, allows detour trades
  p.min_unchanged_slow_edges = 1;

  // Centroids near stations (both sides of the corridor) plus one off-grid.
  const int n_centroids = rng.uniform_int(4, 6);
  std::vector<int> station_pool;
  for (const Node& n : inst.nodes) station_pool.push_back(n.id);
  for (int c = 0; c < n_centroids; ++c) {
    const Node& base =
        inst.nodes[static_cast<std::size_t>(station_pool[static_cast<std::size_t>(rng.uniform_int(
            0, static_cast<int>(station_pool.size()) - 1))])];
    const double ang = rng.uniform(0, 2 * 3.14159265358979);
    const double rad = rng.uniform(140.0, 290.0);
    add_centroid(inst, base.position.x + rad * std::cos(ang), base.position.y + rad * std::sin(ang));
  }
  add_centroid(inst, 5200.0 + rng.uniform(-100, 100), 1900.0 + rng.uniform(-100, 100));

  // Demand pairs.
  const int want_pairs = rng.uniform_int(5, 9);
  std::set<std::pair<int, int>> seen;
  int id = 0;
  for (int t = 0; t < 40 && static_cast<int>(inst.demands.size()) < want_pairs; ++t) {
    const int o = rng.uniform_int(0, static_cast<int>(inst.centroids.size()) - 1);
    const int d = rng.uniform_int(0, static_cast<int>(inst.centroids.size()) - 1);
    if (o == d || !seen.insert({o, d}).second) continue;
    DemandPair w;
    w.id = id++;
    w.origin = o;
    w.dest = d;
    w.demand = rng.uniform_int(3, 180);
    inst.demands.push_back(w);
  }

  compute_private_utilities(inst);
  validate(inst);
  return inst;
}

bool tiny_acceptable(const TransitInstance& inst) {
  if (inst.rapid_nodes.size() > 6 || inst.slow_nodes.size() > 8 || inst.demands.size() > 12)
    return false;
  OracleLimits lim;
  lim.max_design_pairs = 20000;
  std::vector<EnumeratedDesign> designs;
  try {
    designs = enumerate_designs(inst, lim);
  } catch (const std::runtime_error&) {
    return false;
  }
  if (designs.empty() || designs.size() > 4000) return false;

  // Margin guard: no (design, pair) may sit on the coverage knife edge, so
  // float noise cannot flip the oracle/model agreement.
  std::int64_t best = 0, total = 0;
  for (const DemandPair& w : inst.demands) total += w.demand;
  for (const EnumeratedDesign& d : designs) {
    std::int64_t cov = 0;
    for (const DemandPair& w : inst.demands) {
      DemandPair unlimited = w;
      unlimited.private_utility = 1e18;
      const auto route = best_routing(inst, d, unlimited, false);
      if (!route) continue;
      if (std::abs(route->public_time - w.private_utility) < 1e-3) return false;
      if (route->public_time <= w.private_utility) cov += w.demand;
    }
    best = std::max(best, cov);
  }
  if (best <= 0 || best >= total) return false;

  // Spacing distances clear of the threshold.
  for (int i : inst.rapid_nodes)
    for (int j : inst.rapid_nodes) {
      if (j <= i) continue;
      const double d = distance(inst.node(i).position, inst.node(j).position);
      if (std::abs(d - inst.params.min_station_spacing) < 1.0) return false;
    }
  // Walk distances clear of the caps.
  for (const Centroid& c : inst.centroids)
    for (const Node& n : inst.nodes) {
      const double d = distance(c.position, n.position);
      if (n.in_rapid && std::abs(d - inst.params.max_walk_rapid) < 1.0) return false;
      if (n.in_slow && std::abs(d - inst.params.max_walk_slow) < 1.0) return false;
    }
  return true;
}

TransitInstance small_attempt(Rng& rng) {
  TransitInstance inst;
  inst.name = "small";
  InstanceParams& p = inst.params;

  const int nr = 8;
  std::vector<int> chain;
  for (int i = 0; i < nr; ++i) {
    const bool shared = i % 3 == 1;
    chain.push_back(add_node(inst, i * 760.0 + rng.uniform(-70, 70), rng.uniform(-220, 220), true,
                             shared));
    if (i > 0) add_edge(inst, chain[static_cast<std::size_t>(i) - 1], chain[static_cast<std::size_t>(i)], true, false);
  }
  inst.nodes[static_cast<std::size_t>(chain.front())].rapid_origin = true;
  inst.nodes[static_cast<std::size_t>(chain[1])].rapid_origin = true;
  inst.nodes[static_cast<std::size_t>(chain.back())].rapid_dest = true;
  inst.nodes[static_cast<std::size_t>(chain[static_cast<std::size_t>(nr) - 2])].rapid_dest = true;
  p.max_rapid_edges = 5;

  std::vector<int> spine;
  spine.push_back(add_node(inst, -650 + rng.uniform(-60, 60), 600 + rng.uniform(-60, 60), false, true));
  inst.nodes[static_cast<std::size_t>(spine[0])].slow_origin = true;
  for (const int anchor : {chain[1], chain[4], chain[7]}) {
    add_edge(inst, spine.back(), anchor, false, true, true);
    spine.push_back(anchor);
  }
  for (int i = 0; i < 6; ++i) {
    const Node& last = inst.nodes[static_cast<std::size_t>(spine.back())];
    const int n = add_node(inst, last.position.x + 600 + rng.uniform(-60, 60),
                           last.position.y + rng.uniform(-350, 350), false, true);
    add_edge(inst, spine.back(), n, false, true, i < 2);
    spine.push_back(n);
  }
  inst.nodes[static_cast<std::size_t>(spine.back())].slow_dest = true;
  for (int tw = 0; tw < 3; ++tw) {
    const int attach = spine[static_cast<std::size_t>(rng.uniform_int(1, static_cast<int>(spine.size()) - 2))];
    const Node& at = inst.nodes[static_cast<std::size_t>(attach)];
    const int tip = add_node(inst, at.position.x + rng.uniform(-200, 200),
                             at.position.y + (tw % 2 ? 750.0 : -750.0), false, true);
    add_edge(inst, attach, tip, false, true);
    if (tw % 2) inst.nodes[static_cast<std::size_t>(tip)].slow_dest = true;
    else inst.nodes[static_cast<std::size_t>(tip)].slow_origin = true;
  }
  p.max_slow_edges = 9;
  p.min_unchanged_slow_edges = 2;

  for (int c = 0; c < 12; ++c) {
    const Node& base = inst.nodes[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(inst.nodes.size()) - 1))];
    const double ang = rng.uniform(0, 6.283185307);
    const double rad = rng.uniform(150.0, 280.0);
    add_centroid(inst, base.position.x + rad * std::cos(ang), base.position.y + rad * std::sin(ang));
  }
  std::set<std::pair<int, int>> seen;
  int id = 0;
  while (static_cast<int>(inst.demands.size()) < 30) {
    const int o = rng.uniform_int(0, static_cast<int>(inst.centroids.size()) - 1);
    const int d = rng.uniform_int(0, static_cast<int>(inst.centroids.size()) - 1);
    if (o == d || !seen.insert({o, d}).second) continue;
    DemandPair w;
    w.id = id++;
    w.origin = o;
    w.dest = d;
    w.demand = rng.uniform_int(1, 250);
    inst.demands.push_back(w);
  }
  compute_private_utilities(inst);
  validate(inst);
  return inst;
}

TransitInstance seville_like_attempt(Rng& rng) {
  TransitInstance inst;
  inst.name = "seville-like";
  InstanceParams& p = inst.params;
  p.max_rapid_edges = 11;
  p.max_slow_edges = 16;
  p.min_unchanged_slow_edges = 2;

  // Corridor ~9 km x 3 km. Rapid band in the middle, slow grid around it.
  const int rapid_count = 36, shared_count = 26;
  std::vector<int> rapid_band;
  for (int i = 0; i < rapid_count + shared_count; ++i) {
    const double x = i * 150.0 + rng.uniform(-40, 40);
    const double y = 300.0 * std::sin(i * 0.35) + rng.uniform(-120, 120);
    const bool shared = i % 2 == 1 && static_cast<int>(rapid_band.size()) >= 0 &&
                        i < 2 * shared_count;  // alternate early nodes into both networks
    rapid_band.push_back(add_node(inst, x, y, true, shared));
  }
  // Rapid edges: the band chain plus short chords.
  for (std::size_t i = 1; i < rapid_band.size(); ++i)
    add_edge(inst, rapid_band[i - 1], rapid_band[i], true, false);
  for (std::size_t i = 2; i < rapid_band.size(); i += 3)
    add_edge(inst, rapid_band[i - 2], rapid_band[i], true, false);

  // Slow-only grid rows above and below.
  std::vector<int> slow_nodes;
  const int slow_only = 35;
  for (int i = 0; i < slow_only; ++i) {
    const double x = (i % 18) * 520.0 + rng.uniform(-90, 90);
    const double y = (i < 18 ? 900.0 : -900.0) + rng.uniform(-180, 180);
    slow_nodes.push_back(add_node(inst, x, y, false, true));
  }
  for (std::size_t i = 1; i < slow_nodes.size(); ++i)
    if (i % 18 != 0) add_edge(inst, slow_nodes[i - 1], slow_nodes[i], false, true, i < 12);
  // Connect the grid rows to shared band nodes.
  std::vector<int> shared_ids;
  for (const Node& n : inst.nodes)
    if (n.in_rapid && n.in_slow) shared_ids.push_back(n.id);
  for (std::size_t i = 0; i < slow_nodes.size(); ++i) {
    const int target = shared_ids[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(shared_ids.size()) - 1))];
    add_edge(inst, slow_nodes[i], target, false, true, false);
  }
  // Slow edges along the shared part of the band.
  for (std::size_t i = 1; i < shared_ids.size(); ++i)
    add_edge(inst, shared_ids[i - 1], shared_ids[i], false, true, i < 4);

  // Pad with extra chords until the edge count approaches the target.
  while (static_cast<int>(inst.edges.size()) < 247) {
    const int a = rng.uniform_int(0, static_cast<int>(inst.nodes.size()) - 1);
    const int b = rng.uniform_int(0, static_cast<int>(inst.nodes.size()) - 1);
    if (a == b) continue;
    const Node& na = inst.nodes[static_cast<std::size_t>(a)];
    const Node& nb = inst.nodes[static_cast<std::size_t>(b)];
    if (!(na.in_slow && nb.in_slow)) continue;
    if (distance(na.position, nb.position) > 1400.0) continue;
    add_edge(inst, a, b, false, true);
  }

  inst.nodes[static_cast<std::size_t>(rapid_band.front())].rapid_origin = true;
  inst.nodes[static_cast<std::size_t>(rapid_band[1])].rapid_origin = true;
  inst.nodes[static_cast<std::size_t>(rapid_band.back())].rapid_dest = true;
  inst.nodes[static_cast<std::size_t>(slow_nodes.front())].slow_origin = true;
  inst.nodes[static_cast<std::size_t>(slow_nodes.back())].slow_dest = true;

  for (int c = 0; c < 73; ++c) {
    const Node& base = inst.nodes[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(inst.nodes.size()) - 1))];
    const double ang = rng.uniform(0, 6.283185307);
    const double rad = rng.uniform(120.0, 360.0);
    add_centroid(inst, base.position.x + rad * std::cos(ang), base.position.y + rad * std::sin(ang));
  }

  int id = 0;
  for (int o = 0; o < 73; ++o) {
    for (int d = 0; d < 73; ++d) {
      if (o == d) continue;
      DemandPair w;
      w.id = id++;
      w.origin = o;
      w.dest = d;
      // Mostly light demand, a heavy tail up to the mid-400s, a few percent
      // of empty relations.
      if (rng.uniform(0.0, 1.0) < 0.048) {
        w.demand = 0;
      } else {
        const double x = rng.uniform(0.0, 1.0);
        w.demand = 1 + static_cast<std::int64_t>(std::floor(464.0 * std::pow(x, 10.0)));
      }
      inst.demands.push_back(w);
    }
  }
  compute_private_utilities(inst);

  // Zero-demand pairs stay out of a validated instance.
  std::vector<DemandPair> kept;
  for (const DemandPair& w : inst.demands)
    if (w.demand > 0) kept.push_back(w);
  for (std::size_t i = 0; i < kept.size(); ++i) kept[i].id = static_cast<int>(i);
  inst.demands = std::move(kept);

  validate(inst);
  return inst;
}

}  // namespace

TransitInstance generate_synthetic(unsigned int seed, SizeClass size) {
  for (int attempt = 0; attempt < 400; ++attempt) {
    Rng rng(seed * 7919u + static_cast<unsigned int>(attempt) * 104729u + 13u);
    try {
      switch (size) {
        case SizeClass::tiny: {
          TransitInstance inst = tiny_attempt(rng);
          if (!tiny_acceptable(inst)) continue;
          return inst;
        }
        case SizeClass::small:
          return small_attempt(rng);
        case SizeClass::seville_like:
          return seville_like_attempt(rng);
      }
    } catch (const ValidationError&) {
      continue;  // jittered geometry occasionally breaks an invariant; redraw
    } catch (const std::runtime_error&) {
      continue;
    }
  }
  throw std::runtime_error("generate_synthetic: no acceptable instance after 400 attempts");
}

}  // namespace lineopt
