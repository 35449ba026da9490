#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "lineopt/bb.hpp"
#include "lineopt/formulation.hpp"
#include "lineopt/oracle.hpp"
#include "lineopt/synthetic.hpp"
#include "test_support.hpp"

using namespace lineopt;
using lineopt::testing::data_path;
using lineopt::testing::minimal_instance;

TEST_CASE("minimal instance produces the expected design variables") {
  TransitInstance inst = minimal_instance();
  BuiltModel built = build_ind(inst);
  int x_rapid = 0, z_rapid = 0, y_rapid = 0, x_slow = 0, z_slow = 0;
  for (const VarKey& k : built.dir.keys()) {
    if (k.kind == VarKind::x_rapid) ++x_rapid;
    if (k.kind == VarKind::z_rapid) ++z_rapid;
    if (k.kind == VarKind::y_rapid) ++y_rapid;
    if (k.kind == VarKind::x_slow) ++x_slow;
    if (k.kind == VarKind::z_slow) ++z_slow;
  }
  CHECK(x_rapid == 1);
  CHECK(z_rapid == 2);
  CHECK(y_rapid == 2);
  CHECK(x_slow == 1);
  CHECK(z_slow == 2);
}

TEST_CASE("one stop/non-stop exclusion row per rapid node") {
  for (unsigned seed : {1u, 2u}) {
    TransitInstance inst = generate_synthetic(seed, SizeClass::tiny);
    BuiltModel built = build_ind(inst);
    CHECK(built.model.rows_in_family(RowFamily::design_6) ==
          static_cast<int>(inst.rapid_nodes.size()));
  }
}

TEST_CASE("column count matches the closed form") {
  for (unsigned seed : {1u, 2u, 3u, 4u}) {
    TransitInstance inst = generate_synthetic(seed, SizeClass::tiny);
    BuiltModel built = build_ind(inst);
    CHECK(static_cast<long long>(built.model.num_cols()) == expected_ind_columns(inst));
    CHECK(built.dir.size() == built.model.num_cols());
  }
}

TEST_CASE("every row carries a tag and no row is empty") {
  TransitInstance inst = generate_synthetic(1, SizeClass::tiny);
  BuiltModel built = build_ind(inst);
  REQUIRE(built.model.row_tags.size() == built.model.rows.size());
  for (int i = 0; i < built.model.num_rows(); ++i) {
    CHECK_FALSE(built.model.rows[static_cast<std::size_t>(i)].coef.empty());
    CHECK(built.model.row_tags[static_cast<std::size_t>(i)].family != RowFamily::other);
  }
  for (int j = 0; j < built.model.num_cols(); ++j) {
    CHECK(built.model.is_integer[static_cast<std::size_t>(j)]);
    CHECK(built.model.lower[static_cast<std::size_t>(j)] == 0.0);
    CHECK(built.model.upper[static_cast<std::size_t>(j)] == 1.0);
  }
}

TEST_CASE("all-zero assignment extracts to an empty coverage") {
  TransitInstance inst = minimal_instance();
  BuiltModel built = build_ind(inst);
  std::vector<double> values(static_cast<std::size_t>(built.model.num_cols()), 0.0);
  // An all-zero vector violates the origin/destination selection rows; pick
  // a legal design with zero coverage instead.
  values[static_cast<std::size_t>(built.dir.require({VarKind::x_rapid, -1, 0}))] = 1;
  values[static_cast<std::size_t>(built.dir.require({VarKind::z_rapid, -1, 0}))] = 1;
  values[static_cast<std::size_t>(built.dir.require({VarKind::z_rapid, -1, 1}))] = 1;
  values[static_cast<std::size_t>(built.dir.require({VarKind::x_slow, -1, 1}))] = 1;
  values[static_cast<std::size_t>(built.dir.require({VarKind::z_slow, -1, 2}))] = 1;
  values[static_cast<std::size_t>(built.dir.require({VarKind::z_slow, -1, 3}))] = 1;
  const DesignSolution sol = extract_solution(inst, built, values);
  CHECK(sol.objective == 0.0);
  CHECK(sol.stats.total() == 0);
  CHECK(sol.stats.pairs_rapid == 0);
  CHECK(sol.stats.pairs_slow == 0);
  CHECK(sol.stats.pairs_both == 0);
}

TEST_CASE("extraction rejects non-integral and infeasible inputs") {
  TransitInstance inst = minimal_instance();
  BuiltModel built = build_ind(inst);
  std::vector<double> values(static_cast<std::size_t>(built.model.num_cols()), 0.0);
  values[0] = 0.5;
  CHECK_THROWS_AS(extract_solution(inst, built, values), std::invalid_argument);
  std::vector<double> zeros(static_cast<std::size_t>(built.model.num_cols()), 0.0);
  CHECK_THROWS_AS(extract_solution(inst, built, zeros), std::invalid_argument);
}

TEST_CASE("a combined-mode routing lands in the both-modes bucket") {
  const TransitInstance inst = load_instance(data_path("seq_gap_demo.json"));
  const OracleResult res = solve_exact(inst);
  CHECK(res.solution.stats.demand_both == 7);
  CHECK(res.solution.stats.pairs_both == 1);
  CHECK(res.solution.stats.demand_rapid == 6);
  CHECK(res.solution.objective == doctest::Approx(13));
}

TEST_CASE("rapid-only pair lands in the rapid bucket") {
  TransitInstance inst = generate_synthetic(1, SizeClass::tiny);
  BuiltModel built = build_ind(inst);
  BbOptions opt;
  opt.branch_priority = default_branch_priorities(built.dir);
  const MilpResult res = solve_milp(built.model, {}, opt);
  REQUIRE(res.values.has_value());
  const DesignSolution sol = extract_solution(inst, built, *res.values);
  CHECK(sol.stats.total() == static_cast<std::int64_t>(std::llround(sol.objective)));
  for (const PairAssignment& a : sol.assignments) {
    if (!a.covered) continue;
    bool rapid = false, slow = false;
    for (const Leg& l : a.legs) {
      if (l.kind != LegKind::ride) continue;
      (l.mode == Mode::rapid ? rapid : slow) = true;
    }
    CHECK((rapid || slow));
  }
}

TEST_CASE("oracle solutions pass the independent audit") {
  for (unsigned seed : {1u, 2u, 3u}) {
    TransitInstance inst = generate_synthetic(seed, SizeClass::tiny);
    const OracleResult res = solve_exact(inst);
    const FeasibilityReport rep = check_feasibility(inst, res.solution);
    INFO(rep.first_failure());
    CHECK(rep.ok);
  }
}

TEST_CASE("the audit flags stations placed too close") {
  TransitInstance inst = generate_synthetic(1, SizeClass::tiny);
  const OracleResult res = solve_exact(inst);
  DesignSolution sol = res.solution;
  // Pretend every rapid line node is a station; the corridor spacing breaks.
  TransitInstance tight = inst;
  tight.params.min_station_spacing = 1e7;
  const FeasibilityReport rep = check_feasibility(tight, sol);
  bool spacing_failed = false;
  for (const FamilyCheck& f : rep.families)
    if (f.family == "spacing" && !f.pass) spacing_failed = true;
  CHECK(spacing_failed);
}

TEST_CASE("the audit flags a cyclic edge choice") {
  // A slow network with a 3-cycle next to the old line.
  TransitInstance t = minimal_instance();
  auto add_node = [&](double x, double y, bool rapid, bool slow) {
    Node n;
    n.id = static_cast<int>(t.nodes.size());
    n.position = {x, y};
    n.in_rapid = rapid;
    n.in_slow = slow;
    t.nodes.push_back(n);
    return n.id;
  };
  auto add_edge = [&](int a, int b, bool rapid, bool slow) {
    Edge e;
    e.id = static_cast<int>(t.edges.size());
    e.endpoints[0] = a;
    e.endpoints[1] = b;
    e.in_rapid = rapid;
    e.in_slow = slow;
    e.length = distance(t.nodes[static_cast<std::size_t>(a)].position,
                        t.nodes[static_cast<std::size_t>(b)].position);
    t.edges.push_back(e);
    return e.id;
  };
  const int a = add_node(300, 2000, false, true);
  const int b = add_node(900, 2000, false, true);
  const int c = add_node(600, 2500, false, true);
  const int e1 = add_edge(a, b, false, true);
  const int e2 = add_edge(b, c, false, true);
  const int e3 = add_edge(c, a, false, true);
  t.params.max_slow_edges = 5;
  t.arcs.clear();
  t.walk_links.clear();
  validate(t);

  DesignSolution sol;
  sol.rapid_edges = {0};
  sol.rapid_stops = {0, 1};
  sol.slow_edges = {1, e1, e2, e3};  // old line plus a disjoint triangle
  sol.slow_stops = {2, 3, a, b, c};
  const FeasibilityReport rep = check_feasibility(t, sol);
  bool chain_failed = false;
  for (const FamilyCheck& f : rep.families)
    if (f.family == "slow_path_structure" && !f.pass) chain_failed = true;
  CHECK(chain_failed);
  CHECK_FALSE(rep.ok);
}

TEST_CASE("sequential equals integrated when the slow line cannot help") {
  // In the minimal instance the single pair walks to the rapid ends only.
  TransitInstance inst = minimal_instance();
  inst.centroids[0].position = {-180, 40};
  inst.centroids[1].position = {1380, 60};
  inst.demands[0].private_utility = 30.0;
  inst.walk_links.clear();
  validate(inst);

  const OracleResult joint = solve_exact(inst);
  const SequentialOracleResult seq = solve_sequential_exact(inst);
  CHECK(joint.objective == seq.objective);
  CHECK(joint.objective == 5);
}

TEST_CASE("the shipped demo shows the strict sequential gap") {
  const TransitInstance inst = load_instance(data_path("seq_gap_demo.json"));
  const OracleResult joint = solve_exact(inst);
  const SequentialOracleResult seq = solve_sequential_exact(inst);
  CHECK(joint.objective == 13);
  CHECK(seq.objective == 10);
  CHECK(seq.stage1_objective == 10);
  CHECK(seq.objective < joint.objective);
}

TEST_CASE("stage two rejects a broken rapid design") {
  TransitInstance inst = generate_synthetic(1, SizeClass::tiny);
  SequentialModels seq = build_sequential(inst);
  DesignSolution bogus;
  bogus.rapid_edges = {inst.rapid_edges.front()};
  // no stops at all: violates the terminal selection rows
  CHECK_THROWS_AS(seq.stage2(bogus), std::invalid_argument);
}

TEST_CASE("stage one carries no slow variables") {
  TransitInstance inst = generate_synthetic(1, SizeClass::tiny);
  SequentialModels seq = build_sequential(inst);
  for (const VarKey& k : seq.stage1.dir.keys()) {
    CHECK(k.kind != VarKind::x_slow);
    CHECK(k.kind != VarKind::z_slow);
    CHECK(k.kind != VarKind::f_slow_arc);
    CHECK(k.kind != VarKind::f_transfer_sr);
    CHECK(k.kind != VarKind::f_transfer_rs);
    CHECK(k.kind != VarKind::v_origin_slow);
    CHECK(k.kind != VarKind::v_dest_slow);
    CHECK(k.kind != VarKind::h_slow);
  }
}

TEST_CASE("shape rows appear only under the flag and spare straight turns") {
  // Three collinear rapid nodes and one sharp spur.
  TransitInstance t = minimal_instance();
  auto add_rapid_node = [&](double x, double y) {
    Node n;
    n.id = static_cast<int>(t.nodes.size());
    n.position = {x, y};
    n.in_rapid = true;
    t.nodes.push_back(n);
    return n.id;
  };
  const int m = add_rapid_node(2400, 0);  // node 1 at (1200, 0): 0 - 1 - m collinear
  const int spur = add_rapid_node(1100, 900);
  Edge e;
  e.id = static_cast<int>(t.edges.size());
  e.endpoints[0] = 1;
  e.endpoints[1] = m;
  e.in_rapid = true;
  e.length = 1200;
  t.edges.push_back(e);
  Edge e2;
  e2.id = static_cast<int>(t.edges.size());
  e2.endpoints[0] = 1;
  e2.endpoints[1] = spur;
  e2.in_rapid = true;
  e2.length = distance(t.nodes[1].position, t.nodes[static_cast<std::size_t>(spur)].position);
  t.edges.push_back(e2);
  t.params.max_rapid_edges = 3;
  t.nodes[static_cast<std::size_t>(m)].rapid_dest = true;
  t.arcs.clear();
  t.walk_links.clear();
  validate(t);

  BuiltModel plain = build_ind(t);
  CHECK(plain.model.rows_in_family(RowFamily::shape) == 0);

  t.params.enable_shape_constraints = true;
  BuiltModel shaped = build_ind(t);
  const int shape_rows = shaped.model.rows_in_family(RowFamily::shape);
  CHECK(shape_rows > 0);

  // The straight continuation 0 -> 1 -> m must not be forbidden: no shape row
  // may contain both the arc into node 1 from 0 and the arc out to m.
  int in_arc = -1, straight_out = -1, spur_out = -1;
  for (const Arc& a : t.arcs) {
    if (a.mode != Mode::rapid) continue;
    if (a.tail == 0 && a.head == 1) in_arc = a.id;
    if (a.tail == 1 && a.head == m) straight_out = a.id;
    if (a.tail == 1 && a.head == spur) spur_out = a.id;
  }
  REQUIRE(in_arc >= 0);
  REQUIRE(straight_out >= 0);
  REQUIRE(spur_out >= 0);
  const int w = t.demands[0].id;
  const int col_in = shaped.dir.require({VarKind::f_rapid_arc, w, in_arc});
  const int col_straight = shaped.dir.require({VarKind::f_rapid_arc, w, straight_out});
  const int col_spur = shaped.dir.require({VarKind::f_rapid_arc, w, spur_out});
  bool straight_forbidden = false, spur_forbidden = false;
  for (int i = 0; i < shaped.model.num_rows(); ++i) {
    if (shaped.model.row_tags[static_cast<std::size_t>(i)].family != RowFamily::shape) continue;
    const LpRow& row = shaped.model.rows[static_cast<std::size_t>(i)];
    bool has_in = false, has_straight = false, has_spur = false;
    for (const auto& [j, v] : row.coef) {
      if (j == col_in) has_in = true;
      if (j == col_straight) has_straight = true;
      if (j == col_spur) has_spur = true;
    }
    if (has_in && has_straight) straight_forbidden = true;
    if (has_in && has_spur) spur_forbidden = true;
  }
  CHECK_FALSE(straight_forbidden);  // 180-degree continuation stays legal
  CHECK(spur_forbidden);            // acute turn is excluded
}
