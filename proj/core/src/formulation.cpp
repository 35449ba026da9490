#include "lineopt/formulation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace lineopt {

namespace {

constexpr double kIntTol = 1e-6;
constexpr double kFeasTol = 1e-6;

// Walk caps compare distances in meters; links store minutes.
double link_distance_m(const TransitInstance& inst, double walk_minutes) {
  return walk_minutes * inst.params.walk_speed * 1000.0 / 60.0;
}

struct WalkIndex {
  // (centroid, node) -> walk minutes, one map per mode.
  std::map<std::pair<int, int>, double> by_mode[2];

  explicit WalkIndex(const TransitInstance& inst) {
    for (const WalkLink& l : inst.walk_links)
      by_mode[static_cast<int>(l.mode)][{l.centroid, l.station}] = l.walk_time;
  }
  std::optional<double> minutes(int centroid, int node, Mode m) const {
    const auto& mp = by_mode[static_cast<int>(m)];
    auto it = mp.find({centroid, node});
    if (it == mp.end()) return std::nullopt;
    return it->second;
  }
};

class Builder {
 public:
  Builder(const TransitInstance& inst, const BuildOptions& opts)
      : inst_(inst), opts_(opts), walks_(inst) {}

  BuiltModel build() {
    add_design_columns();
    for (const DemandPair& w : inst_.demands) add_pair_columns(w);
    add_design_rows();
    for (const DemandPair& w : inst_.demands) add_pair_rows(w);
    built_.model.maximize = true;
    built_.model.name = inst_.name.empty() ? "ind" : inst_.name;
    return std::move(built_);
  }

 private:
  const TransitInstance& inst_;
  const BuildOptions& opts_;
  WalkIndex walks_;
  BuiltModel built_;

  bool slow_side() const { return !opts_.rapid_only; }
  bool has_flows(int pair) const {
    if (!opts_.flow_pairs) return true;
    return std::binary_search(opts_.flow_pairs->begin(), opts_.flow_pairs->end(), pair);
  }

  int bin(const VarKey& key, double obj = 0.0) {
    const int col = built_.model.add_col(0.0, 1.0, obj, true);
    const int dcol = built_.dir.add(key);
    if (col != dcol) throw std::logic_error("column/directory drift");
    return col;
  }

  int col(VarKind kind, int pair, int entity) const {
    return built_.dir.require(VarKey{kind, pair, entity});
  }

  void add_design_columns() {
    for (int e : inst_.rapid_edges) bin({VarKind::x_rapid, -1, e});
    if (slow_side())
      for (int e : inst_.slow_edges) bin({VarKind::x_slow, -1, e});
    for (int i : inst_.rapid_nodes) bin({VarKind::y_rapid, -1, i});
    for (int i : inst_.rapid_nodes) bin({VarKind::z_rapid, -1, i});
    if (slow_side())
      for (int i : inst_.slow_nodes) bin({VarKind::z_slow, -1, i});
  }

  void add_pair_columns(const DemandPair& w) {
    bin({VarKind::f_pair, w.id, -1}, static_cast<double>(w.demand));
    if (has_flows(w.id)) {
      for (const Arc& a : inst_.arcs)
        if (a.mode == Mode::rapid) bin({VarKind::f_rapid_arc, w.id, a.id});
      if (slow_side()) {
        for (const Arc& a : inst_.arcs)
          if (a.mode == Mode::slow) bin({VarKind::f_slow_arc, w.id, a.id});
        for (int k : inst_.transfer_nodes) bin({VarKind::f_transfer_sr, w.id, k});
        for (int k : inst_.transfer_nodes) bin({VarKind::f_transfer_rs, w.id, k});
      }
    }
    for (int k : inst_.rapid_nodes) bin({VarKind::v_origin_rapid, w.id, k});
    if (slow_side())
      for (int k : inst_.slow_nodes) bin({VarKind::v_origin_slow, w.id, k});
    for (int k : inst_.rapid_nodes) bin({VarKind::v_dest_rapid, w.id, k});
    if (slow_side())
      for (int k : inst_.slow_nodes) bin({VarKind::v_dest_slow, w.id, k});
    for (const Arc& a : inst_.arcs)
      if (a.mode == Mode::rapid) bin({VarKind::h_rapid, w.id, a.id});
    if (slow_side())
      for (const Arc& a : inst_.arcs)
        if (a.mode == Mode::slow) bin({VarKind::h_slow, w.id, a.id});
  }

  void row(std::vector<std::pair<int, double>> coef, char sense, double rhs, RowFamily fam,
           int pair = -1, int entity = -1) {
    built_.model.add_row(std::move(coef), sense, rhs, RowTag{fam, pair, entity});
  }

  void add_design_rows() {
    const InstanceParams& p = inst_.params;

    {
      std::vector<std::pair<int, double>> c;
      for (int e : inst_.rapid_edges) c.emplace_back(col(VarKind::x_rapid, -1, e), 1.0);
      row(std::move(c), '<', p.max_rapid_edges, RowFamily::budget_rapid);
    }
    if (slow_side()) {
      std::vector<std::pair<int, double>> c;
      for (int e : inst_.slow_edges) c.emplace_back(col(VarKind::x_slow, -1, e), 1.0);
      row(std::move(c), '<', p.max_slow_edges, RowFamily::budget_slow);
    }

    for (int e : inst_.rapid_edges) {
      for (int s = 0; s < 2; ++s) {
        const int i = inst_.edge(e).endpoints[s];
        row({{col(VarKind::x_rapid, -1, e), 1.0},
             {col(VarKind::z_rapid, -1, i), -1.0},
             {col(VarKind::y_rapid, -1, i), -1.0}},
            '<', 0.0, RowFamily::design_1, -1, e);
      }
    }
    {
      std::vector<std::pair<int, double>> c;
      for (int o : inst_.rapid_origins) c.emplace_back(col(VarKind::z_rapid, -1, o), 1.0);
      row(std::move(c), '=', 1.0, RowFamily::design_2);
    }
    {
      std::vector<std::pair<int, double>> c;
      for (int d : inst_.rapid_dests) c.emplace_back(col(VarKind::z_rapid, -1, d), 1.0);
      row(std::move(c), '=', 1.0, RowFamily::design_3);
    }
    {
      std::map<int, double> acc;
      for (int o : inst_.rapid_origins)
        for (int e : inst_.edges_at(o, Mode::rapid)) acc[col(VarKind::x_rapid, -1, e)] += 1.0;
      row({acc.begin(), acc.end()}, '=', 1.0, RowFamily::design_4);
    }
    {
      std::map<int, double> acc;
      for (int d : inst_.rapid_dests)
        for (int e : inst_.edges_at(d, Mode::rapid)) acc[col(VarKind::x_rapid, -1, e)] += 1.0;
      row({acc.begin(), acc.end()}, '=', 1.0, RowFamily::design_5);
    }
    for (int i : inst_.rapid_nodes) {
      row({{col(VarKind::z_rapid, -1, i), 1.0}, {col(VarKind::y_rapid, -1, i), 1.0}}, '<', 1.0,
          RowFamily::design_6, -1, i);
    }
    {
      std::vector<std::pair<int, double>> c;
      for (int e : inst_.rapid_edges) c.emplace_back(col(VarKind::x_rapid, -1, e), 1.0);
      for (int i : inst_.rapid_nodes) {
        c.emplace_back(col(VarKind::y_rapid, -1, i), -1.0);
        c.emplace_back(col(VarKind::z_rapid, -1, i), -1.0);
      }
      row(std::move(c), '=', -1.0, RowFamily::design_7);
    }
    {
      std::set<int> terminals(inst_.rapid_origins.begin(), inst_.rapid_origins.end());
      terminals.insert(inst_.rapid_dests.begin(), inst_.rapid_dests.end());
      for (int k : inst_.rapid_nodes) {
        if (terminals.count(k)) continue;
        std::vector<std::pair<int, double>> c;
        for (int e : inst_.edges_at(k, Mode::rapid)) c.emplace_back(col(VarKind::x_rapid, -1, e), 1.0);
        c.emplace_back(col(VarKind::z_rapid, -1, k), -2.0);
        c.emplace_back(col(VarKind::y_rapid, -1, k), -2.0);
        row(std::move(c), '=', 0.0, RowFamily::design_8, -1, k);
      }
    }

    if (slow_side()) {
      for (int e : inst_.slow_edges) {
        for (int s = 0; s < 2; ++s) {
          const int i = inst_.edge(e).endpoints[s];
          row({{col(VarKind::x_slow, -1, e), 1.0}, {col(VarKind::z_slow, -1, i), -1.0}}, '<', 0.0,
              RowFamily::design_9, -1, e);
        }
      }
      {
        std::vector<std::pair<int, double>> c;
        for (int o : inst_.slow_origins) c.emplace_back(col(VarKind::z_slow, -1, o), 1.0);
        row(std::move(c), '=', 1.0, RowFamily::design_10);
      }
      {
        std::vector<std::pair<int, double>> c;
        for (int d : inst_.slow_dests) c.emplace_back(col(VarKind::z_slow, -1, d), 1.0);
        row(std::move(c), '=', 1.0, RowFamily::design_11);
      }
      {
        std::map<int, double> acc;
        for (int o : inst_.slow_origins)
          for (int e : inst_.edges_at(o, Mode::slow)) acc[col(VarKind::x_slow, -1, e)] += 1.0;
        row({acc.begin(), acc.end()}, '=', 1.0, RowFamily::design_12);
      }
      {
        std::map<int, double> acc;
        for (int d : inst_.slow_dests)
          for (int e : inst_.edges_at(d, Mode::slow)) acc[col(VarKind::x_slow, -1, e)] += 1.0;
        row({acc.begin(), acc.end()}, '=', 1.0, RowFamily::design_13);
      }
      {
        std::vector<std::pair<int, double>> c;
        for (int e : inst_.slow_edges) c.emplace_back(col(VarKind::x_slow, -1, e), 1.0);
        for (int i : inst_.slow_nodes) c.emplace_back(col(VarKind::z_slow, -1, i), -1.0);
        row(std::move(c), '=', -1.0, RowFamily::design_14);
      }
      {
        std::set<int> terminals(inst_.slow_origins.begin(), inst_.slow_origins.end());
        terminals.insert(inst_.slow_dests.begin(), inst_.slow_dests.end());
        for (int k : inst_.slow_nodes) {
          if (terminals.count(k)) continue;
          std::vector<std::pair<int, double>> c;
          for (int e : inst_.edges_at(k, Mode::slow)) c.emplace_back(col(VarKind::x_slow, -1, e), 1.0);
          c.emplace_back(col(VarKind::z_slow, -1, k), -2.0);
          row(std::move(c), '=', 0.0, RowFamily::design_15, -1, k);
        }
      }
      {
        std::vector<std::pair<int, double>> c;
        for (int e : inst_.slow_edges)
          if (inst_.edge(e).on_old_slow_line) c.emplace_back(col(VarKind::x_slow, -1, e), 1.0);
        if (!c.empty())
          row(std::move(c), '>', p.min_unchanged_slow_edges, RowFamily::design_16);
        else if (p.min_unchanged_slow_edges > 0)
          throw std::invalid_argument("min_unchanged_slow_edges > 0 but no old-line edges");
      }
    }

    // No two rapid stations within the spacing radius.
    for (int i : inst_.rapid_nodes) {
      std::vector<std::pair<int, double>> c{{col(VarKind::z_rapid, -1, i), 1.0}};
      for (int j : inst_.rapid_nodes) {
        if (j == i) continue;
        if (distance(inst_.node(i).position, inst_.node(j).position) <= p.min_station_spacing)
          c.emplace_back(col(VarKind::z_rapid, -1, j), 1.0);
      }
      row(std::move(c), '<', 1.0, RowFamily::spacing, -1, i);
    }
  }

  void add_pair_rows(const DemandPair& w) {
    const InstanceParams& p = inst_.params;
    const int fw = col(VarKind::f_pair, w.id, -1);
    const bool flows = has_flows(w.id);

    // Station choice sums to the coverage flag.
    {
      std::vector<std::pair<int, double>> c;
      for (int k : inst_.rapid_nodes) c.emplace_back(col(VarKind::v_origin_rapid, w.id, k), 1.0);
      if (slow_side())
        for (int k : inst_.slow_nodes) c.emplace_back(col(VarKind::v_origin_slow, w.id, k), 1.0);
      c.emplace_back(fw, -1.0);
      row(std::move(c), '=', 0.0, RowFamily::relation_3, w.id);
    }
    {
      std::vector<std::pair<int, double>> c;
      for (int k : inst_.rapid_nodes) c.emplace_back(col(VarKind::v_dest_rapid, w.id, k), 1.0);
      if (slow_side())
        for (int k : inst_.slow_nodes) c.emplace_back(col(VarKind::v_dest_slow, w.id, k), 1.0);
      c.emplace_back(fw, -1.0);
      row(std::move(c), '=', 0.0, RowFamily::relation_4, w.id);
    }
    for (int k : inst_.rapid_nodes)
      row({{col(VarKind::v_origin_rapid, w.id, k), 1.0}, {col(VarKind::z_rapid, -1, k), -1.0}}, '<',
          0.0, RowFamily::relation_5, w.id, k);
    if (slow_side())
      for (int k : inst_.slow_nodes)
        row({{col(VarKind::v_origin_slow, w.id, k), 1.0}, {col(VarKind::z_slow, -1, k), -1.0}}, '<',
            0.0, RowFamily::relation_6, w.id, k);
    for (int k : inst_.rapid_nodes)
      row({{col(VarKind::v_dest_rapid, w.id, k), 1.0}, {col(VarKind::z_rapid, -1, k), -1.0}}, '<',
          0.0, RowFamily::relation_7, w.id, k);
    if (slow_side())
      for (int k : inst_.slow_nodes)
        row({{col(VarKind::v_dest_slow, w.id, k), 1.0}, {col(VarKind::z_slow, -1, k), -1.0}}, '<',
            0.0, RowFamily::relation_8, w.id, k);

    // Maximum walking distance; out-of-range station choices are forced off.
    auto walk_rows = [&](VarKind kind, int centroid, RowFamily fam, Mode m, double cap) {
      const auto& nodes = m == Mode::rapid ? inst_.rapid_nodes : inst_.slow_nodes;
      for (int k : nodes) {
        const int v = col(kind, w.id, k);
        const auto minutes = walks_.minutes(centroid, k, m);
        if (minutes) {
          row({{v, link_distance_m(inst_, *minutes)}}, '<', cap, fam, w.id, k);
        } else {
          row({{v, 1.0}}, '<', 0.0, fam, w.id, k);
        }
      }
    };
    walk_rows(VarKind::v_origin_rapid, w.origin, RowFamily::walk_origin_rapid, Mode::rapid,
              p.max_walk_rapid);
    walk_rows(VarKind::v_dest_rapid, w.dest, RowFamily::walk_dest_rapid, Mode::rapid, p.max_walk_rapid);
    if (slow_side()) {
      walk_rows(VarKind::v_origin_slow, w.origin, RowFamily::walk_origin_slow, Mode::slow,
                p.max_walk_slow);
      walk_rows(VarKind::v_dest_slow, w.dest, RowFamily::walk_dest_slow, Mode::slow, p.max_walk_slow);
    }

    // h couples an arc flow with the station flag at the arc tail.
    for (const Arc& a : inst_.arcs) {
      if (a.mode == Mode::rapid) {
        row({{col(VarKind::h_rapid, w.id, a.id), 1.0}, {col(VarKind::z_rapid, -1, a.tail), -1.0}},
            '<', 0.0, RowFamily::lin_r2, w.id, a.id);
      } else if (slow_side()) {
        row({{col(VarKind::h_slow, w.id, a.id), 1.0}, {col(VarKind::z_slow, -1, a.tail), -1.0}}, '<',
            0.0, RowFamily::lin_s2, w.id, a.id);
      }
    }

    if (!flows) return;

    const std::set<int> trans(inst_.transfer_nodes.begin(), inst_.transfer_nodes.end());
    const bool with_transfers = slow_side();

    // Flow conservation away from transfer nodes.
    for (int k : inst_.rapid_nodes) {
      if (with_transfers && trans.count(k)) continue;
      std::vector<std::pair<int, double>> c;
      for (int a : inst_.arcs_out(k, Mode::rapid)) c.emplace_back(col(VarKind::f_rapid_arc, w.id, a), 1.0);
      for (int a : inst_.arcs_in(k, Mode::rapid)) c.emplace_back(col(VarKind::f_rapid_arc, w.id, a), -1.0);
      c.emplace_back(col(VarKind::v_origin_rapid, w.id, k), -1.0);
      c.emplace_back(col(VarKind::v_dest_rapid, w.id, k), 1.0);
      row(std::move(c), '=', 0.0, RowFamily::flow_1, w.id, k);
    }
    if (slow_side()) {
      for (int k : inst_.slow_nodes) {
        if (trans.count(k)) continue;
        std::vector<std::pair<int, double>> c;
        for (int a : inst_.arcs_out(k, Mode::slow)) c.emplace_back(col(VarKind::f_slow_arc, w.id, a), 1.0);
        for (int a : inst_.arcs_in(k, Mode::slow)) c.emplace_back(col(VarKind::f_slow_arc, w.id, a), -1.0);
        c.emplace_back(col(VarKind::v_origin_slow, w.id, k), -1.0);
        c.emplace_back(col(VarKind::v_dest_slow, w.id, k), 1.0);
        row(std::move(c), '=', 0.0, RowFamily::flow_11, w.id, k);
      }
    }

    // Boarding needs an outgoing arc; alighting needs an incoming one.
    for (int k : inst_.rapid_nodes) {
      std::vector<std::pair<int, double>> c{{col(VarKind::v_origin_rapid, w.id, k), 1.0}};
      for (int a : inst_.arcs_out(k, Mode::rapid)) c.emplace_back(col(VarKind::f_rapid_arc, w.id, a), -1.0);
      row(std::move(c), '<', 0.0, RowFamily::flow_2, w.id, k);
    }
    if (slow_side()) {
      for (int k : inst_.slow_nodes) {
        std::vector<std::pair<int, double>> c{{col(VarKind::v_origin_slow, w.id, k), 1.0}};
        for (int a : inst_.arcs_out(k, Mode::slow)) c.emplace_back(col(VarKind::f_slow_arc, w.id, a), -1.0);
        row(std::move(c), '<', 0.0, RowFamily::flow_3, w.id, k);
      }
    }
    for (int k : inst_.rapid_nodes) {
      std::vector<std::pair<int, double>> c{{col(VarKind::v_dest_rapid, w.id, k), 1.0}};
      for (int a : inst_.arcs_in(k, Mode::rapid)) c.emplace_back(col(VarKind::f_rapid_arc, w.id, a), -1.0);
      row(std::move(c), '<', 0.0, RowFamily::flow_4, w.id, k);
    }
    if (slow_side()) {
      for (int k : inst_.slow_nodes) {
        std::vector<std::pair<int, double>> c{{col(VarKind::v_dest_slow, w.id, k), 1.0}};
        for (int a : inst_.arcs_in(k, Mode::slow)) c.emplace_back(col(VarKind::f_slow_arc, w.id, a), -1.0);
        row(std::move(c), '<', 0.0, RowFamily::flow_5, w.id, k);
      }
    }

    // Unassigned pairs may not put flow anywhere.
    for (const Arc& a : inst_.arcs) {
      if (a.mode == Mode::rapid)
        row({{col(VarKind::f_rapid_arc, w.id, a.id), 1.0}, {fw, -1.0}}, '<', 0.0, RowFamily::flow_6,
            w.id, a.id);
      else if (slow_side())
        row({{col(VarKind::f_slow_arc, w.id, a.id), 1.0}, {fw, -1.0}}, '<', 0.0, RowFamily::flow_7,
            w.id, a.id);
    }

    if (with_transfers && !inst_.transfer_nodes.empty()) {
      {
        std::vector<std::pair<int, double>> c;
        for (int k : inst_.transfer_nodes) c.emplace_back(col(VarKind::f_transfer_sr, w.id, k), 1.0);
        row(std::move(c), '<', 1.0, RowFamily::transfer_1, w.id);
      }
      {
        std::vector<std::pair<int, double>> c;
        for (int k : inst_.transfer_nodes) c.emplace_back(col(VarKind::f_transfer_rs, w.id, k), 1.0);
        row(std::move(c), '<', 1.0, RowFamily::transfer_2, w.id);
      }
      for (int k : inst_.transfer_nodes) {
        std::vector<std::pair<int, double>> c;
        for (int a : inst_.arcs_in(k, Mode::rapid)) c.emplace_back(col(VarKind::f_rapid_arc, w.id, a), 1.0);
        c.emplace_back(col(VarKind::f_transfer_sr, w.id, k), 1.0);
        for (int a : inst_.arcs_out(k, Mode::rapid)) c.emplace_back(col(VarKind::f_rapid_arc, w.id, a), -1.0);
        c.emplace_back(col(VarKind::f_transfer_rs, w.id, k), -1.0);
        c.emplace_back(col(VarKind::v_origin_rapid, w.id, k), 1.0);
        c.emplace_back(col(VarKind::v_dest_rapid, w.id, k), -1.0);
        row(std::move(c), '=', 0.0, RowFamily::transfer_3, w.id, k);
      }
      for (int k : inst_.transfer_nodes) {
        std::vector<std::pair<int, double>> c;
        for (int a : inst_.arcs_in(k, Mode::slow)) c.emplace_back(col(VarKind::f_slow_arc, w.id, a), 1.0);
        c.emplace_back(col(VarKind::f_transfer_rs, w.id, k), 1.0);
        for (int a : inst_.arcs_out(k, Mode::slow)) c.emplace_back(col(VarKind::f_slow_arc, w.id, a), -1.0);
        c.emplace_back(col(VarKind::f_transfer_sr, w.id, k), -1.0);
        c.emplace_back(col(VarKind::v_origin_slow, w.id, k), 1.0);
        c.emplace_back(col(VarKind::v_dest_slow, w.id, k), -1.0);
        row(std::move(c), '=', 0.0, RowFamily::transfer_4, w.id, k);
      }
      for (int k : inst_.transfer_nodes) {
        {
          std::vector<std::pair<int, double>> c{{col(VarKind::f_transfer_rs, w.id, k), 1.0}};
          for (int a : inst_.arcs_out(k, Mode::slow)) c.emplace_back(col(VarKind::f_slow_arc, w.id, a), -1.0);
          row(std::move(c), '<', 0.0, RowFamily::transfer_5, w.id, k);
        }
        {
          std::vector<std::pair<int, double>> c{{col(VarKind::f_transfer_rs, w.id, k), 1.0}};
          for (int a : inst_.arcs_in(k, Mode::rapid)) c.emplace_back(col(VarKind::f_rapid_arc, w.id, a), -1.0);
          row(std::move(c), '<', 0.0, RowFamily::transfer_5, w.id, k);
        }
        {
          std::vector<std::pair<int, double>> c{{col(VarKind::f_transfer_sr, w.id, k), 1.0}};
          for (int a : inst_.arcs_in(k, Mode::slow)) c.emplace_back(col(VarKind::f_slow_arc, w.id, a), -1.0);
          row(std::move(c), '<', 0.0, RowFamily::transfer_6, w.id, k);
        }
        {
          std::vector<std::pair<int, double>> c{{col(VarKind::f_transfer_sr, w.id, k), 1.0}};
          for (int a : inst_.arcs_out(k, Mode::rapid)) c.emplace_back(col(VarKind::f_rapid_arc, w.id, a), -1.0);
          row(std::move(c), '<', 0.0, RowFamily::transfer_6, w.id, k);
        }
      }
      for (int k : inst_.transfer_nodes) {
        row({{col(VarKind::f_transfer_sr, w.id, k), 1.0},
             {col(VarKind::f_transfer_rs, w.id, k), 1.0},
             {col(VarKind::z_rapid, -1, k), -1.0}},
            '<', 0.0, RowFamily::alignment_1, w.id, k);
        row({{col(VarKind::f_transfer_sr, w.id, k), 1.0},
             {col(VarKind::f_transfer_rs, w.id, k), 1.0},
             {col(VarKind::z_slow, -1, k), -1.0}},
            '<', 0.0, RowFamily::alignment_2, w.id, k);
      }
    }

    // Flow only on built edges, one direction per edge and per mode.
    std::map<int, std::pair<int, int>> arcs_of_edge[2];  // edge -> (fwd, rev) arc ids
    for (const Arc& a : inst_.arcs) {
      auto& slot = arcs_of_edge[static_cast<int>(a.mode)][a.edge];
      if (a.tail == inst_.edge(a.edge).endpoints[0]) slot.first = a.id;
      else slot.second = a.id;
    }
    for (int e : inst_.rapid_edges) {
      const auto [fwd, rev] = arcs_of_edge[0][e];
      row({{col(VarKind::f_rapid_arc, w.id, fwd), 1.0},
           {col(VarKind::f_rapid_arc, w.id, rev), 1.0},
           {col(VarKind::x_rapid, -1, e), -1.0}},
          '<', 0.0, RowFamily::loc_allo_1, w.id, e);
    }
    if (slow_side()) {
      for (int e : inst_.slow_edges) {
        const auto [fwd, rev] = arcs_of_edge[1][e];
        row({{col(VarKind::f_slow_arc, w.id, fwd), 1.0},
             {col(VarKind::f_slow_arc, w.id, rev), 1.0},
             {col(VarKind::x_slow, -1, e), -1.0}},
            '<', 0.0, RowFamily::loc_allo_2, w.id, e);
      }
      for (const Edge& e : inst_.edges) {
        if (!e.in_rapid || !e.in_slow) continue;
        const auto [rf, rr] = arcs_of_edge[0][e.id];
        const auto [sf, sr] = arcs_of_edge[1][e.id];
        row({{col(VarKind::f_rapid_arc, w.id, rf), 1.0},
             {col(VarKind::f_rapid_arc, w.id, rr), 1.0},
             {col(VarKind::f_slow_arc, w.id, sf), 1.0},
             {col(VarKind::f_slow_arc, w.id, sr), 1.0}},
            '<', 1.0, RowFamily::loc_allo_3, w.id, e.id);
      }
    }

    // Mode choice: total public time may not exceed the private utility.
    {
      std::vector<std::pair<int, double>> c;
      for (int k : inst_.rapid_nodes) {
        if (auto t = walks_.minutes(w.origin, k, Mode::rapid))
          c.emplace_back(col(VarKind::v_origin_rapid, w.id, k), *t);
        if (auto t = walks_.minutes(w.dest, k, Mode::rapid))
          c.emplace_back(col(VarKind::v_dest_rapid, w.id, k), *t);
      }
      if (slow_side()) {
        for (int k : inst_.slow_nodes) {
          if (auto t = walks_.minutes(w.origin, k, Mode::slow))
            c.emplace_back(col(VarKind::v_origin_slow, w.id, k), *t);
          if (auto t = walks_.minutes(w.dest, k, Mode::slow))
            c.emplace_back(col(VarKind::v_dest_slow, w.id, k), *t);
        }
      }
      for (const Arc& a : inst_.arcs) {
        if (a.mode == Mode::rapid) {
          c.emplace_back(col(VarKind::f_rapid_arc, w.id, a.id), a.traverse_time);
          c.emplace_back(col(VarKind::h_rapid, w.id, a.id), p.stop_time_rapid);
        } else if (slow_side()) {
          c.emplace_back(col(VarKind::f_slow_arc, w.id, a.id), a.traverse_time);
          c.emplace_back(col(VarKind::h_slow, w.id, a.id), p.stop_time_slow);
        }
      }
      if (with_transfers) {
        for (int k : inst_.transfer_nodes) {
          c.emplace_back(col(VarKind::f_transfer_rs, w.id, k), p.transfer_time_rs);
          c.emplace_back(col(VarKind::f_transfer_sr, w.id, k), p.transfer_time_sr);
        }
      }
      c.emplace_back(fw, p.wait_time - 0.5 * p.stop_time_rapid - w.private_utility);
      row(std::move(c), '<', 0.0, RowFamily::mode_choice, w.id);
    }

    // Linearization of flow * station products.
    for (const Arc& a : inst_.arcs) {
      if (a.mode == Mode::rapid) {
        row({{col(VarKind::h_rapid, w.id, a.id), 1.0}, {col(VarKind::f_rapid_arc, w.id, a.id), -1.0}},
            '<', 0.0, RowFamily::lin_r1, w.id, a.id);
        row({{col(VarKind::f_rapid_arc, w.id, a.id), 1.0},
             {col(VarKind::z_rapid, -1, a.tail), 1.0},
             {col(VarKind::h_rapid, w.id, a.id), -1.0}},
            '<', 1.0, RowFamily::lin_r3, w.id, a.id);
      } else if (slow_side()) {
        row({{col(VarKind::h_slow, w.id, a.id), 1.0}, {col(VarKind::f_slow_arc, w.id, a.id), -1.0}},
            '<', 0.0, RowFamily::lin_s1, w.id, a.id);
        row({{col(VarKind::f_slow_arc, w.id, a.id), 1.0},
             {col(VarKind::z_slow, -1, a.tail), 1.0},
             {col(VarKind::h_slow, w.id, a.id), -1.0}},
            '<', 1.0, RowFamily::lin_s3, w.id, a.id);
      }
    }

    // Optional anti-zigzag rows: an acute turn between consecutive rapid arcs
    // is forbidden for every pair's route.
    if (p.enable_shape_constraints) {
      for (int k : inst_.rapid_nodes) {
        const Point& pk = inst_.node(k).position;
        for (int a_in : inst_.arcs_in(k, Mode::rapid)) {
          const Arc& ain = inst_.arc(a_in);
          const Point& pi = inst_.node(ain.tail).position;
          std::vector<std::pair<int, double>> c{{col(VarKind::f_rapid_arc, w.id, a_in), 1.0}};
          for (int b_out : inst_.arcs_out(k, Mode::rapid)) {
            const Arc& bout = inst_.arc(b_out);
            if (bout.edge == ain.edge) continue;  // immediate backtrack handled by loc_allo
            const Point& pj = inst_.node(bout.head).position;
            const double dot =
                (pi.x - pk.x) * (pj.x - pk.x) + (pi.y - pk.y) * (pj.y - pk.y);
            if (dot >= 0.0)  // angle <= 90 degrees
              c.emplace_back(col(VarKind::f_rapid_arc, w.id, b_out), 1.0);
          }
          if (c.size() > 1) row(std::move(c), '<', 1.0, RowFamily::shape, w.id, a_in);
        }
      }
    }
  }
};

}  // namespace

BuiltModel build_ind(const TransitInstance& inst) { return build_ind_model(inst, BuildOptions{}); }

BuiltModel build_ind_model(const TransitInstance& inst, const BuildOptions& opts) {
  if (inst.rapid_origins.empty() || inst.rapid_dests.empty())
    throw std::invalid_argument("instance has no rapid origin/destination candidates");
  if (!opts.rapid_only && (inst.slow_origins.empty() || inst.slow_dests.empty()))
    throw std::invalid_argument("instance has no slow origin/destination candidates");
  BuildOptions sorted = opts;
  if (sorted.flow_pairs) std::sort(sorted.flow_pairs->begin(), sorted.flow_pairs->end());
  Builder b(inst, sorted);
  return b.build();
}

long long expected_ind_columns(const TransitInstance& inst) {
  const long long er = static_cast<long long>(inst.rapid_edges.size());
  const long long es = static_cast<long long>(inst.slow_edges.size());
  const long long nr = static_cast<long long>(inst.rapid_nodes.size());
  const long long ns = static_cast<long long>(inst.slow_nodes.size());
  const long long nt = static_cast<long long>(inst.transfer_nodes.size());
  const long long ar = inst.num_rapid_arcs;
  const long long as = inst.num_slow_arcs;
  const long long w = static_cast<long long>(inst.demands.size());
  return er + es + 2 * nr + ns + w * (1 + ar + as + 2 * nt + 2 * nr + 2 * ns + ar + as);
}

std::vector<int> default_branch_priorities(const VarDirectory& dir) {
  std::vector<int> prio(static_cast<std::size_t>(dir.size()), 8);
  for (int c = 0; c < dir.size(); ++c) {
    int p = 8;
    switch (dir.key(c).kind) {
      case VarKind::x_rapid: p = 0; break;
      case VarKind::x_slow: p = 1; break;
      case VarKind::z_rapid: p = 2; break;
      case VarKind::z_slow: p = 3; break;
      case VarKind::y_rapid: p = 4; break;
      case VarKind::f_pair: p = 5; break;
      case VarKind::v_origin_rapid:
      case VarKind::v_origin_slow:
      case VarKind::v_dest_rapid:
      case VarKind::v_dest_slow: p = 6; break;
      case VarKind::h_rapid:
      case VarKind::h_slow: p = 7; break;
      default: p = 8; break;
    }
    prio[static_cast<std::size_t>(c)] = p;
  }
  return prio;
}

// ---------------------------------------------------------------------------
// Sequential baseline

SequentialModels build_sequential(const TransitInstance& inst) {
  SequentialModels seq;
  BuildOptions rapid;
  rapid.rapid_only = true;
  seq.stage1 = build_ind_model(inst, rapid);
  const TransitInstance* pinst = &inst;
  seq.stage2 = [pinst](const DesignSolution& rapid_design) {
    // The fixed design must satisfy the rapid-side rows on its own.
    DesignSolution probe = rapid_design;
    probe.slow_edges.clear();
    probe.slow_stops.clear();
    probe.assignments.clear();
    FeasibilityReport rep = check_feasibility(*pinst, probe);
    for (const FamilyCheck& f : rep.families) {
      const bool rapid_family = f.family.find("rapid") != std::string::npos ||
                                f.family.substr(0, 7) == "design_" || f.family == "spacing" ||
                                f.family == "budget";
      if (!f.pass && rapid_family && f.family.find("slow") == std::string::npos)
        throw std::invalid_argument("stage-2 called with an invalid rapid design: " + f.detail);
    }
    BuiltModel built = build_ind(*pinst);
    auto fix = [&](VarKind kind, int entity, bool on) {
      const int c = built.dir.require(VarKey{kind, -1, entity});
      built.model.lower[static_cast<std::size_t>(c)] = on ? 1.0 : 0.0;
      built.model.upper[static_cast<std::size_t>(c)] = on ? 1.0 : 0.0;
    };
    for (int e : pinst->rapid_edges) fix(VarKind::x_rapid, e, rapid_design.has_rapid_edge(e));
    for (int i : pinst->rapid_nodes) {
      fix(VarKind::z_rapid, i, rapid_design.rapid_stop(i));
      const bool nonstop = std::find(rapid_design.rapid_nonstops.begin(),
                                     rapid_design.rapid_nonstops.end(),
                                     i) != rapid_design.rapid_nonstops.end();
      fix(VarKind::y_rapid, i, nonstop);
    }
    return built;
  };
  return seq;
}

// ---------------------------------------------------------------------------
// Solution extraction

namespace {

bool near_int(double v) { return std::abs(v - std::round(v)) <= kIntTol; }

double row_violation(const LpRow& r, const std::vector<double>& x) {
  double lhs = 0;
  for (const auto& [j, v] : r.coef) lhs += v * x[static_cast<std::size_t>(j)];
  if (r.sense == '<') return lhs - r.rhs;
  if (r.sense == '>') return r.rhs - lhs;
  return std::abs(lhs - r.rhs);
}

}  // namespace

DesignSolution extract_solution(const TransitInstance& inst, const BuiltModel& built,
                                const std::vector<double>& values) {
  const MilpModel& model = built.model;
  const VarDirectory& dir = built.dir;
  if (static_cast<int>(values.size()) != model.num_cols())
    throw std::invalid_argument("extract_solution: value vector size mismatch");
  for (int j = 0; j < model.num_cols(); ++j) {
    if (model.is_integer[static_cast<std::size_t>(j)] && !near_int(values[static_cast<std::size_t>(j)]))
      throw std::invalid_argument("extract_solution: non-integral value in column " +
                                  dir.key(j).to_string());
  }
  for (int i = 0; i < model.num_rows(); ++i) {
    if (row_violation(model.rows[static_cast<std::size_t>(i)], values) > kFeasTol)
      throw std::invalid_argument("extract_solution: infeasible at row " +
                                  model.row_tags[static_cast<std::size_t>(i)].to_string());
  }

  auto on = [&](VarKind kind, int pair, int entity) {
    const int c = dir.column(VarKey{kind, pair, entity});
    return c >= 0 && values[static_cast<std::size_t>(c)] > 0.5;
  };

  DesignSolution sol;
  for (int e : inst.rapid_edges)
    if (on(VarKind::x_rapid, -1, e)) sol.rapid_edges.push_back(e);
  for (int e : inst.slow_edges)
    if (on(VarKind::x_slow, -1, e)) sol.slow_edges.push_back(e);
  for (int i : inst.rapid_nodes) {
    if (on(VarKind::z_rapid, -1, i)) sol.rapid_stops.push_back(i);
    if (on(VarKind::y_rapid, -1, i)) sol.rapid_nonstops.push_back(i);
  }
  for (int i : inst.slow_nodes)
    if (on(VarKind::z_slow, -1, i)) sol.slow_stops.push_back(i);

  const InstanceParams& p = inst.params;
  WalkIndex walks(inst);

  for (const DemandPair& w : inst.demands) {
    PairAssignment asg;
    asg.pair = w.id;
    asg.covered = on(VarKind::f_pair, w.id, -1);
    if (asg.covered) {
      // Identify the walk legs.
      int board = -1, alight = -1;
      Mode board_mode = Mode::rapid, alight_mode = Mode::rapid;
      for (int k : inst.rapid_nodes) {
        if (on(VarKind::v_origin_rapid, w.id, k)) { board = k; board_mode = Mode::rapid; }
        if (on(VarKind::v_dest_rapid, w.id, k)) { alight = k; alight_mode = Mode::rapid; }
      }
      for (int k : inst.slow_nodes) {
        if (on(VarKind::v_origin_slow, w.id, k)) { board = k; board_mode = Mode::slow; }
        if (on(VarKind::v_dest_slow, w.id, k)) { alight = k; alight_mode = Mode::slow; }
      }
      if (board < 0 || alight < 0)
        throw std::invalid_argument("extract_solution: covered pair without walk choices");

      // Collect active flow entities.
      std::set<int> arcs_left;
      for (const Arc& a : inst.arcs) {
        const VarKind kind = a.mode == Mode::rapid ? VarKind::f_rapid_arc : VarKind::f_slow_arc;
        if (on(kind, w.id, a.id)) arcs_left.insert(a.id);
      }
      std::set<int> sr_left, rs_left;
      for (int k : inst.transfer_nodes) {
        if (on(VarKind::f_transfer_sr, w.id, k)) sr_left.insert(k);
        if (on(VarKind::f_transfer_rs, w.id, k)) rs_left.insert(k);
      }

      const auto origin_walk = walks.minutes(w.origin, board, board_mode);
      const auto dest_walk = walks.minutes(w.dest, alight, alight_mode);
      if (!origin_walk || !dest_walk)
        throw std::invalid_argument("extract_solution: walk choice without a walk link");
      asg.legs.push_back({LegKind::walk, board_mode, w.origin, board, {}, *origin_walk});

      // Follow arcs from the boarding station, transferring when flagged.
      int at = board;
      Mode mode = board_mode;
      Leg ride{LegKind::ride, mode, at, at, {}, 0.0};
      const auto stop_at = [&](int node, Mode m) {
        if (m == Mode::rapid)
          return std::find(sol.rapid_stops.begin(), sol.rapid_stops.end(), node) != sol.rapid_stops.end();
        return std::find(sol.slow_stops.begin(), sol.slow_stops.end(), node) != sol.slow_stops.end();
      };
      int guard = 0;
      while (true) {
        if (++guard > 10000)
          throw std::invalid_argument("extract_solution: flow does not terminate");
        const bool done = at == alight && mode == alight_mode && arcs_left.empty() && sr_left.empty() &&
                          rs_left.empty();
        if (done) break;

        const bool want_sr = mode == Mode::slow && sr_left.count(at) && !ride.arcs.empty();
        const bool want_rs = mode == Mode::rapid && rs_left.count(at) && !ride.arcs.empty();
        if (want_sr || want_rs) {
          asg.legs.push_back(ride);
          const double tt = want_sr ? p.transfer_time_sr : p.transfer_time_rs;
          asg.legs.push_back({want_sr ? LegKind::transfer_sr : LegKind::transfer_rs, mode, at, at, {}, tt});
          if (want_sr) { sr_left.erase(at); mode = Mode::rapid; }
          else { rs_left.erase(at); mode = Mode::slow; }
          ride = Leg{LegKind::ride, mode, at, at, {}, 0.0};
          continue;
        }

        int next_arc = -1;
        for (int a : inst.arcs_out(at, mode)) {
          if (arcs_left.count(a)) { next_arc = a; break; }
        }
        if (next_arc < 0)
          throw std::invalid_argument(
              "extract_solution: flow of pair " + std::to_string(w.id) +
              " does not decompose into a walk-bracketed path");
        const Arc& a = inst.arc(next_arc);
        arcs_left.erase(next_arc);
        ride.arcs.push_back(next_arc);
        ride.minutes += a.traverse_time;
        if (stop_at(a.tail, mode))
          ride.minutes += mode == Mode::rapid ? p.stop_time_rapid : p.stop_time_slow;
        at = a.head;
        ride.to = at;
      }
      if (ride.arcs.empty())
        throw std::invalid_argument("extract_solution: covered pair rides no arc");
      asg.legs.push_back(ride);
      asg.legs.push_back({LegKind::walk, alight_mode, alight, w.dest, {}, *dest_walk});

      double total = p.wait_time - 0.5 * p.stop_time_rapid;
      for (const Leg& l : asg.legs) total += l.minutes;
      asg.public_time = total;
    }
    sol.assignments.push_back(std::move(asg));
  }

  sol.stats = tally_coverage(inst, sol.assignments);
  sol.objective = static_cast<double>(sol.stats.total());
  return sol;
}

// ---------------------------------------------------------------------------
// Independent feasibility audit

namespace {

struct PathShape {
  bool ok = false;
  std::string why;
  std::vector<int> order;  // node sequence along the path
};

// Decides whether `edges` forms one simple open path and returns its node
// order. Empty edge sets are rejected.
PathShape path_shape(const TransitInstance& inst, const std::vector<int>& edges) {
  PathShape shape;
  if (edges.empty()) {
    shape.why = "no edges chosen";
    return shape;
  }
  std::map<int, std::vector<int>> adj;
  for (int e : edges) {
    const Edge& ed = inst.edge(e);
    adj[ed.endpoints[0]].push_back(ed.endpoints[1]);
    adj[ed.endpoints[1]].push_back(ed.endpoints[0]);
  }
  std::vector<int> ends;
  for (const auto& [n, nb] : adj) {
    if (nb.size() == 1) ends.push_back(n);
    else if (nb.size() != 2) {
      shape.why = "node " + std::to_string(n) + " has degree " + std::to_string(nb.size());
      return shape;
    }
  }
  if (ends.size() != 2) {
    shape.why = "edge set is not one open chain";
    return shape;
  }
  int at = std::min(ends[0], ends[1]);
  int prev = -1;
  shape.order.push_back(at);
  for (std::size_t step = 0; step < edges.size(); ++step) {
    const auto& nb = adj[at];
    int next = -1;
    for (int cand : nb)
      if (cand != prev) { next = cand; break; }
    if (next < 0) {
      shape.why = "chain ends early";
      return shape;
    }
    prev = at;
    at = next;
    shape.order.push_back(at);
  }
  if (shape.order.size() != edges.size() + 1) {
    shape.why = "edge set contains a cycle";
    return shape;
  }
  std::set<int> uniq(shape.order.begin(), shape.order.end());
  if (uniq.size() != shape.order.size()) {
    shape.why = "path revisits a node";
    return shape;
  }
  shape.ok = true;
  return shape;
}

}  // namespace

std::string FeasibilityReport::first_failure() const {
  for (const FamilyCheck& f : families)
    if (!f.pass) return f.family + ": " + f.detail;
  return "";
}

FeasibilityReport check_feasibility(const TransitInstance& inst, const DesignSolution& sol) {
  FeasibilityReport rep;
  const InstanceParams& p = inst.params;
  auto fam = [&](const std::string& name, bool pass, const std::string& detail) {
    rep.families.push_back({name, pass, pass ? "" : detail});
    rep.ok = rep.ok && pass;
  };

  fam("budget", static_cast<int>(sol.rapid_edges.size()) <= p.max_rapid_edges &&
                    static_cast<int>(sol.slow_edges.size()) <= p.max_slow_edges,
      "edge budget exceeded");

  const std::set<int> r_stops(sol.rapid_stops.begin(), sol.rapid_stops.end());
  const std::set<int> r_non(sol.rapid_nonstops.begin(), sol.rapid_nonstops.end());
  const std::set<int> s_stops(sol.slow_stops.begin(), sol.slow_stops.end());

  {
    std::string why;
    bool ok = true;
    for (int i : sol.rapid_stops)
      if (r_non.count(i)) { ok = false; why = "node " + std::to_string(i) + " is both stop and non-stop"; break; }
    fam("stop_nonstop_disjoint", ok, why);
  }

  // Chain structure per mode (mirrors the design families).
  const PathShape rpath = path_shape(inst, sol.rapid_edges);
  fam("rapid_path_structure", rpath.ok, rpath.why);
  const PathShape spath = path_shape(inst, sol.slow_edges);
  fam("slow_path_structure", spath.ok, spath.why);

  {
    // Selected node sets match the path nodes (design_1 / design_7 / design_8).
    std::set<int> selected;
    selected.insert(r_stops.begin(), r_stops.end());
    selected.insert(r_non.begin(), r_non.end());
    bool ok = true;
    std::string why;
    if (rpath.ok) {
      std::set<int> on_path(rpath.order.begin(), rpath.order.end());
      if (on_path != selected) { ok = false; why = "rapid stops+non-stops differ from the path nodes"; }
      if (ok && static_cast<int>(sol.rapid_edges.size()) + 1 !=
                    static_cast<int>(r_stops.size() + r_non.size())) {
        ok = false;
        why = "rapid edge/node count mismatch";
      }
    } else {
      ok = false;
      why = "no rapid chain";
    }
    fam("rapid_counting", ok, why);
  }
  {
    bool ok = true;
    std::string why;
    if (spath.ok) {
      std::set<int> on_path(spath.order.begin(), spath.order.end());
      if (on_path != s_stops) { ok = false; why = "slow stops differ from the path nodes"; }
      if (ok && static_cast<int>(sol.slow_edges.size()) + 1 != static_cast<int>(s_stops.size())) {
        ok = false;
        why = "slow edge/node count mismatch";
      }
    } else {
      ok = false;
      why = "no slow chain";
    }
    fam("slow_counting", ok, why);
  }

  auto endpoint_check = [&](const PathShape& path, const std::vector<int>& origins,
                            const std::vector<int>& dests, const std::set<int>& stops,
                            const std::string& name) {
    if (!path.ok) {
      fam(name, false, "no chain");
      return;
    }
    const std::set<int> oset(origins.begin(), origins.end());
    const std::set<int> dset(dests.begin(), dests.end());
    const int a = path.order.front();
    const int b = path.order.back();
    // One endpoint must be a stop in the origin set, the other in the
    // destination set, and the path may not touch those sets elsewhere.
    const bool fwd = oset.count(a) && dset.count(b);
    const bool rev = oset.count(b) && dset.count(a);
    bool ok = fwd || rev;
    std::string why = ok ? "" : "path endpoints not in the origin/destination sets";
    if (ok) {
      const int o_end = fwd ? a : b;
      const int d_end = fwd ? b : a;
      int o_hits = 0, d_hits = 0;
      for (int nidx : path.order) {
        if (oset.count(nidx)) ++o_hits;
        if (dset.count(nidx)) ++d_hits;
      }
      if (o_hits != 1 || d_hits != 1) {
        ok = false;
        why = "path passes through an extra origin/destination candidate";
      } else if (!stops.count(o_end) || !stops.count(d_end)) {
        ok = false;
        why = "terminal node is not a stop";
      }
    }
    fam(name, ok, why);
  };
  endpoint_check(rpath, inst.rapid_origins, inst.rapid_dests, r_stops, "rapid_terminals");
  endpoint_check(spath, inst.slow_origins, inst.slow_dests, s_stops, "slow_terminals");

  {
    bool ok = true;
    std::string why;
    for (int i : sol.rapid_stops) {
      for (int j : sol.rapid_stops) {
        if (j <= i) continue;
        const double d = distance(inst.node(i).position, inst.node(j).position);
        if (d <= p.min_station_spacing) {
          ok = false;
          why = "stations " + std::to_string(i) + " and " + std::to_string(j) + " are " +
                std::to_string(d) + " m apart";
          break;
        }
      }
      if (!ok) break;
    }
    fam("spacing", ok, why);
  }

  {
    int old_kept = 0;
    for (int e : sol.slow_edges)
      if (inst.edge(e).on_old_slow_line) ++old_kept;
    fam("old_line_overlap", old_kept >= p.min_unchanged_slow_edges,
        "kept " + std::to_string(old_kept) + " old-line edges, need " +
            std::to_string(p.min_unchanged_slow_edges));
  }

  // Per-pair routing audit.
  {
    bool ok = true;
    std::string why;
    WalkIndex walks(inst);
    const std::set<int> re(sol.rapid_edges.begin(), sol.rapid_edges.end());
    const std::set<int> se(sol.slow_edges.begin(), sol.slow_edges.end());
    for (const PairAssignment& asg : sol.assignments) {
      if (!asg.covered) {
        if (!asg.legs.empty()) { ok = false; why = "uncovered pair with legs"; break; }
        continue;
      }
      const DemandPair& w = inst.demands.at(static_cast<std::size_t>(asg.pair));
      int sr = 0, rs = 0;
      double time = p.wait_time - 0.5 * p.stop_time_rapid;
      std::set<int> edges_used_rapid, edges_used_slow;
      std::string local;
      for (const Leg& l : asg.legs) {
        time += l.minutes;
        if (l.kind == LegKind::transfer_sr) {
          ++sr;
          const Node& n = inst.node(l.from);
          if (!n.is_transfer() || !r_stops.count(l.from) || !s_stops.count(l.from))
            local = "transfer at a node without both stations";
        } else if (l.kind == LegKind::transfer_rs) {
          ++rs;
          const Node& n = inst.node(l.from);
          if (!n.is_transfer() || !r_stops.count(l.from) || !s_stops.count(l.from))
            local = "transfer at a node without both stations";
        } else if (l.kind == LegKind::ride) {
          for (int aid : l.arcs) {
            const Arc& a = inst.arc(aid);
            if (a.mode != l.mode) local = "ride leg mixes modes";
            auto& used = a.mode == Mode::rapid ? edges_used_rapid : edges_used_slow;
            const auto& chosen = a.mode == Mode::rapid ? re : se;
            if (!chosen.count(a.edge)) local = "flow on an unbuilt edge";
            if (!used.insert(a.edge).second) local = "edge traversed twice by one pair";
          }
        }
        if (!local.empty()) break;
      }
      if (local.empty()) {
        for (int e : edges_used_rapid)
          if (edges_used_slow.count(e)) { local = "shared edge used by both modes"; break; }
      }
      if (local.empty() && (sr > 1 || rs > 1)) local = "more than one transfer of a kind";
      if (local.empty()) {
        // Walk legs: first and last.
        if (asg.legs.size() < 3 || asg.legs.front().kind != LegKind::walk ||
            asg.legs.back().kind != LegKind::walk) {
          local = "route is not walk-bracketed";
        } else {
          const Leg& wo = asg.legs.front();
          const Leg& wd = asg.legs.back();
          const auto to = walks.minutes(w.origin, wo.to, wo.mode);
          const auto td = walks.minutes(w.dest, wd.from, wd.mode);
          if (!to || !td) local = "walk leg without an in-range link";
          else {
            const auto& bs = wo.mode == Mode::rapid ? r_stops : s_stops;
            const auto& as = wd.mode == Mode::rapid ? r_stops : s_stops;
            if (!bs.count(wo.to) || !as.count(wd.from)) local = "walk leg to a non-stop";
          }
        }
      }
      if (local.empty() && time > w.private_utility + kFeasTol)
        local = "public time " + std::to_string(time) + " exceeds utility " +
                std::to_string(w.private_utility);
      if (local.empty() && std::abs(time - asg.public_time) > 1e-6)
        local = "recorded public time differs from the recomputed one";
      if (!local.empty()) {
        ok = false;
        why = "pair " + std::to_string(asg.pair) + ": " + local;
        break;
      }
    }
    fam("routing", ok, why);
  }

  {
    const CoverageStats s = tally_coverage(inst, sol.assignments);
    const bool ok = s.demand_rapid == sol.stats.demand_rapid && s.demand_slow == sol.stats.demand_slow &&
                    s.demand_both == sol.stats.demand_both &&
                    std::llround(sol.objective) == s.total();
    fam("coverage_stats", ok, "stats or objective differ from the assignments");
  }

  return rep;
}

}  // namespace lineopt
