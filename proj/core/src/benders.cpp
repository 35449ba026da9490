#include "lineopt/benders.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "lineopt/oracle.hpp"

namespace lineopt {

std::vector<int> select_retained_pairs(const TransitInstance& inst, const PartialConfig& cfg) {
  if (cfg.percentage < 0.0 || cfg.percentage > 100.0)
    throw std::invalid_argument("percentage must lie in [0, 100]");
  const int n = static_cast<int>(inst.demands.size());
  const int keep = static_cast<int>(std::llround(cfg.percentage / 100.0 * n));
  std::vector<int> ids(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ids[static_cast<std::size_t>(i)] = i;
  if (keep <= 0) return {};
  switch (cfg.selection_type) {
    case 1: {
      std::mt19937_64 rng(cfg.seed);
      for (int i = n - 1; i > 0; --i) {
        const int j = static_cast<int>(rng() % static_cast<unsigned long long>(i + 1));
        std::swap(ids[static_cast<std::size_t>(i)], ids[static_cast<std::size_t>(j)]);
      }
      break;
    }
    case 2:
      std::sort(ids.begin(), ids.end(), [&](int a, int b) {
        const auto da = inst.demands[static_cast<std::size_t>(a)].demand;
        const auto db = inst.demands[static_cast<std::size_t>(b)].demand;
        if (da != db) return da > db;
        return a < b;
      });
      break;
    case 3:
      std::sort(ids.begin(), ids.end(), [&](int a, int b) {
        const auto da = inst.demands[static_cast<std::size_t>(a)].demand;
        const auto db = inst.demands[static_cast<std::size_t>(b)].demand;
        if (da != db) return da < db;
        return a < b;
      });
      break;
    default:
      throw std::invalid_argument("selection_type must be 1, 2 or 3");
  }
  ids.resize(static_cast<std::size_t>(std::min(keep, n)));
  std::sort(ids.begin(), ids.end());
  return ids;
}

PartialMaster build_partial_master(const TransitInstance& inst, const PartialConfig& cfg) {
  PartialMaster pm;
  pm.retained = select_retained_pairs(inst, cfg);
  BuildOptions opts;
  opts.flow_pairs = pm.retained;
  pm.built = build_ind_model(inst, opts);
  return pm;
}

namespace {

// Right-hand side of one subproblem row as an affine function of the master
// point: constant + sum coef * master_column.
struct AffineRhs {
  double constant = 0.0;
  std::vector<std::pair<int, double>> terms;

  double at(const std::vector<double>& point) const {
    double v = constant;
    for (const auto& [col, c] : terms) v += c * point[static_cast<std::size_t>(col)];
    return v;
  }
};

// One pair's feasibility subproblem in a fixed canonical shape. Subproblem
// columns are the pair's flows; every row is '<' or '='.
struct SubTemplate {
  int pair = -1;
  int num_cols = 0;
  std::vector<int> col_arc;            // arc id per flow column, -1 for transfers
  std::map<int, int> rapid_arc_col, slow_arc_col, sr_col, rs_col;
  std::vector<LpRow> rows;             // rhs field unused; see rhs_map
  std::vector<AffineRhs> rhs_map;
};

class TemplateBuilder {
 public:
  TemplateBuilder(const TransitInstance& inst, const VarDirectory& dir) : inst_(inst), dir_(dir) {}

  SubTemplate build(int pair) const {
    SubTemplate t;
    t.pair = pair;
    const DemandPair& w = inst_.demands.at(static_cast<std::size_t>(pair));

    for (const Arc& a : inst_.arcs) {
      if (a.mode == Mode::rapid) {
        t.rapid_arc_col[a.id] = t.num_cols++;
        t.col_arc.push_back(a.id);
      }
    }
    for (const Arc& a : inst_.arcs) {
      if (a.mode == Mode::slow) {
        t.slow_arc_col[a.id] = t.num_cols++;
        t.col_arc.push_back(a.id);
      }
    }
    for (int k : inst_.transfer_nodes) {
      t.sr_col[k] = t.num_cols++;
      t.col_arc.push_back(-1);
    }
    for (int k : inst_.transfer_nodes) {
      t.rs_col[k] = t.num_cols++;
      t.col_arc.push_back(-1);
    }

    const std::set<int> trans(inst_.transfer_nodes.begin(), inst_.transfer_nodes.end());
    auto mcol = [&](VarKind kind, int p, int entity) { return dir_.require(VarKey{kind, p, entity}); };

    auto add = [&](std::vector<std::pair<int, double>> coef, char sense, AffineRhs rhs) {
      t.rows.push_back(LpRow{std::move(coef), sense, 0.0});
      t.rhs_map.push_back(std::move(rhs));
    };

    // Flow conservation off the transfer nodes.
    for (int k : inst_.rapid_nodes) {
      if (trans.count(k)) continue;
      std::vector<std::pair<int, double>> c;
      for (int a : inst_.arcs_out(k, Mode::rapid)) c.emplace_back(t.rapid_arc_col.at(a), 1.0);
      for (int a : inst_.arcs_in(k, Mode::rapid)) c.emplace_back(t.rapid_arc_col.at(a), -1.0);
      AffineRhs r;
      r.terms = {{mcol(VarKind::v_origin_rapid, pair, k), 1.0},
                 {mcol(VarKind::v_dest_rapid, pair, k), -1.0}};
      add(std::move(c), '=', std::move(r));
    }
    for (int k : inst_.slow_nodes) {
      if (trans.count(k)) continue;
      std::vector<std::pair<int, double>> c;
      for (int a : inst_.arcs_out(k, Mode::slow)) c.emplace_back(t.slow_arc_col.at(a), 1.0);
      for (int a : inst_.arcs_in(k, Mode::slow)) c.emplace_back(t.slow_arc_col.at(a), -1.0);
      AffineRhs r;
      r.terms = {{mcol(VarKind::v_origin_slow, pair, k), 1.0},
                 {mcol(VarKind::v_dest_slow, pair, k), -1.0}};
      add(std::move(c), '=', std::move(r));
    }

    // Boarding / alighting support, as <= rows: -sum f <= -v.
    for (int k : inst_.rapid_nodes) {
      std::vector<std::pair<int, double>> c;
      for (int a : inst_.arcs_out(k, Mode::rapid)) c.emplace_back(t.rapid_arc_col.at(a), -1.0);
      AffineRhs r;
      r.terms = {{mcol(VarKind::v_origin_rapid, pair, k), -1.0}};
      add(std::move(c), '<', std::move(r));
    }
    for (int k : inst_.slow_nodes) {
      std::vector<std::pair<int, double>> c;
      for (int a : inst_.arcs_out(k, Mode::slow)) c.emplace_back(t.slow_arc_col.at(a), -1.0);
      AffineRhs r;
      r.terms = {{mcol(VarKind::v_origin_slow, pair, k), -1.0}};
      add(std::move(c), '<', std::move(r));
    }
    for (int k : inst_.rapid_nodes) {
      std::vector<std::pair<int, double>> c;
      for (int a : inst_.arcs_in(k, Mode::rapid)) c.emplace_back(t.rapid_arc_col.at(a), -1.0);
      AffineRhs r;
      r.terms = {{mcol(VarKind::v_dest_rapid, pair, k), -1.0}};
      add(std::move(c), '<', std::move(r));
    }
    for (int k : inst_.slow_nodes) {
      std::vector<std::pair<int, double>> c;
      for (int a : inst_.arcs_in(k, Mode::slow)) c.emplace_back(t.slow_arc_col.at(a), -1.0);
      AffineRhs r;
      r.terms = {{mcol(VarKind::v_dest_slow, pair, k), -1.0}};
      add(std::move(c), '<', std::move(r));
    }

    // Flow only for assigned pairs.
    const int f_col = mcol(VarKind::f_pair, pair, -1);
    for (const auto& [arc, col] : t.rapid_arc_col) {
      (void)arc;
      AffineRhs r;
      r.terms = {{f_col, 1.0}};
      add({{col, 1.0}}, '<', std::move(r));
    }
    for (const auto& [arc, col] : t.slow_arc_col) {
      (void)arc;
      AffineRhs r;
      r.terms = {{f_col, 1.0}};
      add({{col, 1.0}}, '<', std::move(r));
    }

    if (!inst_.transfer_nodes.empty()) {
      {
        std::vector<std::pair<int, double>> c;
        for (int k : inst_.transfer_nodes) c.emplace_back(t.sr_col.at(k), 1.0);
        add(std::move(c), '<', AffineRhs{1.0, {}});
      }
      {
        std::vector<std::pair<int, double>> c;
        for (int k : inst_.transfer_nodes) c.emplace_back(t.rs_col.at(k), 1.0);
        add(std::move(c), '<', AffineRhs{1.0, {}});
      }
      for (int k : inst_.transfer_nodes) {
        std::vector<std::pair<int, double>> c;
        for (int a : inst_.arcs_in(k, Mode::rapid)) c.emplace_back(t.rapid_arc_col.at(a), 1.0);
        c.emplace_back(t.sr_col.at(k), 1.0);
        for (int a : inst_.arcs_out(k, Mode::rapid)) c.emplace_back(t.rapid_arc_col.at(a), -1.0);
        c.emplace_back(t.rs_col.at(k), -1.0);
        AffineRhs r;
        r.terms = {{mcol(VarKind::v_origin_rapid, pair, k), -1.0},
                   {mcol(VarKind::v_dest_rapid, pair, k), 1.0}};
        add(std::move(c), '=', std::move(r));
      }
      for (int k : inst_.transfer_nodes) {
        std::vector<std::pair<int, double>> c;
        for (int a : inst_.arcs_in(k, Mode::slow)) c.emplace_back(t.slow_arc_col.at(a), 1.0);
        c.emplace_back(t.rs_col.at(k), 1.0);
        for (int a : inst_.arcs_out(k, Mode::slow)) c.emplace_back(t.slow_arc_col.at(a), -1.0);
        c.emplace_back(t.sr_col.at(k), -1.0);
        AffineRhs r;
        r.terms = {{mcol(VarKind::v_origin_slow, pair, k), -1.0},
                   {mcol(VarKind::v_dest_slow, pair, k), 1.0}};
        add(std::move(c), '=', std::move(r));
      }
      for (int k : inst_.transfer_nodes) {
        {
          std::vector<std::pair<int, double>> c{{t.rs_col.at(k), 1.0}};
          for (int a : inst_.arcs_out(k, Mode::slow)) c.emplace_back(t.slow_arc_col.at(a), -1.0);
          add(std::move(c), '<', AffineRhs{});
        }
        {
          std::vector<std::pair<int, double>> c{{t.rs_col.at(k), 1.0}};
          for (int a : inst_.arcs_in(k, Mode::rapid)) c.emplace_back(t.rapid_arc_col.at(a), -1.0);
          add(std::move(c), '<', AffineRhs{});
        }
        {
          std::vector<std::pair<int, double>> c{{t.sr_col.at(k), 1.0}};
          for (int a : inst_.arcs_in(k, Mode::slow)) c.emplace_back(t.slow_arc_col.at(a), -1.0);
          add(std::move(c), '<', AffineRhs{});
        }
        {
          std::vector<std::pair<int, double>> c{{t.sr_col.at(k), 1.0}};
          for (int a : inst_.arcs_out(k, Mode::rapid)) c.emplace_back(t.rapid_arc_col.at(a), -1.0);
          add(std::move(c), '<', AffineRhs{});
        }
      }
      for (int k : inst_.transfer_nodes) {
        AffineRhs r1;
        r1.terms = {{mcol(VarKind::z_rapid, -1, k), 1.0}};
        add({{t.sr_col.at(k), 1.0}, {t.rs_col.at(k), 1.0}}, '<', std::move(r1));
        AffineRhs r2;
        r2.terms = {{mcol(VarKind::z_slow, -1, k), 1.0}};
        add({{t.sr_col.at(k), 1.0}, {t.rs_col.at(k), 1.0}}, '<', std::move(r2));
      }
    }

    // One direction per built edge.
    std::map<int, std::pair<int, int>> arcs_of_edge[2];
    for (const Arc& a : inst_.arcs) {
      auto& slot = arcs_of_edge[static_cast<int>(a.mode)][a.edge];
      if (a.tail == inst_.edge(a.edge).endpoints[0]) slot.first = a.id;
      else slot.second = a.id;
    }
    for (int e : inst_.rapid_edges) {
      const auto [fwd, rev] = arcs_of_edge[0][e];
      AffineRhs r;
      r.terms = {{mcol(VarKind::x_rapid, -1, e), 1.0}};
      add({{t.rapid_arc_col.at(fwd), 1.0}, {t.rapid_arc_col.at(rev), 1.0}}, '<', std::move(r));
    }
    for (int e : inst_.slow_edges) {
      const auto [fwd, rev] = arcs_of_edge[1][e];
      AffineRhs r;
      r.terms = {{mcol(VarKind::x_slow, -1, e), 1.0}};
      add({{t.slow_arc_col.at(fwd), 1.0}, {t.slow_arc_col.at(rev), 1.0}}, '<', std::move(r));
    }
    for (const Edge& e : inst_.edges) {
      if (!e.in_rapid || !e.in_slow) continue;
      const auto [rf, rr] = arcs_of_edge[0][e.id];
      const auto [sf, sr] = arcs_of_edge[1][e.id];
      add({{t.rapid_arc_col.at(rf), 1.0},
           {t.rapid_arc_col.at(rr), 1.0},
           {t.slow_arc_col.at(sf), 1.0},
           {t.slow_arc_col.at(sr), 1.0}},
          '<', AffineRhs{1.0, {}});
    }

    // Mode choice.
    {
      const InstanceParams& p = inst_.params;
      std::vector<std::pair<int, double>> c;
      for (const auto& [arc, col] : t.rapid_arc_col) c.emplace_back(col, inst_.arc(arc).traverse_time);
      for (const auto& [arc, col] : t.slow_arc_col) c.emplace_back(col, inst_.arc(arc).traverse_time);
      for (int k : inst_.transfer_nodes) {
        c.emplace_back(t.rs_col.at(k), p.transfer_time_rs);
        c.emplace_back(t.sr_col.at(k), p.transfer_time_sr);
      }
      AffineRhs r;
      r.terms.emplace_back(f_col, w.private_utility - p.wait_time + 0.5 * p.stop_time_rapid);
      for (int k : inst_.rapid_nodes) {
        if (auto tmin = inst_.walk_time(w.origin, k, Mode::rapid))
          r.terms.emplace_back(mcol(VarKind::v_origin_rapid, pair, k), -*tmin);
        if (auto tmin = inst_.walk_time(w.dest, k, Mode::rapid))
          r.terms.emplace_back(mcol(VarKind::v_dest_rapid, pair, k), -*tmin);
      }
      for (int k : inst_.slow_nodes) {
        if (auto tmin = inst_.walk_time(w.origin, k, Mode::slow))
          r.terms.emplace_back(mcol(VarKind::v_origin_slow, pair, k), -*tmin);
        if (auto tmin = inst_.walk_time(w.dest, k, Mode::slow))
          r.terms.emplace_back(mcol(VarKind::v_dest_slow, pair, k), -*tmin);
      }
      for (const auto& [arc, col] : t.rapid_arc_col) {
        (void)col;
        r.terms.emplace_back(mcol(VarKind::h_rapid, pair, arc), -p.stop_time_rapid);
      }
      for (const auto& [arc, col] : t.slow_arc_col) {
        (void)col;
        r.terms.emplace_back(mcol(VarKind::h_slow, pair, arc), -p.stop_time_slow);
      }
      add(std::move(c), '<', std::move(r));
    }

    // Linearization coupling: the flow must realize the master's h choices.
    for (const auto& [arc, col] : t.rapid_arc_col) {
      AffineRhs r1;
      r1.terms = {{mcol(VarKind::h_rapid, pair, arc), -1.0}};
      add({{col, -1.0}}, '<', std::move(r1));  // h_sep <= f
      AffineRhs r3{1.0, {}};
      r3.terms.push_back({mcol(VarKind::z_rapid, -1, inst_.arc(arc).tail), -1.0});
      r3.terms.push_back({mcol(VarKind::h_rapid, pair, arc), 1.0});
      add({{col, 1.0}}, '<', std::move(r3));  // f <= 1 - z_sep + h_sep
    }
    for (const auto& [arc, col] : t.slow_arc_col) {
      AffineRhs r1;
      r1.terms = {{mcol(VarKind::h_slow, pair, arc), -1.0}};
      add({{col, -1.0}}, '<', std::move(r1));
      AffineRhs r3{1.0, {}};
      r3.terms.push_back({mcol(VarKind::z_slow, -1, inst_.arc(arc).tail), -1.0});
      r3.terms.push_back({mcol(VarKind::h_slow, pair, arc), 1.0});
      add({{col, 1.0}}, '<', std::move(r3));
    }

    return t;
  }

 private:
  const TransitInstance& inst_;
  const VarDirectory& dir_;
};

}  // namespace

LpProblem build_subproblem(const TransitInstance& inst, const VarDirectory& dir, int pair,
                           const std::vector<double>& separation_point) {
  TemplateBuilder tb(inst, dir);
  const SubTemplate t = tb.build(pair);
  LpProblem lp;
  for (int c = 0; c < t.num_cols; ++c) lp.add_col(0.0, 1.0, 0.0);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    LpRow row = t.rows[r];
    row.rhs = t.rhs_map[r].at(separation_point);
    lp.rows.push_back(std::move(row));
  }
  return lp;
}

// ---------------------------------------------------------------------------
// Cut-generating dual LP

struct BendersSeparator::Impl {
  const TransitInstance& inst;
  const VarDirectory& dir;
  std::vector<SubTemplate> templates;  // per pair

  Impl(const TransitInstance& i, const VarDirectory& d) : inst(i), dir(d) {
    TemplateBuilder tb(i, d);
    templates.reserve(i.demands.size());
    for (const DemandPair& w : i.demands) templates.push_back(tb.build(w.id));
  }

  // Multiplier cone: free on '=' rows (split into positive parts), >= 0 on
  // '<' rows. Two normalizations keep the LP bounded and the cuts scaled:
  // the in-out row caps the violation growth along the in -> out direction,
  // and an l1 cap on the multipliers covers the degenerate in == out case.
  std::optional<BendersCut> attempt(const SubTemplate& t, const std::vector<double>& out,
                                    const std::vector<double>& in, double lambda) const {
    const double kL1Cap = 10.0;
    const std::size_t nrows = t.rows.size();

    LpProblem cglp;
    std::vector<int> pos_col(nrows), neg_col(nrows, -1);
    for (std::size_t r = 0; r < nrows; ++r) {
      pos_col[r] = cglp.add_col(0.0, kInf, 0.0);
      if (t.rows[r].sense == '=') neg_col[r] = cglp.add_col(0.0, kInf, 0.0);
    }
    auto signed_term = [&](std::vector<std::pair<int, double>>& row, std::size_t r, double v) {
      row.emplace_back(pos_col[r], v);
      if (neg_col[r] >= 0) row.emplace_back(neg_col[r], -v);
    };

    // Dual feasibility: for every subproblem column, sum_r y_r A_rc >= 0.
    std::vector<std::vector<std::pair<std::size_t, double>>> bycol(
        static_cast<std::size_t>(t.num_cols));
    for (std::size_t r = 0; r < nrows; ++r)
      for (const auto& [c, v] : t.rows[r].coef)
        if (v != 0.0) bycol[static_cast<std::size_t>(c)].emplace_back(r, v);
    for (int c = 0; c < t.num_cols; ++c) {
      if (bycol[static_cast<std::size_t>(c)].empty()) continue;
      std::vector<std::pair<int, double>> row;
      for (const auto& [r, v] : bycol[static_cast<std::size_t>(c)]) signed_term(row, r, v);
      cglp.add_row(std::move(row), '>', 0.0);
    }

    std::vector<std::pair<int, double>> norm;
    bool norm_nontrivial = false;
    for (std::size_t r = 0; r < nrows; ++r) {
      const double b_out = t.rhs_map[r].at(out);
      const double b_in = t.rhs_map[r].at(in);
      const double b_sep = b_out - lambda * (b_out - b_in);
      cglp.objective[static_cast<std::size_t>(pos_col[r])] = -b_sep;  // maximize -y^T b(sep)
      if (neg_col[r] >= 0) cglp.objective[static_cast<std::size_t>(neg_col[r])] = b_sep;
      const double n_r = b_in - b_out;
      if (std::abs(n_r) > 1e-12) {
        signed_term(norm, r, n_r);
        norm_nontrivial = true;
      }
    }
    cglp.maximize = true;
    if (norm_nontrivial) cglp.add_row(std::move(norm), '<', 1.0);
    {
      std::vector<std::pair<int, double>> l1;
      for (int c = 0; c < cglp.num_cols; ++c) l1.emplace_back(c, 1.0);
      cglp.add_row(std::move(l1), '<', kL1Cap);
    }

    LpOptions lopt;
    const LpOutcome res = solve_lp(cglp, nullptr, lopt);
    if (res.status == LpStatus::unbounded)
      throw std::runtime_error("cut-generating LP unbounded; normalization missing");
    if (res.status != LpStatus::optimal)
      throw std::runtime_error("cut-generating LP did not solve");
    if (res.objective <= 1e-6) return std::nullopt;

    // Assemble sum_r y_r rhs_r(m) >= 0 over master columns.
    std::map<int, double> coef;
    double rhs = 0.0;
    for (std::size_t r = 0; r < nrows; ++r) {
      double y = res.primal[static_cast<std::size_t>(pos_col[r])];
      if (neg_col[r] >= 0) y -= res.primal[static_cast<std::size_t>(neg_col[r])];
      if (y == 0.0) continue;
      rhs -= y * t.rhs_map[r].constant;
      for (const auto& [col, c] : t.rhs_map[r].terms) coef[col] += y * c;
    }
    BendersCut cut;
    double scale = 1.0;
    for (const auto& [col, c] : coef) scale = std::max(scale, std::abs(c));
    for (const auto& [col, c] : coef)
      if (c != 0.0) cut.row.coef.emplace_back(col, c / scale);
    cut.row.sense = '>';
    cut.row.rhs = rhs / scale;
    cut.pair = t.pair;
    cut.lambda = lambda;
    cut.dual_objective = res.objective;
    cut.violation = -cut_slack(cut.row, out);
    return cut;
  }

  std::optional<BendersCut> separate(int pair, const std::vector<double>& out,
                                     const StabilizationState& stab) const {
    const SubTemplate& t = templates.at(static_cast<std::size_t>(pair));
    const std::vector<double>& in = stab.in_point.empty() ? out : stab.in_point;
    const double lambda = stab.in_point.empty() ? 0.0 : stab.lambda;
    if (lambda > 0.0) {
      auto cut = attempt(t, out, in, lambda);
      if (cut && cut->violation > 1e-6) return cut;
      // Stabilized point separated nothing usable; fall back to the out point.
    }
    auto cut = attempt(t, out, in, 0.0);
    if (cut && cut->violation > 1e-6) return cut;
    return std::nullopt;
  }
};

BendersSeparator::BendersSeparator(const TransitInstance& inst, const VarDirectory& dir)
    : impl_(new Impl(inst, dir)) {}
BendersSeparator::~BendersSeparator() { delete impl_; }

std::optional<BendersCut> BendersSeparator::separate(int pair, const std::vector<double>& out_point,
                                                     const StabilizationState& stab) const {
  return impl_->separate(pair, out_point, stab);
}

double cut_slack(const LpRow& row, const std::vector<double>& point) {
  double lhs = 0;
  for (const auto& [j, v] : row.coef) lhs += v * point[static_cast<std::size_t>(j)];
  if (row.sense == '>') return lhs - row.rhs;
  if (row.sense == '<') return row.rhs - lhs;
  return -std::abs(lhs - row.rhs);
}

// ---------------------------------------------------------------------------
// Full branch-and-Benders-cut run

std::vector<double> master_point_from_solution(const TransitInstance& inst, const BuiltModel& built,
                                               const DesignSolution& sol) {
  std::vector<double> point(static_cast<std::size_t>(built.model.num_cols()), 0.0);
  auto set_on = [&](VarKind kind, int pair, int entity, double v) {
    const int c = built.dir.column(VarKey{kind, pair, entity});
    if (c >= 0) point[static_cast<std::size_t>(c)] = v;
  };
  for (int e : sol.rapid_edges) set_on(VarKind::x_rapid, -1, e, 1.0);
  for (int e : sol.slow_edges) set_on(VarKind::x_slow, -1, e, 1.0);
  for (int i : sol.rapid_stops) set_on(VarKind::z_rapid, -1, i, 1.0);
  for (int i : sol.rapid_nonstops) set_on(VarKind::y_rapid, -1, i, 1.0);
  for (int i : sol.slow_stops) set_on(VarKind::z_slow, -1, i, 1.0);
  for (const PairAssignment& a : sol.assignments) {
    if (!a.covered) continue;
    set_on(VarKind::f_pair, a.pair, -1, 1.0);
    const Leg& first = a.legs.front();
    const Leg& last = a.legs.back();
    set_on(first.mode == Mode::rapid ? VarKind::v_origin_rapid : VarKind::v_origin_slow, a.pair,
           first.to, 1.0);
    set_on(last.mode == Mode::rapid ? VarKind::v_dest_rapid : VarKind::v_dest_slow, a.pair,
           last.from, 1.0);
    for (const Leg& l : a.legs) {
      if (l.kind == LegKind::ride) {
        for (int arc : l.arcs) {
          set_on(l.mode == Mode::rapid ? VarKind::f_rapid_arc : VarKind::f_slow_arc, a.pair, arc, 1.0);
          const Arc& ar = inst.arc(arc);
          const bool tail_stop = l.mode == Mode::rapid
                                     ? std::find(sol.rapid_stops.begin(), sol.rapid_stops.end(),
                                                 ar.tail) != sol.rapid_stops.end()
                                     : std::find(sol.slow_stops.begin(), sol.slow_stops.end(),
                                                 ar.tail) != sol.slow_stops.end();
          if (tail_stop)
            set_on(l.mode == Mode::rapid ? VarKind::h_rapid : VarKind::h_slow, a.pair, arc, 1.0);
        }
      } else if (l.kind == LegKind::transfer_sr) {
        set_on(VarKind::f_transfer_sr, a.pair, l.from, 1.0);
      } else if (l.kind == LegKind::transfer_rs) {
        set_on(VarKind::f_transfer_rs, a.pair, l.from, 1.0);
      }
    }
  }
  return point;
}

namespace {

// Node order of a chain of edges; empty on malformed sets (callers validate).
std::vector<int> chain_order(const TransitInstance& inst, const std::vector<int>& edges) {
  std::map<int, std::vector<int>> adj;
  for (int e : edges) {
    adj[inst.edge(e).endpoints[0]].push_back(inst.edge(e).endpoints[1]);
    adj[inst.edge(e).endpoints[1]].push_back(inst.edge(e).endpoints[0]);
  }
  int start = -1;
  for (const auto& [n, nb] : adj)
    if (nb.size() == 1) { start = n; break; }
  if (start < 0) return {};
  std::vector<int> order{start};
  int prev = -1, at = start;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    int next = -1;
    for (int cand : adj[at])
      if (cand != prev) { next = cand; break; }
    if (next < 0) return {};
    prev = at;
    at = next;
    order.push_back(at);
  }
  return order;
}

EnumeratedDesign design_from_master(const TransitInstance& inst, const DesignSolution& sol) {
  EnumeratedDesign d;
  d.rapid_path = chain_order(inst, sol.rapid_edges);
  std::map<std::pair<int, int>, int> edge_between;
  for (int e : sol.rapid_edges) {
    const Edge& ed = inst.edge(e);
    edge_between[{std::min(ed.endpoints[0], ed.endpoints[1]),
                  std::max(ed.endpoints[0], ed.endpoints[1])}] = e;
  }
  for (std::size_t i = 0; i + 1 < d.rapid_path.size(); ++i)
    d.rapid_edge_ids.push_back(edge_between.at({std::min(d.rapid_path[i], d.rapid_path[i + 1]),
                                                std::max(d.rapid_path[i], d.rapid_path[i + 1])}));
  d.rapid_is_stop.resize(d.rapid_path.size());
  for (std::size_t i = 0; i < d.rapid_path.size(); ++i)
    d.rapid_is_stop[i] = sol.rapid_stop(d.rapid_path[i]);

  d.slow_path = chain_order(inst, sol.slow_edges);
  std::map<std::pair<int, int>, int> sedge;
  for (int e : sol.slow_edges) {
    const Edge& ed = inst.edge(e);
    sedge[{std::min(ed.endpoints[0], ed.endpoints[1]), std::max(ed.endpoints[0], ed.endpoints[1])}] = e;
  }
  for (std::size_t i = 0; i + 1 < d.slow_path.size(); ++i)
    d.slow_edge_ids.push_back(sedge.at({std::min(d.slow_path[i], d.slow_path[i + 1]),
                                        std::max(d.slow_path[i], d.slow_path[i + 1])}));
  return d;
}

}  // namespace

BendersResult solve_benders(const TransitInstance& inst, const BendersOptions& options) {
  if (inst.params.enable_shape_constraints)
    throw std::invalid_argument(
        "solve_benders: shape constraints are per-pair flow rows and are not part of the "
        "decomposition; solve with the direct method instead");

  BendersResult result;
  PartialMaster pm = build_partial_master(inst, options.partial);
  result.retained = pm.retained;
  const std::set<int> retained(pm.retained.begin(), pm.retained.end());

  BendersSeparator separator(inst, pm.built.dir);

  // In point: a coverage-rich master-feasible point (every pair pushed toward
  // assignment as far as the relaxation allows).
  StabilizationState stab;
  stab.lambda = options.stabilization.lambda;
  {
    MilpModel aux = pm.built.model;
    for (double& c : aux.objective) c = 0.0;
    for (const DemandPair& w : inst.demands) {
      const int c = pm.built.dir.require(VarKey{VarKind::f_pair, w.id, -1});
      aux.objective[static_cast<std::size_t>(c)] = 1.0;
    }
    const LpOutcome root = solve_lp_relaxation(aux);
    if (root.status == LpStatus::infeasible) {
      result.stats.termination = "infeasible";
      return result;
    }
    if (root.status == LpStatus::optimal) stab.in_point = root.primal;
  }

  BbCallbacks callbacks;
  callbacks.lazy = [&](const CallbackContext& ctx) {
    std::vector<std::pair<LpRow, RowTag>> out;
    StabilizationState plain;  // integral candidates separate at the point itself
    for (const DemandPair& w : inst.demands) {
      if (retained.count(w.id)) continue;
      if (auto cut = separator.separate(w.id, ctx.values, plain)) {
        out.emplace_back(cut->row, RowTag{RowFamily::benders_cut, w.id, -1});
        if (options.collect_cuts) result.cuts.push_back(*cut);
      }
    }
    return out;
  };
  callbacks.user = [&](const CallbackContext& ctx) {
    std::vector<std::pair<LpRow, RowTag>> out;
    // The root always runs a full stabilized cut loop; deeper nodes are
    // rate-limited to keep separation cost off the critical path.
    if (ctx.node_index != 1) {
      if (ctx.depth > options.user_cut_max_depth) return out;
      if (options.user_cut_node_stride > 1 && ctx.node_index % options.user_cut_node_stride != 0)
        return out;
    }
    for (const DemandPair& w : inst.demands) {
      if (retained.count(w.id)) continue;
      if (auto cut = separator.separate(w.id, ctx.values, stab)) {
        out.emplace_back(cut->row, RowTag{RowFamily::benders_cut, w.id, -1});
        if (options.collect_cuts) result.cuts.push_back(*cut);
      }
    }
    return out;
  };
  callbacks.on_incumbent = [&](const std::vector<double>& values) {
    if (stab.in_point.empty()) {
      stab.in_point = values;
      return;
    }
    for (std::size_t i = 0; i < values.size(); ++i)
      stab.in_point[i] = 0.5 * stab.in_point[i] + 0.5 * values[i];
  };

  BbOptions bbopt;
  bbopt.limits = options.limits;
  bbopt.log = options.log;
  bbopt.branch_priority = default_branch_priorities(pm.built.dir);

  MilpResult milp = solve_milp(pm.built.model, callbacks, bbopt);
  result.stats = milp.stats;

  if (milp.values) {
    // Assemble the reported solution: designs from the master, routes by
    // exact search over the fixed design (master-accepted pairs always admit
    // one within the utility bound).
    DesignSolution design_only;
    auto on = [&](VarKind kind, int pair, int entity) {
      const int c = pm.built.dir.column(VarKey{kind, pair, entity});
      return c >= 0 && (*milp.values)[static_cast<std::size_t>(c)] > 0.5;
    };
    for (int e : inst.rapid_edges)
      if (on(VarKind::x_rapid, -1, e)) design_only.rapid_edges.push_back(e);
    for (int e : inst.slow_edges)
      if (on(VarKind::x_slow, -1, e)) design_only.slow_edges.push_back(e);
    for (int i : inst.rapid_nodes) {
      if (on(VarKind::z_rapid, -1, i)) design_only.rapid_stops.push_back(i);
      if (on(VarKind::y_rapid, -1, i)) design_only.rapid_nonstops.push_back(i);
    }
    for (int i : inst.slow_nodes)
      if (on(VarKind::z_slow, -1, i)) design_only.slow_stops.push_back(i);

    const EnumeratedDesign design = design_from_master(inst, design_only);
    DesignSolution sol = design_only;
    for (const DemandPair& w : inst.demands) {
      PairAssignment asg;
      asg.pair = w.id;
      if (on(VarKind::f_pair, w.id, -1)) {
        auto route = best_routing(inst, design, w, false);
        if (!route)
          throw std::runtime_error("benders: accepted pair has no route within its utility");
        asg.covered = true;
        asg.legs = std::move(route->legs);
        asg.public_time = route->public_time;
      }
      sol.assignments.push_back(std::move(asg));
    }
    sol.stats = tally_coverage(inst, sol.assignments);
    sol.objective = static_cast<double>(sol.stats.total());
    result.solution = std::move(sol);
  }
  return result;
}

}  // namespace lineopt
