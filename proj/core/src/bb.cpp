#include "lineopt/bb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

namespace lineopt {

namespace {

constexpr double kIntTol = 1e-6;

double gap_percent(double bound, const std::optional<double>& inc) {
  if (!inc) return kInf;
  const double denom = std::abs(*inc);
  if (denom < 1e-12) return std::abs(bound - *inc) < 1e-9 ? 0.0 : kInf;
  return std::abs(bound - *inc) / denom * 100.0;
}

struct Node {
  long long id = 0;
  int depth = 0;
  double bound = 0.0;  // parent LP value until processed
  std::vector<std::tuple<int, double, double>> fixes;  // (col, lb, ub) from root
  LpBasis hint;
};

// Project an old basis onto a problem that gained rows: new slacks start basic.
LpBasis pad_basis(const LpBasis& b, int num_cols, int old_rows, int new_rows) {
  LpBasis out = b;
  if (out.empty()) return out;
  if (static_cast<int>(out.status.size()) != num_cols + old_rows) return LpBasis{};
  out.status.resize(static_cast<std::size_t>(num_cols + new_rows), VarStatus::basic);
  for (int i = old_rows; i < new_rows; ++i) out.basic.push_back(num_cols + i);
  return out;
}

}  // namespace

std::string SolveStats::progress_line(double t) const {
  char buf[160];
  if (incumbent) {
    std::snprintf(buf, sizeof(buf), "node=%lld bound=%.6g inc=%.6g gap=%.4g%% cuts=%lld t=%.2f",
                  nodes, best_bound, *incumbent, gap_percent, cuts, t);
  } else {
    std::snprintf(buf, sizeof(buf), "node=%lld bound=%.6g inc=- gap=-%% cuts=%lld t=%.2f", nodes,
                  best_bound, cuts, t);
  }
  return buf;
}

int branching_choice(const std::vector<double>& values, const std::vector<bool>& is_integer,
                     const std::vector<int>& priority) {
  int best = -1;
  double best_frac = kInf;
  int best_prio = 0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (!is_integer[j]) continue;
    const double v = values[j];
    const double dist = std::abs(v - std::round(v));
    if (dist <= kIntTol) continue;
    const double frac = std::abs(v - 0.5);
    const int prio = j < priority.size() ? priority[j] : 0;
    if (frac < best_frac - 1e-12 ||
        (frac < best_frac + 1e-12 && (best < 0 || prio < best_prio))) {
      if (frac < best_frac) best_frac = frac;
      best = static_cast<int>(j);
      best_prio = prio;
    }
  }
  return best;
}

MilpResult solve_milp(const MilpModel& model, const BbCallbacks& callbacks,
                      const BbOptions& options) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - t0).count(); };

  MilpResult res;
  SolveStats& st = res.stats;

  LpProblem work = lp_from_milp(model);
  const std::vector<double> base_lower = work.lower;
  const std::vector<double> base_upper = work.upper;
  const double obj_sense = model.maximize ? 1.0 : -1.0;  // internally maximize sense*obj

  // Global cut pool with a coefficient hash against exact duplicates.
  std::set<std::vector<long long>> cut_hashes;
  auto cut_hash = [](const LpRow& r) {
    std::vector<std::pair<int, double>> c = r.coef;
    std::sort(c.begin(), c.end());
    std::vector<long long> h;
    h.reserve(c.size() * 2 + 2);
    for (const auto& [j, v] : c) {
      h.push_back(j);
      h.push_back(std::llround(v * 1e9));
    }
    h.push_back(r.sense);
    h.push_back(std::llround(r.rhs * 1e9));
    return h;
  };

  std::optional<double> incumbent;
  std::vector<double> incumbent_values;

  // Open nodes: best-bound set plus a diving stack.
  long long next_id = 0;
  auto better = [&](const Node& a, const Node& b) {
    const double ba = obj_sense * a.bound, bb = obj_sense * b.bound;
    if (ba != bb) return ba > bb;
    return a.id < b.id;
  };
  std::vector<Node> open;   // kept heap-free; desk scale
  std::vector<Node> dive;
  int plunge = 0;

  {
    Node root;
    root.id = next_id++;
    root.bound = model.maximize ? kInf : -kInf;
    open.push_back(std::move(root));
  }

  auto pick_node = [&]() -> Node {
    if (!dive.empty() && plunge < options.plunge_depth) {
      Node n = std::move(dive.back());
      dive.pop_back();
      ++plunge;
      return n;
    }
    // merge dive leftovers into the open set
    for (Node& n : dive) open.push_back(std::move(n));
    dive.clear();
    plunge = 0;
    std::size_t best = 0;
    for (std::size_t i = 1; i < open.size(); ++i)
      if (better(open[i], open[best])) best = i;
    Node n = std::move(open[best]);
    open.erase(open.begin() + static_cast<std::ptrdiff_t>(best));
    return n;
  };

  auto global_bound = [&]() {
    double b = incumbent ? *incumbent : (model.maximize ? -kInf : kInf);
    for (const auto& n : open) b = model.maximize ? std::max(b, n.bound) : std::min(b, n.bound);
    for (const auto& n : dive) b = model.maximize ? std::max(b, n.bound) : std::min(b, n.bound);
    return b;
  };

  auto check_violation = [](const LpRow& r, const std::vector<double>& x) {
    double lhs = 0;
    for (const auto& [j, v] : r.coef) lhs += v * x[static_cast<std::size_t>(j)];
    if (r.sense == '<') return lhs - r.rhs;
    if (r.sense == '>') return r.rhs - lhs;
    return std::abs(lhs - r.rhs);
  };

  st.termination = "optimal";
  bool root_infeasible = false;

  while (!open.empty() || !dive.empty()) {
    if (options.limits.node_limit >= 0 && st.nodes >= options.limits.node_limit) {
      st.termination = "node_limit";
      break;
    }
    if (elapsed() > options.limits.time_limit_s) {
      st.termination = "time_limit";
      break;
    }

    Node node = pick_node();

    // Bound-based pruning against the incumbent.
    if (incumbent) {
      const double cut = *incumbent;
      if (model.maximize ? node.bound <= cut + options.limits.gap_tol * (1 + std::abs(cut))
                         : node.bound >= cut - options.limits.gap_tol * (1 + std::abs(cut))) {
        if (std::isfinite(node.bound)) continue;
      }
    }

    work.lower = base_lower;
    work.upper = base_upper;
    for (const auto& [col, lo, hi] : node.fixes) {
      work.lower[static_cast<std::size_t>(col)] = lo;
      work.upper[static_cast<std::size_t>(col)] = hi;
    }

    ++st.nodes;
    const long long node_index = st.nodes;

    bool resolved = false;
    LpOutcome lp;
    while (!resolved) {
      if (elapsed() > options.limits.time_limit_s) {
        st.termination = "time_limit";
        break;
      }
      const LpBasis hint = pad_basis(node.hint, work.num_cols,
                                     static_cast<int>(node.hint.basic.size()),
                                     static_cast<int>(work.rows.size()));
      lp = solve_lp(work, hint.empty() ? nullptr : &hint, options.lp);
      if (lp.status == LpStatus::iteration_limit) {
        LpOptions harder = options.lp;
        harder.max_iterations *= 4;
        lp = solve_lp(work, nullptr, harder);
      }
      if (lp.status == LpStatus::infeasible) break;
      if (lp.status == LpStatus::unbounded) break;
      if (lp.status != LpStatus::optimal) {
        st.termination = "lp_failure";
        break;
      }
      node.bound = lp.objective;
      node.hint = lp.basis;

      // Bound prune after solving.
      if (incumbent) {
        const double cut = *incumbent;
        if (model.maximize ? lp.objective <= cut + options.limits.gap_tol * (1 + std::abs(cut))
                           : lp.objective >= cut - options.limits.gap_tol * (1 + std::abs(cut))) {
          resolved = true;
          break;
        }
      }

      const int frac_col = branching_choice(lp.primal, model.is_integer, options.branch_priority);
      const bool integral = frac_col < 0;

      // Cut rounds: lazy at integral candidates, user at fractional ones.
      std::vector<std::pair<LpRow, RowTag>> cuts;
      if (integral && callbacks.lazy) {
        cuts = callbacks.lazy(CallbackContext{lp.primal, true, node.depth, node_index, lp.objective});
        st.cuts_lazy += static_cast<long long>(cuts.size());
      } else if (!integral && callbacks.user) {
        cuts = callbacks.user(CallbackContext{lp.primal, false, node.depth, node_index, lp.objective});
        st.cuts_user += static_cast<long long>(cuts.size());
      }
      int appended = 0;
      for (auto& [row, tag] : cuts) {
        if (check_violation(row, lp.primal) <= 1e-6)
          throw std::logic_error("cut callback returned a non-violated row");
        auto h = cut_hash(row);
        if (!cut_hashes.insert(std::move(h)).second)
          throw std::logic_error("cut callback re-emitted a row already in the pool");
        work.rows.push_back(row);
        ++appended;
        ++st.cuts;
      }
      if (appended > 0) continue;  // re-solve this node with the new global rows

      if (integral) {
        const bool improves = !incumbent || (model.maximize ? lp.objective > *incumbent + 1e-9
                                                            : lp.objective < *incumbent - 1e-9);
        if (improves) {
          incumbent = lp.objective;
          incumbent_values = lp.primal;
          if (callbacks.on_incumbent) callbacks.on_incumbent(lp.primal);
          if (options.log) {
            st.incumbent = incumbent;
            st.best_bound = global_bound();
            st.gap_percent = gap_percent(st.best_bound, st.incumbent);
            std::printf("%s\n", st.progress_line(elapsed()).c_str());
          }
        }
        resolved = true;
        break;
      }

      // Branch.
      const double v = lp.primal[static_cast<std::size_t>(frac_col)];
      Node down, up;
      down.fixes = node.fixes;
      down.fixes.emplace_back(frac_col, std::floor(v), std::floor(v));
      up.fixes = node.fixes;
      up.fixes.emplace_back(frac_col, std::ceil(v), std::ceil(v));
      down.depth = up.depth = node.depth + 1;
      down.bound = up.bound = lp.objective;
      down.hint = up.hint = lp.basis;
      const bool prefer_up = v - std::floor(v) >= 0.5;
      down.id = next_id++;
      up.id = next_id++;
      if (prefer_up) {
        open.push_back(std::move(down));
        dive.push_back(std::move(up));
      } else {
        open.push_back(std::move(up));
        dive.push_back(std::move(down));
      }
      resolved = true;
    }

    if (st.termination == "lp_failure" || st.termination == "time_limit") break;
    if (lp.status == LpStatus::unbounded) {
      st.termination = "unbounded";
      break;
    }
    if (st.nodes == 1 && lp.status == LpStatus::infeasible) root_infeasible = true;

    // Natural gap-based stop.
    if (incumbent) {
      const double bound = global_bound();
      if (std::abs(bound - *incumbent) <= options.limits.gap_tol * (1 + std::abs(*incumbent))) {
        open.clear();
        dive.clear();
      }
    }
    if (options.log && st.nodes % 25 == 0) {
      st.incumbent = incumbent;
      st.best_bound = global_bound();
      st.gap_percent = gap_percent(st.best_bound, st.incumbent);
      std::printf("%s\n", st.progress_line(elapsed()).c_str());
    }
  }

  st.wall_time_s = elapsed();
  st.incumbent = incumbent;
  st.best_bound = incumbent ? *incumbent : (model.maximize ? kInf : -kInf);
  if (st.termination != "optimal") {
    const double b = global_bound();
    if (std::isfinite(b) || incumbent) st.best_bound = b;
  }
  st.gap_percent = gap_percent(st.best_bound, st.incumbent);
  if (st.termination == "optimal" && !incumbent) st.termination = "infeasible";
  (void)root_infeasible;
  if (incumbent) res.values = incumbent_values;
  return res;
}

}  // namespace lineopt
