#ifndef LINEOPT_BB_HPP
#define LINEOPT_BB_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lineopt/milp.hpp"

namespace lineopt {

struct BbLimits {
  double time_limit_s = kInf;
  long long node_limit = -1;  // negative: unlimited
  double gap_tol = 1e-6;      // relative optimality gap for natural termination
};

// What a cut callback sees at a candidate point.
struct CallbackContext {
  const std::vector<double>& values;
  bool integral = false;
  int depth = 0;
  long long node_index = 0;
  double node_bound = 0.0;
};

// Returns violated rows to append globally. Rows must be violated by the
// candidate by more than 1e-6 and must not cut off any feasible integral
// point of the true model; validity is the caller's obligation.
using CutCallback = std::function<std::vector<std::pair<LpRow, RowTag>>(const CallbackContext&)>;

struct BbCallbacks {
  CutCallback lazy;             // integral candidates; silence accepts the incumbent
  CutCallback user;             // fractional nodes
  std::function<void(const std::vector<double>&)> on_incumbent;
};

struct SolveStats {
  double wall_time_s = 0.0;
  long long nodes = 0;
  long long cuts = 0;
  long long cuts_lazy = 0;
  long long cuts_user = 0;
  std::optional<double> incumbent;
  double best_bound = 0.0;
  double gap_percent = 0.0;     // |bound - incumbent| / |incumbent| * 100; inf without incumbent
  std::string termination;      // optimal | infeasible | time_limit | node_limit | lp_failure

  std::string progress_line(double t) const;
};

struct MilpResult {
  std::optional<std::vector<double>> values;  // best incumbent column values
  SolveStats stats;
};

struct BbOptions {
  BbLimits limits;
  std::vector<int> branch_priority;  // per column, lower = branch first; empty = uniform
  int plunge_depth = 10;
  bool log = false;                   // progress lines on stdout
  LpOptions lp;
};

// Single-threaded branch-and-bound: best-bound node order with depth-first
// diving plunges, most-fractional branching, global cut pool. Deterministic
// under fixed limits.
MilpResult solve_milp(const MilpModel& model, const BbCallbacks& callbacks = {},
                      const BbOptions& options = {});

// Most-fractional column, ties by priority class then lowest index.
// Returns -1 when every integer column is integral within 1e-6.
int branching_choice(const std::vector<double>& values, const std::vector<bool>& is_integer,
                     const std::vector<int>& priority);

}  // namespace lineopt

#endif  // LINEOPT_BB_HPP
