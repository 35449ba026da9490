#ifndef LINEOPT_BENDERS_HPP
#define LINEOPT_BENDERS_HPP

#include <optional>
#include <string>
#include <vector>

#include "lineopt/bb.hpp"
#include "lineopt/formulation.hpp"
#include "lineopt/instance.hpp"
#include "lineopt/lp.hpp"
#include "lineopt/solution.hpp"

namespace lineopt {

struct PartialConfig {
  double percentage = 0.0;   // share of O/D pairs whose flows stay in the master
  int selection_type = 2;    // 1 random, 2 highest demand, 3 lowest demand
  unsigned int seed = 1;     // drives the random selection
};

// round(percentage/100 * |W|) pairs, by the configured rule. Ties in the
// demand orderings break by pair id; the random rule is a seeded shuffle.
std::vector<int> select_retained_pairs(const TransitInstance& inst, const PartialConfig& cfg);

// Master with design, assignment, station-choice and h variables for every
// pair, plus full flow blocks for the retained pairs only.
struct PartialMaster {
  BuiltModel built;
  std::vector<int> retained;  // ascending pair ids
};
PartialMaster build_partial_master(const TransitInstance& inst, const PartialConfig& cfg);

// Feasibility subproblem of one pair: continuous flows in [0,1], right-hand
// sides assembled from a master point. Row order matches the cut generator.
LpProblem build_subproblem(const TransitInstance& inst, const VarDirectory& dir, int pair,
                           const std::vector<double>& separation_point);

struct StabilizationParams {
  double lambda = 0.5;  // separation point = out - lambda * (out - in)
};

struct BendersCut {
  LpRow row;                    // over master columns, '>' sense
  int pair = -1;
  double lambda = 0.0;
  double dual_objective = 0.0;  // cut-generating LP value at the separation point
  double violation = 0.0;       // violation at the out point when emitted
};

// In-out state. The in point must stay feasible for the master LP relaxation.
struct StabilizationState {
  std::vector<double> in_point;
  double lambda = 0.5;
};

// Cut-generating dual LP for one pair at the stabilized point; returns a cut
// violated at the out point by more than 1e-6, retrying once at lambda = 0,
// or nullopt when the subproblem is feasible there.
class BendersSeparator {
 public:
  BendersSeparator(const TransitInstance& inst, const VarDirectory& dir);
  ~BendersSeparator();
  BendersSeparator(const BendersSeparator&) = delete;
  BendersSeparator& operator=(const BendersSeparator&) = delete;

  std::optional<BendersCut> separate(int pair, const std::vector<double>& out_point,
                                     const StabilizationState& stab) const;

 private:
  struct Impl;
  Impl* impl_;
};

struct BendersOptions {
  PartialConfig partial;
  StabilizationParams stabilization;
  BbLimits limits;
  bool log = false;
  bool collect_cuts = false;  // keep the emitted cuts for auditing
  int user_cut_node_stride = 10;
  int user_cut_max_depth = 5;
};

struct BendersResult {
  std::optional<DesignSolution> solution;
  SolveStats stats;
  std::vector<BendersCut> cuts;    // only when collect_cuts
  std::vector<int> retained;
};

// Branch-and-cut on the partial master: lazy separation of every non-retained
// pair at integral candidates (a candidate is accepted only when no pair
// yields a cut), stabilized separation at fractional nodes.
BendersResult solve_benders(const TransitInstance& inst, const BendersOptions& options);

// Master column values realizing a structured solution (flows included where
// the directory carries them); used to audit cuts against known designs.
std::vector<double> master_point_from_solution(const TransitInstance& inst, const BuiltModel& built,
                                               const DesignSolution& sol);

// Cut audit helper: slack of `cut.row` at a point (>= -1e-6 means satisfied).
double cut_slack(const LpRow& row, const std::vector<double>& point);

}  // namespace lineopt

#endif  // LINEOPT_BENDERS_HPP
