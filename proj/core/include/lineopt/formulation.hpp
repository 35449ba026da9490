#ifndef LINEOPT_FORMULATION_HPP
#define LINEOPT_FORMULATION_HPP

#include <functional>
#include <optional>
#include <vector>

#include "lineopt/instance.hpp"
#include "lineopt/milp.hpp"
#include "lineopt/solution.hpp"

namespace lineopt {

struct BuiltModel {
  MilpModel model;
  VarDirectory dir;
};

struct BuildOptions {
  // When set, only the listed pair ids receive flow variables and the flow /
  // transfer / routing rows; every pair always gets its assignment, walk and
  // station-choice variables. Unset means every pair.
  std::optional<std::vector<int>> flow_pairs;
  // Drop the slow network entirely: coverage through the rapid line alone.
  bool rapid_only = false;
};

// Full integrated model: all variables binary, objective = covered demand.
BuiltModel build_ind(const TransitInstance& inst);
BuiltModel build_ind_model(const TransitInstance& inst, const BuildOptions& opts);

// Two-stage baseline. Stage 1 locates the rapid line with coverage through
// the rapid mode only; `stage2` then re-fits the slow line around a fixed
// rapid design. Stage 2 throws if the design breaks the rapid-side rows.
struct SequentialModels {
  BuiltModel stage1;
  std::function<BuiltModel(const DesignSolution& rapid_design)> stage2;
};
SequentialModels build_sequential(const TransitInstance& inst);

// Reads a column vector back into a structured solution. Values must be
// integral and row-feasible within 1e-6; covered pairs must decompose into a
// single walk-bracketed origin->destination path.
DesignSolution extract_solution(const TransitInstance& inst, const BuiltModel& built,
                                const std::vector<double>& values);

// Re-checks every constraint family directly on a structured solution,
// independently of any MilpModel rows.
struct FamilyCheck {
  std::string family;
  bool pass = true;
  std::string detail;  // first violation, empty when pass
};
struct FeasibilityReport {
  std::vector<FamilyCheck> families;
  bool ok = true;
  std::string first_failure() const;
};
FeasibilityReport check_feasibility(const TransitInstance& inst, const DesignSolution& sol);

// Closed-form column count of the full integrated model; the builder's
// directory size must always match.
long long expected_ind_columns(const TransitInstance& inst);

// Branching priority classes: edges first, then stations, non-stops,
// assignment flags, station choices, h, flows last.
std::vector<int> default_branch_priorities(const VarDirectory& dir);

}  // namespace lineopt

#endif  // LINEOPT_FORMULATION_HPP
