#ifndef LINEOPT_LP_HPP
#define LINEOPT_LP_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace lineopt {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct MilpModel;  // milp.hpp

// One linear row: coef * x  (sense)  rhs, sense in {'<', '=', '>'} meaning
// <=, ==, >=.
struct LpRow {
  std::vector<std::pair<int, double>> coef;
  char sense = '<';
  double rhs = 0.0;
};

struct LpProblem {
  int num_cols = 0;
  std::vector<double> lower;      // may be -inf
  std::vector<double> upper;      // may be +inf
  std::vector<double> objective;
  bool maximize = false;
  std::vector<LpRow> rows;

  int add_col(double lb, double ub, double obj);
  int add_row(std::vector<std::pair<int, double>> coef, char sense, double rhs);
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

const char* to_string(LpStatus s);

// Variable status in a simplex basis. Variables are indexed structural first,
// then one logical (slack) per row.
enum class VarStatus : std::uint8_t { nonbasic_lower, nonbasic_upper, nonbasic_free, basic };

struct LpBasis {
  std::vector<VarStatus> status;  // size num_cols + num_rows
  std::vector<int> basic;         // size num_rows; variable basic at each row position
  bool empty() const { return status.empty(); }
};

// Solve outcome.
//
// Sign conventions, used verbatim by the duality checks in the tests:
//  - duals y are such that  obj == sum_i y_i b_i + sum_{j nonbasic} rc_j x_j
//    with rc = c - A^T y stated in the user's objective sense;
//  - the Farkas ray r (infeasible only) certifies: r_i <= 0 on '<' rows,
//    r_i >= 0 on '>' rows, and  sup_{l<=x<=u} (r^T A) x  <  r^T b.
struct LpOutcome {
  LpStatus status = LpStatus::iteration_limit;
  double objective = 0.0;
  std::vector<double> primal;         // structural columns
  std::vector<double> duals;          // per row
  std::vector<double> reduced_costs;  // structural columns
  std::vector<double> farkas;         // per row; only when infeasible
  LpBasis basis;
  int iterations = 0;
};

struct LpOptions {
  int max_iterations = 200000;
  double feas_tol = 1e-7;
  double opt_tol = 1e-7;
  double pivot_tol = 1e-9;
  int refactor_interval = 100;   // pivots between basis refactorizations
  double refactor_drift = 1e-9;  // residual tolerance triggering refactorization
  int stall_limit = 300;         // non-improving iterations before Bland's rule
};

// Bounded-variable revised simplex. Deterministic for identical input and
// hint; an invalid hint is ignored. Never returns a wrong status: on
// iteration limit the outcome says so.
LpOutcome solve_lp(const LpProblem& lp, const LpBasis* hint = nullptr, const LpOptions& opts = {});

// Drops integrality and solves the relaxation.
LpOutcome solve_lp_relaxation(const MilpModel& model, const LpBasis* hint = nullptr,
                              const LpOptions& opts = {});
LpProblem lp_from_milp(const MilpModel& model);

// Evaluates the dual objective implied by `out` (user sense); at optimality it
// matches `out.objective` up to roundoff.
double lp_dual_objective(const LpProblem& lp, const LpOutcome& out);

// Largest primal residual: bound violations and row violations.
double lp_primal_infeasibility(const LpProblem& lp, const std::vector<double>& x);

// Largest complementary-slackness violation |y_i * slack_i| over rows.
double lp_complementarity(const LpProblem& lp, const LpOutcome& out);

// Verifies the documented Farkas contract by direct multiplication.
bool check_farkas_ray(const LpProblem& lp, const std::vector<double>& ray, double tol = 1e-7,
                      std::string* why = nullptr);

}  // namespace lineopt

#endif  // LINEOPT_LP_HPP
