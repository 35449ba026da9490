#ifndef LINEOPT_ORACLE_HPP
#define LINEOPT_ORACLE_HPP

#include <optional>
#include <vector>

#include "lineopt/instance.hpp"
#include "lineopt/solution.hpp"

namespace lineopt {

// One candidate pair of line designs: a simple rapid path with a stop /
// non-stop labeling of its interior nodes, and a simple slow path (all stops).
struct EnumeratedDesign {
  std::vector<int> rapid_path;       // node order, first node in O_R
  std::vector<int> rapid_edge_ids;   // one per consecutive node pair
  std::vector<bool> rapid_is_stop;   // per path node; endpoints always true
  std::vector<int> slow_path;
  std::vector<int> slow_edge_ids;

  std::vector<int> rapid_stop_nodes() const;
  std::vector<int> rapid_nonstop_nodes() const;
};

struct OracleLimits {
  long long max_design_pairs = 1000000;
};

// Every feasible (rapid, slow) design pair in a deterministic order:
// rapid designs ordered by (origin id, neighbor edge ids, labeling mask),
// slow designs nested inside. Throws std::runtime_error beyond the cap.
std::vector<EnumeratedDesign> enumerate_designs(const TransitInstance& inst,
                                                const OracleLimits& limits = {});

// The two line designs of `EnumeratedDesign` split apart, for callers that
// need the rapid-only or slow-only enumerations (the sequential baseline).
std::vector<EnumeratedDesign> enumerate_rapid_designs(const TransitInstance& inst,
                                                      const OracleLimits& limits = {});
std::vector<EnumeratedDesign> enumerate_slow_designs(const TransitInstance& inst,
                                                     const OracleLimits& limits = {});

struct Route {
  std::vector<Leg> legs;
  double public_time = 0.0;  // includes the constant wait term
};

// Minimum-time route of one pair over a fixed design, or nullopt when no
// route beats the private utility. `rapid_only` ignores the slow line.
std::optional<Route> best_routing(const TransitInstance& inst, const EnumeratedDesign& design,
                                  const DemandPair& w, bool rapid_only = false,
                                  bool reverse_scan = false);

struct OracleResult {
  std::int64_t objective = 0;
  DesignSolution solution;
  long long designs_seen = 0;
};

// Exhaustive optimum: max over all design pairs of the covered demand.
// Ties resolve to the first design in enumeration order.
OracleResult solve_exact(const TransitInstance& inst, const OracleLimits& limits = {});

// Two-stage baseline at oracle exactness: best rapid-only coverage first,
// then the best slow re-fit around that fixed rapid line, scored jointly.
struct SequentialOracleResult {
  std::int64_t stage1_objective = 0;  // rapid-only coverage of stage 1
  std::int64_t objective = 0;         // joint coverage after stage 2
  DesignSolution solution;
};
SequentialOracleResult solve_sequential_exact(const TransitInstance& inst,
                                              const OracleLimits& limits = {});

// Design + per-pair best routes assembled into a full solution.
DesignSolution assemble_solution(const TransitInstance& inst, const EnumeratedDesign& design,
                                 bool rapid_only = false);

}  // namespace lineopt

#endif  // LINEOPT_ORACLE_HPP
