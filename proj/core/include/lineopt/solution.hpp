#ifndef LINEOPT_SOLUTION_HPP
#define LINEOPT_SOLUTION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "lineopt/instance.hpp"

namespace lineopt {

enum class LegKind : std::uint8_t { walk, ride, transfer_sr, transfer_rs };

// One movement of a rider. Walk legs connect a centroid and a station;
// ride legs carry the ordered arc ids of one in-line segment; transfer legs
// sit at a single dual station. `minutes` includes per-stop dwell for rides.
struct Leg {
  LegKind kind = LegKind::walk;
  Mode mode = Mode::rapid;   // rides and walks: which network
  int from = -1;             // walk: centroid or station; ride: board node
  int to = -1;
  std::vector<int> arcs;
  double minutes = 0.0;
};

struct PairAssignment {
  int pair = -1;
  bool covered = false;
  std::vector<Leg> legs;     // empty unless covered
  double public_time = 0.0;  // includes the constant wait term
};

struct CoverageStats {
  std::int64_t demand_rapid = 0;   // covered demand riding rapid only
  std::int64_t demand_slow = 0;
  std::int64_t demand_both = 0;
  int pairs_rapid = 0;
  int pairs_slow = 0;
  int pairs_both = 0;

  std::int64_t total() const { return demand_rapid + demand_slow + demand_both; }
};

// Chosen designs of both lines plus the per-pair routing that realizes the
// claimed coverage.
struct DesignSolution {
  std::vector<int> rapid_edges;     // edge ids, ascending
  std::vector<int> rapid_stops;     // node ids with a rapid station
  std::vector<int> rapid_nonstops;  // rapid line nodes passed without stopping
  std::vector<int> slow_edges;
  std::vector<int> slow_stops;
  std::vector<PairAssignment> assignments;
  double objective = 0.0;
  CoverageStats stats;

  bool has_rapid_edge(int e) const;
  bool has_slow_edge(int e) const;
  bool rapid_stop(int n) const;
  bool rapid_on_line(int n) const;
  bool slow_stop(int n) const;
};

// Recomputes stats (and the objective) from the assignments.
CoverageStats tally_coverage(const TransitInstance& inst, const std::vector<PairAssignment>& assignments);

// Solution file I/O (JSON). `instance_path` is stored so that rendering can
// find the network again; may be empty.
std::string solution_to_json(const DesignSolution& sol, const std::string& instance_path);
DesignSolution solution_from_json(const std::string& text, std::string* instance_path = nullptr);
void save_solution(const DesignSolution& sol, const std::string& path, const std::string& instance_path);
DesignSolution load_solution(const std::string& path, std::string* instance_path = nullptr);

}  // namespace lineopt

#endif  // LINEOPT_SOLUTION_HPP
