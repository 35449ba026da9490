#ifndef LINEOPT_REPORT_HPP
#define LINEOPT_REPORT_HPP

#include <optional>
#include <string>
#include <vector>

#include "lineopt/bb.hpp"
#include "lineopt/solution.hpp"

namespace lineopt {

// One solver run, serializable. Method is "direct", "benders", "sequential"
// or "auto-off" (baseline records produced elsewhere).
struct RunRecord {
  int schema_version = 1;
  std::string instance;
  std::string method;
  std::optional<double> percentage;  // benders only
  std::optional<int> selection_type;
  double time_limit_s = 0.0;
  SolveStats stats;
  CoverageStats coverage;
};

std::string run_record_to_json(const RunRecord& rec);
RunRecord run_record_from_json(const std::string& text);
void save_run_record(const RunRecord& rec, const std::string& path);
RunRecord load_run_record(const std::string& path);

// Fixed column set shared by both renderings.
extern const char* const kReportHeader;  // "instance,method,percentage,..."

std::string render_csv(const std::vector<RunRecord>& records);
std::string render_table(const std::vector<RunRecord>& records);

}  // namespace lineopt

#endif  // LINEOPT_REPORT_HPP
