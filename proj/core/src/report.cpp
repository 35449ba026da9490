#include "lineopt/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace lineopt {

using nlohmann::json;

const char* const kReportHeader =
    "instance,method,percentage,type,t,gap,n_cuts,obj_v,demand_R,demand_S,demand_RS,pairs_R,"
    "pairs_S,pairs_RS";

std::string run_record_to_json(const RunRecord& rec) {
  json doc;
  doc["schema_version"] = rec.schema_version;
  doc["instance"] = rec.instance;
  doc["method"] = rec.method;
  if (rec.percentage) doc["percentage"] = *rec.percentage;
  if (rec.selection_type) doc["type"] = *rec.selection_type;
  doc["time_limit_s"] = rec.time_limit_s;
  json st;
  st["t"] = rec.stats.wall_time_s;
  st["nodes"] = rec.stats.nodes;
  st["n_cuts"] = rec.stats.cuts;
  st["cuts_lazy"] = rec.stats.cuts_lazy;
  st["cuts_user"] = rec.stats.cuts_user;
  if (rec.stats.incumbent) st["obj_v"] = *rec.stats.incumbent;
  st["bound"] = std::isfinite(rec.stats.best_bound) ? json(rec.stats.best_bound) : json();
  if (std::isfinite(rec.stats.gap_percent)) st["gap"] = rec.stats.gap_percent;
  st["termination"] = rec.stats.termination;
  doc["stats"] = std::move(st);
  doc["coverage"] = {{"demand_R", rec.coverage.demand_rapid}, {"demand_S", rec.coverage.demand_slow},
                     {"demand_RS", rec.coverage.demand_both}, {"pairs_R", rec.coverage.pairs_rapid},
                     {"pairs_S", rec.coverage.pairs_slow},    {"pairs_RS", rec.coverage.pairs_both}};
  return doc.dump(2) + "\n";
}

RunRecord run_record_from_json(const std::string& text) {
  const json doc = json::parse(text);
  RunRecord rec;
  rec.schema_version = doc.value("schema_version", 1);
  rec.instance = doc.value("instance", "");
  rec.method = doc.value("method", "");
  if (doc.contains("percentage")) rec.percentage = doc["percentage"].get<double>();
  if (doc.contains("type")) rec.selection_type = doc["type"].get<int>();
  rec.time_limit_s = doc.value("time_limit_s", 0.0);
  if (doc.contains("stats")) {
    const json& st = doc["stats"];
    rec.stats.wall_time_s = st.value("t", 0.0);
    rec.stats.nodes = st.value("nodes", 0LL);
    rec.stats.cuts = st.value("n_cuts", 0LL);
    rec.stats.cuts_lazy = st.value("cuts_lazy", 0LL);
    rec.stats.cuts_user = st.value("cuts_user", 0LL);
    if (st.contains("obj_v")) rec.stats.incumbent = st["obj_v"].get<double>();
    rec.stats.best_bound = st.contains("bound") && !st["bound"].is_null()
                               ? st["bound"].get<double>()
                               : std::numeric_limits<double>::infinity();
    rec.stats.gap_percent = st.contains("gap") ? st["gap"].get<double>()
                                               : std::numeric_limits<double>::infinity();
    rec.stats.termination = st.value("termination", "");
  }
  if (doc.contains("coverage")) {
    const json& cv = doc["coverage"];
    rec.coverage.demand_rapid = cv.value("demand_R", 0LL);
    rec.coverage.demand_slow = cv.value("demand_S", 0LL);
    rec.coverage.demand_both = cv.value("demand_RS", 0LL);
    rec.coverage.pairs_rapid = cv.value("pairs_R", 0);
    rec.coverage.pairs_slow = cv.value("pairs_S", 0);
    rec.coverage.pairs_both = cv.value("pairs_RS", 0);
  }
  return rec;
}

void save_run_record(const RunRecord& rec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << run_record_to_json(rec);
}

RunRecord load_run_record(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return run_record_from_json(buf.str());
}

namespace {

std::string fmt_double(double v, const char* spec = "%.2f") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

// The shared cell values; "-" stands for anything absent (no incumbent, no
// percentage for the direct method, unbounded gap).
std::vector<std::string> record_cells(const RunRecord& r) {
  std::vector<std::string> c;
  c.push_back(r.instance);
  c.push_back(r.method);
  c.push_back(r.percentage ? fmt_double(*r.percentage, "%g") : "-");
  c.push_back(r.selection_type ? std::to_string(*r.selection_type) : "-");
  c.push_back(fmt_double(r.stats.wall_time_s));
  c.push_back(std::isfinite(r.stats.gap_percent) ? fmt_double(r.stats.gap_percent) : "-");
  c.push_back(std::to_string(r.stats.cuts));
  c.push_back(r.stats.incumbent ? fmt_double(*r.stats.incumbent, "%g") : "-");
  c.push_back(std::to_string(r.coverage.demand_rapid));
  c.push_back(std::to_string(r.coverage.demand_slow));
  c.push_back(std::to_string(r.coverage.demand_both));
  c.push_back(std::to_string(r.coverage.pairs_rapid));
  c.push_back(std::to_string(r.coverage.pairs_slow));
  c.push_back(std::to_string(r.coverage.pairs_both));
  return c;
}

std::vector<std::string> header_cells() {
  std::vector<std::string> h;
  std::istringstream is(kReportHeader);
  std::string tok;
  while (std::getline(is, tok, ',')) h.push_back(tok);
  return h;
}

}  // namespace

std::string render_csv(const std::vector<RunRecord>& records) {
  std::ostringstream os;
  os << kReportHeader << "\n";
  for (const RunRecord& r : records) {
    const auto cells = record_cells(r);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os << ",";
      os << cells[i];
    }
    os << "\n";
  }
  return os.str();
}

std::string render_table(const std::vector<RunRecord>& records) {
  const auto header = header_cells();
  std::vector<std::vector<std::string>> body;
  for (const RunRecord& r : records) body.push_back(record_cells(r));
  std::vector<std::size_t> width(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
  for (const auto& row : body)
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  std::ostringstream os;
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << "  ";
      os << row[i];
      for (std::size_t s = row[i].size(); s < width[i]; ++s) os << ' ';
    }
    os << "\n";
  };
  emit(header);
  for (const auto& row : body) emit(row);
  return os.str();
}

}  // namespace lineopt
