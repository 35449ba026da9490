#include "lineopt/solution.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace lineopt {

using nlohmann::json;

bool DesignSolution::has_rapid_edge(int e) const {
  return std::find(rapid_edges.begin(), rapid_edges.end(), e) != rapid_edges.end();
}
bool DesignSolution::has_slow_edge(int e) const {
  return std::find(slow_edges.begin(), slow_edges.end(), e) != slow_edges.end();
}
bool DesignSolution::rapid_stop(int n) const {
  return std::find(rapid_stops.begin(), rapid_stops.end(), n) != rapid_stops.end();
}
bool DesignSolution::rapid_on_line(int n) const {
  return rapid_stop(n) ||
         std::find(rapid_nonstops.begin(), rapid_nonstops.end(), n) != rapid_nonstops.end();
}
bool DesignSolution::slow_stop(int n) const {
  return std::find(slow_stops.begin(), slow_stops.end(), n) != slow_stops.end();
}

CoverageStats tally_coverage(const TransitInstance& inst,
                             const std::vector<PairAssignment>& assignments) {
  CoverageStats s;
  for (const PairAssignment& a : assignments) {
    if (!a.covered) continue;
    bool rapid = false, slow = false;
    for (const Leg& l : a.legs) {
      if (l.kind != LegKind::ride) continue;
      if (l.mode == Mode::rapid) rapid = true;
      else slow = true;
    }
    const std::int64_t g = inst.demands.at(static_cast<std::size_t>(a.pair)).demand;
    if (rapid && slow) { s.demand_both += g; ++s.pairs_both; }
    else if (rapid) { s.demand_rapid += g; ++s.pairs_rapid; }
    else if (slow) { s.demand_slow += g; ++s.pairs_slow; }
  }
  return s;
}

namespace {

const char* leg_kind_name(LegKind k) {
  switch (k) {
    case LegKind::walk: return "walk";
    case LegKind::ride: return "ride";
    case LegKind::transfer_sr: return "transfer_sr";
    case LegKind::transfer_rs: return "transfer_rs";
  }
  return "?";
}

LegKind leg_kind_from(const std::string& s) {
  if (s == "walk") return LegKind::walk;
  if (s == "ride") return LegKind::ride;
  if (s == "transfer_sr") return LegKind::transfer_sr;
  if (s == "transfer_rs") return LegKind::transfer_rs;
  throw std::runtime_error("unknown leg kind " + s);
}

}  // namespace

std::string solution_to_json(const DesignSolution& sol, const std::string& instance_path) {
  json doc;
  doc["schema_version"] = 1;
  if (!instance_path.empty()) doc["instance_file"] = instance_path;
  doc["objective"] = sol.objective;
  doc["rapid_edges"] = sol.rapid_edges;
  doc["rapid_stops"] = sol.rapid_stops;
  doc["rapid_nonstops"] = sol.rapid_nonstops;
  doc["slow_edges"] = sol.slow_edges;
  doc["slow_stops"] = sol.slow_stops;
  doc["stats"] = {{"demand_R", sol.stats.demand_rapid}, {"demand_S", sol.stats.demand_slow},
                  {"demand_RS", sol.stats.demand_both}, {"pairs_R", sol.stats.pairs_rapid},
                  {"pairs_S", sol.stats.pairs_slow},    {"pairs_RS", sol.stats.pairs_both}};
  json pairs = json::array();
  for (const PairAssignment& a : sol.assignments) {
    json ja;
    ja["pair"] = a.pair;
    ja["covered"] = a.covered;
    if (a.covered) {
      ja["public_time"] = a.public_time;
      json legs = json::array();
      for (const Leg& l : a.legs) {
        json jl;
        jl["kind"] = leg_kind_name(l.kind);
        jl["mode"] = to_string(l.mode);
        jl["from"] = l.from;
        jl["to"] = l.to;
        jl["minutes"] = l.minutes;
        if (!l.arcs.empty()) jl["arcs"] = l.arcs;
        legs.push_back(std::move(jl));
      }
      ja["legs"] = std::move(legs);
    }
    pairs.push_back(std::move(ja));
  }
  doc["assignments"] = std::move(pairs);
  return doc.dump(2) + "\n";
}

DesignSolution solution_from_json(const std::string& text, std::string* instance_path) {
  const json doc = json::parse(text);
  DesignSolution sol;
  if (instance_path != nullptr)
    *instance_path = doc.contains("instance_file") ? doc["instance_file"].get<std::string>() : "";
  sol.objective = doc.at("objective").get<double>();
  sol.rapid_edges = doc.at("rapid_edges").get<std::vector<int>>();
  sol.rapid_stops = doc.at("rapid_stops").get<std::vector<int>>();
  sol.rapid_nonstops = doc.at("rapid_nonstops").get<std::vector<int>>();
  sol.slow_edges = doc.at("slow_edges").get<std::vector<int>>();
  sol.slow_stops = doc.at("slow_stops").get<std::vector<int>>();
  const json& st = doc.at("stats");
  sol.stats.demand_rapid = st.at("demand_R").get<std::int64_t>();
  sol.stats.demand_slow = st.at("demand_S").get<std::int64_t>();
  sol.stats.demand_both = st.at("demand_RS").get<std::int64_t>();
  sol.stats.pairs_rapid = st.at("pairs_R").get<int>();
  sol.stats.pairs_slow = st.at("pairs_S").get<int>();
  sol.stats.pairs_both = st.at("pairs_RS").get<int>();
  for (const json& ja : doc.at("assignments")) {
    PairAssignment a;
    a.pair = ja.at("pair").get<int>();
    a.covered = ja.at("covered").get<bool>();
    if (a.covered) {
      a.public_time = ja.at("public_time").get<double>();
      for (const json& jl : ja.at("legs")) {
        Leg l;
        l.kind = leg_kind_from(jl.at("kind").get<std::string>());
        l.mode = jl.at("mode").get<std::string>() == "rapid" ? Mode::rapid : Mode::slow;
        l.from = jl.at("from").get<int>();
        l.to = jl.at("to").get<int>();
        l.minutes = jl.at("minutes").get<double>();
        if (jl.contains("arcs")) l.arcs = jl.at("arcs").get<std::vector<int>>();
        a.legs.push_back(std::move(l));
      }
    }
    sol.assignments.push_back(std::move(a));
  }
  return sol;
}

void save_solution(const DesignSolution& sol, const std::string& path,
                   const std::string& instance_path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << solution_to_json(sol, instance_path);
}

DesignSolution load_solution(const std::string& path, std::string* instance_path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return solution_from_json(buf.str(), instance_path);
}

}  // namespace lineopt
