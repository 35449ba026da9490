#include "lineopt/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace lineopt {

using nlohmann::json;

double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

const char* to_string(Mode m) { return m == Mode::rapid ? "rapid" : "slow"; }

namespace {

constexpr double kMetersPerKm = 1000.0;
constexpr double kMinutesPerHour = 60.0;

// minutes to cover `meters` at `kmh`
double travel_minutes(double meters, double kmh) {
  return meters / (kmh * kMetersPerKm / kMinutesPerHour);
}

std::string idx(const std::string& base, std::size_t i, const std::string& field = "") {
  std::ostringstream os;
  os << base << "[" << i << "]";
  if (!field.empty()) os << "." << field;
  return os.str();
}

}  // namespace

std::optional<double> TransitInstance::walk_time(int centroid, int station, Mode m) const {
  for (const WalkLink& l : walk_links) {
    if (l.centroid == centroid && l.station == station && l.mode == m) return l.walk_time;
  }
  return std::nullopt;
}

const std::vector<int>& TransitInstance::arcs_out(int node, Mode m) const {
  return out_arcs_by_mode[static_cast<int>(m)].at(static_cast<std::size_t>(node));
}

const std::vector<int>& TransitInstance::arcs_in(int node, Mode m) const {
  return in_arcs_by_mode[static_cast<int>(m)].at(static_cast<std::size_t>(node));
}

const std::vector<int>& TransitInstance::edges_at(int node, Mode m) const {
  return edges_by_mode[static_cast<int>(m)].at(static_cast<std::size_t>(node));
}

void derive_arcs(TransitInstance& inst) {
  inst.arcs.clear();
  int next = 0;
  for (const Edge& e : inst.edges) {
    for (int mi = 0; mi < 2; ++mi) {
      const Mode m = mi == 0 ? Mode::rapid : Mode::slow;
      if ((m == Mode::rapid && !e.in_rapid) || (m == Mode::slow && !e.in_slow)) continue;
      const double speed = m == Mode::rapid ? inst.params.rapid_speed : inst.params.slow_speed;
      const double t = travel_minutes(e.length, speed);
      inst.arcs.push_back({next++, e.id, e.endpoints[0], e.endpoints[1], m, t});
      inst.arcs.push_back({next++, e.id, e.endpoints[1], e.endpoints[0], m, t});
    }
  }
}

std::vector<WalkLink> derive_walk_links(const TransitInstance& inst) {
  std::vector<WalkLink> links;
  for (const Centroid& c : inst.centroids) {
    for (const Node& n : inst.nodes) {
      const double d = distance(c.position, n.position);
      if (n.in_rapid && d <= inst.params.max_walk_rapid) {
        links.push_back({c.id, n.id, Mode::rapid, travel_minutes(d, inst.params.walk_speed)});
      }
      if (n.in_slow && d <= inst.params.max_walk_slow) {
        links.push_back({c.id, n.id, Mode::slow, travel_minutes(d, inst.params.walk_speed)});
      }
    }
  }
  return links;
}

void compute_private_utilities(TransitInstance& inst) {
  for (DemandPair& w : inst.demands) {
    const Point& a = inst.centroid(w.origin).position;
    const Point& b = inst.centroid(w.dest).position;
    const double d = distance(a, b);
    if (d <= 0.0) {
      throw ValidationError(idx("demands", static_cast<std::size_t>(w.id)),
                            "origin and destination centroids coincide");
    }
    w.private_utility = inst.params.private_utility_factor * travel_minutes(d, inst.params.private_speed);
  }
}

void validate(TransitInstance& inst) {
  const InstanceParams& p = inst.params;
  if (p.max_rapid_edges <= 0) throw ValidationError("params.max_rapid_edges", "must be positive");
  if (p.max_slow_edges <= 0) throw ValidationError("params.max_slow_edges", "must be positive");
  if (p.min_unchanged_slow_edges < 0)
    throw ValidationError("params.min_unchanged_slow_edges", "must be non-negative");
  if (p.min_unchanged_slow_edges > p.max_slow_edges)
    throw ValidationError("params.min_unchanged_slow_edges", "exceeds max_slow_edges");
  for (const auto& [name, v] : std::initializer_list<std::pair<const char*, double>>{
           {"min_station_spacing", p.min_station_spacing},
           {"max_walk_rapid", p.max_walk_rapid},
           {"max_walk_slow", p.max_walk_slow},
           {"walk_speed", p.walk_speed},
           {"rapid_speed", p.rapid_speed},
           {"slow_speed", p.slow_speed},
           {"private_speed", p.private_speed},
           {"private_utility_factor", p.private_utility_factor}}) {
    if (!(v > 0.0)) throw ValidationError(std::string("params.") + name, "must be positive");
  }
  for (const auto& [name, v] : std::initializer_list<std::pair<const char*, double>>{
           {"transfer_time_rs", p.transfer_time_rs},
           {"transfer_time_sr", p.transfer_time_sr},
           {"stop_time_rapid", p.stop_time_rapid},
           {"stop_time_slow", p.stop_time_slow},
           {"wait_time", p.wait_time}}) {
    if (v < 0.0) throw ValidationError(std::string("params.") + name, "must be non-negative");
  }

  // Nodes: dense ids, mode membership, origin/destination flags.
  for (std::size_t i = 0; i < inst.nodes.size(); ++i) {
    const Node& n = inst.nodes[i];
    if (n.id != static_cast<int>(i)) throw ValidationError(idx("nodes", i, "id"), "ids must be dense 0..n-1");
    if (!n.in_rapid && !n.in_slow)
      throw ValidationError(idx("nodes", i), "node belongs to neither network (node_mode_membership)");
    if (n.rapid_origin && !n.in_rapid)
      throw ValidationError(idx("nodes", i, "rapid_origin"), "origin flag on non-rapid node");
    if (n.rapid_dest && !n.in_rapid)
      throw ValidationError(idx("nodes", i, "rapid_dest"), "destination flag on non-rapid node");
    if (n.slow_origin && !n.in_slow)
      throw ValidationError(idx("nodes", i, "slow_origin"), "origin flag on non-slow node");
    if (n.slow_dest && !n.in_slow)
      throw ValidationError(idx("nodes", i, "slow_dest"), "destination flag on non-slow node");
  }

  for (std::size_t i = 0; i < inst.edges.size(); ++i) {
    const Edge& e = inst.edges[i];
    if (e.id != static_cast<int>(i)) throw ValidationError(idx("edges", i, "id"), "ids must be dense 0..n-1");
    for (int s = 0; s < 2; ++s) {
      const int v = e.endpoints[s];
      if (v < 0 || v >= static_cast<int>(inst.nodes.size()))
        throw ValidationError(idx("edges", i, "endpoints"), "unknown node id " + std::to_string(v));
    }
    if (e.endpoints[0] == e.endpoints[1])
      throw ValidationError(idx("edges", i, "endpoints"), "self-loop edges are not allowed");
    if (!e.in_rapid && !e.in_slow)
      throw ValidationError(idx("edges", i), "edge belongs to neither network (edge_mode_membership)");
    for (int s = 0; s < 2; ++s) {
      const Node& n = inst.node(e.endpoints[s]);
      if (e.in_rapid && !n.in_rapid)
        throw ValidationError(idx("edges", i),
                              "rapid edge endpoint " + std::to_string(n.id) +
                                  " lacks the rapid flag (edge_mode_consistency)");
      if (e.in_slow && !n.in_slow)
        throw ValidationError(idx("edges", i),
                              "slow edge endpoint " + std::to_string(n.id) +
                                  " lacks the slow flag (edge_mode_consistency)");
    }
    if (!(e.length > 0.0)) throw ValidationError(idx("edges", i, "length"), "must be positive");
    if (e.on_old_slow_line && !e.in_slow)
      throw ValidationError(idx("edges", i, "on_old_slow_line"), "old-line flag on non-slow edge");
  }

  int old_line_edges = 0;
  for (const Edge& e : inst.edges)
    if (e.on_old_slow_line) ++old_line_edges;
  if (p.min_unchanged_slow_edges > old_line_edges)
    throw ValidationError("params.min_unchanged_slow_edges",
                          "exceeds the number of old-line edges (" + std::to_string(old_line_edges) + ")");

  for (std::size_t i = 0; i < inst.centroids.size(); ++i) {
    const Centroid& c = inst.centroids[i];
    if (c.id != static_cast<int>(i))
      throw ValidationError(idx("centroids", i, "id"), "ids must be dense 0..n-1");
    for (const Node& n : inst.nodes) {
      if (distance(c.position, n.position) == 0.0)
        throw ValidationError(idx("centroids", i),
                              "centroid coincides with node " + std::to_string(n.id) +
                                  " (centroid_station_disjoint)");
    }
  }

  for (std::size_t i = 0; i < inst.demands.size(); ++i) {
    const DemandPair& w = inst.demands[i];
    if (w.id != static_cast<int>(i)) throw ValidationError(idx("demands", i, "id"), "ids must be dense 0..n-1");
    if (w.origin < 0 || w.origin >= static_cast<int>(inst.centroids.size()))
      throw ValidationError(idx("demands", i, "origin"), "unknown centroid id " + std::to_string(w.origin));
    if (w.dest < 0 || w.dest >= static_cast<int>(inst.centroids.size()))
      throw ValidationError(idx("demands", i, "dest"), "unknown centroid id " + std::to_string(w.dest));
    if (w.origin == w.dest) throw ValidationError(idx("demands", i), "origin equals destination");
    if (w.demand < 0) throw ValidationError(idx("demands", i, "demand"), "must be non-negative");
    if (!(w.private_utility > 0.0))
      throw ValidationError(idx("demands", i, "private_utility"), "must be positive");
  }

  if (inst.arcs.empty()) derive_arcs(inst);
  if (inst.walk_links.empty()) inst.walk_links = derive_walk_links(inst);

  // Arc consistency: exactly two opposite arcs per edge mode membership.
  std::map<std::pair<int, int>, int> arcs_per_edge_mode;  // (edge, mode) -> count
  for (std::size_t i = 0; i < inst.arcs.size(); ++i) {
    const Arc& a = inst.arcs[i];
    if (a.id != static_cast<int>(i)) throw ValidationError(idx("arcs", i, "id"), "ids must be dense 0..n-1");
    if (a.edge < 0 || a.edge >= static_cast<int>(inst.edges.size()))
      throw ValidationError(idx("arcs", i, "edge"), "unknown edge id");
    const Edge& e = inst.edge(a.edge);
    if (!e.touches(a.tail) || !e.touches(a.head) || a.tail == a.head)
      throw ValidationError(idx("arcs", i), "arc endpoints do not match its edge");
    if (a.mode == Mode::rapid && !e.in_rapid)
      throw ValidationError(idx("arcs", i, "mode"), "rapid arc on non-rapid edge");
    if (a.mode == Mode::slow && !e.in_slow)
      throw ValidationError(idx("arcs", i, "mode"), "slow arc on non-slow edge");
    ++arcs_per_edge_mode[{a.edge, static_cast<int>(a.mode)}];
  }
  for (const Edge& e : inst.edges) {
    if (e.in_rapid && arcs_per_edge_mode[{e.id, 0}] != 2)
      throw ValidationError(idx("edges", static_cast<std::size_t>(e.id)),
                            "edge must induce exactly two rapid arcs (arc_pairing)");
    if (e.in_slow && arcs_per_edge_mode[{e.id, 1}] != 2)
      throw ValidationError(idx("edges", static_cast<std::size_t>(e.id)),
                            "edge must induce exactly two slow arcs (arc_pairing)");
  }

  for (std::size_t i = 0; i < inst.walk_links.size(); ++i) {
    const WalkLink& l = inst.walk_links[i];
    if (l.centroid < 0 || l.centroid >= static_cast<int>(inst.centroids.size()))
      throw ValidationError(idx("walk_links", i, "centroid"), "unknown centroid id");
    if (l.station < 0 || l.station >= static_cast<int>(inst.nodes.size()))
      throw ValidationError(idx("walk_links", i, "station"), "unknown node id");
    const Node& n = inst.node(l.station);
    if (l.mode == Mode::rapid && !n.in_rapid)
      throw ValidationError(idx("walk_links", i), "rapid walk link to a non-rapid node");
    if (l.mode == Mode::slow && !n.in_slow)
      throw ValidationError(idx("walk_links", i), "slow walk link to a non-slow node");
    if (l.walk_time < 0.0) throw ValidationError(idx("walk_links", i, "walk_time"), "must be non-negative");
  }

  // Index helpers.
  inst.rapid_nodes.clear();
  inst.slow_nodes.clear();
  inst.transfer_nodes.clear();
  inst.rapid_origins.clear();
  inst.rapid_dests.clear();
  inst.slow_origins.clear();
  inst.slow_dests.clear();
  for (const Node& n : inst.nodes) {
    if (n.in_rapid) inst.rapid_nodes.push_back(n.id);
    if (n.in_slow) inst.slow_nodes.push_back(n.id);
    if (n.is_transfer()) inst.transfer_nodes.push_back(n.id);
    if (n.rapid_origin) inst.rapid_origins.push_back(n.id);
    if (n.rapid_dest) inst.rapid_dests.push_back(n.id);
    if (n.slow_origin) inst.slow_origins.push_back(n.id);
    if (n.slow_dest) inst.slow_dests.push_back(n.id);
  }
  inst.rapid_edges.clear();
  inst.slow_edges.clear();
  for (const Edge& e : inst.edges) {
    if (e.in_rapid) inst.rapid_edges.push_back(e.id);
    if (e.in_slow) inst.slow_edges.push_back(e.id);
  }
  if (inst.rapid_origins.empty()) throw ValidationError("nodes", "no rapid origin candidates (O_R empty)");
  if (inst.rapid_dests.empty()) throw ValidationError("nodes", "no rapid destination candidates (D_R empty)");
  if (inst.slow_origins.empty()) throw ValidationError("nodes", "no slow origin candidates (O_S empty)");
  if (inst.slow_dests.empty()) throw ValidationError("nodes", "no slow destination candidates (D_S empty)");

  inst.num_rapid_arcs = 0;
  inst.num_slow_arcs = 0;
  for (int mi = 0; mi < 2; ++mi) {
    inst.out_arcs_by_mode[mi].assign(inst.nodes.size(), {});
    inst.in_arcs_by_mode[mi].assign(inst.nodes.size(), {});
    inst.edges_by_mode[mi].assign(inst.nodes.size(), {});
  }
  for (const Arc& a : inst.arcs) {
    const int mi = static_cast<int>(a.mode);
    inst.out_arcs_by_mode[mi][static_cast<std::size_t>(a.tail)].push_back(a.id);
    inst.in_arcs_by_mode[mi][static_cast<std::size_t>(a.head)].push_back(a.id);
    if (a.mode == Mode::rapid) ++inst.num_rapid_arcs; else ++inst.num_slow_arcs;
  }
  for (const Edge& e : inst.edges) {
    for (int s = 0; s < 2; ++s) {
      if (e.in_rapid) inst.edges_by_mode[0][static_cast<std::size_t>(e.endpoints[s])].push_back(e.id);
      if (e.in_slow) inst.edges_by_mode[1][static_cast<std::size_t>(e.endpoints[s])].push_back(e.id);
    }
  }
}

TransitInstance filter_by_demand(const TransitInstance& inst, std::int64_t threshold) {
  TransitInstance out = inst;
  out.demands.clear();
  for (const DemandPair& w : inst.demands) {
    if (w.demand > 0 && w.demand >= threshold) {
      DemandPair kept = w;
      kept.id = static_cast<int>(out.demands.size());
      out.demands.push_back(kept);
    }
  }
  validate(out);
  return out;
}

// ---------------------------------------------------------------------------
// JSON I/O

namespace {

const json* find_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

template <typename T>
T require(const json& obj, const std::string& path, const char* key) {
  const json* f = find_field(obj, key);
  if (f == nullptr) throw ValidationError(path + "." + key, "missing required field");
  try {
    return f->get<T>();
  } catch (const json::exception&) {
    throw ValidationError(path + "." + key, "wrong type");
  }
}

template <typename T>
T optional_field(const json& obj, const std::string& path, const char* key, T fallback) {
  const json* f = find_field(obj, key);
  if (f == nullptr) return fallback;
  try {
    return f->get<T>();
  } catch (const json::exception&) {
    throw ValidationError(path + "." + key, "wrong type");
  }
}

Mode parse_mode(const json& obj, const std::string& path) {
  const std::string s = require<std::string>(obj, path, "mode");
  if (s == "rapid") return Mode::rapid;
  if (s == "slow") return Mode::slow;
  throw ValidationError(path + ".mode", "expected \"rapid\" or \"slow\"");
}

}  // namespace

TransitInstance parse_instance(const std::string& json_text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(origin, std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError(origin, "top level must be an object");

  TransitInstance inst;
  inst.name = optional_field<std::string>(doc, "", "name", "");

  const json* params = find_field(doc, "params");
  if (params == nullptr) throw ValidationError("params", "missing required section");
  InstanceParams& p = inst.params;
  p.max_rapid_edges = require<int>(*params, "params", "max_rapid_edges");
  p.max_slow_edges = require<int>(*params, "params", "max_slow_edges");
  p.min_unchanged_slow_edges = require<int>(*params, "params", "min_unchanged_slow_edges");
  p.min_station_spacing = optional_field(*params, "params", "min_station_spacing", p.min_station_spacing);
  p.max_walk_rapid = optional_field(*params, "params", "max_walk_rapid", p.max_walk_rapid);
  p.max_walk_slow = optional_field(*params, "params", "max_walk_slow", p.max_walk_slow);
  p.walk_speed = optional_field(*params, "params", "walk_speed", p.walk_speed);
  p.rapid_speed = optional_field(*params, "params", "rapid_speed", p.rapid_speed);
  p.slow_speed = optional_field(*params, "params", "slow_speed", p.slow_speed);
  p.private_speed = optional_field(*params, "params", "private_speed", p.private_speed);
  p.transfer_time_rs = optional_field(*params, "params", "transfer_time_rs", p.transfer_time_rs);
  p.transfer_time_sr = optional_field(*params, "params", "transfer_time_sr", p.transfer_time_sr);
  p.stop_time_rapid = optional_field(*params, "params", "stop_time_rapid", p.stop_time_rapid);
  p.stop_time_slow = optional_field(*params, "params", "stop_time_slow", p.stop_time_slow);
  p.wait_time = optional_field(*params, "params", "wait_time", p.wait_time);
  p.private_utility_factor =
      optional_field(*params, "params", "private_utility_factor", p.private_utility_factor);
  p.enable_shape_constraints =
      optional_field(*params, "params", "enable_shape_constraints", p.enable_shape_constraints);

  const json* nodes = find_field(doc, "nodes");
  if (nodes == nullptr || !nodes->is_array()) throw ValidationError("nodes", "missing required array");
  for (std::size_t i = 0; i < nodes->size(); ++i) {
    const json& jn = (*nodes)[i];
    const std::string path = idx("nodes", i);
    Node n;
    n.id = require<int>(jn, path, "id");
    n.position.x = require<double>(jn, path, "x");
    n.position.y = require<double>(jn, path, "y");
    n.in_rapid = optional_field(jn, path, "in_rapid", false);
    n.in_slow = optional_field(jn, path, "in_slow", false);
    n.rapid_origin = optional_field(jn, path, "rapid_origin", false);
    n.rapid_dest = optional_field(jn, path, "rapid_dest", false);
    n.slow_origin = optional_field(jn, path, "slow_origin", false);
    n.slow_dest = optional_field(jn, path, "slow_dest", false);
    inst.nodes.push_back(n);
  }

  const json* edges = find_field(doc, "edges");
  if (edges == nullptr || !edges->is_array()) throw ValidationError("edges", "missing required array");
  for (std::size_t i = 0; i < edges->size(); ++i) {
    const json& je = (*edges)[i];
    const std::string path = idx("edges", i);
    Edge e;
    e.id = require<int>(je, path, "id");
    const auto ends = require<std::vector<int>>(je, path, "endpoints");
    if (ends.size() != 2) throw ValidationError(path + ".endpoints", "expected exactly two node ids");
    e.endpoints[0] = ends[0];
    e.endpoints[1] = ends[1];
    e.in_rapid = optional_field(je, path, "in_rapid", false);
    e.in_slow = optional_field(je, path, "in_slow", false);
    e.length = require<double>(je, path, "length");
    e.on_old_slow_line = optional_field(je, path, "on_old_slow_line", false);
    inst.edges.push_back(e);
  }

  const json* centroids = find_field(doc, "centroids");
  if (centroids == nullptr || !centroids->is_array())
    throw ValidationError("centroids", "missing required array");
  for (std::size_t i = 0; i < centroids->size(); ++i) {
    const json& jc = (*centroids)[i];
    const std::string path = idx("centroids", i);
    Centroid c;
    c.id = require<int>(jc, path, "id");
    c.position.x = require<double>(jc, path, "x");
    c.position.y = require<double>(jc, path, "y");
    inst.centroids.push_back(c);
  }

  const json* demands = find_field(doc, "demands");
  if (demands == nullptr || !demands->is_array()) throw ValidationError("demands", "missing required array");
  bool needs_utilities = false;
  for (std::size_t i = 0; i < demands->size(); ++i) {
    const json& jw = (*demands)[i];
    const std::string path = idx("demands", i);
    DemandPair w;
    w.id = require<int>(jw, path, "id");
    w.origin = require<int>(jw, path, "origin");
    w.dest = require<int>(jw, path, "dest");
    w.demand = require<std::int64_t>(jw, path, "demand");
    if (find_field(jw, "private_utility") != nullptr) {
      w.private_utility = require<double>(jw, path, "private_utility");
    } else {
      w.private_utility = -1.0;  // filled below
      needs_utilities = true;
    }
    inst.demands.push_back(w);
  }

  if (const json* links = find_field(doc, "walk_links"); links != nullptr) {
    if (!links->is_array()) throw ValidationError("walk_links", "must be an array");
    for (std::size_t i = 0; i < links->size(); ++i) {
      const json& jl = (*links)[i];
      const std::string path = idx("walk_links", i);
      WalkLink l;
      l.centroid = require<int>(jl, path, "centroid");
      l.station = require<int>(jl, path, "station");
      l.mode = parse_mode(jl, path);
      l.walk_time = require<double>(jl, path, "walk_time");
      inst.walk_links.push_back(l);
    }
  }

  // Zero-demand pairs carry no coverage and are dropped on load.
  {
    std::vector<DemandPair> kept;
    for (const DemandPair& w : inst.demands)
      if (w.demand > 0) kept.push_back(w);
    for (std::size_t i = 0; i < kept.size(); ++i) kept[i].id = static_cast<int>(i);
    inst.demands = std::move(kept);
  }

  if (needs_utilities) {
    // Only recompute the pairs that did not carry a value.
    for (DemandPair& w : inst.demands) {
      if (w.private_utility >= 0.0) continue;
      if (w.origin >= 0 && w.origin < static_cast<int>(inst.centroids.size()) && w.dest >= 0 &&
          w.dest < static_cast<int>(inst.centroids.size())) {
        const double d = distance(inst.centroid(w.origin).position, inst.centroid(w.dest).position);
        if (d <= 0.0)
          throw ValidationError(idx("demands", static_cast<std::size_t>(w.id)),
                                "origin and destination centroids coincide");
        w.private_utility =
            inst.params.private_utility_factor * travel_minutes(d, inst.params.private_speed);
      }
    }
  }

  validate(inst);
  return inst;
}

TransitInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path, "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str(), path);
}

std::string instance_to_json(const TransitInstance& inst) {
  json doc;
  if (!inst.name.empty()) doc["name"] = inst.name;
  const InstanceParams& p = inst.params;
  doc["params"] = {{"max_rapid_edges", p.max_rapid_edges},
                   {"max_slow_edges", p.max_slow_edges},
                   {"min_unchanged_slow_edges", p.min_unchanged_slow_edges},
                   {"min_station_spacing", p.min_station_spacing},
                   {"max_walk_rapid", p.max_walk_rapid},
                   {"max_walk_slow", p.max_walk_slow},
                   {"walk_speed", p.walk_speed},
                   {"rapid_speed", p.rapid_speed},
                   {"slow_speed", p.slow_speed},
                   {"private_speed", p.private_speed},
                   {"transfer_time_rs", p.transfer_time_rs},
                   {"transfer_time_sr", p.transfer_time_sr},
                   {"stop_time_rapid", p.stop_time_rapid},
                   {"stop_time_slow", p.stop_time_slow},
                   {"wait_time", p.wait_time},
                   {"private_utility_factor", p.private_utility_factor},
                   {"enable_shape_constraints", p.enable_shape_constraints}};
  doc["nodes"] = json::array();
  for (const Node& n : inst.nodes) {
    doc["nodes"].push_back({{"id", n.id},
                            {"x", n.position.x},
                            {"y", n.position.y},
                            {"in_rapid", n.in_rapid},
                            {"in_slow", n.in_slow},
                            {"rapid_origin", n.rapid_origin},
                            {"rapid_dest", n.rapid_dest},
                            {"slow_origin", n.slow_origin},
                            {"slow_dest", n.slow_dest}});
  }
  doc["edges"] = json::array();
  for (const Edge& e : inst.edges) {
    doc["edges"].push_back({{"id", e.id},
                            {"endpoints", {e.endpoints[0], e.endpoints[1]}},
                            {"in_rapid", e.in_rapid},
                            {"in_slow", e.in_slow},
                            {"length", e.length},
                            {"on_old_slow_line", e.on_old_slow_line}});
  }
  doc["centroids"] = json::array();
  for (const Centroid& c : inst.centroids) {
    doc["centroids"].push_back({{"id", c.id}, {"x", c.position.x}, {"y", c.position.y}});
  }
  doc["demands"] = json::array();
  for (const DemandPair& w : inst.demands) {
    doc["demands"].push_back({{"id", w.id},
                              {"origin", w.origin},
                              {"dest", w.dest},
                              {"demand", w.demand},
                              {"private_utility", w.private_utility}});
  }
  doc["walk_links"] = json::array();
  for (const WalkLink& l : inst.walk_links) {
    doc["walk_links"].push_back({{"centroid", l.centroid},
                                 {"station", l.station},
                                 {"mode", to_string(l.mode)},
                                 {"walk_time", l.walk_time}});
  }
  return doc.dump(2) + "\n";
}

void save_instance(const TransitInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError(path, "cannot open file for writing");
  out << instance_to_json(inst);
}

}  // namespace lineopt
