#include "lineopt/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace lineopt {

std::vector<int> EnumeratedDesign::rapid_stop_nodes() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < rapid_path.size(); ++i)
    if (rapid_is_stop[i]) out.push_back(rapid_path[i]);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> EnumeratedDesign::rapid_nonstop_nodes() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < rapid_path.size(); ++i)
    if (!rapid_is_stop[i]) out.push_back(rapid_path[i]);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

struct PathCandidate {
  std::vector<int> nodes;
  std::vector<int> edges;
};

// Simple paths from an origin-set node to a destination-set node, never
// touching either set in between, with at most max_edges edges.
std::vector<PathCandidate> enumerate_paths(const TransitInstance& inst, Mode m,
                                           const std::vector<int>& origins,
                                           const std::vector<int>& dests, int max_edges) {
  const std::set<int> oset(origins.begin(), origins.end());
  const std::set<int> dset(dests.begin(), dests.end());
  std::vector<PathCandidate> out;

  std::vector<int> nodes, edges;
  std::set<int> visited;

  std::function<void(int)> dfs = [&](int at) {
    std::vector<int> incident = inst.edges_at(at, m);
    std::sort(incident.begin(), incident.end());
    for (int e : incident) {
      const int next = inst.edge(e).other_end(at);
      if (visited.count(next)) continue;
      const bool next_is_dest = dset.count(next) > 0;
      const bool next_is_origin = oset.count(next) > 0;
      if (next_is_origin) continue;  // may not touch the origin set again
      nodes.push_back(next);
      edges.push_back(e);
      visited.insert(next);
      if (next_is_dest) {
        out.push_back({nodes, edges});
        // a destination terminates the line; do not extend through it
      } else if (static_cast<int>(edges.size()) < max_edges) {
        dfs(next);
      }
      visited.erase(next);
      nodes.pop_back();
      edges.pop_back();
    }
  };

  std::vector<int> starts(origins);
  std::sort(starts.begin(), starts.end());
  for (int o : starts) {
    if (dset.count(o)) continue;  // a shared origin/destination cannot anchor the line
    nodes = {o};
    edges.clear();
    visited = {o};
    dfs(o);
  }
  return out;
}

bool spacing_ok(const TransitInstance& inst, const std::vector<int>& stops) {
  for (std::size_t i = 0; i < stops.size(); ++i)
    for (std::size_t j = i + 1; j < stops.size(); ++j)
      if (distance(inst.node(stops[i]).position, inst.node(stops[j]).position) <=
          inst.params.min_station_spacing)
        return false;
  return true;
}

}  // namespace

std::vector<EnumeratedDesign> enumerate_rapid_designs(const TransitInstance& inst,
                                                      const OracleLimits& limits) {
  const auto paths = enumerate_paths(inst, Mode::rapid, inst.rapid_origins, inst.rapid_dests,
                                     inst.params.max_rapid_edges);
  std::vector<EnumeratedDesign> out;
  for (const PathCandidate& p : paths) {
    const int interior = static_cast<int>(p.nodes.size()) - 2;
    const int masks = interior > 0 ? (1 << interior) : 1;
    for (int mask = 0; mask < masks; ++mask) {
      EnumeratedDesign d;
      d.rapid_path = p.nodes;
      d.rapid_edge_ids = p.edges;
      d.rapid_is_stop.assign(p.nodes.size(), true);
      for (int b = 0; b < interior; ++b)
        d.rapid_is_stop[static_cast<std::size_t>(b) + 1] = (mask >> b) & 1;
      std::vector<int> stops;
      for (std::size_t i = 0; i < d.rapid_path.size(); ++i)
        if (d.rapid_is_stop[i]) stops.push_back(d.rapid_path[i]);
      if (!spacing_ok(inst, stops)) continue;
      out.push_back(std::move(d));
      if (static_cast<long long>(out.size()) > limits.max_design_pairs)
        throw std::runtime_error("oracle: rapid design enumeration exceeds the cap");
    }
  }
  return out;
}

std::vector<EnumeratedDesign> enumerate_slow_designs(const TransitInstance& inst,
                                                     const OracleLimits& limits) {
  const auto paths = enumerate_paths(inst, Mode::slow, inst.slow_origins, inst.slow_dests,
                                     inst.params.max_slow_edges);
  std::vector<EnumeratedDesign> out;
  for (const PathCandidate& p : paths) {
    int old_edges = 0;
    for (int e : p.edges)
      if (inst.edge(e).on_old_slow_line) ++old_edges;
    if (old_edges < inst.params.min_unchanged_slow_edges) continue;
    EnumeratedDesign d;
    d.slow_path = p.nodes;
    d.slow_edge_ids = p.edges;
    out.push_back(std::move(d));
    if (static_cast<long long>(out.size()) > limits.max_design_pairs)
      throw std::runtime_error("oracle: slow design enumeration exceeds the cap");
  }
  return out;
}

std::vector<EnumeratedDesign> enumerate_designs(const TransitInstance& inst,
                                                const OracleLimits& limits) {
  const auto rapid = enumerate_rapid_designs(inst, limits);
  const auto slow = enumerate_slow_designs(inst, limits);
  const long long total = static_cast<long long>(rapid.size()) * static_cast<long long>(slow.size());
  if (total > limits.max_design_pairs)
    throw std::runtime_error("oracle: " + std::to_string(total) + " design pairs exceed the cap");
  std::vector<EnumeratedDesign> out;
  out.reserve(static_cast<std::size_t>(total));
  for (const EnumeratedDesign& r : rapid) {
    for (const EnumeratedDesign& s : slow) {
      EnumeratedDesign d = r;
      d.slow_path = s.slow_path;
      d.slow_edge_ids = s.slow_edge_ids;
      out.push_back(std::move(d));
    }
  }
  return out;
}

namespace {

// In-line ride between two positions of one line; arcs, edges and minutes
// (arc times plus dwell at stop-labelled tails).
struct RideInfo {
  std::vector<int> arcs;
  std::set<int> edges;
  double minutes = 0.0;
};

class LineRides {
 public:
  LineRides(const TransitInstance& inst, const std::vector<int>& path,
            const std::vector<bool>& is_stop, Mode mode)
      : inst_(inst), path_(path), is_stop_(is_stop), mode_(mode) {
    for (std::size_t i = 0; i < path.size(); ++i) pos_[path[i]] = static_cast<int>(i);
  }

  bool on_line(int node) const { return pos_.count(node) > 0; }
  bool stop(int node) const {
    auto it = pos_.find(node);
    return it != pos_.end() && is_stop_[static_cast<std::size_t>(it->second)];
  }
  std::vector<int> stops() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < path_.size(); ++i)
      if (is_stop_[i]) out.push_back(path_[i]);
    return out;
  }

  RideInfo ride(int from, int to) const {
    RideInfo info;
    int a = pos_.at(from), b = pos_.at(to);
    const int step = a < b ? 1 : -1;
    const double dwell = mode_ == Mode::rapid ? inst_.params.stop_time_rapid : inst_.params.stop_time_slow;
    for (int i = a; i != b; i += step) {
      const int tail = path_[static_cast<std::size_t>(i)];
      const int head = path_[static_cast<std::size_t>(i + step)];
      const int arc = find_arc(tail, head);
      info.arcs.push_back(arc);
      info.edges.insert(inst_.arc(arc).edge);
      info.minutes += inst_.arc(arc).traverse_time;
      if (is_stop_[static_cast<std::size_t>(i)]) info.minutes += dwell;
    }
    return info;
  }

 private:
  int find_arc(int tail, int head) const {
    for (int a : inst_.arcs_out(tail, mode_))
      if (inst_.arc(a).head == head) return a;
    throw std::logic_error("line ride: missing arc");
  }

  const TransitInstance& inst_;
  std::vector<int> path_;
  std::vector<bool> is_stop_;
  Mode mode_;
  std::map<int, int> pos_;
};

bool edges_disjoint(const std::set<int>& a, const std::set<int>& b) {
  for (int e : a)
    if (b.count(e)) return false;
  return true;
}

struct CandidateRoute {
  std::vector<Leg> legs;
  double total = 0.0;
};

}  // namespace

std::optional<Route> best_routing(const TransitInstance& inst, const EnumeratedDesign& design,
                                  const DemandPair& w, bool rapid_only, bool reverse_scan) {
  const InstanceParams& p = inst.params;
  const LineRides rapid(inst, design.rapid_path, design.rapid_is_stop, Mode::rapid);
  std::vector<bool> slow_all_stops(design.slow_path.size(), true);
  const LineRides slow(inst, design.slow_path, slow_all_stops, Mode::slow);

  // Board/alight candidates: stops with an in-range walk link.
  struct Access {
    int node;
    double walk;
  };
  auto access_list = [&](const LineRides& line, Mode m, int centroid) {
    std::vector<Access> out;
    std::vector<int> sts = line.stops();
    if (reverse_scan) std::reverse(sts.begin(), sts.end());
    for (int s : sts) {
      if (auto t = inst.walk_time(centroid, s, m)) out.push_back({s, *t});
    }
    return out;
  };
  const auto br_o = access_list(rapid, Mode::rapid, w.origin);
  const auto br_d = access_list(rapid, Mode::rapid, w.dest);
  const auto bs_o = rapid_only ? std::vector<Access>{} : access_list(slow, Mode::slow, w.origin);
  const auto bs_d = rapid_only ? std::vector<Access>{} : access_list(slow, Mode::slow, w.dest);

  // Transfer candidates: dual stations on both lines.
  std::vector<int> duals;
  if (!rapid_only) {
    std::vector<int> sts = rapid.stops();
    if (reverse_scan) std::reverse(sts.begin(), sts.end());
    for (int s : sts)
      if (inst.node(s).is_transfer() && slow.stop(s)) duals.push_back(s);
  }

  const double base = p.wait_time - 0.5 * p.stop_time_rapid;
  std::optional<CandidateRoute> best;

  auto consider = [&](CandidateRoute cand) {
    if (cand.total > w.private_utility) return;
    if (!best || cand.total < best->total - 1e-12) best = std::move(cand);
  };

  auto walk_leg = [](Mode m, int from, int to, double minutes) {
    return Leg{LegKind::walk, m, from, to, {}, minutes};
  };
  auto ride_leg = [](Mode m, int from, int to, const RideInfo& info) {
    return Leg{LegKind::ride, m, from, to, info.arcs, info.minutes};
  };

  // Single mode.
  auto single = [&](const LineRides& line, Mode m, const std::vector<Access>& board,
                    const std::vector<Access>& alight) {
    for (const Access& b : board) {
      for (const Access& a : alight) {
        if (a.node == b.node) continue;
        const RideInfo info = line.ride(b.node, a.node);
        CandidateRoute cand;
        cand.total = base + b.walk + info.minutes + a.walk;
        cand.legs.push_back(walk_leg(m, w.origin, b.node, b.walk));
        cand.legs.push_back(ride_leg(m, b.node, a.node, info));
        cand.legs.push_back(walk_leg(m, a.node, w.dest, a.walk));
        consider(std::move(cand));
      }
    }
  };
  single(rapid, Mode::rapid, br_o, br_d);
  if (!rapid_only) single(slow, Mode::slow, bs_o, bs_d);

  if (!rapid_only) {
    // slow -> rapid
    for (const Access& b : bs_o) {
      for (int t : duals) {
        if (t == b.node) continue;
        const RideInfo leg1 = slow.ride(b.node, t);
        for (const Access& a : br_d) {
          if (a.node == t) continue;
          const RideInfo leg2 = rapid.ride(t, a.node);
          if (!edges_disjoint(leg1.edges, leg2.edges)) continue;
          CandidateRoute cand;
          cand.total = base + b.walk + leg1.minutes + p.transfer_time_sr + leg2.minutes + a.walk;
          cand.legs.push_back(walk_leg(Mode::slow, w.origin, b.node, b.walk));
          cand.legs.push_back(ride_leg(Mode::slow, b.node, t, leg1));
          cand.legs.push_back({LegKind::transfer_sr, Mode::slow, t, t, {}, p.transfer_time_sr});
          cand.legs.push_back(ride_leg(Mode::rapid, t, a.node, leg2));
          cand.legs.push_back(walk_leg(Mode::rapid, a.node, w.dest, a.walk));
          consider(std::move(cand));
        }
      }
    }
    // rapid -> slow
    for (const Access& b : br_o) {
      for (int t : duals) {
        if (t == b.node) continue;
        const RideInfo leg1 = rapid.ride(b.node, t);
        for (const Access& a : bs_d) {
          if (a.node == t) continue;
          const RideInfo leg2 = slow.ride(t, a.node);
          if (!edges_disjoint(leg1.edges, leg2.edges)) continue;
          CandidateRoute cand;
          cand.total = base + b.walk + leg1.minutes + p.transfer_time_rs + leg2.minutes + a.walk;
          cand.legs.push_back(walk_leg(Mode::rapid, w.origin, b.node, b.walk));
          cand.legs.push_back(ride_leg(Mode::rapid, b.node, t, leg1));
          cand.legs.push_back({LegKind::transfer_rs, Mode::rapid, t, t, {}, p.transfer_time_rs});
          cand.legs.push_back(ride_leg(Mode::slow, t, a.node, leg2));
          cand.legs.push_back(walk_leg(Mode::slow, a.node, w.dest, a.walk));
          consider(std::move(cand));
        }
      }
    }
    // slow -> rapid -> slow
    for (const Access& b : bs_o) {
      for (int t1 : duals) {
        if (t1 == b.node) continue;
        const RideInfo leg1 = slow.ride(b.node, t1);
        for (int t2 : duals) {
          if (t2 == t1) continue;
          const RideInfo leg2 = rapid.ride(t1, t2);
          if (!edges_disjoint(leg1.edges, leg2.edges)) continue;
          for (const Access& a : bs_d) {
            if (a.node == t2) continue;
            const RideInfo leg3 = slow.ride(t2, a.node);
            if (!edges_disjoint(leg1.edges, leg3.edges) || !edges_disjoint(leg2.edges, leg3.edges))
              continue;
            CandidateRoute cand;
            cand.total = base + b.walk + leg1.minutes + p.transfer_time_sr + leg2.minutes +
                         p.transfer_time_rs + leg3.minutes + a.walk;
            cand.legs.push_back(walk_leg(Mode::slow, w.origin, b.node, b.walk));
            cand.legs.push_back(ride_leg(Mode::slow, b.node, t1, leg1));
            cand.legs.push_back({LegKind::transfer_sr, Mode::slow, t1, t1, {}, p.transfer_time_sr});
            cand.legs.push_back(ride_leg(Mode::rapid, t1, t2, leg2));
            cand.legs.push_back({LegKind::transfer_rs, Mode::rapid, t2, t2, {}, p.transfer_time_rs});
            cand.legs.push_back(ride_leg(Mode::slow, t2, a.node, leg3));
            cand.legs.push_back(walk_leg(Mode::slow, a.node, w.dest, a.walk));
            consider(std::move(cand));
          }
        }
      }
    }
    // rapid -> slow -> rapid
    for (const Access& b : br_o) {
      for (int t1 : duals) {
        if (t1 == b.node) continue;
        const RideInfo leg1 = rapid.ride(b.node, t1);
        for (int t2 : duals) {
          if (t2 == t1) continue;
          const RideInfo leg2 = slow.ride(t1, t2);
          if (!edges_disjoint(leg1.edges, leg2.edges)) continue;
          for (const Access& a : br_d) {
            if (a.node == t2) continue;
            const RideInfo leg3 = rapid.ride(t2, a.node);
            if (!edges_disjoint(leg1.edges, leg3.edges) || !edges_disjoint(leg2.edges, leg3.edges))
              continue;
            CandidateRoute cand;
            cand.total = base + b.walk + leg1.minutes + p.transfer_time_rs + leg2.minutes +
                         p.transfer_time_sr + leg3.minutes + a.walk;
            cand.legs.push_back(walk_leg(Mode::rapid, w.origin, b.node, b.walk));
            cand.legs.push_back(ride_leg(Mode::rapid, b.node, t1, leg1));
            cand.legs.push_back({LegKind::transfer_rs, Mode::rapid, t1, t1, {}, p.transfer_time_rs});
            cand.legs.push_back(ride_leg(Mode::slow, t1, t2, leg2));
            cand.legs.push_back({LegKind::transfer_sr, Mode::slow, t2, t2, {}, p.transfer_time_sr});
            cand.legs.push_back(ride_leg(Mode::rapid, t2, a.node, leg3));
            cand.legs.push_back(walk_leg(Mode::rapid, a.node, w.dest, a.walk));
            consider(std::move(cand));
          }
        }
      }
    }
  }

  if (!best) return std::nullopt;
  return Route{std::move(best->legs), best->total};
}

DesignSolution assemble_solution(const TransitInstance& inst, const EnumeratedDesign& design,
                                 bool rapid_only) {
  DesignSolution sol;
  sol.rapid_edges = design.rapid_edge_ids;
  std::sort(sol.rapid_edges.begin(), sol.rapid_edges.end());
  sol.rapid_stops = design.rapid_stop_nodes();
  sol.rapid_nonstops = design.rapid_nonstop_nodes();
  sol.slow_edges = design.slow_edge_ids;
  std::sort(sol.slow_edges.begin(), sol.slow_edges.end());
  sol.slow_stops = design.slow_path;
  std::sort(sol.slow_stops.begin(), sol.slow_stops.end());
  for (const DemandPair& w : inst.demands) {
    PairAssignment asg;
    asg.pair = w.id;
    if (auto route = best_routing(inst, design, w, rapid_only)) {
      asg.covered = true;
      asg.legs = std::move(route->legs);
      asg.public_time = route->public_time;
    }
    sol.assignments.push_back(std::move(asg));
  }
  sol.stats = tally_coverage(inst, sol.assignments);
  sol.objective = static_cast<double>(sol.stats.total());
  return sol;
}

namespace {

std::int64_t coverage_of(const TransitInstance& inst, const EnumeratedDesign& d, bool rapid_only) {
  std::int64_t total = 0;
  for (const DemandPair& w : inst.demands)
    if (best_routing(inst, d, w, rapid_only)) total += w.demand;
  return total;
}

}  // namespace

OracleResult solve_exact(const TransitInstance& inst, const OracleLimits& limits) {
  const auto designs = enumerate_designs(inst, limits);
  OracleResult res;
  res.designs_seen = static_cast<long long>(designs.size());
  const EnumeratedDesign* best = nullptr;
  std::int64_t best_cov = -1;
  for (const EnumeratedDesign& d : designs) {
    const std::int64_t cov = coverage_of(inst, d, false);
    if (cov > best_cov) {
      best_cov = cov;
      best = &d;
    }
  }
  if (best == nullptr) throw std::runtime_error("oracle: no feasible design exists");
  res.objective = best_cov;
  res.solution = assemble_solution(inst, *best, false);
  return res;
}

SequentialOracleResult solve_sequential_exact(const TransitInstance& inst,
                                              const OracleLimits& limits) {
  const auto rapid = enumerate_rapid_designs(inst, limits);
  if (rapid.empty()) throw std::runtime_error("oracle: no feasible rapid design");
  const EnumeratedDesign* best_rapid = nullptr;
  std::int64_t best_cov = -1;
  for (const EnumeratedDesign& d : rapid) {
    const std::int64_t cov = coverage_of(inst, d, true);
    if (cov > best_cov) {
      best_cov = cov;
      best_rapid = &d;
    }
  }

  SequentialOracleResult res;
  res.stage1_objective = best_cov;

  const auto slow = enumerate_slow_designs(inst, limits);
  if (slow.empty()) throw std::runtime_error("oracle: no feasible slow design");
  const EnumeratedDesign* best_pair = nullptr;
  std::int64_t best_joint = -1;
  std::vector<EnumeratedDesign> combos;
  combos.reserve(slow.size());
  for (const EnumeratedDesign& s : slow) {
    EnumeratedDesign d = *best_rapid;
    d.slow_path = s.slow_path;
    d.slow_edge_ids = s.slow_edge_ids;
    combos.push_back(std::move(d));
  }
  for (const EnumeratedDesign& d : combos) {
    const std::int64_t cov = coverage_of(inst, d, false);
    if (cov > best_joint) {
      best_joint = cov;
      best_pair = &d;
    }
  }
  res.objective = best_joint;
  res.solution = assemble_solution(inst, *best_pair, false);
  return res;
}

}  // namespace lineopt
