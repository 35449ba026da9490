#ifndef LINEOPT_INSTANCE_HPP
#define LINEOPT_INSTANCE_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lineopt {

// Planar coordinates, meters.
struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Point& a, const Point& b);

enum class Mode : std::uint8_t { rapid, slow };

const char* to_string(Mode m);

// Raised on malformed instance files or broken instance invariants.
// `path` is the schema path of the offending field (e.g. "edges[3].endpoints").
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct Node {
  int id = -1;
  Point position;
  bool in_rapid = false;
  bool in_slow = false;
  bool rapid_origin = false;
  bool rapid_dest = false;
  bool slow_origin = false;
  bool slow_dest = false;

  // Transfer nodes are exactly the nodes carried by both networks.
  bool is_transfer() const { return in_rapid && in_slow; }
};

struct Edge {
  int id = -1;
  int endpoints[2] = {-1, -1};
  bool in_rapid = false;
  bool in_slow = false;
  double length = 0.0;        // meters
  bool on_old_slow_line = false;

  int other_end(int node) const { return endpoints[0] == node ? endpoints[1] : endpoints[0]; }
  bool touches(int node) const { return endpoints[0] == node || endpoints[1] == node; }
};

// Directed traversal of one edge in one mode. Every mode-m edge induces two
// opposite arcs in mode m; a shared edge induces four arcs in total.
struct Arc {
  int id = -1;
  int edge = -1;
  int tail = -1;
  int head = -1;
  Mode mode = Mode::rapid;
  double traverse_time = 0.0;  // minutes
};

struct Centroid {
  int id = -1;
  Point position;
};

struct DemandPair {
  int id = -1;
  int origin = -1;            // centroid ids
  int dest = -1;
  std::int64_t demand = 0;    // g^w, passenger count
  double private_utility = 0; // u^w, minutes
};

// Walking leg between a centroid and a candidate station of one mode.
// Present iff the straight-line distance is within the mode's walk cap.
struct WalkLink {
  int centroid = -1;
  int station = -1;
  Mode mode = Mode::rapid;
  double walk_time = 0.0;     // minutes
};

struct InstanceParams {
  int max_rapid_edges = 0;            // cap on constructed rapid edges
  int max_slow_edges = 0;             // cap on edges of the re-routed slow line
  int min_unchanged_slow_edges = 0;   // old-line edges the new slow line must keep
  double min_station_spacing = 500.0; // C1, meters, rapid stations only
  double max_walk_rapid = 400.0;      // C2, meters
  double max_walk_slow = 300.0;       // C3, meters
  double walk_speed = 5.0;            // km/h
  double rapid_speed = 70.0;          // km/h
  double slow_speed = 25.0;           // km/h
  double private_speed = 30.0;        // km/h
  double transfer_time_rs = 9.5;      // minutes, rapid -> slow
  double transfer_time_sr = 5.5;      // minutes, slow -> rapid
  double stop_time_rapid = 0.5;       // minutes
  double stop_time_slow = 1.0;        // minutes
  double wait_time = 2.0;             // minutes
  double private_utility_factor = 2.0;
  bool enable_shape_constraints = false;
};

// Full problem data. Immutable after validation; safe to share across
// concurrent workers.
struct TransitInstance {
  std::string name;
  InstanceParams params;
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::vector<Arc> arcs;           // derived from edges unless loaded
  std::vector<Centroid> centroids;
  std::vector<DemandPair> demands;
  std::vector<WalkLink> walk_links;

  // Index helpers populated by validate().
  std::vector<int> rapid_nodes;    // node ids with in_rapid
  std::vector<int> slow_nodes;
  std::vector<int> transfer_nodes;
  std::vector<int> rapid_edges;    // edge ids with in_rapid
  std::vector<int> slow_edges;
  std::vector<int> rapid_origins;
  std::vector<int> rapid_dests;
  std::vector<int> slow_origins;
  std::vector<int> slow_dests;

  int num_rapid_arcs = 0;
  int num_slow_arcs = 0;

  // Walk link lookup: (centroid, node, mode) -> walk time, or nullopt.
  std::optional<double> walk_time(int centroid, int station, Mode m) const;
  bool has_walk_link(int centroid, int station, Mode m) const {
    return walk_time(centroid, station, m).has_value();
  }

  const Node& node(int id) const { return nodes.at(static_cast<std::size_t>(id)); }
  const Edge& edge(int id) const { return edges.at(static_cast<std::size_t>(id)); }
  const Arc& arc(int id) const { return arcs.at(static_cast<std::size_t>(id)); }
  const Centroid& centroid(int id) const { return centroids.at(static_cast<std::size_t>(id)); }

  // Arcs of mode m leaving / entering a node.
  const std::vector<int>& arcs_out(int node, Mode m) const;
  const std::vector<int>& arcs_in(int node, Mode m) const;
  // Edges of mode m incident to a node.
  const std::vector<int>& edges_at(int node, Mode m) const;

  // Adjacency tables, rebuilt by validate().
  std::vector<std::vector<int>> out_arcs_by_mode[2];
  std::vector<std::vector<int>> in_arcs_by_mode[2];
  std::vector<std::vector<int>> edges_by_mode[2];
};

// Rebuilds arcs from edges (two per mode membership) using mode speeds.
void derive_arcs(TransitInstance& inst);

// Computes the walk link set: every (centroid, station, mode) whose
// straight-line distance is within C2 (rapid) / C3 (slow).
std::vector<WalkLink> derive_walk_links(const TransitInstance& inst);

// Sets u^w = factor * straight-line drive time at the private speed for every
// pair. Throws ValidationError if some pair's centroids coincide.
void compute_private_utilities(TransitInstance& inst);

// Checks all structural invariants, fills the index helpers, and derives
// arcs / walk links when absent. Throws ValidationError on the first breach.
void validate(TransitInstance& inst);

// Keeps pairs with demand >= threshold. Zero-demand pairs are always dropped.
// Pair ids are re-densified; networks are untouched.
TransitInstance filter_by_demand(const TransitInstance& inst, std::int64_t threshold);

// Instance file I/O (JSON, schema documented in docs/instance-format.md).
// load_instance validates; zero-demand pairs are dropped at load time.
TransitInstance load_instance(const std::string& path);
TransitInstance parse_instance(const std::string& json_text, const std::string& origin = "<string>");
std::string instance_to_json(const TransitInstance& inst);
void save_instance(const TransitInstance& inst, const std::string& path);

}  // namespace lineopt

#endif  // LINEOPT_INSTANCE_HPP
