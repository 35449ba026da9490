#include "lineopt/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include "lineopt/lp.hpp"

namespace lineopt {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

// Node order of a chain; throws on anything that is not one open chain.
std::vector<int> chain_nodes(const TransitInstance& inst, const std::vector<int>& edges) {
  std::map<int, std::vector<int>> adj;
  for (int e : edges) {
    adj[inst.edge(e).endpoints[0]].push_back(inst.edge(e).endpoints[1]);
    adj[inst.edge(e).endpoints[1]].push_back(inst.edge(e).endpoints[0]);
  }
  std::vector<int> ends;
  for (const auto& [n, nb] : adj)
    if (nb.size() == 1) ends.push_back(n);
  if (ends.size() != 2) throw std::runtime_error("design line is not a single chain");
  std::vector<int> order{std::min(ends[0], ends[1])};
  int prev = -1;
  while (order.size() <= edges.size()) {
    int next = -1;
    for (int cand : adj[order.back()])
      if (cand != prev) { next = cand; break; }
    prev = order.back();
    order.push_back(next);
  }
  return order;
}

}  // namespace

std::string render_design(const TransitInstance& inst, const DesignSolution& sol) {
  if (inst.nodes.empty()) throw std::invalid_argument("render_design: instance has no nodes");
  double min_x = kInf, max_x = -kInf, min_y = kInf, max_y = -kInf;
  auto stretch = [&](const Point& p) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  };
  for (const Node& n : inst.nodes) stretch(n.position);
  for (const Centroid& c : inst.centroids) stretch(c.position);

  const double pad = 120.0;
  const double w = max_x - min_x + 2 * pad;
  const double h = max_y - min_y + 2 * pad;
  const double scale = 900.0 / std::max(w, h);
  auto X = [&](double x) { return (x - min_x + pad) * scale; };
  auto Y = [&](double y) { return (max_y - y + pad) * scale; };  // flip: svg y grows down

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w * scale) << "\" height=\""
     << num(h * scale) << "\" viewBox=\"0 0 " << num(w * scale) << " " << num(h * scale) << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Background network.
  os << "<g id=\"network\" stroke=\"#c8c8c8\" stroke-width=\"1.5\">\n";
  for (const Edge& e : inst.edges) {
    const Point& a = inst.node(e.endpoints[0]).position;
    const Point& b = inst.node(e.endpoints[1]).position;
    os << "<line x1=\"" << num(X(a.x)) << "\" y1=\"" << num(Y(a.y)) << "\" x2=\"" << num(X(b.x))
       << "\" y2=\"" << num(Y(b.y)) << "\"/>\n";
  }
  os << "</g>\n";

  // Chosen lines: one polyline each.
  os << "<g id=\"rapid-line\" fill=\"none\" stroke=\"#b2182b\" stroke-width=\"4\">\n";
  if (!sol.rapid_edges.empty()) {
    os << "<polyline points=\"";
    bool first = true;
    for (int n : chain_nodes(inst, sol.rapid_edges)) {
      const Point& p = inst.node(n).position;
      if (!first) os << " ";
      os << num(X(p.x)) << "," << num(Y(p.y));
      first = false;
    }
    os << "\"/>\n";
  }
  os << "</g>\n";
  os << "<g id=\"slow-line\" fill=\"none\" stroke=\"#2166ac\" stroke-width=\"3\" "
        "stroke-dasharray=\"9,6\">\n";
  if (!sol.slow_edges.empty()) {
    os << "<polyline points=\"";
    bool first = true;
    for (int n : chain_nodes(inst, sol.slow_edges)) {
      const Point& p = inst.node(n).position;
      if (!first) os << " ";
      os << num(X(p.x)) << "," << num(Y(p.y));
      first = false;
    }
    os << "\"/>\n";
  }
  os << "</g>\n";

  // Nodes: rapid-capable filled, slow-only hollow; stations drawn larger.
  os << "<g id=\"nodes\" stroke=\"#333333\" stroke-width=\"1\">\n";
  for (const Node& n : inst.nodes) {
    const bool stop = sol.rapid_stop(n.id) || sol.slow_stop(n.id);
    const double r = stop ? 7.0 : 4.0;
    const char* fill = n.in_rapid ? "#333333" : "white";
    os << "<circle cx=\"" << num(X(n.position.x)) << "\" cy=\"" << num(Y(n.position.y)) << "\" r=\""
       << num(r) << "\" fill=\"" << fill << "\"/>\n";
  }
  os << "</g>\n";
  os << "<g id=\"centroids\" fill=\"#4daf4a\">\n";
  for (const Centroid& c : inst.centroids) {
    os << "<rect x=\"" << num(X(c.position.x) - 3.5) << "\" y=\"" << num(Y(c.position.y) - 3.5)
       << "\" width=\"7\" height=\"7\"/>\n";
  }
  os << "</g>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace lineopt
