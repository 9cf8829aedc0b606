#include "lccp/cycle.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "lccp/instance.hpp"

namespace lccp {

bool Cycle::contains(int node) const {
  return std::find(nodes.begin(), nodes.end(), node) != nodes.end();
}

int Cycle::edge_uses(const Edge& e) const {
  const std::size_t k = nodes.size();
  if (k < 2) return 0;
  if (k == 2) return Edge(nodes[0], nodes[1]) == e ? 2 : 0;
  int uses = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (Edge(nodes[i], nodes[(i + 1) % k]) == e) ++uses;
  }
  return uses;
}

std::vector<Edge> Cycle::edges() const {
  std::vector<Edge> out;
  const std::size_t k = nodes.size();
  if (k < 2) return out;
  if (k == 2) {
    out.emplace_back(nodes[0], nodes[1]);
    return out;
  }
  for (std::size_t i = 0; i < k; ++i) out.emplace_back(nodes[i], nodes[(i + 1) % k]);
  return out;
}

std::vector<int> canonicalize(std::span<const int> traversal) {
  std::vector<int> out(traversal.begin(), traversal.end());
  if (out.size() < 2) return out;
  auto min_it = std::min_element(out.begin(), out.end());
  std::rotate(out.begin(), min_it, out.end());
  if (out.size() >= 3 && out[1] > out.back()) std::reverse(out.begin() + 1, out.end());
  return out;
}

double traversal_time(const Instance& inst, std::span<const int> traversal) {
  const std::size_t k = traversal.size();
  if (k < 2) return 0.0;
  double t = 0.0;
  for (std::size_t i = 0; i + 1 < k; ++i) t += inst.travel(traversal[i], traversal[i + 1]);
  t += inst.travel(traversal[k - 1], traversal[0]);
  return t;
}

double min_critical_time(const Instance& inst, std::span<const int> nodes) {
  double q = std::numeric_limits<double>::infinity();
  for (int i : nodes) q = std::min(q, inst.crit(i));
  return q;
}

Cycle make_cycle(const Instance& inst, std::span<const int> traversal, double redcost) {
  Cycle c;
  c.nodes = canonicalize(traversal);
  c.time = traversal_time(inst, c.nodes);
  c.min_crit = min_critical_time(inst, c.nodes);
  c.redcost_at_generation = redcost;
  return c;
}

bool is_length_feasible(const Cycle& c) { return c.time <= c.min_crit; }

bool satisfies_decisions(const Cycle& c, std::span<const EdgeDecision> decisions) {
  for (const auto& d : decisions) {
    const int uses = c.edge_uses(d.edge);
    if (d.forced) {
      if ((c.contains(d.edge.u) || c.contains(d.edge.v)) && uses == 0) return false;
    } else if (uses > 0) {
      return false;
    }
  }
  return true;
}

double reduced_cost(const Cycle& c, std::span<const double> duals, double column_cost) {
  double r = column_cost;
  for (int i : c.nodes) r -= duals[i];
  return r;
}

std::string to_string(const Cycle& c) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < c.nodes.size(); ++i) os << (i ? "," : "") << c.nodes[i];
  os << ')';
  return os.str();
}

}  // namespace lccp
