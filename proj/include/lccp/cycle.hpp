#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace lccp {

class Instance;

/// Undirected edge stored with `u < v`.
struct Edge {
  int u = 0;
  int v = 0;

  Edge() = default;
  Edge(int a, int b) : u(a < b ? a : b), v(a < b ? b : a) {}

  auto operator<=>(const Edge&) const = default;
  bool operator==(const Edge&) const = default;
};

/// One branching decision on an edge: forced into every cycle touching its
/// endpoints, or forbidden everywhere.
struct EdgeDecision {
  Edge edge;
  bool forced = false;

  bool operator==(const EdgeDecision&) const = default;
};

using EdgeDecisions = std::vector<EdgeDecision>;

/// A length-feasible cycle in canonical form.
///
/// `nodes` lists the traversal order without repeating the first node. The
/// first entry is the smallest index of the cycle and, for three or more
/// nodes, `nodes[1] < nodes.back()` fixes the direction. A singleton has no
/// edges; a 2-cycle traverses its single edge twice.
struct Cycle {
  std::vector<int> nodes;
  double time = 0.0;
  double min_crit = 0.0;
  double redcost_at_generation = 0.0;

  std::size_t size() const { return nodes.size(); }
  bool contains(int node) const;
  /// Number of times the cycle traverses `e` (0, 1, or 2 for a 2-cycle).
  int edge_uses(const Edge& e) const;
  std::vector<Edge> edges() const;
};

/// Rotates and orients a traversal into canonical form.
std::vector<int> canonicalize(std::span<const int> traversal);

/// Sum of travel times along `traversal` including the closing edge.
double traversal_time(const Instance& inst, std::span<const int> traversal);

/// Smallest critical time among the listed nodes.
double min_critical_time(const Instance& inst, std::span<const int> nodes);

/// Builds a canonical Cycle from any traversal, recomputing time and min
/// critical time from the instance.
Cycle make_cycle(const Instance& inst, std::span<const int> traversal,
                 double redcost = 0.0);

bool is_length_feasible(const Cycle& c);

/// True iff the cycle respects every decision: no forbidden edge is used and,
/// for every forced edge, a cycle touching either endpoint uses it.
bool satisfies_decisions(const Cycle& c, std::span<const EdgeDecision> decisions);

/// 1 - sum of duals over the cycle's nodes, scaled by `column_cost` for the
/// constant term.
double reduced_cost(const Cycle& c, std::span<const double> duals,
                    double column_cost = 1.0);

std::string to_string(const Cycle& c);

}  // namespace lccp
