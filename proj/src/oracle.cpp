#include "lccp/oracle.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace lccp::oracle {

namespace {

void guard(const Instance& inst) {
  if (inst.n() > kMaxOracleNodes) {
    throw SizeGuardError("oracle supports at most " + std::to_string(kMaxOracleNodes) +
                         " nodes, instance has " + std::to_string(inst.n()));
  }
}

// Depth-first walk over paths start -> ... with every node larger than start;
// each path of length >= 2 is closed into a cycle when its last node exceeds
// the second one, which is exactly the canonical direction.
void walk(const Instance& inst, std::span<const EdgeDecision> decisions, std::vector<int>& path,
          std::uint32_t mask, CycleCatalog& out) {
  const int n = inst.n();
  const int start = path.front();
  const std::size_t k = path.size();
  if (k == 2 || (k >= 3 && path.back() > path[1])) {
    Cycle c = make_cycle(inst, path);
    if (is_length_feasible(c) && satisfies_decisions(c, decisions)) {
      out.cycles.push_back(std::move(c));
      out.masks.push_back(mask);
    }
  }
  // Extending a path only increases its time and lowers its critical time.
  double path_time = 0.0;
  for (std::size_t i = 0; i + 1 < k; ++i) path_time += inst.travel(path[i], path[i + 1]);
  const double q = min_critical_time(inst, path);
  if (path_time > q) return;
  for (int j = start + 1; j < n; ++j) {
    if (mask & (1U << j)) continue;
    path.push_back(j);
    walk(inst, decisions, path, mask | (1U << j), out);
    path.pop_back();
  }
}

}  // namespace

bool CycleCatalog::has_mask(std::uint32_t mask) const {
  return std::find(masks.begin(), masks.end(), mask) != masks.end();
}

CycleCatalog enumerate_cycles(const Instance& inst, std::span<const EdgeDecision> decisions) {
  guard(inst);
  CycleCatalog cat;
  cat.n = inst.n();
  for (int s = 0; s < inst.n(); ++s) {
    std::vector<int> path{s};
    Cycle single = make_cycle(inst, path);
    if (satisfies_decisions(single, decisions)) {
      cat.cycles.push_back(std::move(single));
      cat.masks.push_back(1U << s);
    }
    for (int j = s + 1; j < inst.n(); ++j) {
      path.push_back(j);
      walk(inst, decisions, path, (1U << s) | (1U << j), cat);
      path.pop_back();
    }
  }
  return cat;
}

std::optional<int> optimal_partition(const Instance& inst, std::span<const EdgeDecision> decisions) {
  guard(inst);
  const CycleCatalog cat = enumerate_cycles(inst, decisions);
  const int n = inst.n();
  const std::uint32_t full = (1U << n) - 1;
  std::vector<char> feasible_set(std::size_t{1} << n, 0);
  for (auto m : cat.masks) feasible_set[m] = 1;

  constexpr int kInf = std::numeric_limits<int>::max() / 2;
  std::vector<int> best(std::size_t{1} << n, kInf);
  best[0] = 0;
  for (std::uint32_t s = 1; s <= full; ++s) {
    const std::uint32_t low = s & (~s + 1);
    const std::uint32_t rest = s ^ low;
    // Enumerate subsets of `rest`, each joined with the lowest node.
    for (std::uint32_t sub = rest;; sub = (sub - 1) & rest) {
      const std::uint32_t cyc = sub | low;
      if (feasible_set[cyc] && best[s ^ cyc] < kInf) best[s] = std::min(best[s], best[s ^ cyc] + 1);
      if (sub == 0) break;
    }
  }
  if (best[full] >= kInf) return std::nullopt;
  return best[full];
}

int optimal_partition(const Instance& inst) { return *optimal_partition(inst, {}); }

double min_redcost(const Instance& inst, std::span<const double> duals, int start,
                   std::span<const EdgeDecision> decisions) {
  guard(inst);
  const CycleCatalog cat = enumerate_cycles(inst, decisions);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : cat.cycles) {
    if (c.nodes.front() != start) continue;
    best = std::min(best, reduced_cost(c, duals));
  }
  return best;
}

}  // namespace lccp::oracle
