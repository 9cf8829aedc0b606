#include "lccp/greedy.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace lccp {

CyclePartition greedy_primal(const Instance& inst) {
  const int n = inst.n();
  std::vector<char> assigned(n, 0);
  CyclePartition part;

  for (int left = n; left > 0;) {
    int seed = -1;
    for (int v = 0; v < n; ++v) {
      if (!assigned[v] && (seed == -1 || inst.crit(v) < inst.crit(seed))) seed = v;
    }
    std::vector<int> tour{seed};
    assigned[seed] = 1;
    --left;
    double q = inst.crit(seed);

    while (left > 0) {
      int best_node = -1;
      std::size_t best_pos = 0;
      double best_delta = std::numeric_limits<double>::infinity();
      for (int u = 0; u < n; ++u) {
        if (assigned[u]) continue;
        const double q_new = std::min(q, inst.crit(u));
        for (std::size_t pos = 0; pos < tour.size(); ++pos) {
          const int a = tour[pos];
          const int b = tour[(pos + 1) % tour.size()];
          const double delta = inst.travel(a, u) + inst.travel(u, b) - inst.travel(a, b);
          if (delta >= best_delta) continue;
          std::vector<int> candidate = tour;
          candidate.insert(candidate.begin() + static_cast<std::ptrdiff_t>(pos) + 1, u);
          if (traversal_time(inst, candidate) > q_new) continue;
          best_delta = delta;
          best_node = u;
          best_pos = pos;
        }
      }
      if (best_node == -1) break;
      tour.insert(tour.begin() + static_cast<std::ptrdiff_t>(best_pos) + 1, best_node);
      assigned[best_node] = 1;
      --left;
      q = std::min(q, inst.crit(best_node));
    }
    part.cycles.push_back(make_cycle(inst, tour));
  }
  std::sort(part.cycles.begin(), part.cycles.end(),
            [](const Cycle& a, const Cycle& b) { return a.nodes < b.nodes; });
  if (!validate_partition(inst, part)) throw std::logic_error("greedy produced an invalid partition");
  return part;
}

}  // namespace lccp
