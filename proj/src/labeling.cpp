#include "lccp/labeling.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>
#include <thread>

namespace lccp {

namespace {

// Labels are pruned with a tiny relative slack; the final cycle check uses
// the exact canonical traversal time, so the slack never admits an
// infeasible column while guarding against summation-order ulps.
constexpr double kTimeSlack = 1e-9;

bool fits(double time, double limit) {
  return time <= limit + kTimeSlack * std::max(1.0, limit);
}

bool contains(std::span<const int> xs, int v) {
  return std::find(xs.begin(), xs.end(), v) != xs.end();
}

}  // namespace

PricingConstraints::PricingConstraints(int n, std::span<const EdgeDecision> decisions)
    : allowed_nodes(NodeSet::all(n)),
      n_(n),
      has_decisions_(!decisions.empty()),
      forbidden_(static_cast<std::size_t>(n) * n, 0),
      forced_(n) {
  if (n > kMaxNodes) {
    throw std::invalid_argument("pricing supports at most " + std::to_string(kMaxNodes) +
                                " nodes");
  }
  for (const auto& d : decisions) {
    const auto [u, v] = d.edge;
    if (u < 0 || v >= n || u == v) throw std::invalid_argument("edge decision out of range");
    if (d.forced) {
      if (!contains(forced_[u], v)) {
        forced_[u].push_back(v);
        forced_[v].push_back(u);
      }
    } else {
      forbidden_[static_cast<std::size_t>(u) * n + v] = 1;
      forbidden_[static_cast<std::size_t>(v) * n + u] = 1;
    }
  }
  for (int v = 0; v < n; ++v) {
    if (forced_[v].size() > 2) {
      throw std::invalid_argument("node " + std::to_string(v) + " has more than two forced edges");
    }
    for (int k : forced_[v]) {
      if (forbidden(v, k)) {
        throw std::invalid_argument("edge {" + std::to_string(v) + "," + std::to_string(k) +
                                    "} is both forced and forbidden");
      }
    }
  }
}

bool PricingConstraints::admits(const Cycle& c) const {
  const auto& nodes = c.nodes;
  const std::size_t k = nodes.size();
  for (std::size_t i = 0; i < k; ++i) {
    const int v = nodes[i];
    if (k >= 2) {
      const int next = nodes[(i + 1) % k];
      if (k > 2 || i == 0) {
        if (forbidden(v, next)) return false;
      }
    }
    if (forced_[v].empty()) continue;
    if (k == 1) return false;
    const int next = nodes[(i + 1) % k];
    const int prev = nodes[(i + k - 1) % k];
    for (int f : forced_[v])
      if (f != next && f != prev) return false;
  }
  return true;
}

std::vector<int> LabelArena::path(int idx) const {
  std::vector<int> out;
  for (int cur = idx; cur != -1; cur = labels_[cur].pred) out.push_back(labels_[cur].end);
  std::reverse(out.begin(), out.end());
  return out;
}

Label initial_label(int start, const Instance& inst, double column_cost) {
  Label l;
  l.end = start;
  l.redcost = column_cost;
  l.time = 0.0;
  l.min_crit = inst.crit(start);
  return l;
}

std::optional<Label> extend(const Label& lbl, int start, int j, std::span<const double> duals,
                            const Instance& inst, const PricingConstraints& cons) {
  const int v = lbl.end;
  if (j == start || j == v || lbl.nodes.contains(j)) return std::nullopt;
  if (j < cons.min_start || !cons.allowed_nodes.contains(j)) return std::nullopt;
  if (cons.forbidden(v, j)) return std::nullopt;

  // Forced edges at the node we leave: both cycle edges at v are now known.
  if (v == start) {
    const auto fs = cons.forced(start);
    if (fs.size() == 2 && !contains(fs, j)) return std::nullopt;
  } else {
    for (int f : cons.forced(v))
      if (f != lbl.prev_node && f != j) return std::nullopt;
  }
  // Forced edges at the node we enter: at most one of them can still be the
  // exit edge, and it must not lead back into the path interior.
  int pending = 0;
  for (int f : cons.forced(j)) {
    if (f == v) continue;
    ++pending;
    if (f != start && lbl.nodes.contains(f)) return std::nullopt;
  }
  if (pending > 1) return std::nullopt;

  const int first = lbl.first == -1 ? j : lbl.first;
  // A forced edge at the start that is not the first edge must be the
  // closing one, so its other endpoint cannot become an interior node.
  for (int f : cons.forced(start)) {
    if (f != first && f != j && lbl.nodes.contains(f)) return std::nullopt;
  }

  Label out;
  out.time = lbl.time + inst.travel(v, j);
  out.min_crit = std::min(lbl.min_crit, inst.crit(j));
  if (!fits(out.time, out.min_crit)) return std::nullopt;
  out.nodes = lbl.nodes;
  out.nodes.insert(j);
  out.end = j;
  out.redcost = lbl.redcost - duals[j];
  out.prev_node = v;
  out.first = first;
  return out;
}

bool dominates(const Label& a, const Label& b, DominanceMode mode,
               const PricingConstraints* cons, int start) {
  if (a.end != b.end) return false;
  if (!(a.redcost <= b.redcost) || !(a.time <= b.time)) return false;
  if (mode == DominanceMode::exact && !a.nodes.subset_of(b.nodes)) return false;
  if (cons != nullptr && cons->has_decisions()) {
    // Each forced edge b has already satisfied at an endpoint must also be
    // satisfied by a; otherwise a has strictly fewer completions.
    for (int f : cons->forced(a.end))
      if (f == b.prev_node && f != a.prev_node) return false;
    if (start >= 0) {
      for (int f : cons->forced(start))
        if (f == b.first && f != a.first) return false;
    }
  }
  return true;
}

std::optional<Cycle> merge(const LabelArena& arena, int a, int b, int start,
                           std::span<const double> duals, const Instance& inst,
                           const PricingConstraints& cons, double column_cost) {
  const Label& la = arena[a];
  const Label& lb = arena[b];
  const int v = la.end;
  if (v != lb.end || v == start) throw std::logic_error("merge: labels must end at the same non-start node");
  if (!la.nodes.meets_only_at(lb.nodes, v)) {
    throw std::logic_error("merge: labels must share exactly their end node");
  }
  if (!fits(la.time + lb.time, std::min(la.min_crit, lb.min_crit))) return std::nullopt;
  for (int f : cons.forced(v))
    if (f != la.prev_node && f != lb.prev_node) return std::nullopt;
  for (int f : cons.forced(start))
    if (f != la.first && f != lb.first) return std::nullopt;

  std::vector<int> traversal = arena.path(a);
  const std::vector<int> back = arena.path(b);
  for (std::size_t k = back.size() - 1; k-- > 1;) traversal.push_back(back[k]);

  const double redcost = la.redcost + lb.redcost - duals[start] + duals[v] - column_cost;
  Cycle c = make_cycle(inst, traversal, redcost);
  if (!is_length_feasible(c) || !cons.admits(c)) return std::nullopt;
  return c;
}

std::optional<Cycle> close_cycle(const LabelArena& arena, int idx, int start,
                                 std::span<const double> duals, const Instance& inst,
                                 const PricingConstraints& cons) {
  const Label& l = arena[idx];
  if (l.nodes.empty() || l.end == start) return std::nullopt;
  if (cons.forbidden(l.end, start)) return std::nullopt;
  for (int f : cons.forced(l.end))
    if (f != l.prev_node && f != start) return std::nullopt;
  for (int f : cons.forced(start))
    if (f != l.first && f != l.end) return std::nullopt;
  if (!fits(l.time + inst.travel(l.end, start), l.min_crit)) return std::nullopt;

  Cycle c = make_cycle(inst, arena.path(idx), l.redcost - duals[start]);
  if (!is_length_feasible(c) || !cons.admits(c)) return std::nullopt;
  return c;
}

Cycle singleton_cycle(int s, std::span<const double> duals, const Instance& inst,
                      double column_cost) {
  const int nodes[] = {s};
  return make_cycle(inst, nodes, column_cost - duals[s]);
}

bool cycle_order(const Cycle& a, const Cycle& b) {
  if (a.redcost_at_generation != b.redcost_at_generation) {
    return a.redcost_at_generation < b.redcost_at_generation;
  }
  return a.nodes < b.nodes;
}

PricingResult price_from_start(int start, std::span<const double> duals, const Instance& inst,
                               const PricingConstraints& cons, const PricingConfig& cfg,
                               Deadline deadline) {
  const int n = inst.n();
  if (n > kMaxNodes) throw std::invalid_argument("instance too large for pricing");
  const auto mode = cfg.heuristic_dominance ? DominanceMode::heuristic : DominanceMode::exact;

  PricingResult result;
  result.min_redcost = std::numeric_limits<double>::infinity();
  std::map<std::vector<int>, Cycle> found;

  // Reduced costs of the best `max_cycles_returned` distinct columns so far;
  // anything worse would be cut by the cap.
  std::priority_queue<double> kept;
  const auto cap = static_cast<std::size_t>(std::max(1, cfg.max_cycles_returned));
  auto record = [&](Cycle&& c) {
    const double rc = c.redcost_at_generation;
    result.min_redcost = std::min(result.min_redcost, rc);
    if (rc < -cfg.redcost_tolerance && found.try_emplace(c.nodes, std::move(c)).second) {
      kept.push(rc);
      if (kept.size() > cap) kept.pop();
    }
  };
  // True if a cycle with reduced cost `rc` could still change the result.
  auto useful = [&](double rc) {
    if (rc < result.min_redcost) return true;
    return rc < -cfg.redcost_tolerance && (kept.size() < cap || rc <= kept.top());
  };

  if (cons.forced(start).empty()) record(singleton_cycle(start, duals, inst, cfg.column_cost));

  LabelArena arena;
  std::vector<char> alive;
  // Per end node, the non-dominated labels with their resources inlined for
  // fast scanning.
  struct Entry {
    double redcost;
    double time;
    int idx;
  };
  std::vector<std::vector<Entry>> buckets(n);
  // Labels are extended in order of increasing time (ties by creation), so a
  // label is usually dominated before it is extended.
  using QueueItem = std::pair<double, int>;
  std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<>> queue;

  arena.push(initial_label(start, inst, cfg.column_cost));
  alive.push_back(1);
  buckets[start].push_back({arena[0].redcost, 0.0, 0});
  queue.emplace(0.0, 0);

  while (!queue.empty()) {
    const int idx = queue.top().second;
    queue.pop();
    if (!alive[idx]) continue;
    const Label cur = arena[idx];
    if (cfg.bidirectional && idx != 0 && !fits(cur.time, cur.min_crit / 2)) continue;

    ++result.stats.labels_extended;
    if (deadline && (result.stats.labels_extended & 1023) == 0 &&
        std::chrono::steady_clock::now() > *deadline) {
      result.aborted = true;
      break;
    }

    for (int j = 0; j < n; ++j) {
      auto next = extend(cur, start, j, duals, inst, cons);
      if (!next) continue;
      ++result.stats.labels_generated;
      next->pred = idx;

      auto& bucket = buckets[j];
      if (cfg.dominance) {
        bool dominated = false;
        for (const Entry& e : bucket) {
          if (e.redcost > next->redcost || e.time > next->time) continue;
          if (dominates(arena[e.idx], *next, mode, &cons, start)) {
            dominated = true;
            break;
          }
        }
        if (dominated) {
          ++result.stats.labels_dominated;
          continue;
        }
      }
      const int new_idx = arena.push(*next);
      alive.push_back(1);
      if (cfg.dominance) {
        const Label& fresh = arena[new_idx];
        std::erase_if(bucket, [&](const Entry& e) {
          if (fresh.redcost > e.redcost || fresh.time > e.time) return false;
          if (!dominates(fresh, arena[e.idx], mode, &cons, start)) return false;
          alive[e.idx] = 0;
          ++result.stats.labels_dominated;
          return true;
        });
      }
      bucket.push_back({next->redcost, next->time, new_idx});
      queue.emplace(next->time, new_idx);

      if (!cfg.bidirectional && useful(arena[new_idx].redcost - duals[start])) {
        if (auto c = close_cycle(arena, new_idx, start, duals, inst, cons)) record(std::move(*c));
      }
    }
  }

  if (cfg.bidirectional && !result.aborted) {
    for (int v = 0; v < n; ++v) {
      if (v == start) continue;
      std::vector<int> labels;
      for (const Entry& e : buckets[v]) labels.push_back(e.idx);
      std::stable_sort(labels.begin(), labels.end(),
                       [&](int x, int y) { return arena[x].redcost < arena[y].redcost; });
      const double offset = duals[v] - duals[start] - cfg.column_cost;
      for (std::size_t p = 0; p < labels.size(); ++p) {
        const Label& la = arena[labels[p]];
        if (!useful(2 * la.redcost + offset)) break;
        for (std::size_t q = p; q < labels.size(); ++q) {
          const Label& lb = arena[labels[q]];
          // Pairs are scanned by increasing reduced cost.
          if (!useful(la.redcost + lb.redcost + offset)) break;
          if (!la.nodes.meets_only_at(lb.nodes, v)) continue;
          ++result.stats.merges_attempted;
          if (auto c = merge(arena, labels[p], labels[q], start, duals, inst, cons,
                             cfg.column_cost)) {
            record(std::move(*c));
          }
        }
      }
    }
  }

  result.cycles.reserve(found.size());
  for (auto& [key, c] : found) result.cycles.push_back(std::move(c));
  std::sort(result.cycles.begin(), result.cycles.end(), cycle_order);
  if (static_cast<int>(result.cycles.size()) > cfg.max_cycles_returned) {
    result.cycles.resize(cfg.max_cycles_returned);
  }
  return result;
}

PriceAllResult price_all(std::span<const double> duals, const Instance& inst,
                         const PricingConstraints& cons_base, const PricingConfig& cfg,
                         int workers, Deadline deadline) {
  const int n = inst.n();
  std::vector<PricingResult> per_start(n);

  auto run = [&](int s) {
    PricingConstraints cons = cons_base;
    cons.min_start = cfg.symmetry_breaking ? s : 0;
    cons.allowed_nodes.insert(s);
    per_start[s] = price_from_start(s, duals, inst, cons, cfg, deadline);
  };

  workers = std::clamp(workers, 1, n);
  if (workers == 1) {
    for (int s = 0; s < n; ++s) run(s);
  } else {
    std::atomic<int> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int s = next.fetch_add(1); s < n; s = next.fetch_add(1)) run(s);
      });
    }
  }

  PriceAllResult out;
  out.per_start_min.assign(n, 0.0);
  out.min_redcost = std::numeric_limits<double>::infinity();
  std::vector<Cycle> all;
  for (int s = 0; s < n; ++s) {
    auto& r = per_start[s];
    out.stats += r.stats;
    out.aborted = out.aborted || r.aborted;
    out.min_redcost = std::min(out.min_redcost, r.min_redcost);
    out.per_start_min[s] = std::min(0.0, r.min_redcost);
    for (auto& c : r.cycles) all.push_back(std::move(c));
  }
  std::sort(all.begin(), all.end(), cycle_order);
  std::map<std::vector<int>, bool> seen;
  for (auto& c : all) {
    if (static_cast<int>(out.cycles.size()) >= cfg.max_cycles_returned) break;
    if (seen.try_emplace(c.nodes, true).second) out.cycles.push_back(std::move(c));
  }
  return out;
}

}  // namespace lccp
