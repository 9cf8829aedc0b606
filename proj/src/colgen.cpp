#include "lccp/colgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lccp/greedy.hpp"

namespace lccp {

namespace {

constexpr double kIntegralityTolerance = 1e-6;

PricingConfig pricing_config(const ColgenConfig& cfg, bool heuristic) {
  PricingConfig pc;
  pc.bidirectional = cfg.bidirectional;
  pc.heuristic_dominance = heuristic;
  pc.max_cycles_returned = cfg.max_columns_per_round;
  pc.redcost_tolerance = cfg.redcost_tolerance;
  pc.symmetry_breaking = cfg.symmetry_breaking;
  return pc;
}

bool deadline_passed(const Deadline& d) {
  return d && std::chrono::steady_clock::now() > *d;
}

}  // namespace

std::optional<int> ColumnPool::add(Cycle c) {
  auto [it, inserted] = index_.try_emplace(c.nodes, size());
  if (!inserted) return std::nullopt;
  columns_.push_back(std::move(c));
  return it->second;
}

std::vector<int> filter_columns(const ColumnPool& pool, std::span<const EdgeDecision> decisions) {
  std::vector<int> active;
  for (int id = 0; id < pool.size(); ++id) {
    if (satisfies_decisions(pool[id], decisions)) active.push_back(id);
  }
  return active;
}

ColumnPool initialize_root_pool(const Instance& inst, const CyclePartition& heuristic) {
  ColumnPool pool;
  for (int v = 0; v < inst.n(); ++v) {
    const int nodes[] = {v};
    pool.add(make_cycle(inst, nodes));
  }
  for (const auto& c : heuristic.cycles) pool.add(make_cycle(inst, c.nodes));
  return pool;
}

ColumnPool initialize_root_pool(const Instance& inst) {
  return initialize_root_pool(inst, greedy_primal(inst));
}

CgStats& CgStats::operator+=(const CgStats& o) {
  pricing_rounds += o.pricing_rounds;
  heuristic_rounds += o.heuristic_rounds;
  exact_rounds += o.exact_rounds;
  farkas_rounds += o.farkas_rounds;
  columns_added += o.columns_added;
  lp_iterations += o.lp_iterations;
  labeling += o.labeling;
  return *this;
}

int ceil_with_tolerance(double value) {
  return static_cast<int>(std::ceil(value - kIntegralityTolerance));
}

int lagrangian_bound(double z_rmp, std::span<const double> per_start_minima) {
  double lb = z_rmp;
  for (double z : per_start_minima) lb += std::min(0.0, z);
  return ceil_with_tolerance(lb);
}

int farley_bound(double dual_sum, double min_redcost) {
  const double scale = std::max(1.0, 1.0 - min_redcost);
  return ceil_with_tolerance(dual_sum / scale);
}

LpProblem build_master(const Instance& inst, const ColumnPool& pool, std::span<const int> ids,
                       MasterMode mode) {
  LpProblem lp = make_master_lp(
      inst.n(), mode == MasterMode::partition ? RowSense::equal : RowSense::greater_equal);
  lp.columns.reserve(ids.size());
  for (int id : ids) lp.add_column(pool[id].nodes, 1.0);
  return lp;
}

FarkasResult farkas_round(std::span<const EdgeDecision> decisions, const ColumnPool& pool,
                          const Instance& inst, std::span<const double> ray,
                          const ColgenConfig& cfg, Deadline deadline) {
  const double ray_value = std::accumulate(ray.begin(), ray.end(), 0.0);
  if (!(ray_value > 1e-9)) throw LpNumericalError("Farkas ray does not certify infeasibility");

  PricingConfig pc = pricing_config(cfg, /*heuristic=*/false);
  pc.column_cost = 0.0;
  const PricingConstraints cons(inst.n(), decisions);
  auto priced = price_all(ray, inst, cons, pc, cfg.workers, deadline);

  FarkasResult out;
  out.stats = priced.stats;
  out.aborted = priced.aborted;
  for (auto& c : priced.cycles) {
    // Score is sum of ray entries, i.e. the negated generation value.
    if (-c.redcost_at_generation > cfg.redcost_tolerance && !pool.contains(c.nodes)) {
      out.columns.push_back(std::move(c));
    }
  }
  out.node_infeasible = !out.aborted && out.columns.empty();
  return out;
}

CgResult generate_columns(const NodeContext& node, ColumnPool& pool, const Instance& inst,
                          const ColgenConfig& cfg) {
  CgResult res;
  res.active = filter_columns(pool, node.decisions);
  const PricingConstraints base_cons(inst.n(), node.decisions);
  const bool eliminate_zero_duals =
      cfg.mode == MasterMode::cover && inst.is_metric() && node.decisions.empty();
  std::optional<int> incumbent = node.incumbent;
  std::optional<LpBasis> basis;
  bool first_feasible = true;

  auto add_columns = [&](std::vector<Cycle>& cycles) {
    int added = 0;
    for (auto& c : cycles) {
      if (auto id = pool.add(std::move(c))) {
        res.active.push_back(*id);
        ++added;
      }
    }
    res.stats.columns_added += added;
    return added;
  };

  for (int round = 0;; ++round) {
    if (round >= cfg.max_rounds || deadline_passed(node.deadline)) {
      res.status = CgStatus::limit_hit;
      return res;
    }
    const LpProblem lp = build_master(inst, pool, res.active, cfg.mode);
    const LpOutcome out = solve_lp(lp, basis);
    res.stats.lp_iterations += out.iterations;
    basis = out.basis;

    if (out.status == LpStatus::infeasible) {
      ++res.stats.farkas_rounds;
      auto fr = farkas_round(node.decisions, pool, inst, out.farkas_ray, cfg, node.deadline);
      res.stats.labeling += fr.stats;
      if (fr.aborted) {
        res.status = CgStatus::limit_hit;
        return res;
      }
      if (fr.node_infeasible || add_columns(fr.columns) == 0) {
        res.status = CgStatus::infeasible;
        return res;
      }
      continue;
    }

    res.lp_objective = out.objective;
    res.primal = out.primal;
    res.duals = out.duals;
    res.objective_trace.push_back(out.objective);
    if (node.on_solution) {
      if (auto inc = node.on_solution(res.active, res.primal)) incumbent = inc;
    }

    if (first_feasible) {
      first_feasible = false;
      if (node.early_branch_bound &&
          ceil_with_tolerance(out.objective) == *node.early_branch_bound) {
        res.lagrangian_lb = *node.early_branch_bound;
        res.status = CgStatus::early_branch;
        return res;
      }
    }
    if (incumbent && res.lagrangian_lb >= *incumbent) {
      res.status = CgStatus::bound_pruned;
      return res;
    }

    PricingConstraints cons = base_cons;
    if (eliminate_zero_duals) {
      cons.allowed_nodes = NodeSet();
      for (int i = 0; i < inst.n(); ++i)
        if (out.duals[i] > cfg.zero_dual_tolerance) cons.allowed_nodes.insert(i);
    }

    ++res.stats.pricing_rounds;
    if (cfg.heuristic_pricing) {
      ++res.stats.heuristic_rounds;
      auto heur = price_all(out.duals, inst, cons, pricing_config(cfg, true), cfg.workers,
                            node.deadline);
      res.stats.labeling += heur.stats;
      if (heur.aborted) {
        res.status = CgStatus::limit_hit;
        return res;
      }
      if (add_columns(heur.cycles) > 0) continue;
    }

    ++res.stats.exact_rounds;
    auto exact = price_all(out.duals, inst, cons, pricing_config(cfg, false), cfg.workers,
                           node.deadline);
    res.stats.labeling += exact.stats;
    if (exact.aborted) {
      res.status = CgStatus::limit_hit;
      return res;
    }

    int bound;
    if (cfg.mode == MasterMode::partition || node.decisions.empty()) {
      bound = lagrangian_bound(out.objective, exact.per_start_min);
    } else {
      const double dual_sum = std::accumulate(out.duals.begin(), out.duals.end(), 0.0);
      bound = farley_bound(dual_sum, exact.min_redcost);
    }
    res.lagrangian_lb = std::max(res.lagrangian_lb, bound);

    const int added = add_columns(exact.cycles);
    if (added == 0) {
      res.lagrangian_lb = std::max(res.lagrangian_lb, ceil_with_tolerance(out.objective));
      res.status = CgStatus::converged;
      return res;
    }
    if (incumbent && res.lagrangian_lb >= *incumbent) {
      res.status = CgStatus::bound_pruned;
      return res;
    }
  }
}

}  // namespace lccp
