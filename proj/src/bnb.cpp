#include "lccp/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace lccp {

namespace {

constexpr double kIntegralityTolerance = 1e-6;

bool is_fractional(double x) {
  return x > kIntegralityTolerance && x < 1.0 - kIntegralityTolerance;
}

bool is_decided(std::span<const EdgeDecision> decisions, const Edge& e) {
  return std::any_of(decisions.begin(), decisions.end(),
                     [&](const EdgeDecision& d) { return d.edge == e; });
}

}  // namespace

Edge select_branching_edge(const ColumnPool& pool, std::span<const int> active,
                           std::span<const double> primal, std::span<const EdgeDecision> decided) {
  std::map<Edge, double> usage;
  std::set<Edge> on_fractional;
  bool fractional = false;
  for (std::size_t k = 0; k < active.size(); ++k) {
    const double lambda = primal[k];
    if (lambda <= kIntegralityTolerance) continue;
    const bool frac = is_fractional(lambda);
    fractional = fractional || frac;
    const Cycle& c = pool[active[k]];
    for (const Edge& e : c.edges()) {
      usage[e] += lambda * c.edge_uses(e);
      if (frac) on_fractional.insert(e);
    }
  }
  if (!fractional) throw std::logic_error("select_branching_edge called on an integral solution");

  auto pick = [&](auto&& admissible) -> std::optional<Edge> {
    std::optional<Edge> best;
    double best_usage = -1.0;
    for (const auto& [e, x] : usage) {  // map order gives the lexicographic tie-break
      if (!admissible(e) || is_decided(decided, e)) continue;
      if (x > best_usage + 1e-12) {
        best = e;
        best_usage = x;
      }
    }
    return best;
  };
  if (auto e = pick([&](const Edge& e) { return on_fractional.contains(e); })) return *e;
  if (auto e = pick([](const Edge&) { return true; })) return *e;
  throw std::logic_error("no undecided edge carries the fractional solution");
}

std::pair<TreeNode, TreeNode> branch(const TreeNode& node, Edge edge, int first_child_id) {
  if (is_decided(node.decisions, edge)) {
    throw std::invalid_argument("edge {" + std::to_string(edge.u) + "," + std::to_string(edge.v) +
                                "} is already decided on this path");
  }
  TreeNode force = node;
  force.id = first_child_id;
  force.parent = node.id;
  force.depth = node.depth + 1;
  force.decisions.push_back({edge, true});
  TreeNode forbid = force;
  forbid.id = first_child_id + 1;
  forbid.decisions.back().forced = false;
  return {std::move(force), std::move(forbid)};
}

bool should_early_branch(int parent_lb, double z_rmp_first) {
  return ceil_with_tolerance(z_rmp_first) == parent_lb;
}

void NodeSelector::add_children(TreeNode force_child, TreeNode forbid_child) {
  open_.push_back(std::move(forbid_child));
  if (plunge_depth_ < kMaxPlungeDepth) {
    plunge_child_ = std::move(force_child);
  } else {
    open_.push_back(std::move(force_child));
    plunge_depth_ = 0;
  }
}

TreeNode NodeSelector::next() {
  if (plunge_child_) {
    TreeNode node = std::move(*plunge_child_);
    plunge_child_.reset();
    ++plunge_depth_;
    return node;
  }
  if (open_.empty()) throw std::logic_error("NodeSelector::next on an empty open set");
  plunge_depth_ = 0;
  auto best = std::min_element(open_.begin(), open_.end(), [](const TreeNode& a, const TreeNode& b) {
    if (a.estimate != b.estimate) return a.estimate < b.estimate;
    return a.id < b.id;
  });
  TreeNode node = std::move(*best);
  open_.erase(best);
  return node;
}

std::optional<int> NodeSelector::min_bound() const {
  std::optional<int> lb;
  if (plunge_child_) lb = plunge_child_->parent_lb;
  for (const auto& n : open_) lb = lb ? std::min(*lb, n.parent_lb) : n.parent_lb;
  return lb;
}

CyclePartition repair_cover(const Instance& inst, std::span<const Cycle> cycles) {
  std::vector<char> seen(inst.n(), 0);
  CyclePartition part;
  for (const auto& c : cycles) {
    std::vector<int> kept;
    for (int v : c.nodes) {
      if (seen[v]) continue;
      seen[v] = 1;
      kept.push_back(v);
    }
    if (!kept.empty()) part.cycles.push_back(make_cycle(inst, kept));
  }
  std::sort(part.cycles.begin(), part.cycles.end(),
            [](const Cycle& a, const Cycle& b) { return a.nodes < b.nodes; });
  return part;
}

std::optional<CyclePartition> check_integrality(const Instance& inst, const ColumnPool& pool,
                                                std::span<const int> active,
                                                std::span<const double> primal, MasterMode mode) {
  std::vector<Cycle> chosen;
  for (std::size_t k = 0; k < active.size(); ++k) {
    if (is_fractional(primal[k]) || primal[k] > 1.0 + kIntegralityTolerance) return std::nullopt;
    if (primal[k] >= 1.0 - kIntegralityTolerance) chosen.push_back(pool[active[k]]);
  }
  std::sort(chosen.begin(), chosen.end(),
            [](const Cycle& a, const Cycle& b) { return a.nodes < b.nodes; });
  CyclePartition part;
  if (mode == MasterMode::cover) {
    part = repair_cover(inst, chosen);
  } else {
    part.cycles = std::move(chosen);
  }
  if (auto verdict = validate_partition(inst, part); !verdict) {
    throw std::logic_error("integral RMP solution is not a valid partition: " + verdict.message);
  }
  return part;
}

SolveResult solve(const Instance& original, const SolverConfig& cfg) {
  using clock = std::chrono::steady_clock;
  const auto started = clock::now();
  if (cfg.mode == MasterMode::cover && !original.is_metric()) {
    throw std::invalid_argument("covering mode requires metric instance");
  }
  Deadline deadline;
  if (std::isfinite(cfg.time_limit_s)) {
    deadline = started + std::chrono::duration_cast<clock::duration>(
                             std::chrono::duration<double>(std::max(0.0, cfg.time_limit_s)));
  }

  Instance inst = original;
  NodeRelabeling relabeling = NodeRelabeling::identity(original.n());
  if (cfg.symmetry_sort) std::tie(inst, relabeling) = relabel_by_critical_time(original);

  SolveResult result;
  SolveStats& stats = result.stats;
  CyclePartition incumbent = greedy_primal(inst);
  stats.heuristic_objective = incumbent.objective();
  ColumnPool pool = initialize_root_pool(inst, incumbent);

  ColgenConfig cg;
  cg.mode = cfg.mode;
  cg.bidirectional = cfg.bidirectional;
  cg.heuristic_pricing = cfg.heuristic_pricing;
  cg.symmetry_breaking = cfg.symmetry_sort;
  cg.workers = std::max(1, cfg.workers);
  cg.max_columns_per_round = std::max(1, cfg.max_columns_per_round);

  auto offer = [&](std::span<const int> active, std::span<const double> primal) -> std::optional<int> {
    if (auto cand = check_integrality(inst, pool, active, primal, cfg.mode)) {
      if (cand->objective() < incumbent.objective()) incumbent = std::move(*cand);
    }
    return incumbent.objective();
  };

  NodeSelector selector;
  TreeNode root;
  root.parent_lb = 1;
  selector.push(root);
  int next_id = 1;
  bool timed_out = false;
  std::optional<int> interrupted_bound;

  while (!selector.empty()) {
    if (deadline && clock::now() > *deadline) {
      timed_out = true;
      break;
    }
    TreeNode node = selector.next();
    if (node.parent_lb >= incumbent.objective()) {
      ++stats.nodes_pruned;
      selector.end_plunge();
      continue;
    }
    ++stats.nodes_processed;

    NodeContext ctx;
    ctx.decisions = node.decisions;
    if (cfg.early_branching && node.parent != -1) ctx.early_branch_bound = node.parent_lb;
    ctx.incumbent = incumbent.objective();
    ctx.deadline = deadline;
    ctx.on_solution = offer;
    CgResult r = generate_columns(ctx, pool, inst, cg);

    stats.lp_iterations += r.stats.lp_iterations;
    stats.pricing_rounds += r.stats.pricing_rounds;
    stats.farkas_rounds += r.stats.farkas_rounds;
    stats.columns_added += r.stats.columns_added;
    stats.labels_generated += r.stats.labeling.labels_generated;
    stats.labels_extended += r.stats.labeling.labels_extended;
    stats.labels_dominated += r.stats.labeling.labels_dominated;
    stats.merges_attempted += r.stats.labeling.merges_attempted;

    int node_lb = node.parent_lb;
    switch (r.status) {
      case CgStatus::infeasible:
      case CgStatus::bound_pruned:
        selector.end_plunge();
        continue;
      case CgStatus::limit_hit:
        timed_out = true;
        interrupted_bound = std::max(node.parent_lb, r.lagrangian_lb);
        break;
      case CgStatus::early_branch:
        ++stats.early_branches;
        break;
      case CgStatus::converged:
        node_lb = std::max({node_lb, r.lagrangian_lb, ceil_with_tolerance(r.lp_objective)});
        if (node.parent == -1) stats.root_lp = r.lp_objective;
        break;
    }
    if (timed_out) break;

    if (node_lb >= incumbent.objective()) {
      selector.end_plunge();
      continue;
    }
    if (check_integrality(inst, pool, r.active, r.primal, cfg.mode)) {
      // offer() already recorded it; an integral RMP optimum closes the node.
      selector.end_plunge();
      continue;
    }

    const Edge edge = select_branching_edge(pool, r.active, r.primal, node.decisions);
    const auto fractional = std::count_if(r.primal.begin(), r.primal.end(), is_fractional);
    auto [force, forbid] = branch(node, edge, next_id);
    next_id += 2;
    force.parent_lb = forbid.parent_lb = node_lb;
    force.estimate = forbid.estimate = node_lb + 0.5 * static_cast<double>(fractional);
    selector.add_children(std::move(force), std::move(forbid));
  }

  const int ub = incumbent.objective();
  if (timed_out) {
    std::optional<int> lb = selector.min_bound();
    if (interrupted_bound) lb = lb ? std::min(*lb, *interrupted_bound) : *interrupted_bound;
    stats.lower_bound = std::min(ub, lb.value_or(ub));
    result.status = stats.lower_bound >= ub ? SolveStatus::optimal : SolveStatus::timeout;
  } else {
    stats.lower_bound = ub;
    result.status = SolveStatus::optimal;
  }
  stats.upper_bound = ub;

  result.partition = map_partition(original, incumbent, relabeling, /*to_new=*/false);
  if (auto verdict = validate_partition(original, result.partition); !verdict) {
    throw std::logic_error("incumbent failed validation: " + verdict.message);
  }
  stats.wall_time_s = std::chrono::duration<double>(clock::now() - started).count();
  return result;
}

}  // namespace lccp
