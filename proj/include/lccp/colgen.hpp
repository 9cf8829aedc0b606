#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "lccp/cycle.hpp"
#include "lccp/instance.hpp"
#include "lccp/labeling.hpp"
#include "lccp/lp.hpp"

namespace lccp {

enum class MasterMode { partition, cover };

/// Every column ever generated. Columns are never removed; tree nodes select
/// the compatible ones through `filter_columns`.
class ColumnPool {
 public:
  /// Adds the cycle unless its canonical form is already present. Returns the
  /// id of the new column.
  std::optional<int> add(Cycle c);
  const Cycle& operator[](int id) const { return columns_[id]; }
  int size() const { return static_cast<int>(columns_.size()); }
  bool contains(const std::vector<int>& nodes) const { return index_.contains(nodes); }

 private:
  std::vector<Cycle> columns_;
  std::map<std::vector<int>, int> index_;
};

/// Ids of the columns compatible with every edge decision.
std::vector<int> filter_columns(const ColumnPool& pool, std::span<const EdgeDecision> decisions);

/// All singletons plus the cycles of the given heuristic partition.
ColumnPool initialize_root_pool(const Instance& inst, const CyclePartition& heuristic);
/// Same, running the greedy primal heuristic.
ColumnPool initialize_root_pool(const Instance& inst);

struct ColgenConfig {
  MasterMode mode = MasterMode::partition;
  bool bidirectional = true;
  bool heuristic_pricing = true;
  bool symmetry_breaking = true;
  int workers = 1;
  int max_columns_per_round = 50;
  int max_rounds = 10000;
  double redcost_tolerance = 1e-6;
  /// Duals above this count as positive for zero-dual node elimination.
  double zero_dual_tolerance = 1e-9;
};

enum class CgStatus { converged, infeasible, bound_pruned, limit_hit, early_branch };

struct CgStats {
  std::int64_t pricing_rounds = 0;
  std::int64_t heuristic_rounds = 0;
  std::int64_t exact_rounds = 0;
  std::int64_t farkas_rounds = 0;
  std::int64_t columns_added = 0;
  std::int64_t lp_iterations = 0;
  LabelingStats labeling;

  CgStats& operator+=(const CgStats& o);
};

struct CgResult {
  CgStatus status = CgStatus::converged;
  /// Objective of the last feasible RMP.
  double lp_objective = 0.0;
  /// Best integer lower bound derived from exact pricing at this node.
  int lagrangian_lb = 0;
  std::vector<int> active;     // pool ids of the RMP columns
  std::vector<double> primal;  // parallel to `active`
  std::vector<double> duals;
  /// RMP objective after every feasible solve, in order.
  std::vector<double> objective_trace;
  CgStats stats;
};

struct NodeContext {
  EdgeDecisions decisions;
  /// When set, stop after the first feasible RMP if its ceiling equals it.
  std::optional<int> early_branch_bound;
  /// Objective of the best known partition; columns generation stops once
  /// the node bound reaches it.
  std::optional<int> incumbent;
  Deadline deadline;
  /// Called after each feasible RMP solve; may return an improved incumbent.
  std::function<std::optional<int>(std::span<const int>, std::span<const double>)> on_solution;
};

/// Ceiling that treats values within 1e-6 below an integer as that integer.
int ceil_with_tolerance(double value);

/// Ceiling of z_rmp + sum over starts of min(0, z_s).
int lagrangian_bound(double z_rmp, std::span<const double> per_start_minima);

/// Bound from scaling nonnegative covering duals into dual feasibility:
/// ceil(sum(duals) / max(1, 1 - min reduced cost)).
int farley_bound(double dual_sum, double min_redcost);

struct FarkasResult {
  std::vector<Cycle> columns;
  bool node_infeasible = false;
  bool aborted = false;
  LabelingStats stats;
};

/// Prices with node weights equal to the Farkas ray and no constant term;
/// returns cycles whose ray score exceeds the tolerance, or declares the
/// node infeasible when none exists.
FarkasResult farkas_round(std::span<const EdgeDecision> decisions, const ColumnPool& pool,
                          const Instance& inst, std::span<const double> ray,
                          const ColgenConfig& cfg, Deadline deadline = std::nullopt);

/// Column generation loop at one tree node.
CgResult generate_columns(const NodeContext& node, ColumnPool& pool, const Instance& inst,
                          const ColgenConfig& cfg);

/// Builds the master LP over the given pool columns.
LpProblem build_master(const Instance& inst, const ColumnPool& pool, std::span<const int> ids,
                       MasterMode mode);

}  // namespace lccp
