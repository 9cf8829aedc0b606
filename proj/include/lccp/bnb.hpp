#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lccp/colgen.hpp"
#include "lccp/cycle.hpp"
#include "lccp/greedy.hpp"
#include "lccp/instance.hpp"

namespace lccp {

struct SolverConfig {
  MasterMode mode = MasterMode::partition;
  bool bidirectional = true;
  /// Relabel nodes by critical time and restrict each pricing start to
  /// larger indices.
  bool symmetry_sort = true;
  bool early_branching = true;
  bool heuristic_pricing = true;
  int workers = 1;
  double time_limit_s = std::numeric_limits<double>::infinity();
  int max_columns_per_round = 50;
  std::uint64_t seed = 0;
};

enum class SolveStatus { optimal, timeout };

struct SolveStats {
  std::int64_t nodes_processed = 0;
  std::int64_t nodes_pruned = 0;
  std::int64_t early_branches = 0;
  std::int64_t lp_iterations = 0;
  std::int64_t pricing_rounds = 0;
  std::int64_t farkas_rounds = 0;
  std::int64_t columns_added = 0;
  std::int64_t labels_generated = 0;
  std::int64_t labels_extended = 0;
  std::int64_t labels_dominated = 0;
  std::int64_t merges_attempted = 0;
  double wall_time_s = 0.0;
  /// Converged root LP value; NaN if the root did not converge.
  double root_lp = std::numeric_limits<double>::quiet_NaN();
  int heuristic_objective = 0;
  int lower_bound = 0;
  int upper_bound = 0;
};

struct SolveResult {
  CyclePartition partition;
  SolveStats stats;
  SolveStatus status = SolveStatus::optimal;
};

/// Branch and price. Throws std::invalid_argument if covering mode is
/// requested on an instance not flagged metric.
SolveResult solve(const Instance& inst, const SolverConfig& cfg = {});

struct TreeNode {
  int id = 0;
  int parent = -1;
  EdgeDecisions decisions;
  int parent_lb = 0;
  int depth = 0;
  double estimate = 0.0;
};

/// Most used undecided edge among the fractional columns of an RMP solution
/// (2-cycles count their edge twice, singletons count nothing); ties go to
/// the lexicographically smallest edge. Throws std::logic_error on an
/// integral solution.
Edge select_branching_edge(const ColumnPool& pool, std::span<const int> active,
                           std::span<const double> primal,
                           std::span<const EdgeDecision> decided = {});

/// Force-child first, forbid-child second. Throws std::invalid_argument if
/// the edge is already decided on the node's path.
std::pair<TreeNode, TreeNode> branch(const TreeNode& node, Edge edge, int first_child_id);

/// True iff the first RMP objective rounds up to the inherited bound.
bool should_early_branch(int parent_lb, double z_rmp_first);

/// Best-estimate selection with plunging into the most recent children.
class NodeSelector {
 public:
  static constexpr int kMaxPlungeDepth = 10;

  void push(TreeNode node) { open_.push_back(std::move(node)); }
  /// Registers the children of the node just processed.
  void add_children(TreeNode force_child, TreeNode forbid_child);
  /// Marks that the node just processed produced no children.
  void end_plunge() { plunge_depth_ = 0; }
  TreeNode next();
  bool empty() const { return open_.empty() && !plunge_child_; }
  std::size_t size() const { return open_.size() + (plunge_child_ ? 1 : 0); }
  /// Smallest inherited bound among open nodes (nullopt if empty).
  std::optional<int> min_bound() const;

 private:
  std::vector<TreeNode> open_;
  std::optional<TreeNode> plunge_child_;
  int plunge_depth_ = 0;
};

/// Extracts the selected cycles if every value is within 1e-6 of 0 or 1. In
/// covering mode nodes covered more than once are stripped from all but one
/// cycle. Throws std::logic_error if the result fails validation.
std::optional<CyclePartition> check_integrality(const Instance& inst, const ColumnPool& pool,
                                                std::span<const int> active,
                                                std::span<const double> primal, MasterMode mode);

/// Keeps each node in the first cycle listing it and shortcuts it elsewhere.
CyclePartition repair_cover(const Instance& inst, std::span<const Cycle> cycles);

}  // namespace lccp
