#pragma once

#include <array>
#include <bit>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lccp/cycle.hpp"
#include "lccp/instance.hpp"

namespace lccp {

inline constexpr int kMaxNodes = 128;

/// Fixed-capacity node bitset used by labels.
class NodeSet {
 public:
  void insert(int v) { words_[v >> 6] |= std::uint64_t{1} << (v & 63); }
  void erase(int v) { words_[v >> 6] &= ~(std::uint64_t{1} << (v & 63)); }
  bool contains(int v) const { return (words_[v >> 6] >> (v & 63)) & 1U; }
  bool subset_of(const NodeSet& o) const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k] & ~o.words_[k]) return false;
    return true;
  }
  NodeSet intersect(const NodeSet& o) const {
    NodeSet r;
    for (std::size_t k = 0; k < words_.size(); ++k) r.words_[k] = words_[k] & o.words_[k];
    return r;
  }
  int count() const {
    int c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }
  bool empty() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }
  /// True iff the intersection with `o` is exactly {v}.
  bool meets_only_at(const NodeSet& o, int v) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      const std::uint64_t expect = (static_cast<std::size_t>(v >> 6) == k)
                                       ? std::uint64_t{1} << (v & 63)
                                       : 0;
      if ((words_[k] & o.words_[k]) != expect) return false;
    }
    return true;
  }
  static NodeSet all(int n) {
    NodeSet s;
    for (int v = 0; v < n; ++v) s.insert(v);
    return s;
  }
  bool operator==(const NodeSet&) const = default;

 private:
  std::array<std::uint64_t, kMaxNodes / 64> words_{};
};

/// Partial cycle state of the dynamic program. `nodes` excludes the start.
struct Label {
  NodeSet nodes;
  int end = -1;
  double redcost = 0.0;
  double time = 0.0;
  double min_crit = 0.0;
  int pred = -1;       // arena index of the predecessor, -1 for the initial label
  int prev_node = -1;  // node visited before `end`, -1 for the initial label
  int first = -1;      // node visited right after the start, -1 for the initial label
};

/// Branching restrictions and node filters applied during pricing.
class PricingConstraints {
 public:
  PricingConstraints() = default;
  PricingConstraints(int n, std::span<const EdgeDecision> decisions);

  static PricingConstraints unrestricted(int n) { return PricingConstraints(n, {}); }

  int n() const { return n_; }
  bool forbidden(int i, int j) const { return forbidden_[static_cast<std::size_t>(i) * n_ + j]; }
  /// Forced neighbours of `v` (at most two).
  std::span<const int> forced(int v) const { return forced_[v]; }
  bool has_decisions() const { return has_decisions_; }
  /// Cycle-level check of the forbidden and forced edges.
  bool admits(const Cycle& c) const;

  int min_start = 0;
  NodeSet allowed_nodes;

 private:
  int n_ = 0;
  bool has_decisions_ = false;
  std::vector<char> forbidden_;
  std::vector<std::vector<int>> forced_;
};

struct PricingConfig {
  bool bidirectional = true;
  bool heuristic_dominance = false;
  int max_cycles_returned = 50;
  double redcost_tolerance = 1e-6;
  /// Only extend from nodes with index >= start (symmetry breaking).
  bool symmetry_breaking = true;
  /// Disabling dominance turns the search into plain enumeration.
  bool dominance = true;
  /// Constant term of the column score: 1 for ordinary pricing, 0 for Farkas.
  double column_cost = 1.0;
};

struct LabelingStats {
  std::int64_t labels_generated = 0;
  std::int64_t labels_extended = 0;
  std::int64_t labels_dominated = 0;
  std::int64_t merges_attempted = 0;

  LabelingStats& operator+=(const LabelingStats& o) {
    labels_generated += o.labels_generated;
    labels_extended += o.labels_extended;
    labels_dominated += o.labels_dominated;
    merges_attempted += o.merges_attempted;
    return *this;
  }
};

/// Owns every label created by one pricing call; labels refer to their
/// predecessor by index.
class LabelArena {
 public:
  int push(const Label& l) {
    labels_.push_back(l);
    return static_cast<int>(labels_.size()) - 1;
  }
  const Label& operator[](int idx) const { return labels_[idx]; }
  Label& operator[](int idx) { return labels_[idx]; }
  int size() const { return static_cast<int>(labels_.size()); }
  /// Nodes from the start to the label's end, in visiting order.
  std::vector<int> path(int idx) const;

 private:
  std::vector<Label> labels_;
};

Label initial_label(int start, const Instance& inst, double column_cost = 1.0);

/// Extends `lbl` (which started at `start`) to `j`. Returns nullopt when the
/// extension is inadmissible or the result is length-infeasible. The caller
/// sets `pred` on the result.
std::optional<Label> extend(const Label& lbl, int start, int j, std::span<const double> duals,
                            const Instance& inst, const PricingConstraints& cons);

enum class DominanceMode { exact, heuristic };

/// Dominance: same end node, no worse reduced cost and time, and
/// (exact mode only) a subset node set. When `cons` carries forced edges the
/// dominating label must also leave at most the same pending forced edges.
bool dominates(const Label& a, const Label& b, DominanceMode mode = DominanceMode::exact,
               const PricingConstraints* cons = nullptr, int start = -1);

/// Joins two half paths ending at the same node into a cycle. Throws
/// std::logic_error if the labels do not share exactly their end node.
std::optional<Cycle> merge(const LabelArena& arena, int a, int b, int start,
                           std::span<const double> duals, const Instance& inst,
                           const PricingConstraints& cons, double column_cost = 1.0);

/// Closes the label's path back to the start.
std::optional<Cycle> close_cycle(const LabelArena& arena, int idx, int start,
                                 std::span<const double> duals, const Instance& inst,
                                 const PricingConstraints& cons);

Cycle singleton_cycle(int s, std::span<const double> duals, const Instance& inst,
                      double column_cost = 1.0);

struct PricingResult {
  /// Cycles with reduced cost below -tolerance, sorted, at most the cap.
  std::vector<Cycle> cycles;
  /// Minimum reduced cost over every cycle completed by the search
  /// (+infinity if none).
  double min_redcost = 0.0;
  LabelingStats stats;
  bool aborted = false;
};

using Deadline = std::optional<std::chrono::steady_clock::time_point>;

PricingResult price_from_start(int start, std::span<const double> duals, const Instance& inst,
                               const PricingConstraints& cons, const PricingConfig& cfg,
                               Deadline deadline = std::nullopt);

struct PriceAllResult {
  std::vector<Cycle> cycles;
  /// Per start node: min(0, minimum reduced cost found from that start).
  std::vector<double> per_start_min;
  /// Minimum over all starts, unclamped.
  double min_redcost = 0.0;
  LabelingStats stats;
  bool aborted = false;
};

/// Runs `price_from_start` for every start (in parallel when `workers > 1`)
/// and keeps the `max_cycles_returned` best cycles. Deterministic for any
/// worker count.
PriceAllResult price_all(std::span<const double> duals, const Instance& inst,
                         const PricingConstraints& cons_base, const PricingConfig& cfg,
                         int workers = 1, Deadline deadline = std::nullopt);

/// Orders cycles by reduced cost, then lexicographically by nodes.
bool cycle_order(const Cycle& a, const Cycle& b);

}  // namespace lccp
