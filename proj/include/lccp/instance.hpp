#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lccp/cycle.hpp"

namespace lccp {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class InstanceFormat { text, json };

/// Complete undirected graph with symmetric travel times and per-node
/// critical times. Immutable after construction.
class Instance {
 public:
  /// Validates and builds an instance. `travel` is row-major n*n.
  /// Throws ValidationError naming the offending entry.
  Instance(std::vector<double> travel, std::vector<double> crit,
           bool is_metric = false);

  int n() const { return n_; }
  double travel(int i, int j) const { return travel_[static_cast<std::size_t>(i) * n_ + j]; }
  double crit(int i) const { return crit_[i]; }
  const std::vector<double>& crit() const { return crit_; }
  const std::vector<double>& travel_matrix() const { return travel_; }
  bool is_metric() const { return is_metric_; }

  /// True iff the triangle inequality holds up to a relative slack of 1e-9.
  bool satisfies_triangle_inequality() const;

  bool operator==(const Instance&) const = default;

 private:
  int n_;
  std::vector<double> travel_;
  std::vector<double> crit_;
  bool is_metric_;
};

struct CyclePartition {
  std::vector<Cycle> cycles;

  int objective() const { return static_cast<int>(cycles.size()); }
};

/// Permutation sorting nodes by ascending critical time (ties by old index).
struct NodeRelabeling {
  std::vector<int> forward;   // old index -> new index
  std::vector<int> backward;  // new index -> old index

  static NodeRelabeling identity(int n);
};

Instance load_instance(std::istream& in, InstanceFormat format);
Instance load_instance_file(const std::string& path, InstanceFormat format);
InstanceFormat format_from_path(const std::string& path);
void save_instance(std::ostream& out, const Instance& inst, InstanceFormat format);

Instance generate_euclidean(int n, std::uint64_t seed, double coord_range,
                            double crit_low, double crit_high);

/// Replaces every travel time by the shortest-path distance.
Instance metric_closure(const Instance& inst);

std::pair<Instance, NodeRelabeling> relabel_by_critical_time(const Instance& inst);

/// Maps a partition of the relabeled instance back to original indices
/// (`to_new == false`) or the other way round.
CyclePartition map_partition(const Instance& target, const CyclePartition& part,
                             const NodeRelabeling& relabeling, bool to_new);

struct PartitionVerdict {
  bool accepted = true;
  std::string message;

  explicit operator bool() const { return accepted; }
};

/// Recomputes cycle times from the instance and checks exact node coverage
/// and the length constraint for every cycle.
PartitionVerdict validate_partition(const Instance& inst, const CyclePartition& part);

/// Solution file: {"objective": int, "cycles": [[...], ...]}.
std::string partition_to_json(const CyclePartition& part);
/// Parses a solution file. Times are recomputed from `inst`; cycles are kept
/// in the given traversal order so that validation sees them as written.
CyclePartition partition_from_json(const Instance& inst, const std::string& text);

}  // namespace lccp
