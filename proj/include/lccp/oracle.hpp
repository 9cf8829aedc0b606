#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "lccp/cycle.hpp"
#include "lccp/instance.hpp"

namespace lccp::oracle {

inline constexpr int kMaxOracleNodes = 12;

class SizeGuardError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Every length-feasible canonical cycle, grouped by node-membership mask.
struct CycleCatalog {
  int n = 0;
  std::vector<Cycle> cycles;
  std::vector<std::uint32_t> masks;  // parallel to `cycles`

  /// True iff some cycle has exactly this node set.
  bool has_mask(std::uint32_t mask) const;
};

CycleCatalog enumerate_cycles(const Instance& inst, std::span<const EdgeDecision> decisions = {});

/// Minimum number of cycles in a partition (subset dynamic program).
int optimal_partition(const Instance& inst);

/// Same under branching decisions; nullopt if no branch-feasible partition.
std::optional<int> optimal_partition(const Instance& inst, std::span<const EdgeDecision> decisions);

/// Minimum of 1 - sum(duals) over catalogue cycles whose smallest node is
/// `start`; +infinity when that class is empty.
double min_redcost(const Instance& inst, std::span<const double> duals, int start,
                   std::span<const EdgeDecision> decisions = {});

}  // namespace lccp::oracle
