#pragma once

#include "lccp/instance.hpp"

namespace lccp {

/// Seeds a cycle at the unassigned node with the smallest critical time and
/// grows it by cheapest insertion while the length constraint holds; repeats
/// until every node is assigned. Always returns a valid partition.
CyclePartition greedy_primal(const Instance& inst);

}  // namespace lccp
