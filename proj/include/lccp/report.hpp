#pragma once

#include <span>
#include <string>
#include <vector>

#include "lccp/bnb.hpp"

namespace lccp {

struct RunReport {
  std::string instance;  // path or other descriptor
  int n = 0;
  SolverConfig config;
  SolveResult result;
};

const char* to_string(SolveStatus s);
const char* to_string(MasterMode m);

/// Pretty-printed JSON. With `include_timing == false` the wall-time fields
/// are written as 0 so that repeated runs compare byte for byte.
std::string report_to_json(const RunReport& report, bool include_timing = true);

/// exp(mean(log(t + shift))) - shift.
double shifted_geometric_mean(std::span<const double> times, double shift = 1.0);

struct BenchVariant {
  std::string name;
  SolverConfig config;
};

/// Known names: full, nobidir, nopar, nosymbr, noearly, basic. `base` supplies
/// the settings every variant shares (time limit, workers for the parallel
/// variants, mode). Throws std::invalid_argument on an unknown name.
BenchVariant make_variant(const std::string& name, const SolverConfig& base);

struct BenchRow {
  std::string instance;
  std::string variant;
  std::string status;  // optimal, timeout or error
  int objective = -1;
  int lower_bound = -1;
  double time_s = 0.0;  // timeouts and errors are charged the time limit
  std::int64_t labels_extended = 0;
  std::int64_t nodes_processed = 0;
  std::string error;
};

struct BenchTable {
  std::vector<BenchRow> rows;
  std::vector<std::pair<std::string, double>> geomeans;  // per variant
};

/// Solves every instance with every variant, sequentially.
BenchTable run_bench(std::span<const std::string> instance_paths,
                     std::span<const BenchVariant> variants, bool metric_closure_first);

std::string bench_to_csv(const BenchTable& table);
std::string bench_to_json(const BenchTable& table);

}  // namespace lccp
