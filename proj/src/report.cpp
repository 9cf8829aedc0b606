#include "lccp/report.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace lccp {

using nlohmann::ordered_json;

const char* to_string(SolveStatus s) {
  return s == SolveStatus::optimal ? "optimal" : "timeout";
}

const char* to_string(MasterMode m) {
  return m == MasterMode::partition ? "partition" : "cover";
}

namespace {

ordered_json config_json(const SolverConfig& c) {
  ordered_json j;
  j["mode"] = to_string(c.mode);
  j["bidirectional"] = c.bidirectional;
  j["symmetry_sort"] = c.symmetry_sort;
  j["early_branching"] = c.early_branching;
  j["heuristic_pricing"] = c.heuristic_pricing;
  j["workers"] = c.workers;
  // JSON has no infinity; null means unlimited.
  j["time_limit_s"] = std::isfinite(c.time_limit_s) ? ordered_json(c.time_limit_s) : ordered_json();
  j["max_columns_per_round"] = c.max_columns_per_round;
  j["seed"] = c.seed;
  return j;
}

ordered_json stats_json(const SolveStats& s, bool include_timing) {
  ordered_json j;
  j["nodes_processed"] = s.nodes_processed;
  j["nodes_pruned"] = s.nodes_pruned;
  j["early_branches"] = s.early_branches;
  j["lp_iterations"] = s.lp_iterations;
  j["pricing_rounds"] = s.pricing_rounds;
  j["farkas_rounds"] = s.farkas_rounds;
  j["columns_added"] = s.columns_added;
  j["labels_generated"] = s.labels_generated;
  j["labels_extended"] = s.labels_extended;
  j["labels_dominated"] = s.labels_dominated;
  j["merges_attempted"] = s.merges_attempted;
  j["heuristic_objective"] = s.heuristic_objective;
  j["wall_time_s"] = include_timing ? s.wall_time_s : 0.0;
  return j;
}

}  // namespace

std::string report_to_json(const RunReport& r, bool include_timing) {
  const SolveStats& s = r.result.stats;
  ordered_json j;
  j["instance"] = {{"source", r.instance}, {"n", r.n}};
  j["config"] = config_json(r.config);
  j["status"] = to_string(r.result.status);
  j["objective"] = r.result.partition.objective();
  j["lower_bound"] = s.lower_bound;
  j["root_lp"] = std::isnan(s.root_lp) ? ordered_json() : ordered_json(s.root_lp);
  auto cycles = ordered_json::array();
  for (const auto& c : r.result.partition.cycles) cycles.push_back(c.nodes);
  j["cycles"] = std::move(cycles);
  j["stats"] = stats_json(s, include_timing);
  j["wall_time_s"] = include_timing ? s.wall_time_s : 0.0;
  return j.dump(2);
}

double shifted_geometric_mean(std::span<const double> times, double shift) {
  if (times.empty()) return 0.0;
  double log_sum = 0.0;
  for (double t : times) log_sum += std::log(t + shift);
  return std::exp(log_sum / static_cast<double>(times.size())) - shift;
}

BenchVariant make_variant(const std::string& name, const SolverConfig& base) {
  SolverConfig c = base;
  if (name == "full") {
  } else if (name == "nobidir") {
    c.bidirectional = false;
  } else if (name == "nopar") {
    c.workers = 1;
  } else if (name == "nosymbr") {
    c.symmetry_sort = false;
  } else if (name == "noearly") {
    c.early_branching = false;
  } else if (name == "basic") {
    c.bidirectional = false;
    c.workers = 1;
    c.symmetry_sort = false;
    c.early_branching = false;
    c.heuristic_pricing = false;
  } else {
    throw std::invalid_argument("unknown bench variant '" + name + "'");
  }
  return {name, c};
}

BenchTable run_bench(std::span<const std::string> instance_paths,
                     std::span<const BenchVariant> variants, bool metric_closure_first) {
  BenchTable table;
  std::vector<std::vector<double>> times(variants.size());
  for (const auto& path : instance_paths) {
    for (std::size_t k = 0; k < variants.size(); ++k) {
      const auto& variant = variants[k];
      BenchRow row;
      row.instance = path;
      row.variant = variant.name;
      const double limit = variant.config.time_limit_s;
      try {
        Instance inst = load_instance_file(path, format_from_path(path));
        if (metric_closure_first) inst = metric_closure(inst);
        const SolveResult res = solve(inst, variant.config);
        row.status = to_string(res.status);
        row.objective = res.partition.objective();
        row.lower_bound = res.stats.lower_bound;
        row.time_s = res.stats.wall_time_s;
        if (res.status == SolveStatus::timeout && std::isfinite(limit)) row.time_s = limit;
        row.labels_extended = res.stats.labels_extended;
        row.nodes_processed = res.stats.nodes_processed;
      } catch (const std::exception& e) {
        row.status = "error";
        row.error = e.what();
        row.time_s = std::isfinite(limit) ? limit : 0.0;
      }
      times[k].push_back(row.time_s);
      table.rows.push_back(std::move(row));
    }
  }
  for (std::size_t k = 0; k < variants.size(); ++k) {
    table.geomeans.emplace_back(variants[k].name, shifted_geometric_mean(times[k]));
  }
  return table;
}

std::string bench_to_csv(const BenchTable& table) {
  std::ostringstream out;
  out.precision(6);
  out << "instance,variant,status,objective,lower_bound,time_s,labels_extended,nodes_processed\n";
  for (const auto& r : table.rows) {
    out << r.instance << ',' << r.variant << ',' << r.status << ',' << r.objective << ','
        << r.lower_bound << ',' << r.time_s << ',' << r.labels_extended << ','
        << r.nodes_processed << '\n';
  }
  out << "\nvariant,shifted_geomean_s\n";
  for (const auto& [name, g] : table.geomeans) out << name << ',' << g << '\n';
  return out.str();
}

std::string bench_to_json(const BenchTable& table) {
  ordered_json j;
  auto rows = ordered_json::array();
  for (const auto& r : table.rows) {
    ordered_json row;
    row["instance"] = r.instance;
    row["variant"] = r.variant;
    row["status"] = r.status;
    row["objective"] = r.objective;
    row["lower_bound"] = r.lower_bound;
    row["time_s"] = r.time_s;
    row["labels_extended"] = r.labels_extended;
    row["nodes_processed"] = r.nodes_processed;
    if (!r.error.empty()) row["error"] = r.error;
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  ordered_json g;
  for (const auto& [name, value] : table.geomeans) g[name] = value;
  j["shifted_geomean_s"] = std::move(g);
  return j.dump(2);
}

}  // namespace lccp
