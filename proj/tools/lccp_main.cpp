// lccp: solve, check and benchmark length-constrained cycle partition instances.
//
// JSON goes to stdout (or --output), human-readable progress to stderr.
// Exit codes: 0 success/optimal, 1 error or rejected solution, 2 timeout.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lccp/bnb.hpp"
#include "lccp/instance.hpp"
#include "lccp/oracle.hpp"
#include "lccp/report.hpp"

namespace fs = std::filesystem;
using namespace lccp;

namespace {

struct Common {
  std::string format;  // empty: infer from extension
  std::string output;
  bool metric_closure = false;
};

InstanceFormat parse_format(const std::string& s, const std::string& path) {
  if (s.empty()) return format_from_path(path);
  return s == "json" ? InstanceFormat::json : InstanceFormat::text;
}

Instance load(const std::string& path, const Common& common) {
  Instance inst = load_instance_file(path, parse_format(common.format, path));
  if (common.metric_closure) inst = metric_closure(inst);
  return inst;
}

void emit(const std::string& text, const std::string& output) {
  if (output.empty()) {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(output);
  if (!out) throw std::runtime_error("cannot write " + output);
  out << text << '\n';
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void add_solver_flags(CLI::App* cmd, SolverConfig& cfg, std::string& mode, bool& no_bidir,
                      bool& no_symmetry, bool& no_early, bool& no_heuristic) {
  cmd->add_option("--mode", mode, "Master problem rows")
      ->check(CLI::IsMember({"partition", "cover"}))
      ->capture_default_str();
  cmd->add_flag("--no-bidir", no_bidir, "Monodirectional labeling");
  cmd->add_flag("--no-symmetry", no_symmetry, "Disable critical-time relabeling");
  cmd->add_flag("--no-early", no_early, "Disable early branching");
  cmd->add_flag("--no-heuristic", no_heuristic, "Skip heuristic pricing rounds");
  cmd->add_option("--workers", cfg.workers, "Pricing threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--time-limit", cfg.time_limit_s, "Seconds (default: none)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--max-columns", cfg.max_columns_per_round, "Columns added per pricing round")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "Echoed into the report")->capture_default_str();
}

void finish_config(SolverConfig& cfg, const std::string& mode, bool no_bidir, bool no_symmetry,
                   bool no_early, bool no_heuristic) {
  cfg.mode = mode == "cover" ? MasterMode::cover : MasterMode::partition;
  cfg.bidirectional = !no_bidir;
  cfg.symmetry_sort = !no_symmetry;
  cfg.early_branching = !no_early;
  cfg.heuristic_pricing = !no_heuristic;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact solver for the length-constrained cycle partition problem"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--format", common.format, "Instance format (default: by extension)")
        ->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("-o,--output", common.output, "Write JSON here instead of stdout");
    cmd->add_flag("--metric-closure", common.metric_closure,
                  "Replace travel times by shortest-path distances first");
  };

  SolverConfig cfg;
  std::string mode = "partition";
  bool no_bidir = false, no_symmetry = false, no_early = false, no_heuristic = false;

  std::string instance_path;
  auto* solve_cmd = app.add_subcommand("solve", "Solve an instance to optimality");
  solve_cmd->add_option("instance", instance_path)->required();
  add_common(solve_cmd);
  add_solver_flags(solve_cmd, cfg, mode, no_bidir, no_symmetry, no_early, no_heuristic);

  std::string solution_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a solution against an instance");
  validate_cmd->add_option("instance", instance_path)->required();
  validate_cmd->add_option("solution", solution_path)->required();
  add_common(validate_cmd);

  int gen_n = 10;
  std::uint64_t gen_seed = 0;
  double coord_range = 100.0, crit_low = 50.0, crit_high = 200.0;
  auto* gen_cmd = app.add_subcommand("generate", "Random Euclidean instance");
  gen_cmd->add_option("-n", gen_n, "Number of nodes")->check(CLI::PositiveNumber)->capture_default_str();
  gen_cmd->add_option("--seed", gen_seed)->capture_default_str();
  gen_cmd->add_option("--coord-range", coord_range)->capture_default_str();
  gen_cmd->add_option("--crit-low", crit_low)->capture_default_str();
  gen_cmd->add_option("--crit-high", crit_high)->capture_default_str();
  gen_cmd->add_option("--format", common.format)->check(CLI::IsMember({"text", "json"}));
  gen_cmd->add_option("-o,--output", common.output);

  auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force optimum (n <= 12) vs the solver");
  oracle_cmd->add_option("instance", instance_path)->required();
  add_common(oracle_cmd);

  std::string bench_dir;
  std::vector<std::string> variant_names{"full", "nobidir", "nopar", "nosymbr", "noearly", "basic"};
  std::string table_format = "csv";
  auto* bench_cmd = app.add_subcommand("bench", "Run ablation variants over a directory");
  bench_cmd->add_option("dir", bench_dir)->required()->check(CLI::ExistingDirectory);
  bench_cmd->add_option("--variants", variant_names)->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--table", table_format)->check(CLI::IsMember({"csv", "json"}));
  bench_cmd->add_option("-o,--output", common.output);
  bench_cmd->add_flag("--metric-closure", common.metric_closure);
  add_solver_flags(bench_cmd, cfg, mode, no_bidir, no_symmetry, no_early, no_heuristic);

  CLI11_PARSE(app, argc, argv);
  finish_config(cfg, mode, no_bidir, no_symmetry, no_early, no_heuristic);

  try {
    if (*solve_cmd) {
      const Instance inst = load(instance_path, common);
      std::cerr << "solving " << instance_path << " (n=" << inst.n() << ", mode "
                << to_string(cfg.mode) << ")\n";
      RunReport report{instance_path, inst.n(), cfg, solve(inst, cfg)};
      const auto& s = report.result.stats;
      std::cerr << to_string(report.result.status) << ": objective "
                << report.result.partition.objective() << ", lower bound " << s.lower_bound
                << ", " << s.nodes_processed << " nodes, " << s.wall_time_s << " s\n";
      emit(report_to_json(report), common.output);
      return report.result.status == SolveStatus::optimal ? 0 : 2;
    }

    if (*validate_cmd) {
      const Instance inst = load(instance_path, common);
      const CyclePartition part = partition_from_json(inst, read_file(solution_path));
      const PartitionVerdict verdict = validate_partition(inst, part);
      if (!verdict) {
        std::cerr << "rejected: " << verdict.message << '\n';
        return 1;
      }
      std::cerr << "accepted: " << part.objective() << " cycles\n";
      return 0;
    }

    if (*gen_cmd) {
      const Instance inst = generate_euclidean(gen_n, gen_seed, coord_range, crit_low, crit_high);
      const InstanceFormat fmt = common.format.empty()
                                     ? (common.output.empty() ? InstanceFormat::json
                                                              : format_from_path(common.output))
                                     : parse_format(common.format, "");
      std::ostringstream out;
      save_instance(out, inst, fmt);
      std::string text = out.str();
      if (!text.empty() && text.back() == '\n') text.pop_back();
      emit(text, common.output);
      return 0;
    }

    if (*oracle_cmd) {
      const Instance inst = load(instance_path, common);
      const auto catalog = oracle::enumerate_cycles(inst);
      const int brute = oracle::optimal_partition(inst);
      const SolveResult res = solve(inst);
      nlohmann::ordered_json j;
      j["instance"] = instance_path;
      j["n"] = inst.n();
      j["feasible_cycles"] = catalog.cycles.size();
      j["oracle_objective"] = brute;
      j["solver_objective"] = res.partition.objective();
      j["match"] = brute == res.partition.objective();
      emit(j.dump(2), common.output);
      if (brute != res.partition.objective()) {
        std::cerr << "mismatch: oracle " << brute << ", solver " << res.partition.objective()
                  << '\n';
        return 1;
      }
      return 0;
    }

    if (*bench_cmd) {
      std::vector<std::string> paths;
      for (const auto& entry : fs::directory_iterator(bench_dir)) {
        if (!entry.is_regular_file()) continue;
        const auto ext = entry.path().extension().string();
        if (ext == ".json" || ext == ".txt" || ext == ".lccp") paths.push_back(entry.path().string());
      }
      std::sort(paths.begin(), paths.end());
      // The parallel variants need more than one worker to differ from nopar.
      if (cfg.workers == 1) cfg.workers = static_cast<int>(std::max(2u, std::thread::hardware_concurrency()));
      std::vector<BenchVariant> variants;
      for (const auto& name : variant_names) variants.push_back(make_variant(name, cfg));
      std::cerr << "bench: " << paths.size() << " instances x " << variants.size() << " variants\n";
      const BenchTable table = run_bench(paths, variants, common.metric_closure);
      for (const auto& r : table.rows) {
        if (!r.error.empty()) std::cerr << r.instance << " [" << r.variant << "]: " << r.error << '\n';
      }
      emit(table_format == "json" ? bench_to_json(table) : bench_to_csv(table), common.output);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
