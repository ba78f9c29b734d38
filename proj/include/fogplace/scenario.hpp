#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fogplace/power.hpp"
#include "fogplace/solver.hpp"
#include "fogplace/topology.hpp"
#include "fogplace/workload.hpp"

namespace fogplace {

struct WeightSpec {
  std::string label;
  Weights weights;
};

struct ScenarioConfig {
  std::string name = "scenario";
  TopologyParams topology;
  DeviceSpecs devices = reference_specs();
  WorkloadParams workload;  // n_vms is taken from vm_counts
  std::vector<int> vm_counts{10, 15, 20};
  std::vector<std::uint64_t> seeds{1};
  // Replayed instead of generating when nonempty.
  std::vector<Workload> fixed_workloads;
  std::vector<WeightSpec> weights{{"network", {1000.0, 1.0, false}}, {"equal", {1.0, 1.0, false}}};
  // Reductions compare the candidate's total power against the baseline's.
  std::string baseline = "network";
  std::string candidate = "equal";
  double budget_seconds = 60.0;
  double oracle_cap = 1e7;
  int threads = 0;  // 0 = hardware concurrency
  std::filesystem::path output_dir = "out";
  bool export_lp = false;
};

// Throws InvalidConfig.
void validate(const ScenarioConfig& cfg);

struct RunRecord {
  int vm_count = 0;
  std::uint64_t seed = 0;
  std::string weight;
  SolveStatus status = SolveStatus::kInfeasible;
  double objective = 0.0;
  double n_pc_w = 0.0;
  double p_pc_w = 0.0;
  double total_w = 0.0;
  std::vector<double> cell_power_w;
  std::vector<double> cell_cpu_ghz;
  std::vector<double> server_utilization;  // canonical server order
  std::uint64_t nodes_explored = 0;
  double solve_seconds = 0.0;
};

// (P_baseline - P_candidate) / P_baseline on total power.
struct ReductionRow {
  int vm_count = 0;
  std::uint64_t seed = 0;
  double baseline_total_w = 0.0;
  double candidate_total_w = 0.0;
  double reduction = 0.0;
};

struct RunReport {
  std::string name;
  int cells = 0;
  std::vector<std::string> servers;  // canonical server names
  std::string baseline;
  std::string candidate;
  std::vector<RunRecord> runs;  // sorted by (vm_count, seed, weight order)
  std::vector<ReductionRow> reductions;

  int count(SolveStatus status) const;
  const RunRecord* find(int vm_count, std::uint64_t seed, const std::string& weight) const;
};

// Solves every (vm_count, seed, weight) combination, independent runs in
// parallel, and derives the reduction table from pairs where both runs are
// optimal. Does not touch the filesystem.
RunReport run_scenario(const ScenarioConfig& cfg);

// Writes summary.json, runs.csv, reductions.csv and status.txt, plus the
// figure tables, into dir. Outputs are byte-identical for identical
// reports unless timing is recorded.
std::vector<std::filesystem::path> write_outputs(const RunReport& report, const std::filesystem::path& dir,
                                                 bool record_timing = false);

// Figure tables: total power per scenario against VM count, per-cell power
// distribution and per-server utilization, seed-averaged over optimal runs.
std::vector<std::filesystem::path> emit_plot_data(const RunReport& report, const std::filesystem::path& dir);

// 0 all optimal, 2 any infeasible, 3 any aborted (aborted wins).
int exit_code(const RunReport& report);

// Workload for one (vm_count, seed) of a scenario.
Workload scenario_workload(const ScenarioConfig& cfg, const Topology& topology, int vm_count, std::uint64_t seed);

// ---- structured text (JSON) documents ----

std::string workload_to_text(const Workload& workload);
// Throws ParseError.
Workload workload_from_text(std::string_view text);

// Relative workload file paths resolve against base_dir. Throws ParseError
// or InvalidConfig.
ScenarioConfig scenario_from_text(std::string_view text, const std::filesystem::path& base_dir = {});
ScenarioConfig load_scenario(const std::filesystem::path& path);
std::string scenario_to_text(const ScenarioConfig& cfg);

std::string report_to_text(const RunReport& report, bool record_timing = false);

}  // namespace fogplace
