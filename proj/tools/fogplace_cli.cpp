// fogplace: run placement scenarios, check the exact solver against the
// brute-force oracle, export MILP files and generate workloads.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "fogplace/errors.hpp"
#include "fogplace/lp_export.hpp"
#include "fogplace/oracle_check.hpp"
#include "fogplace/scenario.hpp"

namespace fs = std::filesystem;
using namespace fogplace;

namespace {

struct Common {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::optional<double> budget_seconds;
};

ScenarioConfig load(const Common& c) {
  ScenarioConfig cfg = c.scenario.empty() ? ScenarioConfig{} : load_scenario(c.scenario);
  if (c.seed) cfg.seeds = {*c.seed};
  if (!c.out_dir.empty()) cfg.output_dir = c.out_dir;
  if (c.budget_seconds) cfg.budget_seconds = *c.budget_seconds;
  validate(cfg);
  return cfg;
}

const WeightSpec& weight_named(const ScenarioConfig& cfg, const std::string& label) {
  for (const auto& w : cfg.weights) {
    if (w.label == label) return w;
  }
  throw InvalidConfig("no weight entry labelled '" + label + "'");
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidConfig("cannot write " + path.string());
  out << text;
}

int cmd_run(const Common& c, bool timing) {
  const ScenarioConfig cfg = load(c);
  const RunReport report = run_scenario(cfg);
  write_outputs(report, cfg.output_dir, timing);
  if (cfg.export_lp) {
    const Topology topo = build_topology(cfg.topology);
    for (int n : cfg.vm_counts) {
      for (std::uint64_t s : cfg.seeds) {
        const Workload w = scenario_workload(cfg, topo, n, s);
        for (const auto& ws : cfg.weights) {
          if (ws.weights.lexicographic) continue;
          const std::string stem = cfg.name + "_n" + std::to_string(n) + "_s" + std::to_string(s) + "_" + ws.label;
          write_text(cfg.output_dir / "lp" / (stem + ".lp"), to_lp_text(export_milp(w, topo, cfg.devices, ws.weights, stem)));
        }
      }
    }
  }
  std::cout << "runs " << report.runs.size() << ", optimal " << report.count(SolveStatus::kOptimal) << ", infeasible "
            << report.count(SolveStatus::kInfeasible) << ", aborted " << report.count(SolveStatus::kAborted) << "\n";
  std::map<int, std::pair<double, int>> means;
  for (const auto& r : report.reductions) {
    means[r.vm_count].first += r.reduction;
    ++means[r.vm_count].second;
  }
  for (const auto& [n, m] : means) {
    std::cout << "vm_count " << n << ": mean reduction " << 100.0 * m.first / m.second << "% over " << m.second
              << " pairs\n";
  }
  std::cout << "outputs in " << cfg.output_dir.string() << "\n";
  return exit_code(report);
}

int cmd_oracle(int instances, std::uint64_t seed, int max_vms, int max_servers) {
  const OracleCheckResult r = run_oracle_check(instances, seed, max_vms, max_servers);
  std::cout << r.instances << " instances (" << r.optimal << " optimal, " << r.infeasible << " infeasible), "
            << "bnb nodes " << r.bnb_nodes << ", brute-force leaves " << r.brute_nodes << "\n";
  for (const auto& m : r.mismatches) std::cout << "MISMATCH seed " << m.seed << ": " << m.detail << "\n";
  std::cout << (r.mismatches.empty() ? "all instances agree\n" : "oracle check FAILED\n");
  return r.mismatches.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-minimizing VM placement for PON-connected fog cells"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub, bool scenario_required) {
    auto* opt = sub->add_option("scenario", common.scenario, "Scenario file (JSON)");
    if (scenario_required) opt->required();
    sub->add_option("--seed", common.seed, "Use this single seed");
    sub->add_option("--out-dir", common.out_dir, "Output directory");
    sub->add_option("--budget-seconds", common.budget_seconds, "Per-instance solver time budget");
  };

  auto* run = app.add_subcommand("run", "Solve every (vm count, seed, weight) of a scenario");
  add_common(run, true);
  bool timing = false;
  run->add_flag("--timing", timing, "Record solve times (outputs are then not byte-stable)");

  auto* oracle = app.add_subcommand("oracle-check", "Compare branch and bound with brute force on random instances");
  int instances = 200;
  int max_vms = 6;
  int max_servers = 6;
  std::uint64_t oracle_seed = 1;
  oracle->add_option("--instances", instances, "Number of random instances")->check(CLI::PositiveNumber);
  oracle->add_option("--max-vms", max_vms)->check(CLI::Range(1, 8));
  oracle->add_option("--max-servers", max_servers)->check(CLI::Range(1, 8));
  oracle->add_option("--seed", oracle_seed, "First instance seed");

  auto* lp = app.add_subcommand("export-lp", "Write the MILP of one scenario instance in LP format");
  add_common(lp, false);
  int lp_vms = 10;
  std::string lp_weight;
  lp->add_option("--vms", lp_vms, "Number of VMs")->check(CLI::NonNegativeNumber);
  lp->add_option("--weight", lp_weight, "Weight label (default: first entry)");

  auto* gen = app.add_subcommand("gen-workload", "Generate a workload document");
  add_common(gen, false);
  int gen_vms = 10;
  gen->add_option("--vms", gen_vms, "Number of VMs")->check(CLI::NonNegativeNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(common, timing);
    if (*oracle) return cmd_oracle(instances, oracle_seed, max_vms, max_servers);

    const ScenarioConfig cfg = load(common);
    const Topology topo = build_topology(cfg.topology);
    const std::uint64_t seed = cfg.seeds.front();
    if (*lp) {
      const WeightSpec& ws = lp_weight.empty() ? cfg.weights.front() : weight_named(cfg, lp_weight);
      const Workload w = scenario_workload(cfg, topo, lp_vms, seed);
      const fs::path path = cfg.output_dir / (cfg.name + ".lp");
      write_text(path, to_lp_text(export_milp(w, topo, cfg.devices, ws.weights, cfg.name)));
      std::cout << path.string() << "\n";
      return 0;
    }
    if (*gen) {
      WorkloadParams p = cfg.workload;
      p.n_vms = gen_vms;
      for (const auto& warning : generation_warnings(p, cfg.devices)) std::cerr << "warning: " << warning << "\n";
      const Workload w = generate_workload(p, topo, seed);
      if (common.out_dir.empty()) {
        std::cout << workload_to_text(w);
      } else {
        const fs::path path = fs::path(common.out_dir) /
                              ("workload_n" + std::to_string(gen_vms) + "_s" + std::to_string(seed) + ".json");
        write_text(path, workload_to_text(w));
        std::cout << path.string() << "\n";
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
