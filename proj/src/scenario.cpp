#include "fogplace/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <thread>

#include "fogplace/errors.hpp"

namespace fogplace {

namespace {

std::string num(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidConfig("cannot write " + path.string());
  out << content;
}

struct Job {
  int vm_count;
  std::uint64_t seed;
  std::size_t workload;  // index into the per-job workload list
  std::size_t weight;
};

}  // namespace

void validate(const ScenarioConfig& cfg) {
  if (cfg.weights.empty()) throw InvalidConfig("scenario needs at least one weight entry");
  if (cfg.fixed_workloads.empty()) {
    if (cfg.seeds.empty()) throw InvalidConfig("scenario needs at least one seed");
    if (cfg.vm_counts.empty()) throw InvalidConfig("scenario needs at least one vm count");
    for (int n : cfg.vm_counts) {
      if (n < 0) throw InvalidConfig("vm counts must be nonnegative");
    }
  }
  if (!cfg.workload.cpu_ghz.valid() || !cfg.workload.ram_mb.valid() || !cfg.workload.traffic_gbps.valid()) {
    throw InvalidConfig("workload range has min > max");
  }
  if (!(cfg.workload.traffic_density >= 0.0 && cfg.workload.traffic_density <= 1.0)) {
    throw InvalidConfig("traffic density must lie in [0, 1]");
  }
  std::set<std::string> labels;
  for (const auto& w : cfg.weights) {
    if (!labels.insert(w.label).second) throw InvalidConfig("duplicate weight label '" + w.label + "'");
    if (!w.weights.lexicographic && (w.weights.alpha < 0.0 || w.weights.beta < 0.0)) {
      throw InvalidConfig("weights must be nonnegative");
    }
  }
  if (cfg.weights.size() >= 2 && (!labels.contains(cfg.baseline) || !labels.contains(cfg.candidate))) {
    throw InvalidConfig("compare labels must name weight entries");
  }
  if (!(cfg.budget_seconds > 0.0)) throw InvalidConfig("solver budget must be positive");
  build_topology(cfg.topology);
  validate_specs(cfg.devices, cfg.topology.cells);
}

int RunReport::count(SolveStatus status) const {
  return static_cast<int>(std::count_if(runs.begin(), runs.end(), [&](const RunRecord& r) { return r.status == status; }));
}

const RunRecord* RunReport::find(int vm_count, std::uint64_t seed, const std::string& weight) const {
  for (const RunRecord& r : runs) {
    if (r.vm_count == vm_count && r.seed == seed && r.weight == weight) return &r;
  }
  return nullptr;
}

Workload scenario_workload(const ScenarioConfig& cfg, const Topology& topology, int vm_count, std::uint64_t seed) {
  WorkloadParams p = cfg.workload;
  p.n_vms = vm_count;
  return generate_workload(p, topology, seed);
}

RunReport run_scenario(const ScenarioConfig& cfg) {
  validate(cfg);
  const Topology topology = build_topology(cfg.topology);

  std::vector<Workload> workloads;
  if (!cfg.fixed_workloads.empty()) {
    workloads = cfg.fixed_workloads;
  } else {
    for (int n : cfg.vm_counts) {
      for (std::uint64_t s : cfg.seeds) workloads.push_back(scenario_workload(cfg, topology, n, s));
    }
  }
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < workloads.size(); ++i) {
    for (std::size_t w = 0; w < cfg.weights.size(); ++w) {
      jobs.push_back({static_cast<int>(workloads[i].vms.size()), workloads[i].seed, i, w});
    }
  }

  SolveOptions options;
  options.time_budget = std::chrono::duration<double>(cfg.budget_seconds);
  options.oracle_cap = cfg.oracle_cap;

  std::vector<RunRecord> records(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const Job& job = jobs[i];
      const WeightSpec& ws = cfg.weights[job.weight];
      const Solution sol = solve_bnb(workloads[job.workload], topology, cfg.devices, ws.weights, options);
      RunRecord& r = records[i];
      r.vm_count = job.vm_count;
      r.seed = job.seed;
      r.weight = ws.label;
      r.status = sol.status;
      r.nodes_explored = sol.nodes_explored;
      r.solve_seconds = sol.solve_seconds;
      r.cell_power_w.assign(topology.cell_count(), 0.0);
      r.cell_cpu_ghz.assign(topology.cell_count(), 0.0);
      if (sol.placement.assign.size() != workloads[job.workload].vms.size()) continue;
      r.objective = sol.report.objective;
      r.n_pc_w = sol.report.n_pc_w;
      r.p_pc_w = sol.report.p_pc_w;
      r.total_w = sol.report.total_w();
      for (const auto& [c, w] : sol.report.per_cell_w) r.cell_power_w[c] = w;
      for (const auto& [id, ghz] : sol.report.server_load_ghz) r.cell_cpu_ghz[id.cell] += ghz;
      for (const auto& [id, u] : sol.report.server_utilization) r.server_utilization.push_back(u);
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n_threads =
      std::min<std::size_t>(jobs.size(), cfg.threads > 0 ? static_cast<std::size_t>(cfg.threads) : hw);
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
  }

  RunReport report;
  report.name = cfg.name;
  report.cells = topology.cell_count();
  for (int h : topology.servers()) report.servers.push_back(topology.node(h).name());
  report.baseline = cfg.baseline;
  report.candidate = cfg.candidate;
  report.runs = std::move(records);
  // Canonical order: vm count, seed, then weight position in the config.
  std::map<std::string, std::size_t> weight_pos;
  for (std::size_t w = 0; w < cfg.weights.size(); ++w) weight_pos[cfg.weights[w].label] = w;
  std::stable_sort(report.runs.begin(), report.runs.end(), [&](const RunRecord& a, const RunRecord& b) {
    return std::tuple(a.vm_count, a.seed, weight_pos[a.weight]) < std::tuple(b.vm_count, b.seed, weight_pos[b.weight]);
  });

  if (cfg.weights.size() >= 2) {
    for (const RunRecord& base : report.runs) {
      if (base.weight != cfg.baseline || base.status != SolveStatus::kOptimal) continue;
      const RunRecord* cand = report.find(base.vm_count, base.seed, cfg.candidate);
      if (cand == nullptr || cand->status != SolveStatus::kOptimal) continue;
      report.reductions.push_back({base.vm_count, base.seed, base.total_w, cand->total_w,
                                   (base.total_w - cand->total_w) / base.total_w});
    }
  }
  return report;
}

std::vector<std::filesystem::path> write_outputs(const RunReport& report, const std::filesystem::path& dir,
                                                 bool record_timing) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> files;
  auto put = [&](const std::string& name, const std::string& content) {
    write_file(dir / name, content);
    files.push_back(dir / name);
  };

  put("summary.json", report_to_text(report, record_timing));

  std::string runs = "vm_count,seed,weight,status,objective,n_pc_w,p_pc_w,total_w";
  for (int c = 0; c < report.cells; ++c) runs += ",cell" + std::to_string(c + 1) + "_w";
  for (int c = 0; c < report.cells; ++c) runs += ",cell" + std::to_string(c + 1) + "_cpu_ghz";
  runs += ",nodes_explored";
  if (record_timing) runs += ",solve_seconds";
  runs += "\n";
  for (const RunRecord& r : report.runs) {
    runs += std::to_string(r.vm_count) + "," + std::to_string(r.seed) + "," + r.weight + "," +
            std::string(to_string(r.status)) + "," + num(r.objective) + "," + num(r.n_pc_w) + "," + num(r.p_pc_w) +
            "," + num(r.total_w);
    for (double w : r.cell_power_w) runs += "," + num(w);
    for (double g : r.cell_cpu_ghz) runs += "," + num(g);
    runs += "," + std::to_string(r.nodes_explored);
    if (record_timing) runs += "," + num(r.solve_seconds);
    runs += "\n";
  }
  put("runs.csv", runs);

  std::string red = "vm_count,seed,baseline_total_w,candidate_total_w,reduction\n";
  for (const ReductionRow& r : report.reductions) {
    red += std::to_string(r.vm_count) + "," + std::to_string(r.seed) + "," + num(r.baseline_total_w) + "," +
           num(r.candidate_total_w) + "," + num(r.reduction) + "\n";
  }
  put("reductions.csv", red);

  const int optimal = report.count(SolveStatus::kOptimal);
  std::string status = "runs " + std::to_string(report.runs.size()) + "\noptimal " + std::to_string(optimal) +
                       "\ninfeasible " + std::to_string(report.count(SolveStatus::kInfeasible)) + "\naborted " +
                       std::to_string(report.count(SolveStatus::kAborted)) + "\n";
  if (optimal == 0) status += "no optimal runs; figure tables are empty\n";
  for (const RunRecord& r : report.runs) {
    if (r.status != SolveStatus::kOptimal) {
      status += std::string(to_string(r.status)) + " vm_count=" + std::to_string(r.vm_count) +
                " seed=" + std::to_string(r.seed) + " weight=" + r.weight + "\n";
    }
  }
  put("status.txt", status);

  for (auto& f : emit_plot_data(report, dir)) files.push_back(f);
  return files;
}

std::vector<std::filesystem::path> emit_plot_data(const RunReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> files;

  // vm_count -> seed-averaged record fields over optimal runs of one weight.
  struct Mean {
    int runs = 0;
    double n_pc = 0.0, p_pc = 0.0, total = 0.0;
    std::vector<double> cell_w, cell_ghz, util;
  };
  auto means_for = [&](const std::string& weight) {
    std::map<int, Mean> by_count;
    for (const RunRecord& r : report.runs) {
      if (r.weight != weight || r.status != SolveStatus::kOptimal) continue;
      Mean& m = by_count[r.vm_count];
      m.cell_w.resize(r.cell_power_w.size());
      m.cell_ghz.resize(r.cell_cpu_ghz.size());
      m.util.resize(r.server_utilization.size());
      ++m.runs;
      m.n_pc += r.n_pc_w;
      m.p_pc += r.p_pc_w;
      m.total += r.total_w;
      for (std::size_t c = 0; c < r.cell_power_w.size(); ++c) m.cell_w[c] += r.cell_power_w[c];
      for (std::size_t c = 0; c < r.cell_cpu_ghz.size(); ++c) m.cell_ghz[c] += r.cell_cpu_ghz[c];
      for (std::size_t s = 0; s < r.server_utilization.size(); ++s) m.util[s] += r.server_utilization[s];
    }
    for (auto& [n, m] : by_count) {
      const double k = m.runs;
      m.n_pc /= k;
      m.p_pc /= k;
      m.total /= k;
      for (double& x : m.cell_w) x /= k;
      for (double& x : m.cell_ghz) x /= k;
      for (double& x : m.util) x /= k;
    }
    return by_count;
  };

  struct Figures {
    const char* total;
    const char* cells;
    const char* util;
    std::string weight;
  };
  const Figures sets[] = {
      {"fig2_total_power", "fig4_cell_power", "fig6_server_utilization", report.candidate},
      {"fig3_total_power", "fig5_cell_power", "fig7_server_utilization", report.baseline},
  };
  for (const Figures& f : sets) {
    const auto means = means_for(f.weight);
    std::string total = "vm_count,weight,runs,n_pc_w,p_pc_w,total_w\n";
    std::string cells = "vm_count,weight,cell,power_w,share,cpu_ghz\n";
    std::string util = "vm_count,weight,cell,server,utilization\n";
    for (const auto& [n, m] : means) {
      total += std::to_string(n) + "," + f.weight + "," + std::to_string(m.runs) + "," + num(m.n_pc) + "," +
               num(m.p_pc) + "," + num(m.total) + "\n";
      for (std::size_t c = 0; c < m.cell_w.size(); ++c) {
        cells += std::to_string(n) + "," + f.weight + "," + std::to_string(c + 1) + "," + num(m.cell_w[c]) + "," +
                 num(m.total > 0.0 ? m.cell_w[c] / m.total : 0.0) + "," + num(m.cell_ghz[c]) + "\n";
      }
      for (std::size_t s = 0; s < m.util.size(); ++s) {
        const std::string& name = report.servers.at(s);
        const int cell = parse_node_id(name).cell;
        util += std::to_string(n) + "," + f.weight + "," + std::to_string(cell + 1) + "," + name + "," +
                num(m.util[s]) + "\n";
      }
    }
    const std::pair<const char*, const std::string*> tables[] = {{f.total, &total}, {f.cells, &cells}, {f.util, &util}};
    for (const auto& [stem, content] : tables) {
      const auto path = dir / (std::string(stem) + ".csv");
      write_file(path, *content);
      files.push_back(path);
    }
  }
  return files;
}

int exit_code(const RunReport& report) {
  if (report.count(SolveStatus::kAborted) > 0) return 3;
  if (report.count(SolveStatus::kInfeasible) > 0) return 2;
  return 0;
}

}  // namespace fogplace
