#include <fstream>
#include <map>
#include <sstream>

#include "fogplace/errors.hpp"
#include "fogplace/scenario.hpp"
#include "json.hpp"

namespace fogplace {

using nlohmann::json;

namespace {

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("field '") + key + "': " + e.what());
  }
}

Range range_or(const json& j, const char* key, Range fallback) {
  if (!j.contains(key)) return fallback;
  const json& r = j.at(key);
  if (!r.is_array() || r.size() != 2) throw ParseError(std::string("field '") + key + "' must be [min, max]");
  return {r[0].get<double>(), r[1].get<double>()};
}

json range_json(const Range& r) { return json::array({r.min, r.max}); }

json server_json(const ServerSpec& s) {
  return {{"name", s.name}, {"max_w", s.max_w}, {"idle_w", s.idle_w}, {"cpu_ghz", s.cpu_ghz}, {"ram_gb", s.ram_gb}};
}

ServerSpec server_from(const json& j) {
  return {get_or<std::string>(j, "name", "server"), j.at("max_w").get<double>(), j.at("idle_w").get<double>(),
          j.at("cpu_ghz").get<double>(), j.at("ram_gb").get<double>()};
}

json onu_json(const OnuSpec& s) { return {{"max_w", s.max_w}, {"idle_w", s.idle_w}, {"rate_gbps", s.rate_gbps}}; }

OnuSpec onu_from(const json& j, OnuSpec fallback) {
  return {get_or(j, "max_w", fallback.max_w), get_or(j, "idle_w", fallback.idle_w),
          get_or(j, "rate_gbps", fallback.rate_gbps), fallback.profile};
}

json workload_json(const Workload& w) {
  json vms = json::array();
  for (const VmRequest& vm : w.vms) {
    vms.push_back({{"id", vm.id},
                   {"cpu_ghz", vm.cpu_ghz},
                   {"ram_mb", vm.ram_mb},
                   {"origin", vm.origin.name()},
                   {"ingress_gbps", vm.ingress_gbps}});
  }
  json traffic = json::array();
  for (const auto& [key, gbps] : w.traffic) traffic.push_back({{"from", key.first}, {"to", key.second}, {"gbps", gbps}});
  return {{"seed", w.seed}, {"vms", vms}, {"traffic", traffic}};
}

Workload workload_from(const json& j) {
  Workload w;
  w.seed = get_or<std::uint64_t>(j, "seed", 0);
  for (const json& v : j.at("vms")) {
    w.vms.push_back({v.at("id").get<int>(), v.at("cpu_ghz").get<double>(), v.at("ram_mb").get<double>(),
                     parse_node_id(v.at("origin").get<std::string>()), get_or(v, "ingress_gbps", 0.0)});
  }
  for (const json& t : j.value("traffic", json::array())) {
    const auto key = std::pair{t.at("from").get<int>(), t.at("to").get<int>()};
    if (!w.traffic.emplace(key, t.at("gbps").get<double>()).second) throw ParseError("duplicate traffic entry");
  }
  return w;
}

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string workload_to_text(const Workload& workload) { return workload_json(workload).dump(2) + "\n"; }

Workload workload_from_text(std::string_view text) {
  try {
    return workload_from(parse(text));
  } catch (const json::exception& e) {
    throw ParseError(std::string("workload: ") + e.what());
  }
}

ScenarioConfig scenario_from_text(std::string_view text, const std::filesystem::path& base_dir) {
  const json j = parse(text);
  ScenarioConfig cfg;
  try {
    cfg.name = get_or<std::string>(j, "name", cfg.name);

    const json topo = j.value("topology", json::object());
    cfg.topology.cells = get_or(topo, "cells", cfg.topology.cells);
    cfg.topology.servers_per_cell = get_or(topo, "servers_per_cell", cfg.topology.servers_per_cell);
    cfg.topology.access_onus_per_cell = get_or(topo, "access_onus_per_cell", cfg.topology.access_onus_per_cell);
    if (topo.contains("link_capacity_gbps")) {
      cfg.topology.link_capacity_gbps = topo.at("link_capacity_gbps").get<double>();
    } else {
      cfg.topology.link_capacity_gbps =
          get_or(topo, "wavelengths", 32.0) * get_or(topo, "gbps_per_wavelength", 40.0);
    }

    const json dev = j.value("devices", json::object());
    if (dev.contains("servers")) {
      cfg.devices.cell_servers.clear();
      for (const json& s : dev.at("servers")) cfg.devices.cell_servers.push_back(server_from(s));
    }
    if (dev.contains("access_onu")) cfg.devices.access_onu = onu_from(dev.at("access_onu"), cfg.devices.access_onu);
    if (dev.contains("server_onu")) cfg.devices.server_onu = onu_from(dev.at("server_onu"), cfg.devices.server_onu);
    if (dev.contains("olt")) {
      const json& o = dev.at("olt");
      cfg.devices.olt = {get_or(o, "max_w", cfg.devices.olt.max_w), get_or(o, "idle_w", cfg.devices.olt.idle_w),
                         get_or(o, "rate_gbps", cfg.devices.olt.rate_gbps)};
    }

    const json wl = j.value("workload", json::object());
    cfg.vm_counts = get_or(wl, "vm_counts", cfg.vm_counts);
    if (wl.contains("seeds")) {
      const json& s = wl.at("seeds");
      if (s.is_object()) {
        cfg.seeds.clear();
        for (auto k = s.at("from").get<std::uint64_t>(); k <= s.at("to").get<std::uint64_t>(); ++k) {
          cfg.seeds.push_back(k);
        }
      } else {
        cfg.seeds = s.get<std::vector<std::uint64_t>>();
      }
    }
    cfg.workload.cpu_ghz = range_or(wl, "cpu_ghz", cfg.workload.cpu_ghz);
    cfg.workload.ram_mb = range_or(wl, "ram_mb", cfg.workload.ram_mb);
    cfg.workload.traffic_gbps = range_or(wl, "traffic_gbps", cfg.workload.traffic_gbps);
    cfg.workload.traffic_density = get_or(wl, "traffic_density", cfg.workload.traffic_density);
    cfg.workload.ingress = get_or(wl, "ingress", cfg.workload.ingress);
    for (const json& f : wl.value("files", json::array())) {
      std::filesystem::path p = f.get<std::string>();
      if (p.is_relative()) p = base_dir / p;
      cfg.fixed_workloads.push_back(workload_from_text(read_file(p)));
    }
    for (const json& w : wl.value("inline", json::array())) cfg.fixed_workloads.push_back(workload_from(w));

    if (j.contains("weights")) {
      cfg.weights.clear();
      for (const json& w : j.at("weights")) {
        WeightSpec ws;
        ws.label = w.at("label").get<std::string>();
        ws.weights.lexicographic = get_or(w, "lexicographic", false);
        ws.weights.alpha = get_or(w, "alpha", 1.0);
        ws.weights.beta = get_or(w, "beta", 1.0);
        cfg.weights.push_back(ws);
      }
    }
    const json cmp = j.value("compare", json::object());
    cfg.baseline = get_or(cmp, "baseline", cfg.weights.empty() ? cfg.baseline : cfg.weights.front().label);
    cfg.candidate = get_or(cmp, "candidate", cfg.weights.size() < 2 ? cfg.candidate : cfg.weights[1].label);

    const json solver = j.value("solver", json::object());
    cfg.budget_seconds = get_or(solver, "budget_seconds", cfg.budget_seconds);
    cfg.oracle_cap = get_or(solver, "oracle_cap", cfg.oracle_cap);
    cfg.threads = get_or(solver, "threads", cfg.threads);

    const json out = j.value("output", json::object());
    cfg.output_dir = get_or<std::string>(out, "dir", cfg.output_dir.string());
    cfg.export_lp = get_or(out, "export_lp", cfg.export_lp);
  } catch (const json::exception& e) {
    throw ParseError(std::string("scenario: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  return scenario_from_text(read_file(path), path.parent_path());
}

std::string scenario_to_text(const ScenarioConfig& cfg) {
  json servers = json::array();
  for (const auto& s : cfg.devices.cell_servers) servers.push_back(server_json(s));
  json weights = json::array();
  for (const auto& w : cfg.weights) {
    json e = {{"label", w.label}};
    if (w.weights.lexicographic) {
      e["lexicographic"] = true;
    } else {
      e["alpha"] = w.weights.alpha;
      e["beta"] = w.weights.beta;
    }
    weights.push_back(e);
  }
  json inline_workloads = json::array();
  for (const auto& w : cfg.fixed_workloads) inline_workloads.push_back(workload_json(w));
  json j = {
      {"name", cfg.name},
      {"topology",
       {{"cells", cfg.topology.cells},
        {"servers_per_cell", cfg.topology.servers_per_cell},
        {"access_onus_per_cell", cfg.topology.access_onus_per_cell},
        {"link_capacity_gbps", cfg.topology.link_capacity_gbps}}},
      {"devices",
       {{"servers", servers},
        {"access_onu", onu_json(cfg.devices.access_onu)},
        {"server_onu", onu_json(cfg.devices.server_onu)},
        {"olt",
         {{"max_w", cfg.devices.olt.max_w},
          {"idle_w", cfg.devices.olt.idle_w},
          {"rate_gbps", cfg.devices.olt.rate_gbps}}}}},
      {"workload",
       {{"vm_counts", cfg.vm_counts},
        {"seeds", cfg.seeds},
        {"cpu_ghz", range_json(cfg.workload.cpu_ghz)},
        {"ram_mb", range_json(cfg.workload.ram_mb)},
        {"traffic_gbps", range_json(cfg.workload.traffic_gbps)},
        {"traffic_density", cfg.workload.traffic_density},
        {"ingress", cfg.workload.ingress},
        {"inline", inline_workloads}}},
      {"weights", weights},
      {"compare", {{"baseline", cfg.baseline}, {"candidate", cfg.candidate}}},
      {"solver", {{"budget_seconds", cfg.budget_seconds}, {"oracle_cap", cfg.oracle_cap}, {"threads", cfg.threads}}},
      {"output", {{"dir", cfg.output_dir.string()}, {"export_lp", cfg.export_lp}}},
  };
  return j.dump(2) + "\n";
}

std::string report_to_text(const RunReport& report, bool record_timing) {
  json runs = json::array();
  for (const RunRecord& r : report.runs) {
    json e = {{"vm_count", r.vm_count},
              {"seed", r.seed},
              {"weight", r.weight},
              {"status", std::string(to_string(r.status))},
              {"objective", r.objective},
              {"n_pc_w", r.n_pc_w},
              {"p_pc_w", r.p_pc_w},
              {"total_w", r.total_w},
              {"cell_power_w", r.cell_power_w},
              {"cell_cpu_ghz", r.cell_cpu_ghz},
              {"server_utilization", r.server_utilization},
              {"nodes_explored", r.nodes_explored}};
    if (record_timing) e["solve_seconds"] = r.solve_seconds;
    runs.push_back(e);
  }
  json reductions = json::array();
  std::map<int, std::pair<double, int>> sums;
  for (const ReductionRow& r : report.reductions) {
    reductions.push_back({{"vm_count", r.vm_count},
                          {"seed", r.seed},
                          {"baseline_total_w", r.baseline_total_w},
                          {"candidate_total_w", r.candidate_total_w},
                          {"reduction", r.reduction}});
    sums[r.vm_count].first += r.reduction;
    ++sums[r.vm_count].second;
  }
  json means = json::array();
  for (const auto& [n, s] : sums) means.push_back({{"vm_count", n}, {"mean_reduction", s.first / s.second}, {"pairs", s.second}});
  json j = {{"name", report.name},
            {"baseline", report.baseline},
            {"candidate", report.candidate},
            {"servers", report.servers},
            {"status_counts",
             {{"optimal", report.count(SolveStatus::kOptimal)},
              {"infeasible", report.count(SolveStatus::kInfeasible)},
              {"aborted", report.count(SolveStatus::kAborted)}}},
            {"mean_reductions", means},
            {"reductions", reductions},
            {"runs", runs}};
  return j.dump(2) + "\n";
}

}  // namespace fogplace
