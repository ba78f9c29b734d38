#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "fogplace/errors.hpp"
#include "fogplace/flows.hpp"
#include "fogplace/lp_export.hpp"
#include "fogplace/oracle_check.hpp"
#include "fogplace/scenario.hpp"
#include "fogplace/solver.hpp"

namespace py = pybind11;
using namespace fogplace;

namespace {

std::map<int, std::string> placement_names(const Placement& p) {
  std::map<int, std::string> out;
  for (const auto& [vm, server] : p.assign) out[vm] = server.name();
  return out;
}

Placement placement_from(const std::map<int, std::string>& names) {
  Placement p;
  for (const auto& [vm, server] : names) p.assign[vm] = parse_node_id(server);
  return p;
}

std::map<std::string, double> by_name(const std::map<NodeId, double>& values) {
  std::map<std::string, double> out;
  for (const auto& [id, v] : values) out[id.name()] = v;
  return out;
}

SolveOptions options_from(double budget_seconds, double oracle_cap) {
  SolveOptions o;
  o.time_budget = std::chrono::duration<double>(budget_seconds);
  o.oracle_cap = oracle_cap;
  return o;
}

}  // namespace

PYBIND11_MODULE(_fogplace, m) {
  m.doc() = "Energy-minimising VM placement for a PON fog architecture";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidConfig>(m, "InvalidConfig", base.ptr());
  py::register_exception<NotFound>(m, "NotFound", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ContractViolation>(m, "ContractViolation", base.ptr());
  py::register_exception<OracleScopeError>(m, "OracleScopeError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());

  py::class_<NodeId>(m, "NodeId")
      .def_static("access_onu", &NodeId::access_onu)
      .def_static("server", &NodeId::server)
      .def_static("hub", &NodeId::hub)
      .def_static("olt", &NodeId::olt)
      .def_static("parse", [](const std::string& s) { return parse_node_id(s); })
      .def_property_readonly("kind", [](const NodeId& n) { return std::string(to_string(n.kind)); })
      .def_readonly("cell", &NodeId::cell)
      .def_readonly("index", &NodeId::index)
      .def_property_readonly("name", &NodeId::name)
      .def("__eq__", [](const NodeId& a, const NodeId& b) { return a == b; })
      .def("__lt__", [](const NodeId& a, const NodeId& b) { return a < b; })
      .def("__hash__", [](const NodeId& n) { return py::hash(py::str(n.name())); })
      .def("__repr__", [](const NodeId& n) { return "NodeId('" + n.name() + "')"; });

  py::class_<TopologyParams>(m, "TopologyParams")
      .def(py::init([](int cells, int servers, int onus, double capacity) {
             return TopologyParams{cells, servers, onus, capacity};
           }),
           py::arg("cells") = 3, py::arg("servers_per_cell") = 5, py::arg("access_onus_per_cell") = 2,
           py::arg("link_capacity_gbps") = 1280.0)
      .def_readwrite("cells", &TopologyParams::cells)
      .def_readwrite("servers_per_cell", &TopologyParams::servers_per_cell)
      .def_readwrite("access_onus_per_cell", &TopologyParams::access_onus_per_cell)
      .def_readwrite("link_capacity_gbps", &TopologyParams::link_capacity_gbps);

  py::class_<Topology>(m, "Topology")
      .def(py::init([](const TopologyParams& p) { return build_topology(p); }), py::arg("params") = TopologyParams{})
      .def_property_readonly("params", &Topology::params)
      .def_property_readonly("node_count", &Topology::node_count)
      .def_property_readonly("link_count", [](const Topology& t) { return t.links().size(); })
      .def_property_readonly("nodes",
                             [](const Topology& t) { return std::vector<NodeId>(t.nodes().begin(), t.nodes().end()); })
      .def_property_readonly("servers",
                             [](const Topology& t) {
                               std::vector<NodeId> out;
                               for (int h : t.servers()) out.push_back(t.node(h));
                               return out;
                             })
      .def("path",
           [](const Topology& t, const NodeId& src, const NodeId& dst) {
             std::vector<NodeId> out;
             for (int h : shortest_path(t, src, dst).nodes) out.push_back(t.node(h));
             return out;
           });

  py::class_<ServerSpec>(m, "ServerSpec")
      .def(py::init([](std::string name, double max_w, double idle_w, double cpu, double ram) {
             return ServerSpec{std::move(name), max_w, idle_w, cpu, ram};
           }),
           py::arg("name"), py::arg("max_w"), py::arg("idle_w"), py::arg("cpu_ghz"), py::arg("ram_gb"))
      .def_readwrite("name", &ServerSpec::name)
      .def_readwrite("max_w", &ServerSpec::max_w)
      .def_readwrite("idle_w", &ServerSpec::idle_w)
      .def_readwrite("cpu_ghz", &ServerSpec::cpu_ghz)
      .def_readwrite("ram_gb", &ServerSpec::ram_gb);

  py::class_<OnuSpec>(m, "OnuSpec")
      .def_readwrite("max_w", &OnuSpec::max_w)
      .def_readwrite("idle_w", &OnuSpec::idle_w)
      .def_readwrite("rate_gbps", &OnuSpec::rate_gbps);
  py::class_<OltSpec>(m, "OltSpec")
      .def_readwrite("max_w", &OltSpec::max_w)
      .def_readwrite("idle_w", &OltSpec::idle_w)
      .def_readwrite("rate_gbps", &OltSpec::rate_gbps);

  py::class_<DeviceSpecs>(m, "DeviceSpecs")
      .def_readwrite("cell_servers", &DeviceSpecs::cell_servers)
      .def_readwrite("access_onu", &DeviceSpecs::access_onu)
      .def_readwrite("server_onu", &DeviceSpecs::server_onu)
      .def_readwrite("olt", &DeviceSpecs::olt);
  m.def("reference_specs", &reference_specs);
  m.def("server_power", &server_power, py::arg("spec"), py::arg("cpu_ghz"), py::arg("active") = true);
  m.def("onu_power", &onu_power, py::arg("spec"), py::arg("gbps"), py::arg("active") = true);
  m.def("olt_power", &olt_power, py::arg("spec"), py::arg("gbps"));

  py::class_<Weights>(m, "Weights")
      .def(py::init([](double a, double b, bool lex) { return Weights{a, b, lex}; }), py::arg("alpha") = 1.0,
           py::arg("beta") = 1.0, py::arg("lexicographic") = false)
      .def_readwrite("alpha", &Weights::alpha)
      .def_readwrite("beta", &Weights::beta)
      .def_readwrite("lexicographic", &Weights::lexicographic);

  py::class_<VmRequest>(m, "VmRequest")
      .def(py::init([](int id, double cpu, double ram, const NodeId& origin, double ingress) {
             return VmRequest{id, cpu, ram, origin, ingress};
           }),
           py::arg("id"), py::arg("cpu_ghz"), py::arg("ram_mb"), py::arg("origin"), py::arg("ingress_gbps") = 0.0)
      .def_readwrite("id", &VmRequest::id)
      .def_readwrite("cpu_ghz", &VmRequest::cpu_ghz)
      .def_readwrite("ram_mb", &VmRequest::ram_mb)
      .def_readwrite("origin", &VmRequest::origin)
      .def_readwrite("ingress_gbps", &VmRequest::ingress_gbps);

  py::class_<Workload>(m, "Workload")
      .def(py::init<>())
      .def_readwrite("vms", &Workload::vms)
      .def_readwrite("traffic", &Workload::traffic)
      .def_readwrite("seed", &Workload::seed)
      .def("to_json", &workload_to_text)
      .def_static("from_json", [](const std::string& s) { return workload_from_text(s); })
      .def("__eq__", [](const Workload& a, const Workload& b) { return a == b; });

  py::class_<WorkloadParams>(m, "WorkloadParams")
      .def(py::init([](int n, std::pair<double, double> cpu, std::pair<double, double> ram,
                       std::pair<double, double> traffic, double density, bool ingress) {
             return WorkloadParams{n, {cpu.first, cpu.second}, {ram.first, ram.second}, {traffic.first, traffic.second},
                                   density, ingress};
           }),
           py::arg("n_vms") = 10, py::arg("cpu_ghz") = std::pair{0.1, 2.6}, py::arg("ram_mb") = std::pair{100.0, 500.0},
           py::arg("traffic_gbps") = std::pair{1.0, 5.0}, py::arg("traffic_density") = 0.2,
           py::arg("ingress") = false)
      .def_readwrite("n_vms", &WorkloadParams::n_vms)
      .def_readwrite("traffic_density", &WorkloadParams::traffic_density)
      .def_readwrite("ingress", &WorkloadParams::ingress);
  m.def("generate_workload", &generate_workload, py::arg("params"), py::arg("topology"), py::arg("seed"));

  py::class_<PowerReport>(m, "PowerReport")
      .def_readonly("n_pc_w", &PowerReport::n_pc_w)
      .def_readonly("p_pc_w", &PowerReport::p_pc_w)
      .def_readonly("alpha", &PowerReport::alpha)
      .def_readonly("beta", &PowerReport::beta)
      .def_readonly("objective", &PowerReport::objective)
      .def_property_readonly("total_w", &PowerReport::total_w)
      .def_readonly("per_cell_w", &PowerReport::per_cell_w)
      .def_property_readonly("per_device_w", [](const PowerReport& r) { return by_name(r.per_device_w); })
      .def_property_readonly("server_utilization", [](const PowerReport& r) { return by_name(r.server_utilization); });

  m.def(
      "evaluate",
      [](const std::map<int, std::string>& placement, const Topology& t, const Workload& w, const DeviceSpecs& s,
         const Weights& weights) {
        const Placement p = placement_from(placement);
        return evaluate(p, route_flows(p, w, t), t, w, s, weights);
      },
      py::arg("placement"), py::arg("topology"), py::arg("workload"), py::arg("specs"), py::arg("weights") = Weights{});
  m.def(
      "check_feasibility",
      [](const std::map<int, std::string>& placement, const Workload& w, const Topology& t, const DeviceSpecs& s) {
        std::vector<py::dict> out;
        for (const Violation& v : check_feasibility(placement_from(placement), w, t, s)) {
          py::dict d;
          d["kind"] = std::string(to_string(v.kind));
          d["subject"] = v.subject;
          d["excess"] = v.excess;
          d["message"] = v.message;
          out.push_back(d);
        }
        return out;
      },
      py::arg("placement"), py::arg("workload"), py::arg("topology"), py::arg("specs"));

  py::class_<Solution>(m, "Solution")
      .def_property_readonly("status", [](const Solution& s) { return std::string(to_string(s.status)); })
      .def_property_readonly("placement", [](const Solution& s) { return placement_names(s.placement); })
      .def_readonly("report", &Solution::report)
      .def_property_readonly("objective", [](const Solution& s) { return s.report.objective; })
      .def_readonly("nodes_explored", &Solution::nodes_explored)
      .def_readonly("solve_seconds", &Solution::solve_seconds);

  m.def(
      "solve_bnb",
      [](const Workload& w, const Topology& t, const DeviceSpecs& s, const Weights& weights, double budget) {
        py::gil_scoped_release release;
        return solve_bnb(w, t, s, weights, options_from(budget, 1e7));
      },
      py::arg("workload"), py::arg("topology"), py::arg("specs"), py::arg("weights") = Weights{},
      py::arg("budget_seconds") = 60.0);
  m.def(
      "solve_bruteforce",
      [](const Workload& w, const Topology& t, const DeviceSpecs& s, const Weights& weights, double cap) {
        py::gil_scoped_release release;
        return solve_bruteforce(w, t, s, weights, options_from(60.0, cap));
      },
      py::arg("workload"), py::arg("topology"), py::arg("specs"), py::arg("weights") = Weights{},
      py::arg("oracle_cap") = 1e7);
  m.def("solve_greedy", &solve_greedy, py::arg("workload"), py::arg("topology"), py::arg("specs"),
        py::arg("weights") = Weights{});

  m.def(
      "export_lp",
      [](const Workload& w, const Topology& t, const DeviceSpecs& s, const Weights& weights, const std::string& name) {
        return to_lp_text(export_milp(w, t, s, weights, name));
      },
      py::arg("workload"), py::arg("topology"), py::arg("specs"), py::arg("weights") = Weights{},
      py::arg("name") = "fogplace");

  py::class_<OracleCheckResult>(m, "OracleCheckResult")
      .def_readonly("instances", &OracleCheckResult::instances)
      .def_readonly("optimal", &OracleCheckResult::optimal)
      .def_readonly("infeasible", &OracleCheckResult::infeasible)
      .def_property_readonly("mismatches", [](const OracleCheckResult& r) {
        std::vector<std::pair<std::uint64_t, std::string>> out;
        for (const auto& x : r.mismatches) out.emplace_back(x.seed, x.detail);
        return out;
      });
  m.def(
      "oracle_check",
      [](int instances, std::uint64_t seed, int max_vms, int max_servers) {
        py::gil_scoped_release release;
        return run_oracle_check(instances, seed, max_vms, max_servers);
      },
      py::arg("instances") = 200, py::arg("seed") = 1, py::arg("max_vms") = 6, py::arg("max_servers") = 6);

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def_static("from_json", [](const std::string& s) { return scenario_from_text(s); })
      .def_static("load", &load_scenario)
      .def("to_json", [](const ScenarioConfig& c) { return scenario_to_text(c); })
      .def_readwrite("name", &ScenarioConfig::name)
      .def_readwrite("vm_counts", &ScenarioConfig::vm_counts)
      .def_readwrite("seeds", &ScenarioConfig::seeds)
      .def_readwrite("budget_seconds", &ScenarioConfig::budget_seconds)
      .def_readwrite("threads", &ScenarioConfig::threads)
      .def_readwrite("output_dir", &ScenarioConfig::output_dir);

  py::class_<RunReport>(m, "RunReport")
      .def_readonly("name", &RunReport::name)
      .def_property_readonly("run_count", [](const RunReport& r) { return r.runs.size(); })
      .def("count", [](const RunReport& r, const std::string& status) {
        for (SolveStatus s : {SolveStatus::kOptimal, SolveStatus::kFeasible, SolveStatus::kInfeasible,
                              SolveStatus::kAborted})
          if (to_string(s) == status) return r.count(s);
        throw InvalidConfig("unknown status '" + status + "'");
      })
      .def_property_readonly("reductions",
                             [](const RunReport& r) {
                               std::vector<std::tuple<int, std::uint64_t, double>> out;
                               for (const auto& x : r.reductions) out.emplace_back(x.vm_count, x.seed, x.reduction);
                               return out;
                             })
      .def("to_json", [](const RunReport& r) { return report_to_text(r); })
      .def_property_readonly("exit_code", [](const RunReport& r) { return exit_code(r); });

  m.def(
      "run_scenario",
      [](const ScenarioConfig& cfg) {
        py::gil_scoped_release release;
        return run_scenario(cfg);
      },
      py::arg("config"));
  m.def(
      "write_outputs",
      [](const RunReport& r, const std::filesystem::path& dir, bool timing) { return write_outputs(r, dir, timing); },
      py::arg("report"), py::arg("dir"), py::arg("record_timing") = false);
}
