#include "fogplace/flows.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fogplace/errors.hpp"

namespace fogplace {

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kTotality: return "totality";
    case ViolationKind::kUnknownServer: return "unknown_server";
    case ViolationKind::kCpu: return "cpu";
    case ViolationKind::kRam: return "ram";
    case ViolationKind::kLinkCapacity: return "link_capacity";
    case ViolationKind::kDeviceRate: return "device_rate";
  }
  return "?";
}

namespace {

bool over(double load, double limit) { return load > limit + 1e-9 * std::max(1.0, std::abs(limit)); }

std::string link_name(const Topology& t, int l) {
  return t.node(t.link(l).a).name() + "-" + t.node(t.link(l).b).name();
}

}  // namespace

double net_outflow(const CommodityFlow& flow, const Topology& topology, int node) {
  double out = 0.0;
  double in = 0.0;
  for (std::size_t k = 0; k < flow.path.links.size(); ++k) {
    const int from = flow.path.nodes[k];
    const int to = flow.path.nodes[k + 1];
    const Link& l = topology.link(flow.path.links[k]);
    if (!((l.a == from && l.b == to) || (l.b == from && l.a == to))) {
      throw ContractViolation("path link does not join consecutive nodes");
    }
    if (from == node) out += flow.gbps;
    if (to == node) in += flow.gbps;
  }
  return out - in;
}

FlowAssignment route_flows(const Placement& placement, const Workload& workload, const Topology& topology) {
  auto server_of = [&](int vm) -> const NodeId& {
    auto it = placement.assign.find(vm);
    if (it == placement.assign.end()) throw ContractViolation("vm " + std::to_string(vm) + " is not placed");
    return it->second;
  };

  FlowAssignment fa;
  fa.link_load_gbps.assign(topology.links().size(), 0.0);
  auto add = [&](CommodityFlow f) {
    if (f.source != f.destination) {
      f.path = shortest_path(topology, f.source, f.destination);
      for (int l : f.path.links) fa.link_load_gbps[l] += f.gbps;
    } else {
      f.path.nodes = {topology.handle(f.source)};
    }
    fa.commodities.push_back(std::move(f));
  };

  for (const auto& [key, gbps] : workload.traffic) {
    if (!(gbps > 0.0)) continue;
    add({CommodityKind::kInterVm, key.first, key.second, server_of(key.first), server_of(key.second), gbps, {}});
  }
  for (const VmRequest& vm : workload.vms) {
    if (!(vm.ingress_gbps > 0.0)) continue;
    add({CommodityKind::kIngress, -1, vm.id, vm.origin, server_of(vm.id), vm.ingress_gbps, {}});
  }
  for (std::size_t l = 0; l < fa.link_load_gbps.size(); ++l) {
    if (over(fa.link_load_gbps[l], topology.link(static_cast<int>(l)).capacity_gbps)) {
      fa.overloaded_links.push_back(static_cast<int>(l));
    }
  }
  return fa;
}

std::vector<Violation> check_feasibility(const Placement& placement, const Workload& workload,
                                         const Topology& topology, const DeviceSpecs& specs) {
  std::vector<Violation> out;
  const int n_vms = static_cast<int>(workload.vms.size());

  for (const VmRequest& vm : workload.vms) {
    if (!placement.assign.contains(vm.id)) {
      out.push_back({ViolationKind::kTotality, "vm " + std::to_string(vm.id), 0.0, "vm is not placed"});
    }
  }
  std::vector<double> cpu(topology.node_count(), 0.0);
  std::vector<double> ram(topology.node_count(), 0.0);
  bool servers_ok = true;
  for (const auto& [vm, server] : placement.assign) {
    if (vm < 0 || vm >= n_vms) {
      out.push_back({ViolationKind::kTotality, "vm " + std::to_string(vm), 0.0, "placement names an unknown vm"});
      continue;
    }
    if (server.kind != NodeKind::kServerOnu || !topology.contains(server)) {
      out.push_back({ViolationKind::kUnknownServer, server.name(), 0.0,
                     "vm " + std::to_string(vm) + " is placed on a node that is not a server"});
      servers_ok = false;
      continue;
    }
    const int h = topology.handle(server);
    cpu[h] += workload.vms[vm].cpu_ghz;
    ram[h] += workload.vms[vm].ram_mb;
  }
  for (int h : topology.servers()) {
    const NodeId& id = topology.node(h);
    const ServerSpec& spec = specs.server_for_cell(id.cell);
    if (over(cpu[h], spec.cpu_ghz)) {
      std::ostringstream os;
      os << "cpu " << cpu[h] << " GHz exceeds capacity " << spec.cpu_ghz << " GHz";
      out.push_back({ViolationKind::kCpu, id.name(), cpu[h] - spec.cpu_ghz, os.str()});
    }
    if (over(ram[h], spec.ram_mb())) {
      std::ostringstream os;
      os << "ram " << ram[h] << " MB exceeds capacity " << spec.ram_mb() << " MB";
      out.push_back({ViolationKind::kRam, id.name(), ram[h] - spec.ram_mb(), os.str()});
    }
  }

  // Routing needs every VM on a real server.
  if (!servers_ok || static_cast<int>(placement.assign.size()) != n_vms ||
      std::any_of(out.begin(), out.end(), [](const Violation& v) { return v.kind == ViolationKind::kTotality; })) {
    return out;
  }
  const FlowAssignment fa = route_flows(placement, workload, topology);
  for (int l : fa.overloaded_links) {
    const double cap = topology.link(l).capacity_gbps;
    std::ostringstream os;
    os << "load " << fa.link_load_gbps[l] << " Gbps exceeds capacity " << cap << " Gbps";
    out.push_back({ViolationKind::kLinkCapacity, link_name(topology, l), fa.link_load_gbps[l] - cap, os.str()});
  }

  std::vector<double> node_traffic(topology.node_count(), 0.0);
  for (const CommodityFlow& f : fa.commodities) {
    for (int node : f.path.nodes) node_traffic[node] += f.gbps;
  }
  auto rate = [&](int h, double limit) {
    if (over(node_traffic[h], limit)) {
      std::ostringstream os;
      os << "traffic " << node_traffic[h] << " Gbps exceeds device rate " << limit << " Gbps";
      out.push_back({ViolationKind::kDeviceRate, topology.node(h).name(), node_traffic[h] - limit, os.str()});
    }
  };
  for (int h : topology.access_onus()) rate(h, specs.access_onu.rate_gbps);
  rate(topology.olt_handle(), specs.olt.rate_gbps);
  return out;
}

}  // namespace fogplace
