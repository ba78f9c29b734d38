#include "fogplace/power.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fogplace/errors.hpp"
#include "fogplace/flows.hpp"
#include "fogplace/workload.hpp"

namespace fogplace {

namespace {

// Loads accumulated from several demands may overshoot a limit they sit on
// exactly by a few ulps.
bool over(double load, double limit) { return load > limit + 1e-9 * std::max(1.0, std::abs(limit)); }

double linear(double idle, double max, double load, double capacity) {
  return idle + (max - idle) * load / capacity;
}

}  // namespace

const ServerSpec& DeviceSpecs::server_for_cell(int cell) const {
  if (cell < 0 || cell >= static_cast<int>(cell_servers.size())) {
    throw InvalidConfig("no server model for cell " + std::to_string(cell));
  }
  return cell_servers[cell];
}

double DeviceSpecs::max_server_cpu_ghz() const {
  double cap = 0.0;
  for (const auto& s : cell_servers) cap = std::max(cap, s.cpu_ghz);
  return cap;
}

DeviceSpecs reference_specs() {
  DeviceSpecs specs;
  specs.cell_servers = {
      {"Dell PowerEdge R620", 243.0, 54.1, 2.6, 24.0},
      {"Dell PowerEdge R740", 457.0, 301.0, 2.5, 16.0},
      {"Hitachi HA8000/RS220-HM", 325.0, 104.0, 2.4, 32.0},
  };
  specs.access_onu = {2.5, 1.5, 10.0, OnuProfile::kProportional};
  specs.server_onu = {2.5, 1.5, 10.0, OnuProfile::kOnOff};
  specs.olt = {1940.0, 1746.0, 8600.0};
  return specs;
}

void validate_specs(const DeviceSpecs& specs, int cells) {
  if (static_cast<int>(specs.cell_servers.size()) < cells) {
    throw InvalidConfig("need a server model for each of " + std::to_string(cells) + " cells");
  }
  for (const auto& s : specs.cell_servers) {
    if (!(s.idle_w >= 0.0 && s.idle_w <= s.max_w) || !(s.cpu_ghz > 0.0) || !(s.ram_gb > 0.0)) {
      throw InvalidConfig("invalid server spec '" + s.name + "'");
    }
  }
  for (const OnuSpec* o : {&specs.access_onu, &specs.server_onu}) {
    if (!(o->idle_w >= 0.0 && o->idle_w <= o->max_w) || !(o->rate_gbps > 0.0)) {
      throw InvalidConfig("invalid ONU spec");
    }
  }
  if (!(specs.olt.idle_w >= 0.0 && specs.olt.idle_w <= specs.olt.max_w) || !(specs.olt.rate_gbps > 0.0)) {
    throw InvalidConfig("invalid OLT spec");
  }
}

double server_power(const ServerSpec& spec, double assigned_cpu_ghz, bool active) {
  if (assigned_cpu_ghz < 0.0 || over(assigned_cpu_ghz, spec.cpu_ghz)) {
    std::ostringstream os;
    os << "server '" << spec.name << "' load " << assigned_cpu_ghz << " GHz outside [0, " << spec.cpu_ghz << "]";
    throw DomainError(os.str());
  }
  if (!active) {
    if (assigned_cpu_ghz > 0.0) throw DomainError("inactive server '" + spec.name + "' carries load");
    return 0.0;
  }
  return linear(spec.idle_w, spec.max_w, assigned_cpu_ghz, spec.cpu_ghz);
}

double onu_power(const OnuSpec& spec, double traffic_gbps, bool active) {
  if (spec.profile == OnuProfile::kOnOff) return active ? spec.max_w : 0.0;
  if (traffic_gbps < 0.0 || over(traffic_gbps, spec.rate_gbps)) {
    std::ostringstream os;
    os << "ONU traffic " << traffic_gbps << " Gbps outside [0, " << spec.rate_gbps << "]";
    throw DomainError(os.str());
  }
  return linear(spec.idle_w, spec.max_w, traffic_gbps, spec.rate_gbps);
}

double olt_power(const OltSpec& spec, double traffic_gbps) {
  if (traffic_gbps < 0.0 || over(traffic_gbps, spec.rate_gbps)) {
    std::ostringstream os;
    os << "OLT traffic " << traffic_gbps << " Gbps outside [0, " << spec.rate_gbps << "]";
    throw DomainError(os.str());
  }
  return linear(spec.idle_w, spec.max_w, traffic_gbps, spec.rate_gbps);
}

PowerReport evaluate(const Placement& placement, const FlowAssignment& flows, const Topology& topology,
                     const Workload& workload, const DeviceSpecs& specs, const Weights& weights) {
  const int n_vms = static_cast<int>(workload.vms.size());
  if (static_cast<int>(placement.assign.size()) != n_vms) {
    throw ContractViolation("placement does not cover every VM exactly once");
  }

  std::vector<double> cpu(topology.node_count(), 0.0);
  std::vector<int> hosted(topology.node_count(), 0);
  for (const auto& [vm, server] : placement.assign) {
    if (vm < 0 || vm >= n_vms) throw ContractViolation("placement names unknown vm " + std::to_string(vm));
    if (server.kind != NodeKind::kServerOnu || !topology.contains(server)) {
      throw ContractViolation("vm " + std::to_string(vm) + " placed on non-server " + server.name());
    }
    const int h = topology.handle(server);
    cpu[h] += workload.vms[vm].cpu_ghz;
    ++hosted[h];
  }

  // Every node a commodity touches carries its traffic.
  std::vector<double> node_traffic(topology.node_count(), 0.0);
  for (const CommodityFlow& f : flows.commodities) {
    const bool colocated = f.path.links.empty();
    if (f.kind == CommodityKind::kInterVm) {
      const auto s = placement.assign.find(f.src_vm);
      const auto d = placement.assign.find(f.dst_vm);
      if (s == placement.assign.end() || d == placement.assign.end() || s->second != f.source ||
          d->second != f.destination || colocated != (f.source == f.destination)) {
        throw ContractViolation("flow does not match the placement of its VMs");
      }
    } else {
      const auto d = placement.assign.find(f.dst_vm);
      if (d == placement.assign.end() || d->second != f.destination || colocated) {
        throw ContractViolation("ingress flow does not end at its VM's server");
      }
    }
    for (int node : f.path.nodes) node_traffic[node] += f.gbps;
  }

  PowerReport r;
  r.alpha = weights.lexicographic ? 1.0 : weights.alpha;
  r.beta = weights.lexicographic ? 0.0 : weights.beta;
  try {
    for (int h : topology.servers()) {
      const NodeId& id = topology.node(h);
      const ServerSpec& spec = specs.server_for_cell(id.cell);
      const bool active = hosted[h] > 0;
      const double w = server_power(spec, cpu[h], active) +
                       onu_power(specs.server_onu, node_traffic[h], active || node_traffic[h] > 0.0);
      r.per_device_w[id] = w;
      r.p_pc_w += w;
      r.server_utilization[id] = cpu[h] / spec.cpu_ghz;
      r.server_load_ghz[id] = cpu[h];
    }
    for (int h : topology.access_onus()) {
      const double w = onu_power(specs.access_onu, node_traffic[h], true);
      r.per_device_w[topology.node(h)] = w;
      r.n_pc_w += w;
    }
    for (int c = 0; c < topology.cell_count(); ++c) r.per_device_w[NodeId::hub(c)] = 0.0;  // passive
    const double olt = olt_power(specs.olt, node_traffic[topology.olt_handle()]);
    r.per_device_w[NodeId::olt()] = olt;
    r.n_pc_w += olt;
  } catch (const DomainError& e) {
    throw ContractViolation(std::string("infeasible placement: ") + e.what());
  }
  for (int c = 0; c < topology.cell_count(); ++c) r.per_cell_w[c] = 0.0;
  for (const auto& [id, w] : r.per_device_w) {
    if (id.has_cell()) r.per_cell_w[id.cell] += w;
  }
  r.objective = r.alpha * r.n_pc_w + r.beta * r.p_pc_w;
  return r;
}

}  // namespace fogplace
