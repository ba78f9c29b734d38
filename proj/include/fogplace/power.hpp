#pragma once

#include <map>
#include <string>
#include <vector>

#include "fogplace/topology.hpp"

namespace fogplace {

struct ServerSpec {
  std::string name;
  double max_w = 0.0;
  double idle_w = 0.0;
  double cpu_ghz = 0.0;
  double ram_gb = 0.0;

  double ram_mb() const { return ram_gb * 1024.0; }
  // Watts per GHz above idle.
  double slope() const { return (max_w - idle_w) / cpu_ghz; }
};

enum class OnuProfile { kOnOff, kProportional };

struct OnuSpec {
  double max_w = 0.0;
  double idle_w = 0.0;
  double rate_gbps = 0.0;
  OnuProfile profile = OnuProfile::kProportional;
};

struct OltSpec {
  double max_w = 0.0;
  double idle_w = 0.0;
  double rate_gbps = 0.0;
};

// Device parameters for a whole architecture: one server model per cell,
// load-proportional access ONUs, on/off server ONUs and a single OLT.
struct DeviceSpecs {
  std::vector<ServerSpec> cell_servers;
  OnuSpec access_onu;
  OnuSpec server_onu;
  OltSpec olt;

  // Throws InvalidConfig when the cell has no server model.
  const ServerSpec& server_for_cell(int cell) const;
  double max_server_cpu_ghz() const;
};

// Dell R620 / Dell R740 / Hitachi HA8000 cells with the reference ONU and OLT.
DeviceSpecs reference_specs();

// Throws InvalidConfig for any spec violating its invariants, or when there
// are fewer server models than cells.
void validate_specs(const DeviceSpecs& specs, int cells);

// Linear idle-to-max model in CPU load; an inactive server draws nothing.
// Throws DomainError when the load exceeds capacity or the server is inactive
// while carrying load.
double server_power(const ServerSpec& spec, double assigned_cpu_ghz, bool active);
// OnOff: max_w when active, else 0. Proportional: linear in traffic, the
// active flag is ignored. Throws DomainError for proportional traffic above
// the rate.
double onu_power(const OnuSpec& spec, double traffic_gbps, bool active);
double olt_power(const OltSpec& spec, double traffic_gbps);

struct Weights {
  double alpha = 1.0;  // networking
  double beta = 1.0;   // processing
  // Minimise networking power first, then processing among the ties. The
  // report records alpha = 1, beta = 0 for such runs.
  bool lexicographic = false;
};

struct PowerReport {
  double n_pc_w = 0.0;
  double p_pc_w = 0.0;
  double alpha = 1.0;
  double beta = 1.0;
  double objective = 0.0;
  // Server entries include the attached server ONU.
  std::map<NodeId, double> per_device_w;
  std::map<int, double> per_cell_w;
  std::map<NodeId, double> server_utilization;
  std::map<NodeId, double> server_load_ghz;

  double total_w() const { return n_pc_w + p_pc_w; }
};

struct Placement;
struct FlowAssignment;
struct Workload;

// Power of a placement and its routed flows. N_PC collects the access ONUs
// and the OLT (idle floor always on); P_PC the servers and their ONUs.
// Throws ContractViolation when the placement is partial, names a
// non-server, overloads a server, or the flows do not realize it.
PowerReport evaluate(const Placement& placement, const FlowAssignment& flows, const Topology& topology,
                     const Workload& workload, const DeviceSpecs& specs, const Weights& weights);

}  // namespace fogplace
