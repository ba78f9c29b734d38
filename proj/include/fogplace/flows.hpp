#pragma once

#include <map>
#include <string>
#include <vector>

#include "fogplace/power.hpp"
#include "fogplace/topology.hpp"
#include "fogplace/workload.hpp"

namespace fogplace {

// VM id -> server ONU. A complete placement has one entry per VM.
struct Placement {
  std::map<int, NodeId> assign;

  friend bool operator==(const Placement&, const Placement&) = default;
};

enum class CommodityKind { kInterVm, kIngress };

// One routed demand. Inter-VM commodities run between the servers of
// src_vm and dst_vm; ingress commodities run from dst_vm's origin access ONU
// to its server (src_vm == -1). Co-located inter-VM pairs have an empty path.
struct CommodityFlow {
  CommodityKind kind = CommodityKind::kInterVm;
  int src_vm = -1;
  int dst_vm = -1;
  NodeId source;
  NodeId destination;
  double gbps = 0.0;
  Path path;
};

struct FlowAssignment {
  std::vector<CommodityFlow> commodities;
  std::vector<double> link_load_gbps;  // indexed by link handle
  std::vector<int> overloaded_links;   // links whose load exceeds capacity

  bool within_capacity() const { return overloaded_links.empty(); }
};

// Net outflow minus inflow of a commodity at a node: +gbps at its source,
// -gbps at its destination, zero elsewhere when conservation holds.
double net_outflow(const CommodityFlow& flow, const Topology& topology, int node);

// Routes every positive demand on the topology's stored path. Throws
// ContractViolation when the placement does not cover every VM.
FlowAssignment route_flows(const Placement& placement, const Workload& workload, const Topology& topology);

enum class ViolationKind { kTotality, kUnknownServer, kCpu, kRam, kLinkCapacity, kDeviceRate };

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string subject;  // VM, server or link name
  double excess = 0.0;  // amount above the limit, where applicable
  std::string message;
};

// Empty iff the assignment is total and CPU, RAM, link capacity and
// proportional-device rate limits all hold.
std::vector<Violation> check_feasibility(const Placement& placement, const Workload& workload,
                                         const Topology& topology, const DeviceSpecs& specs);

}  // namespace fogplace
