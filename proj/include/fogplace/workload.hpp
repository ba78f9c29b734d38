#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fogplace/topology.hpp"

namespace fogplace {

struct DeviceSpecs;

struct VmRequest {
  int id = 0;
  double cpu_ghz = 0.0;
  double ram_mb = 0.0;
  NodeId origin;  // access ONU collecting the VM's end-user traffic
  double ingress_gbps = 0.0;

  friend bool operator==(const VmRequest&, const VmRequest&) = default;
};

// Directed inter-VM demand; key (v, w) with v != w.
using TrafficMatrix = std::map<std::pair<int, int>, double>;

struct Workload {
  std::vector<VmRequest> vms;
  TrafficMatrix traffic;
  std::uint64_t seed = 0;

  friend bool operator==(const Workload&, const Workload&) = default;
};

struct Range {
  double min = 0.0;
  double max = 0.0;

  bool valid() const { return min <= max; }
  double mid() const { return 0.5 * (min + max); }
};

struct WorkloadParams {
  int n_vms = 10;
  Range cpu_ghz{0.1, 2.6};
  Range ram_mb{100.0, 500.0};
  Range traffic_gbps{1.0, 5.0};
  double traffic_density = 0.2;
  // When set, each VM also draws end-user ingress traffic from traffic_gbps.
  bool ingress = false;
};

// Draws n_vms requests uniformly from the configured ranges, assigns origins
// round-robin over the access ONUs, and gives each ordered VM pair a demand
// with probability traffic_density. A pure function of (params, topology,
// seed). Throws InvalidConfig for empty ranges or a density outside [0, 1].
Workload generate_workload(const WorkloadParams& params, const Topology& topology, std::uint64_t seed);

// Non-fatal problems with a generation config, e.g. a CPU range whose upper
// end exceeds every server. The solver reports such instances infeasible.
std::vector<std::string> generation_warnings(const WorkloadParams& params, const DeviceSpecs& specs);

enum class WorkloadIssue {
  kIdGap,
  kCpuOutOfRange,
  kRamNonPositive,
  kIngressNegative,
  kBadOrigin,
  kSelfTraffic,
  kNegativeTraffic,
  kUnknownVm,
};

struct WorkloadViolation {
  WorkloadIssue issue;
  int vm = -1;
  std::string message;
};

// Empty iff every VM and traffic invariant holds and all origins are access
// ONUs of the topology.
std::vector<WorkloadViolation> validate_workload(const Workload& workload, const Topology& topology,
                                                 const DeviceSpecs& specs);

}  // namespace fogplace
