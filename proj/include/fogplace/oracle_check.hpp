#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fogplace/power.hpp"
#include "fogplace/topology.hpp"
#include "fogplace/workload.hpp"

namespace fogplace {

// A small random instance: 1-3 cells with server models drawn from the
// reference set, a few VMs, random density, weights and (sometimes) tight
// link capacities or ingress traffic so every constraint gets exercised.
struct RandomInstance {
  TopologyParams topology;
  DeviceSpecs specs;
  Workload workload;
  Weights weights;
};

RandomInstance random_instance(std::uint64_t seed, int max_vms = 6, int max_servers = 6);

struct OracleMismatch {
  std::uint64_t seed = 0;
  std::string detail;
};

struct OracleCheckResult {
  int instances = 0;
  int optimal = 0;
  int infeasible = 0;
  std::uint64_t bnb_nodes = 0;
  std::uint64_t brute_nodes = 0;
  std::vector<OracleMismatch> mismatches;
};

// Solves instances seed, seed+1, ... with branch and bound and brute force
// and records any disagreement in status, objective (exact) or placement.
OracleCheckResult run_oracle_check(int instances, std::uint64_t seed, int max_vms = 6, int max_servers = 6);

}  // namespace fogplace
