#include "fogplace/oracle_check.hpp"

#include <random>
#include <sstream>

#include "fogplace/solver.hpp"

namespace fogplace {

RandomInstance random_instance(std::uint64_t seed, int max_vms, int max_servers) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  auto pick = [&](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); };
  auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  RandomInstance inst;
  const DeviceSpecs ref = reference_specs();
  inst.topology.cells = pick(1, std::min(3, max_servers));
  inst.topology.servers_per_cell = pick(1, max_servers / inst.topology.cells);
  inst.topology.access_onus_per_cell = pick(1, 2);
  // Tight links in a quarter of the instances so capacity constraints bind.
  inst.topology.link_capacity_gbps = pick(0, 3) == 0 ? 4.0 + 12.0 * unit() : 1280.0;

  inst.specs = ref;
  inst.specs.cell_servers.clear();
  for (int c = 0; c < inst.topology.cells; ++c) inst.specs.cell_servers.push_back(ref.cell_servers[pick(0, 2)]);

  WorkloadParams wp;
  wp.n_vms = pick(1, max_vms);
  wp.traffic_density = 0.5 * unit();
  wp.ingress = pick(0, 4) == 0;
  if (wp.ingress) wp.traffic_gbps = {0.5, 2.0};
  inst.workload = generate_workload(wp, build_topology(inst.topology), rng());

  switch (pick(0, 4)) {
    case 0: inst.weights = {1000.0, 1.0, false}; break;
    case 1: inst.weights = {1.0, 1.0, false}; break;
    case 2: inst.weights = {0.0, 1.0, false}; break;
    case 3: inst.weights = {1.0, 0.0, false}; break;
    default: inst.weights = {1.0, 1.0, true}; break;
  }
  return inst;
}

OracleCheckResult run_oracle_check(int instances, std::uint64_t seed, int max_vms, int max_servers) {
  OracleCheckResult result;
  for (int i = 0; i < instances; ++i) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
    const RandomInstance ri = random_instance(s, max_vms, max_servers);
    const Topology topo = build_topology(ri.topology);
    const Solution bnb = solve_bnb(ri.workload, topo, ri.specs, ri.weights);
    const Solution brute = solve_bruteforce(ri.workload, topo, ri.specs, ri.weights);
    ++result.instances;
    result.bnb_nodes += bnb.nodes_explored;
    result.brute_nodes += brute.nodes_explored;
    if (brute.status == SolveStatus::kOptimal) ++result.optimal;
    if (brute.status == SolveStatus::kInfeasible) ++result.infeasible;

    std::ostringstream why;
    if (bnb.status != brute.status) {
      why << "status " << to_string(bnb.status) << " vs " << to_string(brute.status);
    } else if (bnb.status == SolveStatus::kOptimal) {
      if (bnb.report.objective != brute.report.objective || bnb.report.p_pc_w != brute.report.p_pc_w) {
        why.precision(17);
        why << "objective " << bnb.report.objective << " vs " << brute.report.objective;
      } else if (!(bnb.placement == brute.placement)) {
        why << "equal objective but different placement";
      }
    }
    if (!why.str().empty()) result.mismatches.push_back({s, why.str()});
  }
  return result;
}

}  // namespace fogplace
