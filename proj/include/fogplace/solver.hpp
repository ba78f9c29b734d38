#pragma once

#include <chrono>
#include <cstdint>
#include <string_view>

#include "fogplace/flows.hpp"
#include "fogplace/power.hpp"

namespace fogplace {

enum class SolveStatus {
  kOptimal,
  kFeasible,  // heuristic result, optimality not proven
  kInfeasible,
  kAborted,
};

std::string_view to_string(SolveStatus status);

struct Solution {
  SolveStatus status = SolveStatus::kInfeasible;
  Placement placement;  // empty unless a feasible assignment was found
  FlowAssignment flows;
  PowerReport report;
  std::uint64_t nodes_explored = 0;
  double solve_seconds = 0.0;
};

struct SolveOptions {
  std::chrono::duration<double> time_budget = std::chrono::seconds(60);
  // Brute force refuses instances with more than this many assignments.
  double oracle_cap = 1e7;
};

// Exact depth-first branch and bound under fixed shortest-path routing.
// VMs are branched in descending CPU order (ties by id), servers in
// cell-major order; among equal objectives the lexicographically smallest
// assignment wins.
Solution solve_bnb(const Workload& workload, const Topology& topology, const DeviceSpecs& specs,
                   const Weights& weights, const SolveOptions& options = {});

// Exhaustive enumeration in the same canonical order. Throws
// OracleScopeError above options.oracle_cap.
Solution solve_bruteforce(const Workload& workload, const Topology& topology, const DeviceSpecs& specs,
                          const Weights& weights, const SolveOptions& options = {});

// Minimum marginal objective per VM in canonical order, falling back to
// first-fit-decreasing on a dead end.
Solution solve_greedy(const Workload& workload, const Topology& topology, const DeviceSpecs& specs,
                      const Weights& weights);

}  // namespace fogplace
