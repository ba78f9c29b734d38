#include <cmath>
#include <functional>

#include "doctest.h"
#include "fogplace/errors.hpp"
#include "fogplace/flows.hpp"
#include "fogplace/oracle_check.hpp"
#include "fogplace/solver.hpp"

using namespace fogplace;

namespace {

// One R620 cell and one R740 cell, one server each.
struct TwoServers {
  Topology topo = build_topology({2, 1, 1, 1280.0});
  DeviceSpecs specs;
  Workload w;

  TwoServers() {
    const DeviceSpecs ref = reference_specs();
    specs = ref;
    specs.cell_servers = {ref.cell_servers[0], ref.cell_servers[1]};
  }

  void add_vm(double cpu) {
    const int id = static_cast<int>(w.vms.size());
    w.vms.push_back({id, cpu, 200.0, NodeId::access_onu(id % 2, 0), 0.0});
  }
};

constexpr Weights kProcessing{0.0, 1.0, false};

// Hand-evaluated processing power: idle + slope * load + on/off ONU per server.
double r620_w(double ghz) { return 54.1 + 188.9 * (ghz / 2.6) + 2.5; }
double r740_w(double ghz) { return 301.0 + 156.0 * (ghz / 2.5) + 2.5; }

// Independent exhaustive oracle over every total assignment, scored by
// evaluate(); returns the minimum objective or NaN when none is feasible.
double enumerate_min(const Workload& w, const Topology& t, const DeviceSpecs& specs, const Weights& weights) {
  const auto& servers = t.servers();
  const int n = static_cast<int>(w.vms.size());
  double best = NAN;
  std::vector<int> pick(n, 0);
  const std::function<void(int)> rec = [&](int i) {
    if (i == n) {
      Placement p;
      for (int v = 0; v < n; ++v) p.assign[v] = t.node(servers[pick[v]]);
      if (!check_feasibility(p, w, t, specs).empty()) return;
      const double obj = evaluate(p, route_flows(p, w, t), t, w, specs, weights).objective;
      if (std::isnan(best) || obj < best) best = obj;
      return;
    }
    for (std::size_t s = 0; s < servers.size(); ++s) {
      pick[i] = static_cast<int>(s);
      rec(i + 1);
    }
  };
  rec(0);
  return best;
}

}  // namespace

TEST_CASE("route_flows examples") {
  const Topology t = build_topology({});
  Workload w;
  w.vms = {{0, 1.0, 200.0, NodeId::access_onu(0, 0), 0.0}, {1, 1.0, 200.0, NodeId::access_onu(1, 0), 0.0}};

  SUBCASE("empty traffic") {
    Placement p;
    p.assign = {{0, NodeId::server(0, 0)}, {1, NodeId::server(1, 0)}};
    const FlowAssignment f = route_flows(p, w, t);
    CHECK(f.commodities.empty());
    for (double load : f.link_load_gbps) CHECK(load == 0.0);
  }
  w.traffic[{0, 1}] = 3.0;
  SUBCASE("co-located pair loads no link") {
    Placement p;
    p.assign = {{0, NodeId::server(0, 2)}, {1, NodeId::server(0, 2)}};
    const FlowAssignment f = route_flows(p, w, t);
    REQUIRE(f.commodities.size() == 1);
    CHECK(f.commodities[0].path.links.empty());
    for (double load : f.link_load_gbps) CHECK(load == 0.0);
  }
  SUBCASE("pair split across cells 0 and 1") {
    Placement p;
    p.assign = {{0, NodeId::server(0, 0)}, {1, NodeId::server(1, 0)}};
    const FlowAssignment f = route_flows(p, w, t);
    REQUIRE(f.commodities.size() == 1);
    const CommodityFlow& c = f.commodities[0];
    const std::vector<NodeId> expected{NodeId::server(0, 0), NodeId::hub(0), NodeId::hub(1), NodeId::server(1, 0)};
    REQUIRE(c.path.nodes.size() == expected.size());
    double loaded = 0.0;
    for (std::size_t h = 0; h < f.link_load_gbps.size(); ++h) loaded += f.link_load_gbps[h];
    CHECK(loaded == 9.0);
    for (std::size_t i = 0; i + 1 < expected.size(); ++i) {
      CHECK(t.node(c.path.nodes[i]) == expected[i]);
      CHECK(f.link_load_gbps[c.path.links[i]] == 3.0);
    }
    // Conservation: +3 at the source server, -3 at the destination, 0 at both hubs.
    CHECK(net_outflow(c, t, t.handle(NodeId::server(0, 0))) == 3.0);
    CHECK(net_outflow(c, t, t.handle(NodeId::hub(0))) == 0.0);
    CHECK(net_outflow(c, t, t.handle(NodeId::hub(1))) == 0.0);
    CHECK(net_outflow(c, t, t.handle(NodeId::server(1, 0))) == -3.0);
  }
  SUBCASE("partial placement") {
    Placement p;
    p.assign = {{0, NodeId::server(0, 0)}};
    CHECK_THROWS_AS(route_flows(p, w, t), ContractViolation);
  }
}

TEST_CASE("check_feasibility examples") {
  const Topology t = build_topology({});
  const DeviceSpecs specs = reference_specs();
  Workload w;
  w.vms = {{0, 2.0, 200.0, NodeId::access_onu(0, 0), 0.0}, {1, 2.0, 200.0, NodeId::access_onu(0, 1), 0.0}};
  Placement p;
  p.assign = {{0, NodeId::server(0, 0)}, {1, NodeId::server(0, 1)}};
  CHECK(check_feasibility(p, w, t, specs).empty());

  p.assign[1] = NodeId::server(0, 0);
  auto v = check_feasibility(p, w, t, specs);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == ViolationKind::kCpu);
  CHECK(v[0].subject == "srv_c0_i0");
  CHECK(v[0].excess == doctest::Approx(1.4));

  p.assign.erase(1);
  v = check_feasibility(p, w, t, specs);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == ViolationKind::kTotality);

  p.assign[1] = NodeId::hub(0);
  v = check_feasibility(p, w, t, specs);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == ViolationKind::kUnknownServer);
}

TEST_CASE("link capacity and RAM violations") {
  const Topology t = build_topology({3, 2, 1, 2.0});
  const DeviceSpecs specs = reference_specs();
  Workload w;
  w.vms = {{0, 0.5, 20000.0, NodeId::access_onu(0, 0), 0.0}, {1, 0.5, 10000.0, NodeId::access_onu(1, 0), 0.0}};
  w.traffic[{0, 1}] = 3.0;
  Placement p;
  p.assign = {{0, NodeId::server(0, 0)}, {1, NodeId::server(0, 0)}};
  auto v = check_feasibility(p, w, t, specs);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == ViolationKind::kRam);
  CHECK(v[0].excess == doctest::Approx(30000.0 - 24.0 * 1024.0));

  p.assign[1] = NodeId::server(0, 1);
  v = check_feasibility(p, w, t, specs);
  REQUIRE(v.size() == 2);
  for (const Violation& x : v) {
    CHECK(x.kind == ViolationKind::kLinkCapacity);
    CHECK(x.excess == doctest::Approx(1.0));
  }
}

TEST_CASE("branch and bound: two VMs must split") {
  TwoServers f;
  f.add_vm(2.0);
  f.add_vm(2.0);
  const double oracle = enumerate_min(f.w, f.topo, f.specs, kProcessing);
  const double hand = r620_w(2.0) + r740_w(2.0);
  CHECK(oracle == doctest::Approx(hand).epsilon(1e-12));
  // Rounded to 630.22 elsewhere; the exact sum is 630.2077.
  CHECK(hand == doctest::Approx(630.2076923).epsilon(1e-9));

  const Solution s = solve_bnb(f.w, f.topo, f.specs, kProcessing);
  REQUIRE(s.status == SolveStatus::kOptimal);
  CHECK(s.report.objective == doctest::Approx(630.2076923).epsilon(1e-9));
  CHECK(s.placement.assign.at(0) == NodeId::server(0, 0));
  CHECK(s.placement.assign.at(1) == NodeId::server(1, 0));
  CHECK(check_feasibility(s.placement, f.w, f.topo, f.specs).empty());

  const Solution g = solve_greedy(f.w, f.topo, f.specs, kProcessing);
  CHECK(g.status == SolveStatus::kFeasible);
  CHECK(g.report.objective == doctest::Approx(630.2076923).epsilon(1e-9));
  CHECK(g.placement.assign.at(0) != g.placement.assign.at(1));
}

TEST_CASE("branch and bound: one VM picks the R620") {
  TwoServers f;
  f.add_vm(1.0);
  const double r620 = r620_w(1.0);
  const double r740 = r740_w(1.0);
  CHECK(r620 == doctest::Approx(129.2538462).epsilon(1e-9));
  // Rounded to 366.9 elsewhere; 301 + 62.4 + 2.5 is 365.9.
  CHECK(r740 == doctest::Approx(365.9).epsilon(1e-12));

  const Solution s = solve_bnb(f.w, f.topo, f.specs, kProcessing);
  REQUIRE(s.status == SolveStatus::kOptimal);
  CHECK(s.report.objective == doctest::Approx(r620).epsilon(1e-12));
  CHECK(s.placement.assign.at(0) == NodeId::server(0, 0));
  const Solution g = solve_greedy(f.w, f.topo, f.specs, kProcessing);
  CHECK(g.report.objective == s.report.objective);
}

TEST_CASE("empty workload is optimal at the idle floor") {
  const Topology t = build_topology({});
  const Solution s = solve_bnb({}, t, reference_specs(), {1.0, 1.0, false});
  CHECK(s.status == SolveStatus::kOptimal);
  CHECK(s.placement.assign.empty());
  CHECK(s.report.p_pc_w == 0.0);
  CHECK(s.report.n_pc_w == doctest::Approx(6 * 1.5 + 1746.0));
}

TEST_CASE("infeasible instances") {
  TwoServers f;
  f.add_vm(2.0);
  f.add_vm(2.0);
  f.add_vm(2.0);
  CHECK(solve_bnb(f.w, f.topo, f.specs, kProcessing).status == SolveStatus::kInfeasible);
  CHECK(solve_bruteforce(f.w, f.topo, f.specs, kProcessing).status == SolveStatus::kInfeasible);
  CHECK(solve_greedy(f.w, f.topo, f.specs, kProcessing).status == SolveStatus::kInfeasible);

  TwoServers big;
  big.add_vm(3.0);
  CHECK(solve_bnb(big.w, big.topo, big.specs, kProcessing).status == SolveStatus::kInfeasible);
}

TEST_CASE("brute force enumerates every assignment") {
  const Topology t = build_topology({3, 1, 1, 1280.0});
  Workload w;
  for (int i = 0; i < 3; ++i) w.vms.push_back({i, 0.5, 100.0, NodeId::access_onu(i, 0), 0.0});
  const Solution s = solve_bruteforce(w, t, reference_specs(), {1.0, 1.0, false});
  CHECK(s.status == SolveStatus::kOptimal);
  CHECK(s.nodes_explored == 27);

  SolveOptions tight;
  tight.oracle_cap = 26;
  CHECK_THROWS_AS(solve_bruteforce(w, t, reference_specs(), {1.0, 1.0, false}, tight), OracleScopeError);
}

TEST_CASE("branch and bound agrees with brute force and the enumeration oracle") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    CAPTURE(seed);
    const RandomInstance inst = random_instance(seed, 5, 5);
    const Topology t = build_topology(inst.topology);
    const Solution b = solve_bnb(inst.workload, t, inst.specs, inst.weights);
    const Solution o = solve_bruteforce(inst.workload, t, inst.specs, inst.weights);
    CHECK(b.status == o.status);
    if (b.status != SolveStatus::kOptimal) continue;
    CHECK(b.report.objective == o.report.objective);
    CHECK(b.placement == o.placement);
    if (!inst.weights.lexicographic) {
      CHECK(b.report.objective ==
            doctest::Approx(enumerate_min(inst.workload, t, inst.specs, inst.weights)).epsilon(1e-12));
    }
    CHECK(check_feasibility(b.placement, inst.workload, t, inst.specs).empty());
    CHECK(b.flows.within_capacity());

    const Solution g = solve_greedy(inst.workload, t, inst.specs, inst.weights);
    if (g.status == SolveStatus::kFeasible && !inst.weights.lexicographic) {
      CHECK(g.report.objective >= b.report.objective - 1e-9 * std::max(1.0, b.report.objective));
      CHECK(check_feasibility(g.placement, inst.workload, t, inst.specs).empty());
    }
  }
}

TEST_CASE("single-VM greedy is optimal") {
  for (std::uint64_t seed = 100; seed < 140; ++seed) {
    RandomInstance inst = random_instance(seed, 1, 6);
    if (inst.weights.lexicographic) continue;
    const Topology t = build_topology(inst.topology);
    const Solution b = solve_bnb(inst.workload, t, inst.specs, inst.weights);
    const Solution g = solve_greedy(inst.workload, t, inst.specs, inst.weights);
    if (b.status != SolveStatus::kOptimal) continue;
    CAPTURE(seed);
    CHECK(g.report.objective == doctest::Approx(b.report.objective).epsilon(1e-12));
  }
}

TEST_CASE("weight monotonicity") {
  const Topology t = build_topology({});
  const DeviceSpecs specs = reference_specs();
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    WorkloadParams params;
    params.n_vms = 6;
    const Workload w = generate_workload(params, t, seed);
    const Solution eq = solve_bnb(w, t, specs, {1.0, 1.0, false});
    const Solution net = solve_bnb(w, t, specs, {1000.0, 1.0, false});
    REQUIRE(eq.status == SolveStatus::kOptimal);
    REQUIRE(net.status == SolveStatus::kOptimal);
    CHECK(net.report.objective >= eq.report.objective);
    const PowerReport rescored = evaluate(net.placement, net.flows, t, w, specs, {1.0, 1.0, false});
    CHECK(rescored.total_w() >= eq.report.total_w() - 1e-9);
  }
}

TEST_CASE("repeated solves are identical") {
  const Topology t = build_topology({});
  WorkloadParams params;
  params.n_vms = 10;
  const Workload w = generate_workload(params, t, 3);
  const Solution a = solve_bnb(w, t, reference_specs(), {1.0, 1.0, false});
  const Solution b = solve_bnb(w, t, reference_specs(), {1.0, 1.0, false});
  CHECK(a.status == b.status);
  CHECK(a.placement == b.placement);
  CHECK(a.report.objective == b.report.objective);
  CHECK(a.nodes_explored == b.nodes_explored);
}

TEST_CASE("an exhausted budget aborts with the incumbent") {
  const Topology t = build_topology({});
  WorkloadParams params;
  params.n_vms = 20;
  const Workload w = generate_workload(params, t, 8);
  SolveOptions opts;
  opts.time_budget = std::chrono::duration<double>(0.0);
  const Solution s = solve_bnb(w, t, reference_specs(), {1.0, 1.0, false}, opts);
  CHECK(s.status == SolveStatus::kAborted);
  if (!s.placement.assign.empty()) CHECK(check_feasibility(s.placement, w, t, reference_specs()).empty());
}
