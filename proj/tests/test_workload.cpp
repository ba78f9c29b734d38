#include <cmath>
#include <set>

#include "doctest.h"
#include "fogplace/errors.hpp"
#include "fogplace/power.hpp"
#include "fogplace/scenario.hpp"
#include "fogplace/workload.hpp"

using namespace fogplace;

namespace {

const Topology& reference_topology() {
  static const Topology t = build_topology({});
  return t;
}

}  // namespace

TEST_CASE("generated fields stay within the configured ranges") {
  WorkloadParams p;
  p.n_vms = 10;
  p.traffic_density = 0.2;
  const Workload w = generate_workload(p, reference_topology(), 7);
  REQUIRE(w.vms.size() == 10);
  for (int i = 0; i < 10; ++i) {
    const VmRequest& vm = w.vms[i];
    CHECK(vm.id == i);
    CHECK(vm.cpu_ghz >= 0.1);
    CHECK(vm.cpu_ghz <= 2.6);
    CHECK(vm.ram_mb >= 100.0);
    CHECK(vm.ram_mb <= 500.0);
    CHECK(vm.ingress_gbps == 0.0);
    CHECK(vm.origin == reference_topology().node(reference_topology().access_onus()[i % 6]));
  }
  for (const auto& [key, gbps] : w.traffic) {
    CHECK(key.first != key.second);
    CHECK(gbps >= 1.0);
    CHECK(gbps <= 5.0);
  }
  CHECK(validate_workload(w, reference_topology(), reference_specs()).empty());
}

TEST_CASE("collapsed range and single VM") {
  WorkloadParams p;
  p.n_vms = 1;
  p.cpu_ghz = {2.0, 2.0};
  p.traffic_density = 1.0;
  const Workload w = generate_workload(p, reference_topology(), 3);
  REQUIRE(w.vms.size() == 1);
  CHECK(w.vms[0].cpu_ghz == 2.0);
  CHECK(w.traffic.empty());
}

TEST_CASE("seeded determinism") {
  WorkloadParams p;
  p.n_vms = 15;
  const Workload a = generate_workload(p, reference_topology(), 7);
  const Workload b = generate_workload(p, reference_topology(), 7);
  const Workload c = generate_workload(p, reference_topology(), 8);
  CHECK(a == b);
  CHECK(workload_to_text(a) == workload_to_text(b));
  CHECK_FALSE(a == c);
}

TEST_CASE("workload documents round-trip") {
  WorkloadParams p;
  p.n_vms = 12;
  p.ingress = true;
  const Workload a = generate_workload(p, reference_topology(), 42);
  const Workload b = workload_from_text(workload_to_text(a));
  CHECK(a == b);
  CHECK_THROWS_AS(workload_from_text("{\"vms\": 3}"), ParseError);
  CHECK_THROWS_AS(workload_from_text("not json"), ParseError);
}

TEST_CASE("density extremes") {
  WorkloadParams p;
  p.n_vms = 6;
  p.traffic_density = 0.0;
  CHECK(generate_workload(p, reference_topology(), 1).traffic.empty());
  p.traffic_density = 1.0;
  CHECK(generate_workload(p, reference_topology(), 1).traffic.size() == 30);
}

TEST_CASE("empirical ranges and means over 10^4 VMs") {
  WorkloadParams p;
  p.n_vms = 10000;
  p.ingress = true;
  p.traffic_density = 0.0;
  const Workload w = generate_workload(p, reference_topology(), 2024);
  struct Field {
    Range range;
    double VmRequest::*member;
  };
  const Field fields[] = {{p.cpu_ghz, &VmRequest::cpu_ghz},
                          {p.ram_mb, &VmRequest::ram_mb},
                          {p.traffic_gbps, &VmRequest::ingress_gbps}};
  for (const Field& f : fields) {
    double sum = 0.0;
    double lo = INFINITY;
    double hi = -INFINITY;
    for (const VmRequest& vm : w.vms) {
      const double x = vm.*f.member;
      sum += x;
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    CHECK(lo >= f.range.min);
    CHECK(hi <= f.range.max);
    const double mean = sum / p.n_vms;
    // Uniform: sd = width / sqrt(12).
    const double se = (f.range.max - f.range.min) / std::sqrt(12.0) / std::sqrt(static_cast<double>(p.n_vms));
    CHECK(std::abs(mean - f.range.mid()) < 3.0 * se);
  }
}

TEST_CASE("invalid generation configs") {
  WorkloadParams p;
  p.cpu_ghz = {2.0, 1.0};
  CHECK_THROWS_AS(generate_workload(p, reference_topology(), 1), InvalidConfig);
  p = {};
  p.traffic_density = 1.5;
  CHECK_THROWS_AS(generate_workload(p, reference_topology(), 1), InvalidConfig);
  p = {};
  p.cpu_ghz = {0.1, 3.0};
  const auto warnings = generation_warnings(p, reference_specs());
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("exceeds every server") != std::string::npos);
  CHECK(generation_warnings(WorkloadParams{}, reference_specs()).empty());
}

TEST_CASE("validate_workload reports each violation") {
  WorkloadParams p;
  p.n_vms = 4;
  p.traffic_density = 0.0;
  Workload w = generate_workload(p, reference_topology(), 5);
  CHECK(validate_workload(w, reference_topology(), reference_specs()).empty());

  SUBCASE("cpu above the largest server") {
    w.vms[2].cpu_ghz = 3.0;
    const auto v = validate_workload(w, reference_topology(), reference_specs());
    REQUIRE(v.size() == 1);
    CHECK(v[0].issue == WorkloadIssue::kCpuOutOfRange);
    CHECK(v[0].vm == 2);
    CHECK(v[0].message.find("vm 2") != std::string::npos);
  }
  SUBCASE("self traffic") {
    w.traffic[{1, 1}] = 2.0;
    const auto v = validate_workload(w, reference_topology(), reference_specs());
    REQUIRE(v.size() == 1);
    CHECK(v[0].issue == WorkloadIssue::kSelfTraffic);
  }
  SUBCASE("origin must be an access ONU of the topology") {
    w.vms[0].origin = NodeId::server(0, 0);
    w.vms[1].origin = NodeId::access_onu(9, 0);
    const auto v = validate_workload(w, reference_topology(), reference_specs());
    REQUIRE(v.size() == 2);
    CHECK(v[0].issue == WorkloadIssue::kBadOrigin);
    CHECK(v[1].issue == WorkloadIssue::kBadOrigin);
  }
  SUBCASE("id gaps, bad ram, negative traffic, unknown VM") {
    w.vms[3].id = 7;
    w.vms[0].ram_mb = 0.0;
    w.traffic[{0, 1}] = -1.0;
    w.traffic[{0, 9}] = 1.0;
    const auto v = validate_workload(w, reference_topology(), reference_specs());
    std::set<WorkloadIssue> issues;
    for (const auto& x : v) issues.insert(x.issue);
    CHECK(issues == std::set{WorkloadIssue::kIdGap, WorkloadIssue::kRamNonPositive, WorkloadIssue::kNegativeTraffic,
                             WorkloadIssue::kUnknownVm});
  }
}
