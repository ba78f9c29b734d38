#include "fogplace/workload.hpp"

#include <random>
#include <sstream>

#include "fogplace/errors.hpp"
#include "fogplace/power.hpp"

namespace fogplace {

namespace {

// mt19937_64 output is fixed by the standard; the mapping to [0, 1) is done
// here rather than with std::uniform_real_distribution so draws are
// identical across standard libraries.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : engine_(seed) {}

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double in(const Range& r) { return r.min + (r.max - r.min) * unit(); }

 private:
  std::mt19937_64 engine_;
};

void check_range(const Range& r, const char* what) {
  if (!r.valid()) throw InvalidConfig(std::string(what) + " range has min > max");
}

}  // namespace

Workload generate_workload(const WorkloadParams& params, const Topology& topology, std::uint64_t seed) {
  if (params.n_vms < 0) throw InvalidConfig("n_vms must be nonnegative");
  check_range(params.cpu_ghz, "cpu");
  check_range(params.ram_mb, "ram");
  check_range(params.traffic_gbps, "traffic");
  if (!(params.traffic_density >= 0.0 && params.traffic_density <= 1.0)) {
    throw InvalidConfig("traffic density must lie in [0, 1]");
  }
  if (params.cpu_ghz.min <= 0.0 || params.ram_mb.min <= 0.0 || params.traffic_gbps.min < 0.0) {
    throw InvalidConfig("cpu and ram draws must be positive, traffic nonnegative");
  }

  Uniform rng(seed);
  Workload w;
  w.seed = seed;
  const auto onus = topology.access_onus();
  w.vms.reserve(params.n_vms);
  for (int v = 0; v < params.n_vms; ++v) {
    VmRequest vm;
    vm.id = v;
    vm.cpu_ghz = rng.in(params.cpu_ghz);
    vm.ram_mb = rng.in(params.ram_mb);
    vm.origin = topology.node(onus[v % onus.size()]);
    if (params.ingress) vm.ingress_gbps = rng.in(params.traffic_gbps);
    w.vms.push_back(vm);
  }
  for (int v = 0; v < params.n_vms; ++v) {
    for (int u = 0; u < params.n_vms; ++u) {
      if (u == v) continue;
      // Both draws are taken for every pair so the stream does not depend on
      // which pairs were selected.
      const double pick = rng.unit();
      const double gbps = rng.in(params.traffic_gbps);
      if (pick < params.traffic_density && gbps > 0.0) w.traffic.emplace(std::pair{v, u}, gbps);
    }
  }
  return w;
}

std::vector<std::string> generation_warnings(const WorkloadParams& params, const DeviceSpecs& specs) {
  std::vector<std::string> warnings;
  const double cap = specs.max_server_cpu_ghz();
  if (params.cpu_ghz.max > cap) {
    std::ostringstream os;
    os << "cpu range upper bound " << params.cpu_ghz.max << " GHz exceeds every server (max " << cap
       << " GHz); some instances will be infeasible";
    warnings.push_back(os.str());
  }
  double ram_cap = 0.0;
  for (const auto& s : specs.cell_servers) ram_cap = std::max(ram_cap, s.ram_mb());
  if (params.ram_mb.max > ram_cap) {
    std::ostringstream os;
    os << "ram range upper bound " << params.ram_mb.max << " MB exceeds every server";
    warnings.push_back(os.str());
  }
  return warnings;
}

std::vector<WorkloadViolation> validate_workload(const Workload& workload, const Topology& topology,
                                                 const DeviceSpecs& specs) {
  std::vector<WorkloadViolation> out;
  const double cap = specs.max_server_cpu_ghz();
  const int n = static_cast<int>(workload.vms.size());
  auto add = [&](WorkloadIssue issue, int vm, const std::string& msg) { out.push_back({issue, vm, msg}); };

  for (int i = 0; i < n; ++i) {
    const VmRequest& vm = workload.vms[i];
    const std::string tag = "vm " + std::to_string(vm.id);
    if (vm.id != i) add(WorkloadIssue::kIdGap, vm.id, tag + " at position " + std::to_string(i));
    if (!(vm.cpu_ghz > 0.0 && vm.cpu_ghz <= cap)) {
      std::ostringstream os;
      os << tag << " cpu " << vm.cpu_ghz << " GHz outside (0, " << cap << "]";
      add(WorkloadIssue::kCpuOutOfRange, vm.id, os.str());
    }
    if (!(vm.ram_mb > 0.0)) add(WorkloadIssue::kRamNonPositive, vm.id, tag + " ram must be positive");
    if (!(vm.ingress_gbps >= 0.0)) add(WorkloadIssue::kIngressNegative, vm.id, tag + " ingress is negative");
    if (vm.origin.kind != NodeKind::kAccessOnu || !topology.contains(vm.origin)) {
      add(WorkloadIssue::kBadOrigin, vm.id, tag + " origin " + vm.origin.name() + " is not an access ONU");
    }
  }
  for (const auto& [key, gbps] : workload.traffic) {
    const auto [v, u] = key;
    const std::string tag = "traffic (" + std::to_string(v) + "," + std::to_string(u) + ")";
    if (v == u) add(WorkloadIssue::kSelfTraffic, v, tag + " is self-traffic");
    if (v < 0 || u < 0 || v >= n || u >= n) add(WorkloadIssue::kUnknownVm, v, tag + " names an unknown VM");
    if (!(gbps >= 0.0)) add(WorkloadIssue::kNegativeTraffic, v, tag + " is negative");
  }
  return out;
}

}  // namespace fogplace
