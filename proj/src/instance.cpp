#include "instance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fogplace/errors.hpp"

namespace fogplace::detail {

namespace {

double tolerance(double x) { return 1e-9 * std::max(1.0, std::abs(x)); }

}  // namespace

bool exceeds(double load, double limit) { return load > limit + 1e-9 * std::max(1.0, std::abs(limit)); }

Instance::Instance(const Workload& workload, const Topology& topology, const DeviceSpecs& specs,
                   const Weights& weights)
    : workload_(workload), topology_(topology), specs_(specs), weights_(weights) {
  validate_specs(specs, topology.cell_count());
  for (int h : topology.servers()) {
    const NodeId& id = topology.node(h);
    const ServerSpec& spec = specs.server_for_cell(id.cell);
    // One model per cell and identical attachment, so the cell is the class.
    servers_.push_back({h, id.cell, &spec, spec.cpu_ghz, spec.ram_mb(), spec.slope(),
                        spec.idle_w + onu_power(specs.server_onu, 0.0, true)});
  }

  const int n = static_cast<int>(workload.vms.size());
  for (int v = 0; v < n; ++v) {
    if (workload.vms[v].id != v) throw ContractViolation("vm ids must be 0..n-1 in order");
    cpu_.push_back(workload.vms[v].cpu_ghz);
    ram_.push_back(workload.vms[v].ram_mb);
  }
  vm_order_.resize(n);
  std::iota(vm_order_.begin(), vm_order_.end(), 0);
  std::stable_sort(vm_order_.begin(), vm_order_.end(), [&](int a, int b) { return cpu_[a] > cpu_[b]; });

  by_vm_.resize(n);
  for (const auto& [key, gbps] : workload.traffic) {
    if (!(gbps > 0.0)) continue;
    if (key.first == key.second || key.first < 0 || key.second < 0 || key.first >= n || key.second >= n) {
      throw ContractViolation("traffic matrix names an invalid vm pair");
    }
    const int c = static_cast<int>(commodities_.size());
    commodities_.push_back({key.first, key.second, -1, gbps});
    by_vm_[key.first].push_back(c);
    by_vm_[key.second].push_back(c);
  }
  std::vector<double> onu_traffic(topology.node_count(), 0.0);
  for (const VmRequest& vm : workload.vms) {
    if (!(vm.ingress_gbps > 0.0)) continue;
    const int src = topology.handle(vm.origin);
    const int c = static_cast<int>(commodities_.size());
    commodities_.push_back({-1, vm.id, src, vm.ingress_gbps});
    by_vm_[vm.id].push_back(c);
    onu_traffic[src] += vm.ingress_gbps;
  }

  double access = 0.0;
  bool ok = true;
  for (int h : topology.access_onus()) {
    if (exceeds(onu_traffic[h], specs.access_onu.rate_gbps)) {
      ok = false;
      break;
    }
    access += onu_power(specs.access_onu, onu_traffic[h], true);
  }
  if (ok) access_w_ = access;
}

bool Instance::via_olt(const Path& p) const {
  return std::find(p.nodes.begin(), p.nodes.end(), topology_.olt_handle()) != p.nodes.end();
}

Score Instance::score(double n_pc, double p_pc) const {
  if (weights_.lexicographic) return {n_pc, p_pc};
  return {weights_.alpha * n_pc + weights_.beta * p_pc, 0.0};
}

bool Instance::better(const Score& a, const Score& b) const {
  const double tp = tolerance(b.primary);
  if (a.primary < b.primary - tp) return true;
  if (!weights_.lexicographic || a.primary > b.primary + tp) return false;
  return a.secondary < b.secondary - tolerance(b.secondary);
}

// Half the comparison tolerance of slack keeps rounding in the incremental
// bound from pruning a leaf that better() would accept.
bool Instance::prunable(const Score& bound, const Score& best) const {
  const double tp = tolerance(best.primary);
  if (!weights_.lexicographic) return bound.primary >= best.primary - 0.5 * tp;
  if (bound.primary > best.primary + tp) return true;
  if (bound.primary < best.primary - 0.5 * tp) return false;
  return bound.secondary >= best.secondary - 0.5 * tolerance(best.secondary);
}

Evaluator::Evaluator(const Instance& instance)
    : inst_(instance),
      cpu_(instance.server_count()),
      ram_(instance.server_count()),
      count_(instance.server_count()),
      link_(instance.topology().links().size()) {}

std::optional<Evaluation> Evaluator::operator()(std::span<const int> server_of_vm) {
  const auto access = inst_.access_power();
  if (!access) return std::nullopt;
  std::fill(cpu_.begin(), cpu_.end(), 0.0);
  std::fill(ram_.begin(), ram_.end(), 0.0);
  std::fill(count_.begin(), count_.end(), 0);
  std::fill(link_.begin(), link_.end(), 0.0);

  const auto servers = inst_.servers();
  for (int v = 0; v < inst_.vm_count(); ++v) {
    const int s = server_of_vm[v];
    cpu_[s] += inst_.cpu(v);
    ram_[s] += inst_.ram(v);
    ++count_[s];
  }
  for (int s = 0; s < inst_.server_count(); ++s) {
    if (exceeds(cpu_[s], servers[s].cpu_cap) || exceeds(ram_[s], servers[s].ram_cap)) return std::nullopt;
  }

  const auto& topo = inst_.topology();
  double olt_traffic = 0.0;
  for (const Commodity& c : inst_.commodities()) {
    const int to = servers[server_of_vm[c.dst_vm]].node;
    const int from = c.src_vm >= 0 ? servers[server_of_vm[c.src_vm]].node : c.src_node;
    if (from == to) continue;
    const Path& p = inst_.route(from, to);
    for (int l : p.links) link_[l] += c.gbps;
    if (inst_.via_olt(p)) olt_traffic += c.gbps;
  }
  for (std::size_t l = 0; l < link_.size(); ++l) {
    if (exceeds(link_[l], topo.link(static_cast<int>(l)).capacity_gbps)) return std::nullopt;
  }
  const auto& specs = inst_.specs();
  if (exceeds(olt_traffic, specs.olt.rate_gbps)) return std::nullopt;

  Evaluation e;
  for (int s = 0; s < inst_.server_count(); ++s) {
    if (count_[s] == 0) continue;
    e.p_pc += server_power(*servers[s].spec, std::min(cpu_[s], servers[s].cpu_cap), true) +
              onu_power(specs.server_onu, 0.0, true);
  }
  e.n_pc = *access + olt_power(specs.olt, std::min(olt_traffic, specs.olt.rate_gbps));
  e.score = inst_.score(e.n_pc, e.p_pc);
  return e;
}

SearchState::SearchState(const Instance& instance)
    : inst_(&instance),
      assign_(instance.vm_count(), -1),
      cpu_(instance.server_count(), 0.0),
      ram_(instance.server_count(), 0.0),
      count_(instance.server_count(), 0),
      link_(instance.topology().links().size(), 0.0) {}

double SearchState::cpu_residual(int server) const { return inst_->servers()[server].cpu_cap - cpu_[server]; }
double SearchState::ram_residual(int server) const { return inst_->servers()[server].ram_cap - ram_[server]; }

double SearchState::partial_n() const {
  return inst_->access_power().value_or(0.0) +
         olt_power(inst_->specs().olt, std::min(olt_traffic_, inst_->specs().olt.rate_gbps));
}

double SearchState::marginal_p(int vm, int server) const {
  const ServerSlot& s = inst_->servers()[server];
  return (count_[server] == 0 ? s.fixed_w : 0.0) + s.slope * inst_->cpu(vm);
}

bool SearchState::try_assign(int vm, int server) {
  const ServerSlot& slot = inst_->servers()[server];
  if (exceeds(cpu_[server] + inst_->cpu(vm), slot.cpu_cap) || exceeds(ram_[server] + inst_->ram(vm), slot.ram_cap)) {
    return false;
  }

  // Route the commodities this assignment completes.
  const auto& topo = inst_->topology();
  std::vector<std::pair<int, double>> added;
  double olt_added = 0.0;
  for (int ci : inst_->commodities_of(vm)) {
    const Commodity& c = inst_->commodities()[ci];
    const int other = c.src_vm == vm ? c.dst_vm : c.src_vm;
    int from;
    int to;
    if (c.src_vm < 0) {
      from = c.src_node;
      to = slot.node;
    } else {
      if (assign_[other] < 0) continue;
      const int other_node = inst_->servers()[assign_[other]].node;
      from = c.src_vm == vm ? slot.node : other_node;
      to = c.src_vm == vm ? other_node : slot.node;
    }
    if (from == to) continue;
    const Path& p = inst_->route(from, to);
    for (int l : p.links) added.emplace_back(l, c.gbps);
    if (inst_->via_olt(p)) olt_added += c.gbps;
  }
  std::vector<double> link = link_;
  for (const auto& [l, g] : added) link[l] += g;
  for (const auto& [l, g] : added) {
    if (exceeds(link[l], topo.link(l).capacity_gbps)) return false;
  }
  if (exceeds(olt_traffic_ + olt_added, inst_->specs().olt.rate_gbps)) return false;

  p_pc_ += marginal_p(vm, server);
  link_ = std::move(link);
  olt_traffic_ += olt_added;
  cpu_[server] += inst_->cpu(vm);
  ram_[server] += inst_->ram(vm);
  ++count_[server];
  assign_[vm] = server;
  return true;
}

}  // namespace fogplace::detail
