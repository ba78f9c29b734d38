#pragma once

// Compact, index-based view of a placement problem shared by the solvers.

#include <optional>
#include <span>
#include <vector>

#include "fogplace/power.hpp"
#include "fogplace/topology.hpp"
#include "fogplace/workload.hpp"

namespace fogplace::detail {

struct ServerSlot {
  int node = 0;       // topology handle
  int klass = 0;      // servers of one class are interchangeable
  const ServerSpec* spec = nullptr;
  double cpu_cap = 0.0;
  double ram_cap = 0.0;
  double slope = 0.0;  // W per GHz
  double fixed_w = 0.0;  // idle server + its on/off ONU
};

struct Commodity {
  int src_vm = -1;    // -1 for ingress
  int dst_vm = 0;
  int src_node = -1;  // access ONU handle for ingress
  double gbps = 0.0;
};

// Lexicographic pair; weighted runs leave `secondary` at zero.
struct Score {
  double primary = 0.0;
  double secondary = 0.0;
};

class Instance {
 public:
  Instance(const Workload& workload, const Topology& topology, const DeviceSpecs& specs, const Weights& weights);

  const Workload& workload() const { return workload_; }
  const Topology& topology() const { return topology_; }
  const DeviceSpecs& specs() const { return specs_; }
  const Weights& weights() const { return weights_; }

  int vm_count() const { return static_cast<int>(cpu_.size()); }
  int server_count() const { return static_cast<int>(servers_.size()); }
  std::span<const ServerSlot> servers() const { return servers_; }
  // Descending cpu, ties by id.
  std::span<const int> vm_order() const { return vm_order_; }
  double cpu(int vm) const { return cpu_[vm]; }
  double ram(int vm) const { return ram_[vm]; }
  std::span<const Commodity> commodities() const { return commodities_; }
  // Commodities with vm as an endpoint.
  std::span<const int> commodities_of(int vm) const { return by_vm_[vm]; }

  // Access ONU power is fixed by the workload; nullopt when some access
  // ONU's ingress exceeds its rate, which makes every placement infeasible.
  std::optional<double> access_power() const { return access_w_; }

  // Links and whether the OLT is on the route between two nodes.
  const Path& route(int from_node, int to_node) const { return topology_.path(from_node, to_node); }
  bool via_olt(const Path& p) const;

  Score score(double n_pc, double p_pc) const;
  // a improves on b by more than the comparison tolerance.
  bool better(const Score& a, const Score& b) const;
  // No completion of a node with this lower bound can improve on best.
  bool prunable(const Score& bound, const Score& best) const;

 private:
  const Workload& workload_;
  const Topology& topology_;
  const DeviceSpecs& specs_;
  Weights weights_;
  std::vector<ServerSlot> servers_;
  std::vector<int> vm_order_;
  std::vector<double> cpu_;
  std::vector<double> ram_;
  std::vector<Commodity> commodities_;
  std::vector<std::vector<int>> by_vm_;
  std::optional<double> access_w_;
};

struct Evaluation {
  double n_pc = 0.0;
  double p_pc = 0.0;
  Score score;
};

// Recomputes a complete assignment from scratch (server ordinal per VM id).
// nullopt when any capacity or rate limit is violated. Used at the leaves of
// every solver so equal assignments give bit-identical scores.
class Evaluator {
 public:
  explicit Evaluator(const Instance& instance);
  std::optional<Evaluation> operator()(std::span<const int> server_of_vm);

 private:
  const Instance& inst_;
  std::vector<double> cpu_;
  std::vector<double> ram_;
  std::vector<int> count_;
  std::vector<double> link_;
};

// Partial assignment with incremental loads, for tree search and greedy.
class SearchState {
 public:
  explicit SearchState(const Instance& instance);

  // Applies vm -> server if CPU, RAM, link and OLT limits still hold.
  bool try_assign(int vm, int server);

  int server_of(int vm) const { return assign_[vm]; }
  std::span<const int> assignment() const { return assign_; }
  int hosted(int server) const { return count_[server]; }
  double cpu_residual(int server) const;
  double ram_residual(int server) const;

  double partial_p() const { return p_pc_; }
  double partial_n() const;
  // Objective increase of assigning vm to server, ignoring network.
  double marginal_p(int vm, int server) const;

 private:
  const Instance* inst_;
  std::vector<int> assign_;
  std::vector<double> cpu_;
  std::vector<double> ram_;
  std::vector<int> count_;
  std::vector<double> link_;
  double olt_traffic_ = 0.0;
  double p_pc_ = 0.0;
};

bool exceeds(double load, double limit);

}  // namespace fogplace::detail
