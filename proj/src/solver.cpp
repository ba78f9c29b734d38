#include "fogplace/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "fogplace/errors.hpp"
#include "instance.hpp"

namespace fogplace {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kFeasible: return "feasible";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kAborted: return "aborted";
  }
  return "?";
}

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kInf = std::numeric_limits<double>::infinity();

Solution finish(const detail::Instance& inst, const std::vector<int>* server_of_vm, SolveStatus status,
                std::uint64_t nodes, Clock::time_point started) {
  Solution sol;
  sol.status = status;
  sol.nodes_explored = nodes;
  if (server_of_vm != nullptr) {
    const auto servers = inst.servers();
    for (int v = 0; v < inst.vm_count(); ++v) {
      sol.placement.assign.emplace(v, inst.topology().node(servers[(*server_of_vm)[v]].node));
    }
    sol.flows = route_flows(sol.placement, inst.workload(), inst.topology());
    sol.report = evaluate(sol.placement, sol.flows, inst.topology(), inst.workload(), inst.specs(), inst.weights());
  }
  sol.solve_seconds = std::chrono::duration<double>(Clock::now() - started).count();
  return sol;
}

class BranchAndBound {
 public:
  BranchAndBound(const detail::Instance& inst, Clock::time_point deadline)
      : inst_(inst), eval_(inst), deadline_(deadline), stack_(inst.vm_count() + 1, detail::SearchState(inst)) {
    int classes = 0;
    for (const auto& s : inst.servers()) classes = std::max(classes, s.klass + 1);
    class_count_ = classes;
    classes_.resize(classes);
    for (const auto& s : inst.servers()) classes_[s.klass] = {s.slope, s.fixed_w, s.cpu_cap, 0.0, 0};
    for (int c = 0; c < classes; ++c) by_slope_.push_back(c);
    std::stable_sort(by_slope_.begin(), by_slope_.end(),
                     [&](int a, int b) { return classes_[a].slope < classes_[b].slope; });
  }

  void run() {
    if (!inst_.access_power()) return;
    search(0);
  }

  bool found() const { return found_; }
  bool aborted() const { return aborted_; }
  const std::vector<int>& best() const { return best_assign_; }
  std::uint64_t nodes() const { return nodes_; }

 private:
  // Partial power plus a relaxation of hosting the remaining CPU demand.
  // For every choice of how many idle servers of each class get switched on
  // (enough to cover the demand), the fixed power of those servers is paid in
  // full and the demand is spread fractionally over the available room at
  // each class's slope; the cheapest choice is the bound. Residual room
  // smaller than the smallest remaining VM is unusable. Network terms only
  // grow with further assignments, so the partial N_PC is itself a bound.
  std::optional<detail::Score> lower_bound(const detail::SearchState& st, int depth) {
    const auto order = inst_.vm_order();
    double demand = 0.0;
    double smallest = kInf;
    for (int k = depth; k < inst_.vm_count(); ++k) {
      const int u = order[k];
      bool fits = false;
      for (int s = 0; s < inst_.server_count() && !fits; ++s) {
        fits = !detail::exceeds(inst_.cpu(u), st.cpu_residual(s)) && !detail::exceeds(inst_.ram(u), st.ram_residual(s));
      }
      if (!fits) return std::nullopt;
      demand += inst_.cpu(u);
      smallest = std::min(smallest, inst_.cpu(u));
    }
    if (demand == 0.0) return inst_.score(st.partial_n(), st.partial_p());

    for (auto& c : classes_) {
      c.room = 0.0;
      c.idle = 0;
    }
    for (int s = 0; s < inst_.server_count(); ++s) {
      ClassState& c = classes_[inst_.servers()[s].klass];
      if (st.hosted(s) == 0) {
        ++c.idle;
      } else if (!detail::exceeds(smallest, st.cpu_residual(s))) {
        c.room += st.cpu_residual(s);
      }
    }
    double combos = 1.0;
    for (const auto& c : classes_) combos *= c.idle + 1;

    double best = kInf;
    if (combos <= 4096.0) {
      std::vector<int> opened(classes_.size(), 0);
      while (true) {
        double fixed = 0.0;
        double capacity = 0.0;
        for (std::size_t c = 0; c < classes_.size(); ++c) {
          fixed += opened[c] * classes_[c].fixed_w;
          capacity += classes_[c].room + opened[c] * classes_[c].cap;
        }
        if (fixed < best && !detail::exceeds(demand, capacity)) {
          double left = demand;
          double cost = fixed;
          for (int c : by_slope_) {
            const double take = std::min(left, classes_[c].room + opened[c] * classes_[c].cap);
            cost += classes_[c].slope * take;
            left -= take;
          }
          best = std::min(best, cost);
        }
        std::size_t c = 0;
        while (c < classes_.size() && ++opened[c] > classes_[c].idle) opened[c++] = 0;
        if (c == classes_.size()) break;
      }
    } else {
      // Too many combinations: spread fixed power over idle capacity instead.
      std::vector<std::pair<double, double>> slots;
      for (const auto& c : classes_) {
        slots.push_back({c.slope, c.room});
        slots.push_back({c.slope + c.fixed_w / c.cap, c.idle * c.cap});
      }
      std::sort(slots.begin(), slots.end());
      double left = demand;
      best = 0.0;
      for (const auto& [per_ghz, room] : slots) {
        const double take = std::min(left, room);
        best += per_ghz * take;
        left -= take;
      }
      if (detail::exceeds(left, 0.0)) best = kInf;
    }
    if (best == kInf) return std::nullopt;
    return inst_.score(st.partial_n(), st.partial_p() + best);
  }

  void search(int depth) {
    if (depth == inst_.vm_count()) {
      const auto e = eval_(stack_[depth].assignment());
      if (e && (!found_ || inst_.better(e->score, best_score_))) {
        found_ = true;
        best_score_ = e->score;
        best_assign_.assign(stack_[depth].assignment().begin(), stack_[depth].assignment().end());
      }
      return;
    }
    const int vm = inst_.vm_order()[depth];
    std::vector<char> empty_tried(class_count_, 0);
    for (int s = 0; s < inst_.server_count(); ++s) {
      if (aborted_) return;
      const detail::SearchState& cur = stack_[depth];
      if (cur.hosted(s) == 0) {
        // Empty servers of one class are interchangeable; only the first is
        // branched on, which is also the lexicographically smallest choice.
        char& tried = empty_tried[inst_.servers()[s].klass];
        if (tried) continue;
        tried = 1;
      }
      detail::SearchState& next = stack_[depth + 1];
      next = cur;
      if (!next.try_assign(vm, s)) continue;
      if ((++nodes_ & 1023) == 0 && Clock::now() > deadline_) {
        aborted_ = true;
        return;
      }
      const auto bound = lower_bound(next, depth + 1);
      if (!bound) continue;
      if (found_ && inst_.prunable(*bound, best_score_)) continue;
      search(depth + 1);
    }
  }

  const detail::Instance& inst_;
  detail::Evaluator eval_;
  Clock::time_point deadline_;
  std::vector<detail::SearchState> stack_;
  int class_count_ = 0;
  bool found_ = false;
  bool aborted_ = false;
  detail::Score best_score_;
  std::vector<int> best_assign_;
  std::uint64_t nodes_ = 0;
  struct ClassState {
    double slope = 0.0;
    double fixed_w = 0.0;
    double cap = 0.0;
    double room = 0.0;  // usable residual on running servers
    int idle = 0;
  };
  std::vector<ClassState> classes_;
  std::vector<int> by_slope_;
};

}  // namespace

Solution solve_bnb(const Workload& workload, const Topology& topology, const DeviceSpecs& specs,
                   const Weights& weights, const SolveOptions& options) {
  const auto started = Clock::now();
  const detail::Instance inst(workload, topology, specs, weights);
  const auto budget = std::chrono::duration_cast<Clock::duration>(options.time_budget);
  BranchAndBound bnb(inst, started + budget);
  bnb.run();
  if (bnb.aborted()) {
    return finish(inst, bnb.found() ? &bnb.best() : nullptr, SolveStatus::kAborted, bnb.nodes(), started);
  }
  if (!bnb.found()) return finish(inst, nullptr, SolveStatus::kInfeasible, bnb.nodes(), started);
  return finish(inst, &bnb.best(), SolveStatus::kOptimal, bnb.nodes(), started);
}

Solution solve_bruteforce(const Workload& workload, const Topology& topology, const DeviceSpecs& specs,
                          const Weights& weights, const SolveOptions& options) {
  const auto started = Clock::now();
  const detail::Instance inst(workload, topology, specs, weights);
  const int n = inst.vm_count();
  const int m = inst.server_count();
  const double candidates = std::pow(static_cast<double>(m), n);
  if (candidates > options.oracle_cap) {
    throw OracleScopeError("brute force over " + std::to_string(m) + "^" + std::to_string(n) +
                           " assignments exceeds the oracle cap");
  }

  detail::Evaluator eval(inst);
  const auto order = inst.vm_order();
  // digits[k] is the server of the k-th VM in canonical order; the first VM
  // is the most significant digit, so the walk is in lexicographic order.
  std::vector<int> digits(n, 0);
  std::vector<int> assign(n, 0);
  std::vector<int> best;
  bool found = false;
  detail::Score best_score;
  std::uint64_t count = 0;
  while (true) {
    ++count;
    for (int k = 0; k < n; ++k) assign[order[k]] = digits[k];
    const auto e = eval(assign);
    if (e && (!found || inst.better(e->score, best_score))) {
      found = true;
      best = assign;
      best_score = e->score;
    }
    int k = n - 1;
    while (k >= 0 && ++digits[k] == m) digits[k--] = 0;
    if (k < 0) break;
  }
  if (!found) return finish(inst, nullptr, SolveStatus::kInfeasible, count, started);
  return finish(inst, &best, SolveStatus::kOptimal, count, started);
}

Solution solve_greedy(const Workload& workload, const Topology& topology, const DeviceSpecs& specs,
                      const Weights& weights) {
  const auto started = Clock::now();
  const detail::Instance inst(workload, topology, specs, weights);
  if (!inst.access_power()) return finish(inst, nullptr, SolveStatus::kInfeasible, 0, started);

  std::uint64_t nodes = 0;
  auto take = [&](const detail::SearchState& st) {
    std::vector<int> a(st.assignment().begin(), st.assignment().end());
    return finish(inst, &a, SolveStatus::kFeasible, nodes, started);
  };

  detail::SearchState st(inst);
  bool dead_end = false;
  for (int vm : inst.vm_order()) {
    std::optional<detail::SearchState> chosen;
    detail::Score chosen_score;
    for (int s = 0; s < inst.server_count(); ++s) {
      detail::SearchState trial = st;
      if (!trial.try_assign(vm, s)) continue;
      ++nodes;
      const detail::Score sc = inst.score(trial.partial_n(), trial.partial_p());
      if (!chosen || inst.better(sc, chosen_score)) {
        chosen = std::move(trial);
        chosen_score = sc;
      }
    }
    if (!chosen) {
      dead_end = true;
      break;
    }
    st = std::move(*chosen);
  }
  if (!dead_end) return take(st);

  // First-fit-decreasing fallback.
  detail::SearchState ffd(inst);
  for (int vm : inst.vm_order()) {
    bool placed = false;
    for (int s = 0; s < inst.server_count() && !placed; ++s) {
      ++nodes;
      placed = ffd.try_assign(vm, s);
    }
    if (!placed) return finish(inst, nullptr, SolveStatus::kInfeasible, nodes, started);
  }
  return take(ffd);
}

}  // namespace fogplace
