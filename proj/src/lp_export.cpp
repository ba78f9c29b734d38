#include "fogplace/lp_export.hpp"

#include <charconv>
#include <map>

#include "fogplace/errors.hpp"

namespace fogplace {

namespace {

std::string number(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

std::string assign_var(int vm, const NodeId& server) { return "x_v" + std::to_string(vm) + "_" + server.name(); }
std::string active_var(const NodeId& server) { return "y_" + server.name(); }
std::string flow_var(int k, const NodeId& from, const NodeId& to) {
  return "f_k" + std::to_string(k) + "_" + from.name() + "_to_" + to.name();
}

struct Demand {
  int src_vm;     // -1 for ingress
  int dst_vm;
  NodeId source;  // ingress origin
  double gbps;
};

}  // namespace

MilpDocument export_milp(const Workload& workload, const Topology& topology, const DeviceSpecs& specs,
                         const Weights& weights, std::string name) {
  if (weights.lexicographic) throw InvalidConfig("lexicographic weights cannot be exported as one objective");
  validate_specs(specs, topology.cell_count());

  MilpDocument doc;
  doc.name = std::move(name);
  const double alpha = weights.alpha;
  const double beta = weights.beta;
  const int n = static_cast<int>(workload.vms.size());

  std::vector<Demand> demands;
  for (const auto& [key, gbps] : workload.traffic) {
    if (gbps > 0.0) demands.push_back({key.first, key.second, {}, gbps});
  }
  std::map<NodeId, double> ingress_at;
  for (const VmRequest& vm : workload.vms) {
    if (vm.ingress_gbps > 0.0) {
      demands.push_back({-1, vm.id, vm.origin, vm.ingress_gbps});
      ingress_at[vm.origin] += vm.ingress_gbps;
    }
  }

  // Constant part of N_PC: access ONUs carry exactly their own ingress, and
  // the OLT idle floor is always on.
  double constant = specs.olt.idle_w;
  for (int h : topology.access_onus()) {
    const auto it = ingress_at.find(topology.node(h));
    constant += onu_power(specs.access_onu, it == ingress_at.end() ? 0.0 : it->second, true);
  }
  doc.objective_constant = alpha * constant;

  auto add_obj = [&](double coef, std::string var) {
    if (coef != 0.0) doc.objective.push_back({coef, std::move(var)});
  };

  const auto servers = topology.servers();
  for (int h : servers) {
    const NodeId& s = topology.node(h);
    const ServerSpec& spec = specs.server_for_cell(s.cell);
    add_obj(beta * (spec.idle_w + onu_power(specs.server_onu, 0.0, true)), active_var(s));
    for (int v = 0; v < n; ++v) add_obj(beta * spec.slope() * workload.vms[v].cpu_ghz, assign_var(v, s));
  }
  const int olt = topology.olt_handle();
  const double olt_slope = (specs.olt.max_w - specs.olt.idle_w) / specs.olt.rate_gbps;
  for (std::size_t k = 0; k < demands.size(); ++k) {
    for (const auto& adj : topology.neighbours(olt)) {
      add_obj(alpha * olt_slope, flow_var(static_cast<int>(k), topology.node(adj.node), NodeId::olt()));
    }
  }
  doc.objective.push_back({doc.objective_constant, "const_one"});

  for (int v = 0; v < n; ++v) {
    LinearConstraint c{"assign_v" + std::to_string(v), {}, Relation::kEqual, 1.0};
    for (int h : servers) c.terms.push_back({1.0, assign_var(v, topology.node(h))});
    doc.constraints.push_back(std::move(c));
  }
  for (int h : servers) {
    const NodeId& s = topology.node(h);
    const ServerSpec& spec = specs.server_for_cell(s.cell);
    LinearConstraint cpu{"cpu_" + s.name(), {}, Relation::kLessEqual, spec.cpu_ghz};
    LinearConstraint ram{"ram_" + s.name(), {}, Relation::kLessEqual, spec.ram_mb()};
    for (int v = 0; v < n; ++v) {
      cpu.terms.push_back({workload.vms[v].cpu_ghz, assign_var(v, s)});
      ram.terms.push_back({workload.vms[v].ram_mb, assign_var(v, s)});
    }
    doc.constraints.push_back(std::move(cpu));
    doc.constraints.push_back(std::move(ram));
  }
  for (int h : servers) {
    const NodeId& s = topology.node(h);
    for (int v = 0; v < n; ++v) {
      doc.constraints.push_back({"act_v" + std::to_string(v) + "_" + s.name(),
                                 {{1.0, assign_var(v, s)}, {-1.0, active_var(s)}},
                                 Relation::kLessEqual,
                                 0.0});
    }
  }

  // Flow conservation: out - in = demand * (x[src, m] - x[dst, m]) at
  // servers, = demand at an ingress origin, 0 elsewhere.
  for (std::size_t k = 0; k < demands.size(); ++k) {
    const Demand& d = demands[k];
    const int ki = static_cast<int>(k);
    for (int m = 0; m < static_cast<int>(topology.node_count()); ++m) {
      const NodeId& node = topology.node(m);
      LinearConstraint c{"flow_k" + std::to_string(k) + "_" + node.name(), {}, Relation::kEqual, 0.0};
      for (const auto& adj : topology.neighbours(m)) {
        c.terms.push_back({1.0, flow_var(ki, node, topology.node(adj.node))});
        c.terms.push_back({-1.0, flow_var(ki, topology.node(adj.node), node)});
      }
      if (node.kind == NodeKind::kServerOnu) {
        if (d.src_vm >= 0) c.terms.push_back({-d.gbps, assign_var(d.src_vm, node)});
        c.terms.push_back({d.gbps, assign_var(d.dst_vm, node)});
      }
      if (d.src_vm < 0 && node == d.source) c.rhs = d.gbps;
      doc.constraints.push_back(std::move(c));
    }
  }
  if (!demands.empty()) {
    for (const Link& l : topology.links()) {
      const NodeId& a = topology.node(l.a);
      const NodeId& b = topology.node(l.b);
      LinearConstraint c{"cap_" + a.name() + "_" + b.name(), {}, Relation::kLessEqual, l.capacity_gbps};
      for (std::size_t k = 0; k < demands.size(); ++k) {
        c.terms.push_back({1.0, flow_var(static_cast<int>(k), a, b)});
        c.terms.push_back({1.0, flow_var(static_cast<int>(k), b, a)});
      }
      doc.constraints.push_back(std::move(c));
    }
    LinearConstraint rate{"olt_rate", {}, Relation::kLessEqual, specs.olt.rate_gbps};
    for (std::size_t k = 0; k < demands.size(); ++k) {
      for (const auto& adj : topology.neighbours(olt)) {
        rate.terms.push_back({1.0, flow_var(static_cast<int>(k), topology.node(adj.node), NodeId::olt())});
      }
    }
    doc.constraints.push_back(std::move(rate));
  }

  doc.bounds.push_back({"const_one", 1.0, 1.0});
  for (int h : servers) {
    const NodeId& s = topology.node(h);
    for (int v = 0; v < n; ++v) doc.binaries.push_back(assign_var(v, s));
  }
  for (int h : servers) doc.binaries.push_back(active_var(topology.node(h)));
  for (std::size_t k = 0; k < demands.size(); ++k) {
    for (const Link& l : topology.links()) {
      doc.continuous.push_back(flow_var(static_cast<int>(k), topology.node(l.a), topology.node(l.b)));
      doc.continuous.push_back(flow_var(static_cast<int>(k), topology.node(l.b), topology.node(l.a)));
    }
  }
  doc.continuous.push_back("const_one");
  return doc;
}

namespace {

void write_terms(std::string& out, const std::vector<LinearTerm>& terms, std::size_t indent) {
  std::size_t column = indent;
  bool first = true;
  for (const LinearTerm& t : terms) {
    std::string piece;
    if (t.coef < 0.0) {
      piece = "- " + number(-t.coef);
    } else {
      piece = (first ? "" : "+ ") + number(t.coef);
    }
    piece += " " + t.var;
    if (!first && column + piece.size() + 1 > 78) {
      out += "\n   ";
      column = 3;
    } else if (!first) {
      out += ' ';
      ++column;
    }
    out += piece;
    column += piece.size();
    first = false;
  }
  if (terms.empty()) out += "0 const_one";
}

}  // namespace

std::string to_lp_text(const MilpDocument& doc) {
  std::string out;
  out += "\\ placement model " + doc.name + "\n";
  out += "\\ objective constant " + number(doc.objective_constant) + " carried by const_one\n";
  out += "Minimize\n obj: ";
  write_terms(out, doc.objective, 6);
  out += "\nSubject To\n";
  for (const LinearConstraint& c : doc.constraints) {
    out += " " + c.name + ": ";
    write_terms(out, c.terms, c.name.size() + 3);
    switch (c.relation) {
      case Relation::kLessEqual: out += " <= "; break;
      case Relation::kEqual: out += " = "; break;
      case Relation::kGreaterEqual: out += " >= "; break;
    }
    out += number(c.rhs) + "\n";
  }
  out += "Bounds\n";
  for (const VariableBound& b : doc.bounds) {
    if (b.lower == b.upper) {
      out += " " + b.var + " = " + number(b.lower) + "\n";
    } else {
      out += " " + number(b.lower) + " <= " + b.var + " <= " + number(b.upper) + "\n";
    }
  }
  out += "Binaries\n";
  for (const std::string& b : doc.binaries) out += " " + b + "\n";
  out += "End\n";
  return out;
}

}  // namespace fogplace
