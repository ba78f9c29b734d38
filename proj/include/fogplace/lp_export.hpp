#pragma once

#include <string>
#include <vector>

#include "fogplace/power.hpp"
#include "fogplace/topology.hpp"
#include "fogplace/workload.hpp"

namespace fogplace {

struct LinearTerm {
  double coef = 0.0;
  std::string var;
};

enum class Relation { kLessEqual, kEqual, kGreaterEqual };

struct LinearConstraint {
  std::string name;
  std::vector<LinearTerm> terms;
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
};

struct VariableBound {
  std::string var;
  double lower = 0.0;
  double upper = 0.0;  // lower == upper fixes the variable
};

// The placement MILP in solver-neutral form.
//
//   x_v<v>_<server>            binary, VM v runs on server
//   y_<server>                 binary, server (and its ONU) is on
//   f_k<k>_<from>_to_<to>      Gbps of commodity k on a directed link
//   const_one                  fixed at 1; carries the objective constant
//
// Commodity k is the k-th positive inter-VM demand in traffic-matrix order
// followed by the ingress demands in VM order.
struct MilpDocument {
  std::string name;
  std::vector<LinearTerm> objective;
  double objective_constant = 0.0;  // also present as a const_one term
  std::vector<LinearConstraint> constraints;
  std::vector<VariableBound> bounds;
  std::vector<std::string> binaries;
  std::vector<std::string> continuous;

  std::size_t variable_count() const { return binaries.size() + continuous.size(); }
};

// Builds the full model: assignment equalities, CPU and RAM capacity,
// activity coupling, per-commodity flow conservation with the demand tied
// to the endpoint assignments, link capacity and the OLT rate. The objective
// is alpha * N_PC + beta * P_PC with the same device models as evaluate().
// Throws InvalidConfig for lexicographic weights, which have no single
// linear objective.
MilpDocument export_milp(const Workload& workload, const Topology& topology, const DeviceSpecs& specs,
                         const Weights& weights, std::string name = "fogplace");

// Plain-text LP format (Minimize / Subject To / Bounds / Binaries / End).
// Deterministic for a given document.
std::string to_lp_text(const MilpDocument& doc);

}  // namespace fogplace
