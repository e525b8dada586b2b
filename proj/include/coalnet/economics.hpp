#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "json.hpp"

#include "coalnet/errors.hpp"
#include "coalnet/network.hpp"
#include "coalnet/workflow.hpp"

namespace coalnet {

enum class CommMode {
  FixedPerNode,          // comm_fixed per member once the coalition has partners
  DistanceProportional,  // gamma0 * hop distance, summed over partners
};

struct CommModel {
  CommMode mode = CommMode::FixedPerNode;
  double gamma0 = 0.1;  // utility per hop, >= 0; DistanceProportional only
};

// How surplus (reward minus total cost) is distributed on top of cost coverage.
enum class SurplusScheme { Proportional, EqualSplit };

// Effectiveness of deliberation: 1 - exp(-rho * u). Strictly increasing and
// concave in u, approaching 1 from below.
inline double effectiveness(double rho, double u) {
  if (!(rho > 0.0)) throw DomainError("effectiveness: rho must be > 0");
  if (u < 0.0) throw DomainError("effectiveness: effort must be >= 0");
  return -std::expm1(-rho * u);
}

// Execution cost at a node: kappa_cpu * u + kappa_lat * u^2.
inline double node_cost(const NodeProfile& profile, double u) {
  if (u < 0.0) throw DomainError("node_cost: effort must be >= 0");
  return profile.kappa_cpu * u + profile.kappa_lat * u * u;
}

// Task reward: beta * ln(1 + outcome); finite and nonnegative for outcome >= 0.
inline double task_reward(double beta, double outcome) {
  if (!(beta > 0.0)) throw DomainError("task_reward: beta must be > 0");
  if (outcome < 0.0) throw DomainError("task_reward: outcome must be >= 0");
  return beta * std::log1p(outcome);
}

// Communication overhead charged to member i. FixedPerNode charges the node's
// comm_fixed whenever the coalition has more than one member and 0 for a
// singleton; DistanceProportional sums gamma0 * d(i, j) over the other members
// (infinity if some partner is unreachable). Throws InvalidNode if i is not a
// coalition member.
double comm_cost(const Network& net, const std::vector<NodeId>& coalition, NodeId i,
                 const CommModel& model);

// Cost-covering, budget-balanced reward split: w_i = cost_i plus a surplus
// share (proportional to cost, or equal when the scheme says so or all costs
// are zero). Returns nullopt when the costs exceed the reward. When a map is
// returned, sum(w) equals the reward within 1e-9 * max(1, reward) and
// w_i >= cost_i holds exactly.
std::optional<std::map<NodeId, double>> allocate_rewards(
    const std::map<NodeId, double>& costs, double reward,
    SurplusScheme scheme = SurplusScheme::Proportional);

struct EconomicReport {
  std::map<NodeId, double> per_node_effort;
  std::map<NodeId, double> per_node_cost;
  std::map<NodeId, double> per_node_comm;
  double outcome = 0.0;
  double reward = 0.0;
  std::optional<std::map<NodeId, double>> allocation;  // nullopt when over budget
  std::map<NodeId, double> utilities;                  // empty when no allocation
  bool budget_feasible = false;
  bool ir_satisfied = false;
  // With no concurrent outside option, staying in the coalition weakly
  // dominates leaving exactly when utilities are nonnegative.
  bool ic_satisfied = false;
};

// Full economic evaluation of an assigned coalition: executes the workflow,
// then computes per-node costs and communication overhead, the reward, the
// allocation, and the feasibility flags.
EconomicReport evaluate_economics(const Network& net, const TaskSpec& task,
                                  const std::vector<NodeId>& coalition,
                                  const Assignment& asg, const CommModel& comm_model,
                                  SurplusScheme scheme = SurplusScheme::Proportional);

// Same, reusing an execution report (so callers checking output validity first
// do not run the workflow twice).
EconomicReport evaluate_economics_from_execution(const Network& net, const TaskSpec& task,
                                                 const std::vector<NodeId>& coalition,
                                                 const ExecutionReport& exec,
                                                 const CommModel& comm_model,
                                                 SurplusScheme scheme = SurplusScheme::Proportional);

// Sum of per-node cost + communication overhead, in ascending node order.
double coalition_total_cost(const EconomicReport& report);

// Maps keyed by decimal node id; full double precision; allocation null when absent.
void to_json(nlohmann::json& j, const EconomicReport& report);

}  // namespace coalnet
