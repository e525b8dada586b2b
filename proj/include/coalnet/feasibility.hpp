#pragma once

#include <optional>
#include <vector>

#include "json.hpp"

#include "coalnet/economics.hpp"
#include "coalnet/network.hpp"
#include "coalnet/workflow.hpp"

namespace coalnet {

// The six feasibility conditions, checked in this order; a verdict names the
// first one that fails.
enum class FeasibilityFailure {
  Covering,    // initiator present and capability counts met
  Assignment,  // a capability-consistent sub-task assignment exists
  Output,      // workflow execution yields finite outputs
  Reward,      // reward finite and nonnegative
  Budget,      // total cost within the reward
  Incentive,   // a cost-covering budget-balanced allocation exists
};

struct FeasibilityVerdict {
  bool feasible = false;
  std::optional<FeasibilityFailure> failed_condition;
  std::optional<Assignment> assignment;     // present when feasible
  std::optional<EconomicReport> report;     // present when feasible
};

// True iff the initiator is a member and, for every required capability, the
// coalition hosts at least the required number of distinct agents holding it.
bool is_capability_covering(const Network& net, const std::vector<NodeId>& coalition,
                            NodeId initiator, const RequirementMultiset& reqs);

// True iff the full k-hop neighborhood of the initiator is capability-covering
// (covering is monotone under coalition growth, so this is equivalent to the
// existence of a covering subset within k hops).
bool is_k_degree_feasible(const Network& net, NodeId initiator,
                          const RequirementMultiset& reqs, int k);

// Smallest k <= k_max at which the task is k-degree feasible; nullopt when
// none exists (globally infeasible once k_max reaches the graph diameter).
std::optional<int> feasibility_radius(const Network& net, NodeId initiator,
                                      const RequirementMultiset& reqs, int k_max);

// Runs the six conditions in order and returns either the first failure or
// the witnessing assignment and economic report. Deterministic, never throws
// for a structurally valid coalition/task pair.
FeasibilityVerdict check_workflow_coalition_feasibility(const Network& net,
                                                        const TaskSpec& task,
                                                        const std::vector<NodeId>& coalition,
                                                        const CommModel& comm_model,
                                                        AssignmentMode asg_mode);

const char* to_string(FeasibilityFailure f);

void to_json(nlohmann::json& j, const FeasibilityVerdict& verdict);

}  // namespace coalnet
