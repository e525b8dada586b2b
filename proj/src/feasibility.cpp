#include "coalnet/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "json_util.hpp"

namespace coalnet {

bool is_capability_covering(const Network& net, const std::vector<NodeId>& coalition,
                            NodeId initiator, const RequirementMultiset& reqs) {
  if (std::find(coalition.begin(), coalition.end(), initiator) == coalition.end()) {
    return false;
  }
  for (const auto& [cap, required] : reqs.counts) {
    int count = 0;
    for (NodeId i : coalition) {
      if (!net.has_node(i)) throw InvalidNode("no node with id " + std::to_string(i));
      for (const auto& agent : net.nodes[static_cast<size_t>(i)].agents) {
        if (std::binary_search(agent.capabilities.begin(), agent.capabilities.end(), cap)) {
          ++count;
        }
      }
    }
    if (count < required) return false;
  }
  return true;
}

bool is_k_degree_feasible(const Network& net, NodeId initiator,
                          const RequirementMultiset& reqs, int k) {
  return is_capability_covering(net, k_hop_neighborhood(net, initiator, k), initiator, reqs);
}

std::optional<int> feasibility_radius(const Network& net, NodeId initiator,
                                      const RequirementMultiset& reqs, int k_max) {
  if (k_max < 0) throw DomainError("k_max must be >= 0");
  const DistanceMap dm = shortest_path_distances(net, initiator);
  std::vector<NodeId> neighborhood;
  for (int k = 0; k <= k_max; ++k) {
    for (int i = 0; i < net.size(); ++i) {
      if (dm.reachable(i) && dm[i] == k) neighborhood.push_back(i);
    }
    if (is_capability_covering(net, neighborhood, initiator, reqs)) return k;
  }
  return std::nullopt;
}

FeasibilityVerdict check_workflow_coalition_feasibility(const Network& net,
                                                        const TaskSpec& task,
                                                        const std::vector<NodeId>& coalition,
                                                        const CommModel& comm_model,
                                                        AssignmentMode asg_mode) {
  const auto fail = [](FeasibilityFailure f) {
    FeasibilityVerdict v;
    v.failed_condition = f;
    return v;
  };

  if (!is_capability_covering(net, coalition, task.initiator, task.requirements)) {
    return fail(FeasibilityFailure::Covering);
  }

  const auto asg = find_assignment(net, coalition, task.workflow, asg_mode);
  if (!asg) return fail(FeasibilityFailure::Assignment);

  ExecutionReport exec;
  try {
    exec = execute_workflow(net, task, *asg);
  } catch (const Error&) {
    return fail(FeasibilityFailure::Output);
  }
  if (!std::isfinite(exec.outcome)) return fail(FeasibilityFailure::Output);
  for (const auto& [id, out] : exec.per_subtask_output) {
    if (!std::isfinite(out)) return fail(FeasibilityFailure::Output);
  }

  double reward = 0.0;
  try {
    reward = task_reward(task.beta, exec.outcome);
  } catch (const Error&) {
    return fail(FeasibilityFailure::Reward);
  }
  if (!(std::isfinite(reward) && reward >= 0.0)) return fail(FeasibilityFailure::Reward);

  const EconomicReport report =
      evaluate_economics_from_execution(net, task, coalition, exec, comm_model);
  if (!report.budget_feasible) return fail(FeasibilityFailure::Budget);
  if (!report.allocation || !report.ir_satisfied) return fail(FeasibilityFailure::Incentive);

  FeasibilityVerdict v;
  v.feasible = true;
  v.assignment = asg;
  v.report = report;
  return v;
}

const char* to_string(FeasibilityFailure f) {
  switch (f) {
    case FeasibilityFailure::Covering: return "COVERING";
    case FeasibilityFailure::Assignment: return "ASSIGNMENT";
    case FeasibilityFailure::Output: return "OUTPUT";
    case FeasibilityFailure::Reward: return "REWARD";
    case FeasibilityFailure::Budget: return "BUDGET";
    case FeasibilityFailure::Incentive: return "INCENTIVE";
  }
  return "UNKNOWN";
}

void to_json(nlohmann::json& j, const FeasibilityVerdict& verdict) {
  using nlohmann::json;
  j = json{{"feasible", verdict.feasible}};
  j["failed_condition"] =
      verdict.failed_condition ? json(to_string(*verdict.failed_condition)) : json(nullptr);
  if (verdict.assignment) {
    json asg = json::object();
    for (const auto& [id, ref] : *verdict.assignment) {
      asg[id] = {{"node", ref.node}, {"agent", ref.agent}};
    }
    j["assignment"] = std::move(asg);
  } else {
    j["assignment"] = nullptr;
  }
  if (verdict.report) {
    j["report"] = *verdict.report;
  } else {
    j["report"] = nullptr;
  }
}

}  // namespace coalnet
