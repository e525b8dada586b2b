#include "coalnet/economics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "json_util.hpp"

namespace coalnet {

double comm_cost(const Network& net, const std::vector<NodeId>& coalition, NodeId i,
                 const CommModel& model) {
  if (!net.has_node(i)) throw InvalidNode("no node with id " + std::to_string(i));
  if (std::find(coalition.begin(), coalition.end(), i) == coalition.end()) {
    throw InvalidNode("node " + std::to_string(i) + " is not a coalition member");
  }
  if (!(model.gamma0 >= 0.0)) throw InvalidConfig("gamma0 must be >= 0");

  if (model.mode == CommMode::FixedPerNode) {
    return coalition.size() > 1 ? net.nodes[static_cast<size_t>(i)].comm_fixed : 0.0;
  }

  const DistanceMap dm = shortest_path_distances(net, i);
  double total = 0.0;
  for (NodeId j : coalition) {
    if (j == i) continue;
    if (!dm.reachable(j)) return std::numeric_limits<double>::infinity();
    total += model.gamma0 * static_cast<double>(dm[j]);
  }
  return total;
}

std::optional<std::map<NodeId, double>> allocate_rewards(
    const std::map<NodeId, double>& costs, double reward, SurplusScheme scheme) {
  double total = 0.0;
  for (const auto& [i, c] : costs) {
    if (!(c >= 0.0) || !std::isfinite(c)) {
      throw DomainError("allocate_rewards: cost for node " + std::to_string(i) +
                        " must be finite and >= 0");
    }
    total += c;
  }
  if (!std::isfinite(reward) || total > reward) return std::nullopt;
  if (costs.empty()) {
    // Nobody to pay; implementable only when there is nothing to distribute.
    if (reward == 0.0) return std::map<NodeId, double>{};
    return std::nullopt;
  }

  const double surplus = reward - total;
  std::map<NodeId, double> alloc;
  if (scheme == SurplusScheme::EqualSplit || total == 0.0) {
    const double share = surplus / static_cast<double>(costs.size());
    for (const auto& [i, c] : costs) alloc[i] = c + share;
  } else {
    for (const auto& [i, c] : costs) alloc[i] = c + surplus * (c / total);
  }
  return alloc;
}

EconomicReport evaluate_economics_from_execution(const Network& net, const TaskSpec& task,
                                                 const std::vector<NodeId>& coalition,
                                                 const ExecutionReport& exec,
                                                 const CommModel& comm_model,
                                                 SurplusScheme scheme) {
  std::vector<NodeId> members = coalition;
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  for (NodeId i : members) {
    if (!net.has_node(i)) throw InvalidNode("no node with id " + std::to_string(i));
  }
  for (const auto& [i, _] : exec.per_node_effort) {
    if (!std::binary_search(members.begin(), members.end(), i)) {
      throw IncompleteAssignment("assignment uses node " + std::to_string(i) +
                                 " outside the coalition");
    }
  }

  EconomicReport rep;
  rep.outcome = exec.outcome;
  rep.reward = task_reward(task.beta, exec.outcome);

  std::map<NodeId, double> combined;
  for (NodeId i : members) {
    const auto it = exec.per_node_effort.find(i);
    const double u = it == exec.per_node_effort.end() ? 0.0 : it->second;
    rep.per_node_effort[i] = u;
    rep.per_node_cost[i] = node_cost(net.nodes[static_cast<size_t>(i)], u);
    rep.per_node_comm[i] = comm_cost(net, members, i, comm_model);
    combined[i] = rep.per_node_cost[i] + rep.per_node_comm[i];
  }

  double total = 0.0;
  for (const auto& [i, c] : combined) total += c;
  rep.budget_feasible = std::isfinite(total) && total <= rep.reward;

  rep.allocation = std::isfinite(total) ? allocate_rewards(combined, rep.reward, scheme)
                                        : std::nullopt;
  if (rep.allocation) {
    bool ir = true;
    for (const auto& [i, w] : *rep.allocation) {
      // Subtract the combined cost the allocator saw, so pi_i >= 0 is exact
      // whenever w_i covered it.
      const double pi = w - combined.at(i);
      rep.utilities[i] = pi;
      ir = ir && pi >= 0.0;
    }
    rep.ir_satisfied = ir;
  }
  rep.ic_satisfied = rep.ir_satisfied;
  return rep;
}

EconomicReport evaluate_economics(const Network& net, const TaskSpec& task,
                                  const std::vector<NodeId>& coalition,
                                  const Assignment& asg, const CommModel& comm_model,
                                  SurplusScheme scheme) {
  const ExecutionReport exec = execute_workflow(net, task, asg);
  return evaluate_economics_from_execution(net, task, coalition, exec, comm_model, scheme);
}

double coalition_total_cost(const EconomicReport& report) {
  double total = 0.0;
  for (const auto& [i, c] : report.per_node_cost) total += c + report.per_node_comm.at(i);
  return total;
}

namespace {

nlohmann::json node_map_to_json(const std::map<NodeId, double>& m) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [i, v] : m) j[std::to_string(i)] = v;
  return j;
}

}  // namespace

void to_json(nlohmann::json& j, const EconomicReport& report) {
  j = nlohmann::json{{"per_node_effort", node_map_to_json(report.per_node_effort)},
                     {"per_node_cost", node_map_to_json(report.per_node_cost)},
                     {"per_node_comm", node_map_to_json(report.per_node_comm)},
                     {"outcome", report.outcome},
                     {"reward", report.reward},
                     {"allocation", report.allocation ? node_map_to_json(*report.allocation)
                                                      : nlohmann::json(nullptr)},
                     {"utilities", node_map_to_json(report.utilities)},
                     {"budget_feasible", report.budget_feasible},
                     {"ir_satisfied", report.ir_satisfied},
                     {"ic_satisfied", report.ic_satisfied}};
}

}  // namespace coalnet
