#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "coalnet/network.hpp"

namespace coalnet {

// Required agent count per capability; all counts >= 1, at least one entry.
struct RequirementMultiset {
  std::map<Capability, int> counts;
};

struct SubTask {
  std::string id;
  Capability capability;
};

// Directed acyclic dependency graph over sub-tasks: (from, to) means the
// output of `from` feeds `to`.
struct WorkflowDag {
  std::vector<SubTask> subtasks;
  std::vector<std::pair<std::string, std::string>> deps;
};

// How terminal sub-task outputs combine into the scalar workflow outcome.
enum class Aggregation { Product, Mean, Min };

struct TaskSpec {
  NodeId initiator = 0;
  RequirementMultiset requirements;
  WorkflowDag workflow;
  double beta = 1.0;  // reward scale, > 0
  Aggregation aggregation = Aggregation::Product;
};

enum class AssignmentMode {
  Shared,    // an agent may take several sub-tasks; cheapest capable agent per sub-task
  OneToOne,  // maximum bipartite matching, at most one sub-task per agent
};

// Total map sub-task id -> assigned agent.
using Assignment = std::map<std::string, AgentRef>;

struct ExecutionReport {
  std::map<std::string, double> per_subtask_output;  // reliabilities in [0, 1]
  double outcome = 0.0;
  std::map<NodeId, double> per_node_effort;  // nodes absent from the assignment carry 0
};

// Checks invariants that do not need a network: beta > 0, requirement counts
// >= 1 and nonempty, unique sub-task ids, dependency endpoints valid, DAG
// acyclic, and every workflow capability present in the requirements.
void validate_task_spec(const TaskSpec& task);

// Deterministic topological order (Kahn's algorithm, ties broken by sub-task
// id). Throws CycleError listing one cycle, ValidationError on bad structure.
std::vector<std::string> validate_workflow(const WorkflowDag& w);

// Sub-task ids with no outgoing dependency edge, sorted.
std::vector<std::string> terminal_subtasks(const WorkflowDag& w);

// Sub-task -> agent assignment over the coalition's agents, or nullopt when
// none exists. Shared mode picks, per sub-task, the capable agent with the
// smallest baseline effort (ties by (node id, agent id)); OneToOne computes a
// maximum bipartite matching and requires it to cover every sub-task. Pure and
// deterministic for fixed inputs.
std::optional<Assignment> find_assignment(const Network& net,
                                          const std::vector<NodeId>& coalition,
                                          const WorkflowDag& w, AssignmentMode mode);

// Runs the workflow in topological order. Each sub-task's output is
// alpha_node * (1 - exp(-rho_node * u_agent)) times the product of its
// predecessors' outputs; source sub-tasks see exogenous input reliability 1.
// The outcome aggregates terminal outputs per task.aggregation. Node effort is
// the agent baseline times the number of sub-tasks the agent carries. Throws
// IncompleteAssignment if asg is not total and capability-consistent.
ExecutionReport execute_workflow(const Network& net, const TaskSpec& task,
                                 const Assignment& asg);

// TaskSpec JSON form:
//   {"initiator", "beta", "aggregation", "requirements": {cap: count},
//    "workflow": {"subtasks": [{"id", "capability"}], "deps": [[from, to]]}}
void to_json(nlohmann::json& j, const TaskSpec& task);
void from_json(const nlohmann::json& j, TaskSpec& task);

std::string to_string(Aggregation a);
Aggregation aggregation_from_string(const std::string& s);

}  // namespace coalnet
