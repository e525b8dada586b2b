#include "coalnet/workflow.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "coalnet/economics.hpp"
#include "coalnet/errors.hpp"
#include "json_util.hpp"

namespace coalnet {

namespace {

std::map<std::string, size_t> index_subtasks(const WorkflowDag& w) {
  std::map<std::string, size_t> idx;
  for (size_t i = 0; i < w.subtasks.size(); ++i) {
    const auto& st = w.subtasks[i];
    if (st.id.empty()) throw ValidationError("sub-task with empty id");
    if (!idx.emplace(st.id, i).second) {
      throw ValidationError("duplicate sub-task id \"" + st.id + "\"");
    }
  }
  return idx;
}

void check_dep_refs(const WorkflowDag& w, const std::map<std::string, size_t>& idx) {
  for (const auto& [from, to] : w.deps) {
    if (!idx.count(from)) throw ValidationError("dependency references unknown sub-task \"" + from + "\"");
    if (!idx.count(to)) throw ValidationError("dependency references unknown sub-task \"" + to + "\"");
  }
}

}  // namespace

std::vector<std::string> validate_workflow(const WorkflowDag& w) {
  const auto idx = index_subtasks(w);
  check_dep_refs(w, idx);

  std::map<std::string, std::set<std::string>> succs, preds;
  for (const auto& st : w.subtasks) {
    succs[st.id];
    preds[st.id];
  }
  for (const auto& [from, to] : w.deps) {
    succs[from].insert(to);
    preds[to].insert(from);
  }

  std::map<std::string, int> in_degree;
  std::set<std::string> ready;
  for (const auto& [id, ps] : preds) {
    in_degree[id] = static_cast<int>(ps.size());
    if (ps.empty()) ready.insert(id);
  }

  std::vector<std::string> order;
  while (!ready.empty()) {
    const std::string id = *ready.begin();  // ties broken by sub-task id
    ready.erase(ready.begin());
    order.push_back(id);
    for (const auto& nxt : succs[id]) {
      if (--in_degree[nxt] == 0) ready.insert(nxt);
    }
  }

  if (order.size() != w.subtasks.size()) {
    // Every unprocessed sub-task has an unprocessed predecessor; walking
    // predecessors must revisit one, which exhibits a cycle.
    std::set<std::string> remaining;
    for (const auto& st : w.subtasks) remaining.insert(st.id);
    for (const auto& id : order) remaining.erase(id);

    std::vector<std::string> path{*remaining.begin()};
    std::set<std::string> on_path{path.back()};
    for (;;) {
      const auto& ps = preds[path.back()];
      std::string prev;
      for (const auto& p : ps) {
        if (remaining.count(p)) {
          prev = p;
          break;
        }
      }
      if (on_path.count(prev)) {
        std::vector<std::string> cycle;
        auto it = std::find(path.begin(), path.end(), prev);
        cycle.assign(it, path.end());
        std::reverse(cycle.begin(), cycle.end());  // forward edge direction
        std::ostringstream msg;
        msg << "workflow dependencies contain a cycle: ";
        for (const auto& id : cycle) msg << id << " -> ";
        msg << prev;
        throw CycleError(msg.str());
      }
      path.push_back(prev);
      on_path.insert(prev);
    }
  }
  return order;
}

std::vector<std::string> terminal_subtasks(const WorkflowDag& w) {
  const auto idx = index_subtasks(w);
  check_dep_refs(w, idx);
  std::set<std::string> has_outgoing;
  for (const auto& [from, to] : w.deps) has_outgoing.insert(from);
  std::vector<std::string> out;
  for (const auto& [id, _] : idx) {
    if (!has_outgoing.count(id)) out.push_back(id);
  }
  return out;  // idx is ordered, so this is sorted
}

void validate_task_spec(const TaskSpec& task) {
  if (!(task.beta > 0.0)) throw ValidationError("beta must be > 0");
  if (task.requirements.counts.empty()) {
    throw ValidationError("requirement multiset must have at least one entry");
  }
  for (const auto& [cap, count] : task.requirements.counts) {
    if (count < 1) {
      throw ValidationError("requirement count for \"" + cap + "\" must be >= 1");
    }
  }
  if (task.workflow.subtasks.empty()) {
    throw ValidationError("workflow must contain at least one sub-task");
  }
  validate_workflow(task.workflow);
  for (const auto& st : task.workflow.subtasks) {
    if (!task.requirements.counts.count(st.capability)) {
      throw ValidationError("sub-task \"" + st.id + "\" requires capability \"" +
                            st.capability + "\" absent from the requirements");
    }
  }
}

namespace {

std::vector<NodeId> sorted_members(const Network& net, const std::vector<NodeId>& coalition) {
  std::vector<NodeId> members = coalition;
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  for (NodeId i : members) {
    if (!net.has_node(i)) throw InvalidNode("no node with id " + std::to_string(i));
  }
  return members;
}

bool agent_has(const Agent& a, const Capability& c) {
  return std::binary_search(a.capabilities.begin(), a.capabilities.end(), c);
}

std::optional<Assignment> assign_shared(const Network& net,
                                        const std::vector<NodeId>& members,
                                        const WorkflowDag& w) {
  Assignment asg;
  for (const auto& st : w.subtasks) {
    bool found = false;
    double best_effort = 0.0;
    AgentRef best{};
    for (NodeId i : members) {
      const auto& agents = net.nodes[static_cast<size_t>(i)].agents;
      for (size_t a = 0; a < agents.size(); ++a) {
        if (!agent_has(agents[a], st.capability)) continue;
        const AgentRef ref{i, static_cast<int>(a)};
        if (!found || agents[a].baseline_effort < best_effort ||
            (agents[a].baseline_effort == best_effort && ref < best)) {
          found = true;
          best_effort = agents[a].baseline_effort;
          best = ref;
        }
      }
    }
    if (!found) return std::nullopt;
    asg[st.id] = best;
  }
  return asg;
}

std::optional<Assignment> assign_one_to_one(const Network& net,
                                            const std::vector<NodeId>& members,
                                            const WorkflowDag& w) {
  // Agents in (node, agent) order; sub-tasks in id order. With both orders
  // fixed, the augmenting search is deterministic.
  std::vector<AgentRef> agents;
  for (NodeId i : members) {
    const auto& as = net.nodes[static_cast<size_t>(i)].agents;
    for (size_t a = 0; a < as.size(); ++a) agents.push_back({i, static_cast<int>(a)});
  }

  std::vector<const SubTask*> tasks;
  for (const auto& st : w.subtasks) tasks.push_back(&st);
  std::sort(tasks.begin(), tasks.end(),
            [](const SubTask* a, const SubTask* b) { return a->id < b->id; });

  std::vector<std::vector<int>> adj(tasks.size());
  for (size_t t = 0; t < tasks.size(); ++t) {
    for (size_t a = 0; a < agents.size(); ++a) {
      const auto& ag = net.nodes[static_cast<size_t>(agents[a].node)]
                           .agents[static_cast<size_t>(agents[a].agent)];
      if (agent_has(ag, tasks[t]->capability)) adj[t].push_back(static_cast<int>(a));
    }
  }

  std::vector<int> agent_match(agents.size(), -1);
  std::function<bool(size_t, std::vector<char>&)> augment =
      [&](size_t t, std::vector<char>& used) {
        for (int a : adj[t]) {
          if (used[static_cast<size_t>(a)]) continue;
          used[static_cast<size_t>(a)] = 1;
          if (agent_match[static_cast<size_t>(a)] < 0 ||
              augment(static_cast<size_t>(agent_match[static_cast<size_t>(a)]), used)) {
            agent_match[static_cast<size_t>(a)] = static_cast<int>(t);
            return true;
          }
        }
        return false;
      };

  for (size_t t = 0; t < tasks.size(); ++t) {
    std::vector<char> used(agents.size(), 0);
    if (!augment(t, used)) return std::nullopt;  // no perfect matching
  }

  Assignment asg;
  for (size_t a = 0; a < agents.size(); ++a) {
    if (agent_match[a] >= 0) asg[tasks[static_cast<size_t>(agent_match[a])]->id] = agents[a];
  }
  return asg;
}

}  // namespace

std::optional<Assignment> find_assignment(const Network& net,
                                          const std::vector<NodeId>& coalition,
                                          const WorkflowDag& w, AssignmentMode mode) {
  const auto members = sorted_members(net, coalition);
  validate_workflow(w);
  return mode == AssignmentMode::Shared ? assign_shared(net, members, w)
                                        : assign_one_to_one(net, members, w);
}

ExecutionReport execute_workflow(const Network& net, const TaskSpec& task,
                                 const Assignment& asg) {
  const auto& w = task.workflow;
  const auto order = validate_workflow(w);
  const auto idx = index_subtasks(w);

  for (const auto& st : w.subtasks) {
    const auto it = asg.find(st.id);
    if (it == asg.end()) {
      throw IncompleteAssignment("sub-task \"" + st.id + "\" is unassigned");
    }
    const AgentRef ref = it->second;
    if (!net.has_node(ref.node) ||
        ref.agent < 0 ||
        ref.agent >= static_cast<int>(net.nodes[static_cast<size_t>(ref.node)].agents.size())) {
      throw IncompleteAssignment("sub-task \"" + st.id + "\" assigned to nonexistent agent");
    }
    const auto& agent =
        net.nodes[static_cast<size_t>(ref.node)].agents[static_cast<size_t>(ref.agent)];
    if (!agent_has(agent, st.capability)) {
      throw IncompleteAssignment("sub-task \"" + st.id + "\" assigned to agent (" +
                                 std::to_string(ref.node) + ", " + std::to_string(ref.agent) +
                                 ") lacking capability \"" + st.capability + "\"");
    }
  }

  std::map<std::string, std::vector<std::string>> preds;
  for (const auto& [from, to] : w.deps) preds[to].push_back(from);

  ExecutionReport rep;
  for (const auto& id : order) {
    const auto& st = w.subtasks[idx.at(id)];
    const AgentRef ref = asg.at(id);
    const auto& node = net.nodes[static_cast<size_t>(ref.node)];
    const auto& agent = node.agents[static_cast<size_t>(ref.agent)];
    double out = node.alpha * effectiveness(node.rho, agent.baseline_effort);
    for (const auto& p : preds[id]) out *= rep.per_subtask_output.at(p);
    rep.per_subtask_output[st.id] = out;
  }

  std::map<AgentRef, int> load;
  for (const auto& [id, ref] : asg) ++load[ref];
  for (const auto& [ref, count] : load) {
    const auto& agent =
        net.nodes[static_cast<size_t>(ref.node)].agents[static_cast<size_t>(ref.agent)];
    rep.per_node_effort[ref.node] += agent.baseline_effort * count;
  }

  const auto terminals = terminal_subtasks(w);
  switch (task.aggregation) {
    case Aggregation::Product: {
      double prod = 1.0;
      for (const auto& id : terminals) prod *= rep.per_subtask_output.at(id);
      rep.outcome = prod;
      break;
    }
    case Aggregation::Mean: {
      double sum = 0.0;
      for (const auto& id : terminals) sum += rep.per_subtask_output.at(id);
      rep.outcome = sum / static_cast<double>(terminals.size());
      break;
    }
    case Aggregation::Min: {
      double mn = 1.0;
      for (const auto& id : terminals) mn = std::min(mn, rep.per_subtask_output.at(id));
      rep.outcome = mn;
      break;
    }
  }
  return rep;
}

std::string to_string(Aggregation a) {
  switch (a) {
    case Aggregation::Product: return "PRODUCT";
    case Aggregation::Mean: return "MEAN";
    case Aggregation::Min: return "MIN";
  }
  throw DomainError("unknown aggregation");
}

Aggregation aggregation_from_string(const std::string& s) {
  if (s == "PRODUCT") return Aggregation::Product;
  if (s == "MEAN") return Aggregation::Mean;
  if (s == "MIN") return Aggregation::Min;
  throw ParseError("unknown aggregation \"" + s + "\"");
}

void to_json(nlohmann::json& j, const TaskSpec& task) {
  using nlohmann::json;
  json subtasks = json::array();
  for (const auto& st : task.workflow.subtasks) {
    subtasks.push_back({{"id", st.id}, {"capability", st.capability}});
  }
  auto deps = task.workflow.deps;
  std::sort(deps.begin(), deps.end());
  json jdeps = json::array();
  for (const auto& [from, to] : deps) jdeps.push_back({from, to});
  j = json{{"initiator", task.initiator},
           {"beta", task.beta},
           {"aggregation", to_string(task.aggregation)},
           {"requirements", task.requirements.counts},
           {"workflow", {{"subtasks", std::move(subtasks)}, {"deps", std::move(jdeps)}}}};
}

void from_json(const nlohmann::json& j, TaskSpec& task) {
  detail::expect_keys(j, {"initiator", "beta", "aggregation", "requirements", "workflow"},
                      "task");
  task = TaskSpec{};
  task.initiator = j.at("initiator").get<int>();
  task.beta = j.at("beta").get<double>();
  task.aggregation = aggregation_from_string(j.at("aggregation").get<std::string>());
  task.requirements.counts = j.at("requirements").get<std::map<Capability, int>>();

  const auto& jw = j.at("workflow");
  detail::expect_keys(jw, {"subtasks", "deps"}, "workflow");
  for (const auto& js : jw.at("subtasks")) {
    detail::expect_keys(js, {"id", "capability"}, "sub-task");
    task.workflow.subtasks.push_back(
        {js.at("id").get<std::string>(), js.at("capability").get<std::string>()});
  }
  for (const auto& jd : jw.at("deps")) {
    if (!jd.is_array() || jd.size() != 2) {
      throw ParseError("workflow dep: expected a [from, to] pair");
    }
    task.workflow.deps.emplace_back(jd[0].get<std::string>(), jd[1].get<std::string>());
  }
  validate_task_spec(task);
}

}  // namespace coalnet
