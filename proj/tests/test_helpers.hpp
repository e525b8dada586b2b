#pragma once

// Seeded small-instance generator shared by the unit and acceptance suites.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "coalnet/network.hpp"
#include "coalnet/rng.hpp"
#include "coalnet/workflow.hpp"

namespace coalnet::testing {

struct RandomInstance {
  Network net;
  TaskSpec task;
};

// Instance class used for oracle cross-checks: 6..12 nodes, 3..5 capabilities,
// 1..2 agents per node, requirement counts occasionally 2, and a chain
// workflow with occasional extra forward edges and a duplicated capability.
inline RandomInstance make_random_instance(std::uint64_t seed) {
  Rng rng(seed);
  const int n = 6 + static_cast<int>(rng.below(7));
  const double edge_prob = rng.uniform(0.2, 0.6);
  const int caps_count = 3 + static_cast<int>(rng.below(3));

  std::vector<Capability> caps;
  for (int i = 0; i < caps_count; ++i) caps.push_back("C" + std::to_string(i + 1));

  CapabilityAssignmentConfig cap_cfg;
  cap_cfg.capability_space = caps;
  cap_cfg.agents_per_node = 1 + static_cast<int>(rng.below(2));
  cap_cfg.max_caps = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::min(3, caps_count))));

  RandomInstance inst;
  inst.net = generate_er_network(n, edge_prob, cap_cfg, EconRanges{}, combine_seed(seed, 77));

  inst.task.initiator = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
  inst.task.beta = rng.uniform(5.0, 15.0);
  inst.task.aggregation = Aggregation::Product;
  for (const auto& c : caps) {
    inst.task.requirements.counts[c] = rng.uniform01() < 0.25 ? 2 : 1;
  }

  std::vector<Capability> stages;
  for (int i = 0; i < caps_count; ++i) {
    if (i == 0 || rng.uniform01() < 0.8) stages.push_back(caps[static_cast<size_t>(i)]);
  }
  if (rng.uniform01() < 0.3) {
    stages.push_back(stages[rng.below(stages.size())]);  // duplicated capability
  }

  auto& w = inst.task.workflow;
  for (size_t i = 0; i < stages.size(); ++i) {
    const std::string id = "t" + std::to_string(i + 1) + "_" + stages[i];
    w.subtasks.push_back({id, stages[i]});
    if (i > 0) w.deps.emplace_back(w.subtasks[i - 1].id, id);
  }
  for (size_t i = 0; i + 2 < w.subtasks.size(); ++i) {
    for (size_t j = i + 2; j < w.subtasks.size(); ++j) {
      if (rng.uniform01() < 0.2) w.deps.emplace_back(w.subtasks[i].id, w.subtasks[j].id);
    }
  }

  validate_task_spec(inst.task);
  return inst;
}

// Hand-built three-node line network covering the five staged capabilities,
// mirroring the worked example's membership structure.
inline Network make_pipeline_network() {
  std::vector<NodeProfile> nodes(3);
  const std::vector<std::vector<Capability>> caps = {
      {"CONS", "OCR"}, {"DX", "RAD"}, {"VAL"}};
  for (int i = 0; i < 3; ++i) {
    nodes[static_cast<size_t>(i)].id = i;
    nodes[static_cast<size_t>(i)].rho = 1.0 + 0.5 * i;
    nodes[static_cast<size_t>(i)].alpha = 0.95;
    nodes[static_cast<size_t>(i)].kappa_cpu = 0.1;
    nodes[static_cast<size_t>(i)].kappa_lat = 0.01;
    nodes[static_cast<size_t>(i)].comm_fixed = 0.1;
    Agent a;
    a.id = 0;
    a.capabilities = caps[static_cast<size_t>(i)];
    a.baseline_effort = 1.0 + 0.25 * i;
    nodes[static_cast<size_t>(i)].agents.push_back(a);
  }
  return build_network(std::move(nodes), {{0, 1}, {1, 2}},
                       {"OCR", "RAD", "DX", "VAL", "CONS"});
}

// The matching five-stage chain task initiated at node 0.
inline TaskSpec make_pipeline_task(double beta = 10.0) {
  TaskSpec task;
  task.initiator = 0;
  task.beta = beta;
  const std::vector<Capability> order = {"OCR", "RAD", "DX", "VAL", "CONS"};
  std::string prev;
  for (size_t i = 0; i < order.size(); ++i) {
    const std::string id = "s" + std::to_string(i + 1) + "_" + order[i];
    task.workflow.subtasks.push_back({id, order[i]});
    if (!prev.empty()) task.workflow.deps.emplace_back(prev, id);
    prev = id;
    task.requirements.counts[order[i]] = 1;
  }
  return task;
}

}  // namespace coalnet::testing
