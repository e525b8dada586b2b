#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace coalnet {

// A capability is a short symbolic label ("OCR", "RAD", ...). Comparison is
// exact string equality; labels are unique within a network's capability space.
using Capability = std::string;
using NodeId = int;

struct Agent {
  int id = 0;  // dense, unique within the hosting node
  std::vector<Capability> capabilities;  // nonempty, sorted, no duplicates
  double baseline_effort = 0.0;          // normalized effort units, >= 0
};

struct NodeProfile {
  NodeId id = 0;               // dense integer 0..n-1
  std::vector<Agent> agents;   // at least one
  double rho = 1.0;            // deliberation efficiency, > 0
  double alpha = 1.0;          // baseline reliability, in (0, 1]
  double kappa_cpu = 0.0;      // linear cost coefficient, >= 0
  double kappa_lat = 0.0;      // quadratic cost coefficient, >= 0
  double comm_fixed = 0.0;     // fixed coordination overhead, >= 0
};

// Undirected communication graph of agent-hosting nodes. Immutable after
// construction; safe to share across concurrent readers.
struct Network {
  std::vector<NodeProfile> nodes;           // indexed by id
  std::vector<std::pair<int, int>> edges;   // u < v, sorted, no duplicates
  std::vector<Capability> capability_space;
  std::vector<std::vector<int>> adjacency;  // derived; neighbor lists, sorted

  int size() const { return static_cast<int>(nodes.size()); }
  bool has_node(NodeId i) const { return i >= 0 && i < size(); }
};

// Hop distances from one origin. Unreachable nodes hold kUnreachable.
struct DistanceMap {
  static constexpr int kUnreachable = -1;

  NodeId origin = 0;
  std::vector<int> dist;

  bool reachable(NodeId i) const { return dist[static_cast<size_t>(i)] >= 0; }
  int operator[](NodeId i) const { return dist[static_cast<size_t>(i)]; }
};

// Globally unique agent handle: nodes[node].agents[agent].
struct AgentRef {
  int node = 0;
  int agent = 0;
  auto operator<=>(const AgentRef&) const = default;
};

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

// Uniform sampling intervals for generated node/agent parameters.
struct EconRanges {
  Range rho{1.0, 3.0};
  Range alpha{0.9, 1.0};
  Range kappa_cpu{0.1, 0.5};
  Range kappa_lat{0.01, 0.1};
  Range comm_fixed{0.05, 0.3};
  Range baseline_effort{0.5, 2.0};
};

struct CapabilityAssignmentConfig {
  std::vector<Capability> capability_space;
  int agents_per_node = 1;
  int max_caps = 2;  // per-agent capability breadth upper bound
};

// Validates and assembles a network. Node ids must be dense 0..n-1 in order,
// agent ids dense 0..m-1 within each node, edges (u, v) with u < v referencing
// valid nodes, and every agent capability must belong to capability_space.
// Throws ValidationError naming the first offending element.
Network build_network(std::vector<NodeProfile> nodes,
                      std::vector<std::pair<int, int>> edges,
                      std::vector<Capability> capability_space);

// Unweighted BFS distances from origin. Throws InvalidNode.
DistanceMap shortest_path_distances(const Network& net, NodeId origin);

// { i : d(i, origin) <= k }, sorted ascending; always contains origin.
std::vector<NodeId> k_hop_neighborhood(const Network& net, NodeId origin, int k);

// Seeded Erdos-Renyi instance: every unordered pair is edged independently
// with probability edge_prob; each agent draws a uniform capability count in
// [1, max_caps] without replacement from the capability space; node and agent
// economic parameters are uniform draws from the configured ranges. Three
// named sub-streams (topology, capabilities, economics) are derived from the
// seed so the draws of one group never perturb another. Fully deterministic:
// equal arguments produce structurally equal networks.
Network generate_er_network(int n, double edge_prob,
                            const CapabilityAssignmentConfig& cap_config,
                            const EconRanges& econ, std::uint64_t seed);

// All agents hosted at coalition nodes holding capability c, in
// (node id, agent id) lexicographic order.
std::vector<AgentRef> agents_with_capability(const Network& net,
                                             const std::vector<NodeId>& coalition,
                                             const Capability& c);

// JSON document form:
//   {"capability_space": [...],
//    "nodes": [{"id", "rho", "alpha", "kappa_cpu", "kappa_lat", "comm_fixed",
//               "agents": [{"id", "capabilities", "baseline_effort"}]}],
//    "edges": [[u, v], ...]}   with u < v
// Unknown fields are rejected on input; output round-trips losslessly.
void to_json(nlohmann::json& j, const Network& net);
void from_json(const nlohmann::json& j, Network& net);

}  // namespace coalnet
