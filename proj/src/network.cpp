#include "coalnet/network.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>

#include "coalnet/errors.hpp"
#include "coalnet/rng.hpp"
#include "json_util.hpp"

namespace coalnet {

namespace {

constexpr std::uint64_t kStreamTopology = 1;
constexpr std::uint64_t kStreamCapabilities = 2;
constexpr std::uint64_t kStreamEconomics = 3;

void validate_agent(const Agent& a, int node_id, int pos,
                    const std::set<Capability>& space) {
  std::ostringstream where;
  where << "node " << node_id << " agent at position " << pos;
  if (a.id != pos) {
    throw ValidationError(where.str() + " has id " + std::to_string(a.id) +
                          ", expected dense id " + std::to_string(pos));
  }
  if (a.capabilities.empty()) {
    throw ValidationError(where.str() + ": capability set is empty");
  }
  std::set<Capability> seen;
  for (const auto& c : a.capabilities) {
    if (!space.count(c)) {
      throw ValidationError(where.str() + ": capability \"" + c +
                            "\" is not in the capability space");
    }
    if (!seen.insert(c).second) {
      throw ValidationError(where.str() + ": duplicate capability \"" + c + "\"");
    }
  }
  if (!(a.baseline_effort >= 0.0)) {
    throw ValidationError(where.str() + ": baseline_effort must be >= 0");
  }
}

void validate_profile(const NodeProfile& p, int pos, const std::set<Capability>& space) {
  if (p.id != pos) {
    throw ValidationError("node at position " + std::to_string(pos) + " has id " +
                          std::to_string(p.id) + ", expected dense id " +
                          std::to_string(pos) + " (ids must be 0..n-1 in order)");
  }
  const std::string where = "node " + std::to_string(p.id);
  if (!(p.rho > 0.0)) throw ValidationError(where + ": rho must be > 0");
  if (!(p.alpha > 0.0 && p.alpha <= 1.0)) {
    throw ValidationError(where + ": alpha must be in (0, 1]");
  }
  if (!(p.kappa_cpu >= 0.0)) throw ValidationError(where + ": kappa_cpu must be >= 0");
  if (!(p.kappa_lat >= 0.0)) throw ValidationError(where + ": kappa_lat must be >= 0");
  if (!(p.comm_fixed >= 0.0)) throw ValidationError(where + ": comm_fixed must be >= 0");
  if (p.agents.empty()) throw ValidationError(where + ": must host at least one agent");
  for (size_t i = 0; i < p.agents.size(); ++i) {
    validate_agent(p.agents[i], p.id, static_cast<int>(i), space);
  }
}

void check_range(const Range& r, const char* name, double domain_lo, double domain_hi) {
  if (!(r.lo <= r.hi)) {
    throw InvalidConfig(std::string(name) + ": empty range [" + std::to_string(r.lo) +
                        ", " + std::to_string(r.hi) + "]");
  }
  if (r.lo < domain_lo || r.hi > domain_hi) {
    throw InvalidConfig(std::string(name) + ": range outside legal domain");
  }
}

}  // namespace

Network build_network(std::vector<NodeProfile> nodes,
                      std::vector<std::pair<int, int>> edges,
                      std::vector<Capability> capability_space) {
  std::set<Capability> space;
  for (const auto& c : capability_space) {
    if (c.empty()) throw ValidationError("capability space contains an empty label");
    if (!space.insert(c).second) {
      throw ValidationError("duplicate capability label \"" + c + "\" in capability space");
    }
  }

  const int n = static_cast<int>(nodes.size());
  for (int i = 0; i < n; ++i) {
    // Canonicalize agent capability order before validation.
    for (auto& a : nodes[i].agents) std::sort(a.capabilities.begin(), a.capabilities.end());
    validate_profile(nodes[i], i, space);
  }

  std::sort(edges.begin(), edges.end());
  for (size_t i = 0; i < edges.size(); ++i) {
    const auto [u, v] = edges[i];
    std::ostringstream what;
    what << "edge (" << u << ", " << v << ")";
    if (u >= v) {
      throw ValidationError(what.str() + ": endpoints must satisfy u < v (no self-loops)");
    }
    if (u < 0 || v >= n) throw ValidationError(what.str() + ": endpoint out of range");
    if (i > 0 && edges[i] == edges[i - 1]) throw ValidationError(what.str() + ": duplicate edge");
  }

  Network net;
  net.nodes = std::move(nodes);
  net.edges = std::move(edges);
  net.capability_space = std::move(capability_space);
  net.adjacency.assign(static_cast<size_t>(n), {});
  for (const auto& [u, v] : net.edges) {
    net.adjacency[static_cast<size_t>(u)].push_back(v);
    net.adjacency[static_cast<size_t>(v)].push_back(u);
  }
  for (auto& nbrs : net.adjacency) std::sort(nbrs.begin(), nbrs.end());
  return net;
}

DistanceMap shortest_path_distances(const Network& net, NodeId origin) {
  if (!net.has_node(origin)) {
    throw InvalidNode("no node with id " + std::to_string(origin));
  }
  DistanceMap dm;
  dm.origin = origin;
  dm.dist.assign(net.nodes.size(), DistanceMap::kUnreachable);
  dm.dist[static_cast<size_t>(origin)] = 0;
  std::deque<int> frontier{origin};
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop_front();
    for (int v : net.adjacency[static_cast<size_t>(u)]) {
      if (dm.dist[static_cast<size_t>(v)] == DistanceMap::kUnreachable) {
        dm.dist[static_cast<size_t>(v)] = dm.dist[static_cast<size_t>(u)] + 1;
        frontier.push_back(v);
      }
    }
  }
  return dm;
}

std::vector<NodeId> k_hop_neighborhood(const Network& net, NodeId origin, int k) {
  if (k < 0) throw DomainError("hop radius must be >= 0");
  const DistanceMap dm = shortest_path_distances(net, origin);
  std::vector<NodeId> out;
  for (int i = 0; i < net.size(); ++i) {
    if (dm.reachable(i) && dm[i] <= k) out.push_back(i);
  }
  return out;
}

Network generate_er_network(int n, double edge_prob,
                            const CapabilityAssignmentConfig& cap_config,
                            const EconRanges& econ, std::uint64_t seed) {
  if (n < 1) throw InvalidConfig("node count must be >= 1");
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) {
    throw InvalidConfig("edge probability must be in [0, 1]");
  }
  const int M = static_cast<int>(cap_config.capability_space.size());
  if (cap_config.max_caps < 1) throw InvalidConfig("max_caps must be >= 1");
  if (cap_config.max_caps > M) {
    throw InvalidConfig("max_caps exceeds the capability space size");
  }
  if (cap_config.agents_per_node < 1) throw InvalidConfig("agents_per_node must be >= 1");
  check_range(econ.rho, "rho", 1e-12, 1e12);
  check_range(econ.alpha, "alpha", 1e-12, 1.0);
  check_range(econ.kappa_cpu, "kappa_cpu", 0.0, 1e12);
  check_range(econ.kappa_lat, "kappa_lat", 0.0, 1e12);
  check_range(econ.comm_fixed, "comm_fixed", 0.0, 1e12);
  check_range(econ.baseline_effort, "baseline_effort", 0.0, 1e12);

  // Topology stream: pairs (i, j), i < j, in ascending order.
  Rng topo(combine_seed(seed, kStreamTopology));
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (topo.uniform01() < edge_prob) edges.emplace_back(i, j);
    }
  }

  // Capability stream: per node, per agent, a count then a partial shuffle.
  Rng caps(combine_seed(seed, kStreamCapabilities));
  std::vector<NodeProfile> nodes(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    nodes[static_cast<size_t>(i)].id = i;
    for (int a = 0; a < cap_config.agents_per_node; ++a) {
      Agent agent;
      agent.id = a;
      const int count = 1 + static_cast<int>(caps.below(static_cast<std::uint64_t>(cap_config.max_caps)));
      std::vector<int> idx(static_cast<size_t>(M));
      std::iota(idx.begin(), idx.end(), 0);
      for (int t = 0; t < count; ++t) {
        const int swap_with = t + static_cast<int>(caps.below(static_cast<std::uint64_t>(M - t)));
        std::swap(idx[static_cast<size_t>(t)], idx[static_cast<size_t>(swap_with)]);
      }
      for (int t = 0; t < count; ++t) {
        agent.capabilities.push_back(cap_config.capability_space[static_cast<size_t>(idx[static_cast<size_t>(t)])]);
      }
      std::sort(agent.capabilities.begin(), agent.capabilities.end());
      nodes[static_cast<size_t>(i)].agents.push_back(std::move(agent));
    }
  }

  // Economics stream: per node, the five node parameters then each agent's
  // baseline effort, in that order.
  Rng econ_rng(combine_seed(seed, kStreamEconomics));
  for (int i = 0; i < n; ++i) {
    auto& p = nodes[static_cast<size_t>(i)];
    p.rho = econ_rng.uniform(econ.rho.lo, econ.rho.hi);
    p.alpha = econ_rng.uniform(econ.alpha.lo, econ.alpha.hi);
    p.kappa_cpu = econ_rng.uniform(econ.kappa_cpu.lo, econ.kappa_cpu.hi);
    p.kappa_lat = econ_rng.uniform(econ.kappa_lat.lo, econ.kappa_lat.hi);
    p.comm_fixed = econ_rng.uniform(econ.comm_fixed.lo, econ.comm_fixed.hi);
    for (auto& agent : p.agents) {
      agent.baseline_effort = econ_rng.uniform(econ.baseline_effort.lo, econ.baseline_effort.hi);
    }
  }

  return build_network(std::move(nodes), std::move(edges), cap_config.capability_space);
}

std::vector<AgentRef> agents_with_capability(const Network& net,
                                             const std::vector<NodeId>& coalition,
                                             const Capability& c) {
  std::vector<NodeId> members = coalition;
  std::sort(members.begin(), members.end());
  std::vector<AgentRef> out;
  for (NodeId i : members) {
    if (!net.has_node(i)) throw InvalidNode("no node with id " + std::to_string(i));
    const auto& agents = net.nodes[static_cast<size_t>(i)].agents;
    for (size_t a = 0; a < agents.size(); ++a) {
      if (std::binary_search(agents[a].capabilities.begin(), agents[a].capabilities.end(), c)) {
        out.push_back({i, static_cast<int>(a)});
      }
    }
  }
  return out;
}

using nlohmann::json;
using detail::expect_keys;

void to_json(nlohmann::json& j, const Network& net) {
  json nodes = json::array();
  for (const auto& p : net.nodes) {
    json agents = json::array();
    for (const auto& a : p.agents) {
      agents.push_back({{"id", a.id},
                        {"capabilities", a.capabilities},
                        {"baseline_effort", a.baseline_effort}});
    }
    nodes.push_back({{"id", p.id},
                     {"rho", p.rho},
                     {"alpha", p.alpha},
                     {"kappa_cpu", p.kappa_cpu},
                     {"kappa_lat", p.kappa_lat},
                     {"comm_fixed", p.comm_fixed},
                     {"agents", std::move(agents)}});
  }
  json edges = json::array();
  for (const auto& [u, v] : net.edges) edges.push_back({u, v});
  j = json{{"capability_space", net.capability_space},
           {"nodes", std::move(nodes)},
           {"edges", std::move(edges)}};
}

void from_json(const nlohmann::json& j, Network& net) {
  expect_keys(j, {"capability_space", "nodes", "edges"}, "network");
  std::vector<Capability> space = j.at("capability_space").get<std::vector<Capability>>();

  std::vector<NodeProfile> nodes;
  for (const auto& jn : j.at("nodes")) {
    expect_keys(jn, {"id", "rho", "alpha", "kappa_cpu", "kappa_lat", "comm_fixed", "agents"},
                "network node");
    NodeProfile p;
    p.id = jn.at("id").get<int>();
    p.rho = jn.at("rho").get<double>();
    p.alpha = jn.at("alpha").get<double>();
    p.kappa_cpu = jn.at("kappa_cpu").get<double>();
    p.kappa_lat = jn.at("kappa_lat").get<double>();
    p.comm_fixed = jn.at("comm_fixed").get<double>();
    for (const auto& ja : jn.at("agents")) {
      expect_keys(ja, {"id", "capabilities", "baseline_effort"}, "network agent");
      Agent a;
      a.id = ja.at("id").get<int>();
      a.capabilities = ja.at("capabilities").get<std::vector<Capability>>();
      a.baseline_effort = ja.at("baseline_effort").get<double>();
      p.agents.push_back(std::move(a));
    }
    nodes.push_back(std::move(p));
  }

  std::vector<std::pair<int, int>> edges;
  for (const auto& je : j.at("edges")) {
    if (!je.is_array() || je.size() != 2) {
      throw ParseError("network edge: expected a [u, v] pair");
    }
    edges.emplace_back(je[0].get<int>(), je[1].get<int>());
  }

  net = build_network(std::move(nodes), std::move(edges), std::move(space));
}

}  // namespace coalnet
