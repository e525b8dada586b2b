#include <algorithm>
#include <set>

#include "doctest.h"
#include "json.hpp"

#include "coalnet/errors.hpp"
#include "coalnet/network.hpp"
#include "coalnet/rng.hpp"

using namespace coalnet;

namespace {

NodeProfile simple_node(int id, std::vector<Capability> caps, double effort = 1.0) {
  NodeProfile p;
  p.id = id;
  Agent a;
  a.id = 0;
  a.capabilities = std::move(caps);
  a.baseline_effort = effort;
  p.agents.push_back(a);
  return p;
}

Network line3() {
  return build_network({simple_node(0, {"A"}), simple_node(1, {"A", "B"}), simple_node(2, {"B"})},
                       {{0, 1}, {1, 2}}, {"A", "B"});
}

CapabilityAssignmentConfig small_cap_cfg(int max_caps = 2) {
  CapabilityAssignmentConfig c;
  c.capability_space = {"A", "B", "C"};
  c.max_caps = max_caps;
  return c;
}

}  // namespace

TEST_CASE("build_network accepts a minimal valid instance") {
  const Network net = line3();
  CHECK(net.size() == 3);
  CHECK(net.edges.size() == 2);
  CHECK(net.adjacency[1] == std::vector<int>{0, 2});
}

TEST_CASE("build_network rejects bad input naming the offender") {
  SUBCASE("dangling edge endpoint") {
    CHECK_THROWS_AS(build_network({simple_node(0, {"A"}), simple_node(1, {"A"}),
                                   simple_node(2, {"A"})},
                                  {{0, 5}}, {"A"}),
                    ValidationError);
  }
  SUBCASE("unknown capability") {
    CHECK_THROWS_WITH_AS(build_network({simple_node(0, {"X"})}, {}, {"A"}),
                         doctest::Contains("\"X\""), ValidationError);
  }
  SUBCASE("duplicate node id breaks density") {
    auto dup = simple_node(0, {"A"});
    CHECK_THROWS_AS(build_network({simple_node(0, {"A"}), dup}, {}, {"A"}), ValidationError);
  }
  SUBCASE("self loop") {
    CHECK_THROWS_AS(build_network({simple_node(0, {"A"}), simple_node(1, {"A"})}, {{1, 1}},
                                  {"A"}),
                    ValidationError);
  }
  SUBCASE("duplicate edge") {
    CHECK_THROWS_AS(build_network({simple_node(0, {"A"}), simple_node(1, {"A"})},
                                  {{0, 1}, {0, 1}}, {"A"}),
                    ValidationError);
  }
  SUBCASE("bad economics") {
    auto p = simple_node(0, {"A"});
    p.alpha = 1.5;
    CHECK_THROWS_AS(build_network({p}, {}, {"A"}), ValidationError);
  }
}

TEST_CASE("shortest_path_distances") {
  const Network net = line3();
  const DistanceMap dm = shortest_path_distances(net, 0);
  CHECK(dm[0] == 0);
  CHECK(dm[1] == 1);
  CHECK(dm[2] == 2);
  CHECK_THROWS_AS(shortest_path_distances(net, 9), InvalidNode);

  SUBCASE("disconnected component is unreachable") {
    const Network split = build_network(
        {simple_node(0, {"A"}), simple_node(1, {"A"}), simple_node(2, {"A"}),
         simple_node(3, {"A"})},
        {{0, 1}, {2, 3}}, {"A"});
    const DistanceMap d = shortest_path_distances(split, 0);
    CHECK(d[1] == 1);
    CHECK_FALSE(d.reachable(2));
    CHECK_FALSE(d.reachable(3));
  }
}

TEST_CASE("BFS distances satisfy the edge relaxation property") {
  const Network net = generate_er_network(24, 0.12, small_cap_cfg(), EconRanges{}, 42);
  const DistanceMap dm = shortest_path_distances(net, 0);
  for (const auto& [u, v] : net.edges) {
    if (dm.reachable(u)) CHECK(dm[v] <= dm[u] + 1);
    if (dm.reachable(v)) CHECK(dm[u] <= dm[v] + 1);
  }
  // Every reachable non-origin node has a neighbor exactly one hop closer.
  for (int v = 1; v < net.size(); ++v) {
    if (!dm.reachable(v)) continue;
    bool has_parent = false;
    for (int u : net.adjacency[static_cast<size_t>(v)]) {
      has_parent = has_parent || (dm.reachable(u) && dm[u] + 1 == dm[v]);
    }
    CHECK(has_parent);
  }
}

TEST_CASE("k_hop_neighborhood") {
  const Network net = line3();
  CHECK(k_hop_neighborhood(net, 1, 0) == std::vector<int>{1});
  CHECK(k_hop_neighborhood(net, 0, 1) == std::vector<int>{0, 1});

  SUBCASE("radius at the diameter captures all reachable nodes") {
    const Network er = generate_er_network(18, 0.2, small_cap_cfg(), EconRanges{}, 7);
    const DistanceMap dm = shortest_path_distances(er, 0);
    std::vector<int> reachable;
    for (int i = 0; i < er.size(); ++i) {
      if (dm.reachable(i)) reachable.push_back(i);
    }
    CHECK(k_hop_neighborhood(er, 0, er.size()) == reachable);
  }

  SUBCASE("monotone growth in k") {
    const Network er = generate_er_network(18, 0.15, small_cap_cfg(), EconRanges{}, 11);
    for (int k = 0; k < 5; ++k) {
      const auto a = k_hop_neighborhood(er, 0, k);
      const auto b = k_hop_neighborhood(er, 0, k + 1);
      CHECK(std::includes(b.begin(), b.end(), a.begin(), a.end()));
    }
  }
}

TEST_CASE("generate_er_network endpoints and determinism") {
  SUBCASE("edge_prob extremes") {
    const Network none = generate_er_network(8, 0.0, small_cap_cfg(), EconRanges{}, 5);
    CHECK(none.edges.empty());
    const Network full = generate_er_network(8, 1.0, small_cap_cfg(), EconRanges{}, 5);
    CHECK(full.edges.size() == 8 * 7 / 2);
  }

  SUBCASE("same seed gives byte-identical serialization") {
    const Network a = generate_er_network(40, 0.15, small_cap_cfg(), EconRanges{}, 123);
    const Network b = generate_er_network(40, 0.15, small_cap_cfg(), EconRanges{}, 123);
    CHECK(nlohmann::json(a).dump() == nlohmann::json(b).dump());
    const Network c = generate_er_network(40, 0.15, small_cap_cfg(), EconRanges{}, 124);
    CHECK(nlohmann::json(a).dump() != nlohmann::json(c).dump());
  }

  SUBCASE("agent capability sets are nonempty subsets within the breadth cap") {
    const Network net = generate_er_network(30, 0.2, small_cap_cfg(2), EconRanges{}, 9);
    const std::set<Capability> space(net.capability_space.begin(), net.capability_space.end());
    for (const auto& p : net.nodes) {
      for (const auto& a : p.agents) {
        CHECK(a.capabilities.size() >= 1);
        CHECK(a.capabilities.size() <= 2);
        for (const auto& c : a.capabilities) CHECK(space.count(c) == 1);
      }
    }
  }

  SUBCASE("invalid configs") {
    CHECK_THROWS_AS(generate_er_network(0, 0.5, small_cap_cfg(), EconRanges{}, 1),
                    InvalidConfig);
    CHECK_THROWS_AS(generate_er_network(5, 1.5, small_cap_cfg(), EconRanges{}, 1),
                    InvalidConfig);
    CHECK_THROWS_AS(generate_er_network(5, 0.5, small_cap_cfg(4), EconRanges{}, 1),
                    InvalidConfig);  // max_caps > |space|
    EconRanges bad;
    bad.rho = {2.0, 1.0};
    CHECK_THROWS_AS(generate_er_network(5, 0.5, small_cap_cfg(), bad, 1), InvalidConfig);
  }
}

TEST_CASE("agents_with_capability") {
  const Network net = line3();
  CHECK(agents_with_capability(net, {}, "A").empty());
  CHECK(agents_with_capability(net, {0, 1, 2}, "Z").empty());

  const auto refs = agents_with_capability(net, {0, 1, 2}, "A");
  REQUIRE(refs.size() == 2);
  CHECK(refs[0] == AgentRef{0, 0});
  CHECK(refs[1] == AgentRef{1, 0});

  SUBCASE("count agrees with a direct scan on a generated network") {
    const Network er = generate_er_network(12, 0.3, small_cap_cfg(), EconRanges{}, 3);
    std::vector<int> all(12);
    for (int i = 0; i < 12; ++i) all[static_cast<size_t>(i)] = i;
    size_t direct = 0;
    for (const auto& p : er.nodes) {
      for (const auto& a : p.agents) {
        direct += std::count(a.capabilities.begin(), a.capabilities.end(), "B");
      }
    }
    CHECK(agents_with_capability(er, all, "B").size() == direct);
  }
}

TEST_CASE("network JSON round-trip is lossless and strict") {
  const Network net = generate_er_network(10, 0.3, small_cap_cfg(), EconRanges{}, 77);
  const nlohmann::json j = net;
  const Network back = j.get<Network>();
  CHECK(nlohmann::json(back) == j);
  CHECK(nlohmann::json(back).dump(2) == j.dump(2));

  SUBCASE("unknown fields rejected") {
    nlohmann::json extra = j;
    extra["comment"] = "hello";
    CHECK_THROWS_WITH_AS(extra.get<Network>(), doctest::Contains("comment"), ParseError);

    nlohmann::json node_extra = j;
    node_extra["nodes"][0]["color"] = "red";
    CHECK_THROWS_AS(node_extra.get<Network>(), ParseError);
  }

  SUBCASE("edges must be given as u < v") {
    nlohmann::json flipped = j;
    REQUIRE(!flipped["edges"].empty());
    const auto e = flipped["edges"][0];
    flipped["edges"][0] = {e[1], e[0]};
    CHECK_THROWS_AS(flipped.get<Network>(), ValidationError);
  }
}
