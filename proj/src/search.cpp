#include "coalnet/search.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>

#include "json_util.hpp"

namespace coalnet {

namespace {

constexpr std::uint64_t kMaxBlock = 1ULL << 26;  // per-size candidate block limit

std::uint64_t comb(int n, int m) {
  if (m < 0 || m > n) return 0;
  m = std::min(m, n - m);
  unsigned __int128 c = 1;
  for (int i = 1; i <= m; ++i) {
    // Exact at every step: c * (n - m + i) is divisible by i.
    c = c * static_cast<unsigned>(n - m + i) / static_cast<unsigned>(i);
    if (c > (static_cast<unsigned __int128>(1) << 63)) {
      throw Error("candidate space too large to enumerate; lower max_coalition_size");
    }
  }
  return static_cast<std::uint64_t>(c);
}

// r-th m-combination of {0..n-1} in lexicographic order.
void unrank_combination(int n, int m, std::uint64_t r, std::vector<int>& out) {
  out.clear();
  int start = 0;
  for (int pos = 0; pos < m; ++pos) {
    for (int c = start; c < n; ++c) {
      const std::uint64_t below = comb(n - c - 1, m - pos - 1);
      if (r < below) {
        out.push_back(c);
        start = c + 1;
        break;
      }
      r -= below;
    }
  }
}

bool next_combination(std::vector<int>& c, int n) {
  const int m = static_cast<int>(c.size());
  for (int i = m - 1; i >= 0; --i) {
    if (c[static_cast<size_t>(i)] < n - m + i) {
      ++c[static_cast<size_t>(i)];
      for (int j = i + 1; j < m; ++j) c[static_cast<size_t>(j)] = c[static_cast<size_t>(j - 1)] + 1;
      return true;
    }
  }
  return false;
}

int effective_size_cap(const SearchConfig& cfg, const RequirementMultiset& reqs) {
  if (cfg.max_coalition_size) {
    if (*cfg.max_coalition_size < 1) throw InvalidConfig("max_coalition_size must be >= 1");
    return *cfg.max_coalition_size;
  }
  return static_cast<int>(reqs.counts.size());
}

// contributes[i]: some agent at node i holds some required capability. Nodes
// that do not can never carry a sub-task or tighten a covering count.
std::vector<char> contribution_flags(const Network& net, const RequirementMultiset& reqs) {
  std::vector<char> flags(net.nodes.size(), 0);
  for (int i = 0; i < net.size(); ++i) {
    for (const auto& agent : net.nodes[static_cast<size_t>(i)].agents) {
      for (const auto& c : agent.capabilities) {
        if (reqs.counts.count(c)) {
          flags[static_cast<size_t>(i)] = 1;
          break;
        }
      }
      if (flags[static_cast<size_t>(i)]) break;
    }
  }
  return flags;
}

// Nodes within k hops of the initiator, excluding it, ascending.
std::vector<int> others_within(const Network& net, const DistanceMap& dm, NodeId initiator,
                               int k) {
  std::vector<int> out;
  for (int i = 0; i < net.size(); ++i) {
    if (i != initiator && dm.reachable(i) && dm[i] <= k) out.push_back(i);
  }
  return out;
}

void build_coalition(NodeId initiator, const std::vector<int>& others,
                     const std::vector<int>& picks, std::vector<NodeId>& coalition) {
  coalition.clear();
  for (int p : picks) coalition.push_back(others[static_cast<size_t>(p)]);
  coalition.insert(std::lower_bound(coalition.begin(), coalition.end(), initiator), initiator);
}

bool prune_skips(const std::vector<NodeId>& coalition, NodeId initiator,
                 const std::vector<char>& contributes) {
  for (NodeId i : coalition) {
    if (i != initiator && !contributes[static_cast<size_t>(i)]) return true;
  }
  return false;
}

struct CandidateEval {
  FeasibilityVerdict verdict;
  double effort = 0.0;
  double cost = 0.0;
  double objective = 0.0;
};

CandidateEval evaluate_candidate(const Network& net, const TaskSpec& task,
                                 const std::vector<NodeId>& coalition,
                                 const SearchConfig& cfg) {
  CandidateEval ev;
  ev.verdict =
      check_workflow_coalition_feasibility(net, task, coalition, cfg.comm_model,
                                           cfg.assignment_mode);
  if (ev.verdict.feasible) {
    ev.effort = assignment_total_effort(net, *ev.verdict.assignment);
    ev.cost = coalition_total_cost(*ev.verdict.report);
    ev.objective = cfg.selection == SelectionCriterion::TotalEffort ? ev.effort : ev.cost;
  }
  return ev;
}

void fill_found(SearchResult& res, std::vector<NodeId> coalition, int radius,
                CandidateEval ev) {
  res.status = SearchStatus::Found;
  res.coalition = std::move(coalition);
  res.radius = radius;
  res.assignment = std::move(*ev.verdict.assignment);
  res.report = std::move(*ev.verdict.report);
  res.total_effort = ev.effort;
  res.total_cost = ev.cost;
}

void check_inputs(const Network& net, const TaskSpec& task, const SearchConfig& cfg) {
  validate_task_spec(task);
  if (!net.has_node(task.initiator)) {
    throw InvalidNode("initiator " + std::to_string(task.initiator) + " is not a node");
  }
  if (cfg.k_max < 0) throw InvalidConfig("k_max must be >= 0");
  if (!(cfg.comm_model.gamma0 >= 0.0)) throw InvalidConfig("gamma0 must be >= 0");
}

}  // namespace

double assignment_total_effort(const Network& net, const Assignment& asg) {
  std::map<AgentRef, int> load;
  for (const auto& [id, ref] : asg) ++load[ref];
  double total = 0.0;
  for (const auto& [ref, count] : load) {
    total += net.nodes[static_cast<size_t>(ref.node)]
                 .agents[static_cast<size_t>(ref.agent)]
                 .baseline_effort *
             count;
  }
  return total;
}

void enumerate_candidates(const Network& net, NodeId initiator,
                          const RequirementMultiset& reqs, int k, const SearchConfig& cfg,
                          const std::function<bool(const std::vector<NodeId>&)>& visit) {
  if (k < 0) throw DomainError("hop radius must be >= 0");
  const DistanceMap dm = shortest_path_distances(net, initiator);
  const std::vector<int> others = others_within(net, dm, initiator, k);
  const int n = static_cast<int>(others.size());
  const int cap = effective_size_cap(cfg, reqs);
  const auto contributes = contribution_flags(net, reqs);

  std::vector<NodeId> coalition;
  for (int m = 0; m <= std::min(cap - 1, n); ++m) {
    std::vector<int> picks(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) picks[static_cast<size_t>(i)] = i;
    bool more = true;
    while (more) {
      build_coalition(initiator, others, picks, coalition);
      if (!(cfg.prune && prune_skips(coalition, initiator, contributes))) {
        if (!visit(coalition)) return;
      }
      more = m > 0 && next_combination(picks, n);
    }
  }
}

SearchResult solve_serial(const Network& net, const TaskSpec& task, const SearchConfig& cfg) {
  check_inputs(net, task, cfg);
  const DistanceMap dm = shortest_path_distances(net, task.initiator);
  const int cap = effective_size_cap(cfg, task.requirements);
  const auto contributes = contribution_flags(net, task.requirements);

  SearchResult res;
  std::optional<double> best_cost;
  std::vector<NodeId> coalition;

  for (int k = 1; k <= cfg.k_max; ++k) {
    const std::vector<int> others = others_within(net, dm, task.initiator, k);
    const int n = static_cast<int>(others.size());

    bool have_winner = false;
    double winner_objective = 0.0;
    std::vector<NodeId> winner_coalition;
    CandidateEval winner_eval;

    for (int m = 0; m <= std::min(cap - 1, n); ++m) {
      std::vector<int> picks(static_cast<size_t>(m));
      for (int i = 0; i < m; ++i) picks[static_cast<size_t>(i)] = i;
      bool more = true;
      while (more) {
        build_coalition(task.initiator, others, picks, coalition);
        if (!(cfg.prune && prune_skips(coalition, task.initiator, contributes))) {
          ++res.evaluations;
          CandidateEval ev = evaluate_candidate(net, task, coalition, cfg);
          if (ev.verdict.feasible) {
            if (!best_cost || ev.cost < *best_cost) best_cost = ev.cost;
            // Strict improvement only: enumeration order is size then
            // lexicographic, so ties keep the earlier candidate.
            if (!have_winner || ev.objective < winner_objective) {
              have_winner = true;
              winner_objective = ev.objective;
              winner_coalition = coalition;
              winner_eval = std::move(ev);
            }
          }
          if (best_cost) res.trace.push_back({res.evaluations, *best_cost});
        }
        more = m > 0 && next_combination(picks, n);
      }
    }

    if (have_winner) {
      fill_found(res, std::move(winner_coalition), k, std::move(winner_eval));
      return res;
    }
  }
  return res;
}

SearchResult solve(const Network& net, const TaskSpec& task, const SearchConfig& cfg) {
  check_inputs(net, task, cfg);
  const DistanceMap dm = shortest_path_distances(net, task.initiator);
  const int cap = effective_size_cap(cfg, task.requirements);
  const auto contributes = contribution_flags(net, task.requirements);

  SearchResult res;
  std::optional<double> best_cost;

  struct Slot {
    std::uint8_t evaluated = 0;
    std::uint8_t feasible = 0;
    double cost = 0.0;
    double objective = 0.0;
  };

  for (int k = 1; k <= cfg.k_max; ++k) {
    const std::vector<int> others = others_within(net, dm, task.initiator, k);
    const int n = static_cast<int>(others.size());

    bool have_winner = false;
    double winner_objective = 0.0;
    int winner_m = 0;
    std::uint64_t winner_rank = 0;

    for (int m = 0; m <= std::min(cap - 1, n); ++m) {
      const std::uint64_t count = comb(n, m);
      if (count > kMaxBlock) {
        throw Error("candidate block of " + std::to_string(count) +
                    " coalitions exceeds the enumeration limit; lower "
                    "max_coalition_size or k_max");
      }
      std::vector<Slot> slots(static_cast<size_t>(count));

      // Candidate evaluations are independent; fill the slots in parallel and
      // do all order-sensitive work in the serial pass below.
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
#endif
      for (long long r = 0; r < static_cast<long long>(count); ++r) {
        std::vector<int> picks;
        std::vector<NodeId> coalition;
        unrank_combination(n, m, static_cast<std::uint64_t>(r), picks);
        build_coalition(task.initiator, others, picks, coalition);
        if (cfg.prune && prune_skips(coalition, task.initiator, contributes)) continue;
        const CandidateEval ev = evaluate_candidate(net, task, coalition, cfg);
        Slot& s = slots[static_cast<size_t>(r)];
        s.evaluated = 1;
        s.feasible = ev.verdict.feasible ? 1 : 0;
        s.cost = ev.cost;
        s.objective = ev.objective;
      }

      // Serial merge in enumeration order; identical to the reference path.
      for (std::uint64_t r = 0; r < count; ++r) {
        const Slot& s = slots[static_cast<size_t>(r)];
        if (!s.evaluated) continue;
        ++res.evaluations;
        if (s.feasible) {
          if (!best_cost || s.cost < *best_cost) best_cost = s.cost;
          if (!have_winner || s.objective < winner_objective) {
            have_winner = true;
            winner_objective = s.objective;
            winner_m = m;
            winner_rank = r;
          }
        }
        if (best_cost) res.trace.push_back({res.evaluations, *best_cost});
      }
    }

    if (have_winner) {
      std::vector<int> picks;
      std::vector<NodeId> coalition;
      unrank_combination(n, winner_m, winner_rank, picks);
      build_coalition(task.initiator, others, picks, coalition);
      CandidateEval ev = evaluate_candidate(net, task, coalition, cfg);
      fill_found(res, std::move(coalition), k, std::move(ev));
      return res;
    }
  }
  return res;
}

SearchResult brute_force_oracle(const Network& net, const TaskSpec& task,
                                const SearchConfig& cfg) {
  check_inputs(net, task, cfg);
  const DistanceMap dm = shortest_path_distances(net, task.initiator);
  const std::vector<int> others = others_within(net, dm, task.initiator, cfg.k_max);
  const int n = static_cast<int>(others.size());
  const int cap = effective_size_cap(cfg, task.requirements);

  SearchResult res;
  std::optional<double> best_cost;

  bool have_best = false;
  int best_radius = 0;
  double best_objective = 0.0;
  std::vector<NodeId> best_coalition;
  CandidateEval best_eval;

  std::vector<NodeId> coalition;
  for (int m = 0; m <= std::min(cap - 1, n); ++m) {
    std::vector<int> picks(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) picks[static_cast<size_t>(i)] = i;
    bool more = true;
    while (more) {
      build_coalition(task.initiator, others, picks, coalition);
      ++res.evaluations;
      CandidateEval ev = evaluate_candidate(net, task, coalition, cfg);
      if (ev.verdict.feasible) {
        int maxdist = 0;
        for (NodeId i : coalition) maxdist = std::max(maxdist, dm[i]);
        // The radius loop starts at 1, so a lone initiator surfaces at k = 1.
        const int radius = std::max(1, maxdist);
        if (!best_cost || ev.cost < *best_cost) best_cost = ev.cost;
        // Size-then-lexicographic enumeration makes the first candidate at
        // equal (radius, objective) the tie-break winner.
        if (!have_best || radius < best_radius ||
            (radius == best_radius && ev.objective < best_objective)) {
          have_best = true;
          best_radius = radius;
          best_objective = ev.objective;
          best_coalition = coalition;
          best_eval = std::move(ev);
        }
      }
      if (best_cost) res.trace.push_back({res.evaluations, *best_cost});
      more = m > 0 && next_combination(picks, n);
    }
  }

  if (have_best) {
    fill_found(res, std::move(best_coalition), best_radius, std::move(best_eval));
  }
  return res;
}

const char* to_string(SearchStatus s) {
  return s == SearchStatus::Found ? "FOUND" : "INFEASIBLE";
}

std::string to_string(SelectionCriterion s) {
  return s == SelectionCriterion::TotalEffort ? "TOTAL_EFFORT" : "TOTAL_COST";
}

SelectionCriterion selection_from_string(const std::string& s) {
  if (s == "TOTAL_EFFORT") return SelectionCriterion::TotalEffort;
  if (s == "TOTAL_COST") return SelectionCriterion::TotalCost;
  throw ParseError("unknown selection criterion \"" + s + "\"");
}

void to_json(nlohmann::json& j, const SearchResult& result) {
  using nlohmann::json;
  json trace = json::array();
  for (const auto& p : result.trace) trace.push_back({p.iteration, p.best_cost});
  j = json{{"status", to_string(result.status)},
           {"evaluations", result.evaluations},
           {"trace", std::move(trace)}};
  if (result.status == SearchStatus::Found) {
    j["radius"] = result.radius;
    j["coalition"] = result.coalition;
    json asg = json::object();
    for (const auto& [id, ref] : result.assignment) {
      asg[id] = {{"node", ref.node}, {"agent", ref.agent}};
    }
    j["assignment"] = std::move(asg);
    j["total_effort"] = result.total_effort;
    j["total_cost"] = result.total_cost;
    j["reward"] = result.report.reward;
    json alloc = json::object();
    if (result.report.allocation) {
      for (const auto& [i, w] : *result.report.allocation) alloc[std::to_string(i)] = w;
    }
    j["allocation"] = std::move(alloc);
  }
}

void write_trace_csv(const SearchResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open \"" + path + "\" for writing");
  out << "iteration,best_cost\n";
  for (const auto& p : result.trace) {
    out << p.iteration << ',' << detail::format_double(p.best_cost) << '\n';
  }
  if (!out) throw IoError("failed writing \"" + path + "\"");
}

}  // namespace coalnet
