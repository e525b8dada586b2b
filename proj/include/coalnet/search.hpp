#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "coalnet/economics.hpp"
#include "coalnet/feasibility.hpp"
#include "coalnet/network.hpp"
#include "coalnet/workflow.hpp"

namespace coalnet {

// What the selection step minimizes among feasible coalitions at a radius.
// Both values are reported in every result either way.
enum class SelectionCriterion { TotalEffort, TotalCost };

struct SearchConfig {
  int k_max = 4;
  // Cap on coalition size; defaults to the number of distinct required
  // capabilities when unset.
  std::optional<int> max_coalition_size;
  AssignmentMode assignment_mode = AssignmentMode::Shared;
  CommModel comm_model{};
  bool prune = true;  // skip coalitions carrying a node with no required capability
  SelectionCriterion selection = SelectionCriterion::TotalEffort;
};

enum class SearchStatus { Found, Infeasible };

struct TracePoint {
  long long iteration = 0;  // 1-based evaluation index
  double best_cost = 0.0;   // least total cost among feasible candidates so far
};

struct SearchResult {
  SearchStatus status = SearchStatus::Infeasible;
  std::vector<NodeId> coalition;  // sorted; empty when infeasible
  int radius = -1;                // hop radius at which found; -1 when infeasible
  Assignment assignment;
  EconomicReport report;
  double total_effort = 0.0;
  double total_cost = 0.0;
  long long evaluations = 0;
  // One point per evaluation from the first feasible candidate onward (the
  // running best is undefined before that); non-increasing in best_cost.
  std::vector<TracePoint> trace;
};

// Streams initiator-containing subsets of the k-hop neighborhood in increasing
// size then lexicographic order, capped at the effective coalition size limit.
// With cfg.prune, subsets containing a non-initiator node whose agents hold no
// required capability are skipped: such a node adds cost but can never carry a
// sub-task, so dropping it keeps every covering coalition reachable. The
// visitor returns false to stop early.
void enumerate_candidates(const Network& net, NodeId initiator,
                          const RequirementMultiset& reqs, int k, const SearchConfig& cfg,
                          const std::function<bool(const std::vector<NodeId>&)>& visit);

// Expanding hop-radius search: for k = 1..k_max, evaluate every candidate at
// radius k and return the feasible coalition minimizing the selection
// objective (ties: smaller coalition, then lexicographic node ids). Candidate
// evaluation is data-parallel (OpenMP when enabled); results are identical to
// solve_serial bit for bit, including the trace.
SearchResult solve(const Network& net, const TaskSpec& task, const SearchConfig& cfg);

// Single-threaded reference implementation of the same contract.
SearchResult solve_serial(const Network& net, const TaskSpec& task, const SearchConfig& cfg);

// Independent oracle: exhaustively evaluates ALL initiator-containing subsets
// of the k_max-hop neighborhood (no pruning, no per-radius loop) and returns
// the minimum-radius-then-minimum-objective optimum under the same
// tie-breaking. Intended for small neighborhoods (<= 20 nodes or so).
SearchResult brute_force_oracle(const Network& net, const TaskSpec& task,
                                const SearchConfig& cfg);

// Objective value recomputable from the assignment alone: sum over assigned
// agents of baseline effort times the number of sub-tasks they carry.
double assignment_total_effort(const Network& net, const Assignment& asg);

// Includes status, radius, coalition, assignment, total_effort, total_cost,
// reward, allocation, evaluations, and the trace.
void to_json(nlohmann::json& j, const SearchResult& result);

// Two-column CSV "iteration,best_cost".
void write_trace_csv(const SearchResult& result, const std::string& path);

const char* to_string(SearchStatus s);
std::string to_string(SelectionCriterion s);
SelectionCriterion selection_from_string(const std::string& s);

}  // namespace coalnet
