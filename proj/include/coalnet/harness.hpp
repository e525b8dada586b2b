#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "coalnet/network.hpp"
#include "coalnet/search.hpp"
#include "coalnet/workflow.hpp"

namespace coalnet {

// Everything a reproducible experiment run depends on. Defaults are the
// documented calibration: a 40-node sparse random graph over the five-stage
// document-intake pipeline capability set, with economic draws wide enough
// that feasible coalitions exist at moderate radii for most seeds.
struct ExperimentConfig {
  int n_nodes = 40;
  double edge_prob = 0.15;
  std::vector<Capability> capability_space = {"OCR", "RAD", "DX", "VAL", "CONS"};
  int agents_per_node = 1;
  int max_caps = 2;                               // case-study per-agent breadth
  std::vector<int> max_caps_values = {1, 2, 3, 4, 5};  // sweep breadths
  int trials = 200;                               // Monte-Carlo repetitions per breadth
  std::uint64_t seed = 1;
  double beta = 10.0;
  Aggregation aggregation = Aggregation::Product;
  EconRanges econ;
  SearchConfig search;
};

// Throws InvalidConfig on any out-of-range field.
void validate_config(const ExperimentConfig& cfg);

// One Monte-Carlo outcome. Infeasible trials carry k = -1 and zeroed
// size/effort/cost/reward fields; evaluations is always the real count.
struct SweepRecord {
  int x = 0;      // per-agent capability breadth
  int trial = 0;
  SearchStatus status = SearchStatus::Infeasible;
  int k = -1;
  int coalition_size = 0;
  double total_effort = 0.0;
  double total_cost = 0.0;
  double reward = 0.0;
  long long evaluations = 0;
};

// Per-breadth aggregate over FOUND trials (sample standard deviation; 0 when
// fewer than two found). Infeasible trials only affect feasibility_rate.
struct SweepSummaryRow {
  int x = 0;
  int trials = 0;
  int found = 0;
  double feasibility_rate = 0.0;
  double mean_k = 0.0;
  double std_k = 0.0;
  double mean_coalition_size = 0.0;
  double std_coalition_size = 0.0;
};

struct CaseStudyOutput {
  Network net;
  TaskSpec task;
  SearchResult result;
};

// The staged pipeline task: one sub-task per configured capability, chained in
// capability-space order, each capability required once, initiated at node 0.
TaskSpec make_case_study_task(const ExperimentConfig& cfg);

// Network drawn from the config (optionally overriding per-agent breadth).
Network generate_network(const ExperimentConfig& cfg, std::uint64_t seed);
Network generate_network(const ExperimentConfig& cfg, std::uint64_t seed, int max_caps);

// Generates a network from (cfg, seed), solves the staged pipeline task, and
// writes network.json, task.json, result.json, and trace.csv under out_dir.
// Deterministic: equal (cfg, seed) give byte-identical files.
CaseStudyOutput run_case_study(const ExperimentConfig& cfg, std::uint64_t seed,
                               const std::string& out_dir);

// Monte-Carlo sweep over per-agent capability breadth: for every x in
// cfg.max_caps_values and trial in [0, trials), generates a fresh network
// sub-seeded from (seed, x, trial) and solves the pipeline task. Trials run
// concurrently (each owns its sub-seeded generator); records are collected in
// grid order, so output is identical to a sequential run.
std::vector<SweepRecord> run_breadth_sweep(const ExperimentConfig& cfg);

std::vector<SweepSummaryRow> summarize_sweep(const std::vector<SweepRecord>& records);

// Header: x,trial,status,k,coalition_size,total_effort,total_cost,reward,evaluations
void write_sweep_csv(const std::vector<SweepRecord>& records, const std::string& path);
void write_sweep_summary_csv(const std::vector<SweepSummaryRow>& rows, const std::string& path);

// Writes the fully documented default configuration (a "_doc" block describes
// every field; the loader accepts and ignores it). Round-trips through
// load_config unchanged.
void emit_default_config(const std::string& path);
ExperimentConfig load_config(const std::string& path);

void to_json(nlohmann::json& j, const ExperimentConfig& cfg);
void from_json(const nlohmann::json& j, ExperimentConfig& cfg);

}  // namespace coalnet
