#include "coalnet/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "coalnet/rng.hpp"
#include "json_util.hpp"

namespace coalnet {

namespace {

using nlohmann::json;
using detail::expect_keys;
using detail::format_double;

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open \"" + path + "\" for writing");
  out << content;
  if (!out) throw IoError("failed writing \"" + path + "\"");
}

void write_json_file(const std::string& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

Range range_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) {
    throw ParseError(where + ": expected a [lo, hi] pair");
  }
  return Range{j[0].get<double>(), j[1].get<double>()};
}

json range_to_json(const Range& r) { return json::array({r.lo, r.hi}); }

void check_range_order(const Range& r, const char* name) {
  if (!(r.lo <= r.hi)) {
    throw InvalidConfig(std::string(name) + ": empty range [" + std::to_string(r.lo) +
                        ", " + std::to_string(r.hi) + "]");
  }
}

std::string assignment_mode_name(AssignmentMode m) {
  return m == AssignmentMode::Shared ? "SHARED" : "ONE_TO_ONE";
}

AssignmentMode assignment_mode_from(const std::string& s) {
  if (s == "SHARED") return AssignmentMode::Shared;
  if (s == "ONE_TO_ONE") return AssignmentMode::OneToOne;
  throw ParseError("unknown assignment mode \"" + s + "\"");
}

std::string comm_mode_name(CommMode m) {
  return m == CommMode::FixedPerNode ? "FIXED_PER_NODE" : "DISTANCE_PROPORTIONAL";
}

CommMode comm_mode_from(const std::string& s) {
  if (s == "FIXED_PER_NODE") return CommMode::FixedPerNode;
  if (s == "DISTANCE_PROPORTIONAL") return CommMode::DistanceProportional;
  throw ParseError("unknown comm mode \"" + s + "\"");
}

}  // namespace

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.n_nodes < 1) throw InvalidConfig("n_nodes must be >= 1");
  if (!(cfg.edge_prob >= 0.0 && cfg.edge_prob <= 1.0)) {
    throw InvalidConfig("edge_prob must be in [0, 1]");
  }
  if (cfg.capability_space.empty()) throw InvalidConfig("capability_space must be nonempty");
  std::set<Capability> seen;
  for (const auto& c : cfg.capability_space) {
    if (c.empty() || !seen.insert(c).second) {
      throw InvalidConfig("capability_space labels must be nonempty and unique");
    }
  }
  const int space = static_cast<int>(cfg.capability_space.size());
  if (cfg.agents_per_node < 1) throw InvalidConfig("agents_per_node must be >= 1");
  if (cfg.max_caps < 1 || cfg.max_caps > space) {
    throw InvalidConfig("max_caps must be in [1, |capability_space|]");
  }
  if (cfg.max_caps_values.empty()) throw InvalidConfig("max_caps_values must be nonempty");
  for (int x : cfg.max_caps_values) {
    if (x < 1 || x > space) {
      throw InvalidConfig("max_caps_values entries must be in [1, |capability_space|]");
    }
  }
  if (cfg.trials < 1) throw InvalidConfig("trials must be >= 1");
  if (!(cfg.beta > 0.0)) throw InvalidConfig("beta must be > 0");
  check_range_order(cfg.econ.rho, "econ.rho");
  check_range_order(cfg.econ.alpha, "econ.alpha");
  check_range_order(cfg.econ.kappa_cpu, "econ.kappa_cpu");
  check_range_order(cfg.econ.kappa_lat, "econ.kappa_lat");
  check_range_order(cfg.econ.comm_fixed, "econ.comm_fixed");
  check_range_order(cfg.econ.baseline_effort, "econ.baseline_effort");
  if (cfg.search.k_max < 1) throw InvalidConfig("search.k_max must be >= 1");
  if (cfg.search.max_coalition_size && *cfg.search.max_coalition_size < 1) {
    throw InvalidConfig("search.max_coalition_size must be >= 1 when set");
  }
  if (!(cfg.search.comm_model.gamma0 >= 0.0)) throw InvalidConfig("search.gamma0 must be >= 0");
}

TaskSpec make_case_study_task(const ExperimentConfig& cfg) {
  TaskSpec task;
  task.initiator = 0;
  task.beta = cfg.beta;
  task.aggregation = cfg.aggregation;
  const size_t stages = cfg.capability_space.size();
  const int width = static_cast<int>(std::to_string(stages).size());
  std::string prev;
  for (size_t i = 0; i < stages; ++i) {
    const Capability& cap = cfg.capability_space[i];
    std::ostringstream id;
    id << 's';
    std::string num = std::to_string(i + 1);
    id << std::string(static_cast<size_t>(width) - num.size(), '0') << num << '_' << cap;
    task.workflow.subtasks.push_back({id.str(), cap});
    if (!prev.empty()) task.workflow.deps.emplace_back(prev, id.str());
    prev = id.str();
    task.requirements.counts[cap] = 1;
  }
  validate_task_spec(task);
  return task;
}

Network generate_network(const ExperimentConfig& cfg, std::uint64_t seed) {
  return generate_network(cfg, seed, cfg.max_caps);
}

Network generate_network(const ExperimentConfig& cfg, std::uint64_t seed, int max_caps) {
  validate_config(cfg);
  CapabilityAssignmentConfig cap_cfg;
  cap_cfg.capability_space = cfg.capability_space;
  cap_cfg.agents_per_node = cfg.agents_per_node;
  cap_cfg.max_caps = max_caps;
  return generate_er_network(cfg.n_nodes, cfg.edge_prob, cap_cfg, cfg.econ, seed);
}

CaseStudyOutput run_case_study(const ExperimentConfig& cfg, std::uint64_t seed,
                               const std::string& out_dir) {
  validate_config(cfg);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create directory \"" + out_dir + "\": " + ec.message());

  CaseStudyOutput out;
  out.net = generate_network(cfg, seed);
  out.task = make_case_study_task(cfg);
  out.result = solve(out.net, out.task, cfg.search);

  const std::filesystem::path dir(out_dir);
  write_json_file((dir / "network.json").string(), json(out.net));
  write_json_file((dir / "task.json").string(), json(out.task));
  write_json_file((dir / "result.json").string(), json(out.result));
  write_trace_csv(out.result, (dir / "trace.csv").string());
  return out;
}

std::vector<SweepRecord> run_breadth_sweep(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const TaskSpec task = make_case_study_task(cfg);
  const long long total =
      static_cast<long long>(cfg.max_caps_values.size()) * cfg.trials;
  std::vector<SweepRecord> records(static_cast<size_t>(total));

  std::string error;

  // Trials are parallel and each owns its sub-seeded generator; the kernel
  // below each trial stays serial so the two levels do not nest.
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (long long idx = 0; idx < total; ++idx) {
    const int x = cfg.max_caps_values[static_cast<size_t>(idx) / static_cast<size_t>(cfg.trials)];
    const int trial = static_cast<int>(idx % cfg.trials);
    try {
      const std::uint64_t sub_seed =
          combine_seed(combine_seed(cfg.seed, static_cast<std::uint64_t>(x)),
                       static_cast<std::uint64_t>(trial));
      const Network net = generate_network(cfg, sub_seed, x);
      const SearchResult result = solve_serial(net, task, cfg.search);

      SweepRecord rec;
      rec.x = x;
      rec.trial = trial;
      rec.status = result.status;
      rec.evaluations = result.evaluations;
      if (result.status == SearchStatus::Found) {
        rec.k = result.radius;
        rec.coalition_size = static_cast<int>(result.coalition.size());
        rec.total_effort = result.total_effort;
        rec.total_cost = result.total_cost;
        rec.reward = result.report.reward;
      }
      records[static_cast<size_t>(idx)] = rec;
    } catch (const std::exception& e) {
#ifdef _OPENMP
#pragma omp critical
#endif
      if (error.empty()) error = e.what();
    }
  }

  if (!error.empty()) throw Error("sweep trial failed: " + error);
  return records;
}

std::vector<SweepSummaryRow> summarize_sweep(const std::vector<SweepRecord>& records) {
  std::vector<int> xs;
  for (const auto& r : records) {
    if (std::find(xs.begin(), xs.end(), r.x) == xs.end()) xs.push_back(r.x);
  }

  std::vector<SweepSummaryRow> rows;
  for (int x : xs) {
    SweepSummaryRow row;
    row.x = x;
    double sum_k = 0.0, sum_size = 0.0;
    for (const auto& r : records) {
      if (r.x != x) continue;
      ++row.trials;
      if (r.status == SearchStatus::Found) {
        ++row.found;
        sum_k += r.k;
        sum_size += r.coalition_size;
      }
    }
    row.feasibility_rate = row.trials > 0
                               ? static_cast<double>(row.found) / static_cast<double>(row.trials)
                               : 0.0;
    if (row.found > 0) {
      row.mean_k = sum_k / row.found;
      row.mean_coalition_size = sum_size / row.found;
    }
    if (row.found > 1) {
      double ss_k = 0.0, ss_size = 0.0;
      for (const auto& r : records) {
        if (r.x != x || r.status != SearchStatus::Found) continue;
        ss_k += (r.k - row.mean_k) * (r.k - row.mean_k);
        ss_size += (r.coalition_size - row.mean_coalition_size) *
                   (r.coalition_size - row.mean_coalition_size);
      }
      row.std_k = std::sqrt(ss_k / (row.found - 1));
      row.std_coalition_size = std::sqrt(ss_size / (row.found - 1));
    }
    rows.push_back(row);
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRecord>& records, const std::string& path) {
  std::ostringstream out;
  out << "x,trial,status,k,coalition_size,total_effort,total_cost,reward,evaluations\n";
  for (const auto& r : records) {
    out << r.x << ',' << r.trial << ',' << to_string(r.status) << ',' << r.k << ','
        << r.coalition_size << ',' << format_double(r.total_effort) << ','
        << format_double(r.total_cost) << ',' << format_double(r.reward) << ','
        << r.evaluations << '\n';
  }
  write_text_file(path, out.str());
}

void write_sweep_summary_csv(const std::vector<SweepSummaryRow>& rows,
                             const std::string& path) {
  std::ostringstream out;
  out << "x,trials,found,feasibility_rate,mean_k,std_k,mean_coalition_size,"
         "std_coalition_size\n";
  for (const auto& r : rows) {
    out << r.x << ',' << r.trials << ',' << r.found << ','
        << format_double(r.feasibility_rate) << ',' << format_double(r.mean_k) << ','
        << format_double(r.std_k) << ',' << format_double(r.mean_coalition_size) << ','
        << format_double(r.std_coalition_size) << '\n';
  }
  write_text_file(path, out.str());
}

void to_json(nlohmann::json& j, const ExperimentConfig& cfg) {
  j = json{
      {"_doc",
       {{"n_nodes", "number of nodes in the generated network"},
        {"edge_prob", "independent edge probability of the random graph"},
        {"capability_space", "global capability labels; the staged task uses them in order"},
        {"agents_per_node", "agents hosted at each node"},
        {"max_caps", "per-agent capability breadth for gen-network and case-study"},
        {"max_caps_values", "breadth values swept by the sweep command"},
        {"trials", "Monte-Carlo repetitions per breadth value"},
        {"seed", "master seed; all randomness derives from it"},
        {"beta", "reward scale: reward = beta * ln(1 + outcome)"},
        {"aggregation", "terminal-output aggregation: PRODUCT, MEAN, or MIN"},
        {"econ", "uniform [lo, hi] sampling ranges for node/agent parameters"},
        {"search",
         "k_max: max hop radius; max_coalition_size: null = number of distinct "
         "required capabilities; assignment_mode: SHARED or ONE_TO_ONE; comm_mode: "
         "FIXED_PER_NODE or DISTANCE_PROPORTIONAL with gamma0 per hop; prune: skip "
         "coalitions with non-contributing nodes; selection: TOTAL_EFFORT or "
         "TOTAL_COST"}}},
      {"n_nodes", cfg.n_nodes},
      {"edge_prob", cfg.edge_prob},
      {"capability_space", cfg.capability_space},
      {"agents_per_node", cfg.agents_per_node},
      {"max_caps", cfg.max_caps},
      {"max_caps_values", cfg.max_caps_values},
      {"trials", cfg.trials},
      {"seed", cfg.seed},
      {"beta", cfg.beta},
      {"aggregation", to_string(cfg.aggregation)},
      {"econ",
       {{"rho", range_to_json(cfg.econ.rho)},
        {"alpha", range_to_json(cfg.econ.alpha)},
        {"kappa_cpu", range_to_json(cfg.econ.kappa_cpu)},
        {"kappa_lat", range_to_json(cfg.econ.kappa_lat)},
        {"comm_fixed", range_to_json(cfg.econ.comm_fixed)},
        {"baseline_effort", range_to_json(cfg.econ.baseline_effort)}}},
      {"search",
       {{"k_max", cfg.search.k_max},
        {"max_coalition_size", cfg.search.max_coalition_size
                                   ? json(*cfg.search.max_coalition_size)
                                   : json(nullptr)},
        {"assignment_mode", assignment_mode_name(cfg.search.assignment_mode)},
        {"comm_mode", comm_mode_name(cfg.search.comm_model.mode)},
        {"gamma0", cfg.search.comm_model.gamma0},
        {"prune", cfg.search.prune},
        {"selection", to_string(cfg.search.selection)}}}};
}

void from_json(const nlohmann::json& j, ExperimentConfig& cfg) {
  if (!j.is_object()) throw ParseError("config: expected a JSON object");
  // "_doc" is the only optional key; everything else is required and nothing
  // unknown is accepted.
  json stripped = j;
  stripped.erase("_doc");
  expect_keys(stripped,
              {"n_nodes", "edge_prob", "capability_space", "agents_per_node", "max_caps",
               "max_caps_values", "trials", "seed", "beta", "aggregation", "econ", "search"},
              "config");

  cfg = ExperimentConfig{};
  cfg.n_nodes = stripped.at("n_nodes").get<int>();
  cfg.edge_prob = stripped.at("edge_prob").get<double>();
  cfg.capability_space = stripped.at("capability_space").get<std::vector<Capability>>();
  cfg.agents_per_node = stripped.at("agents_per_node").get<int>();
  cfg.max_caps = stripped.at("max_caps").get<int>();
  cfg.max_caps_values = stripped.at("max_caps_values").get<std::vector<int>>();
  cfg.trials = stripped.at("trials").get<int>();
  cfg.seed = stripped.at("seed").get<std::uint64_t>();
  cfg.beta = stripped.at("beta").get<double>();
  cfg.aggregation = aggregation_from_string(stripped.at("aggregation").get<std::string>());

  const auto& je = stripped.at("econ");
  expect_keys(je, {"rho", "alpha", "kappa_cpu", "kappa_lat", "comm_fixed", "baseline_effort"},
              "config econ");
  cfg.econ.rho = range_from_json(je.at("rho"), "econ.rho");
  cfg.econ.alpha = range_from_json(je.at("alpha"), "econ.alpha");
  cfg.econ.kappa_cpu = range_from_json(je.at("kappa_cpu"), "econ.kappa_cpu");
  cfg.econ.kappa_lat = range_from_json(je.at("kappa_lat"), "econ.kappa_lat");
  cfg.econ.comm_fixed = range_from_json(je.at("comm_fixed"), "econ.comm_fixed");
  cfg.econ.baseline_effort = range_from_json(je.at("baseline_effort"), "econ.baseline_effort");

  const auto& js = stripped.at("search");
  expect_keys(js,
              {"k_max", "max_coalition_size", "assignment_mode", "comm_mode", "gamma0",
               "prune", "selection"},
              "config search");
  cfg.search.k_max = js.at("k_max").get<int>();
  if (js.at("max_coalition_size").is_null()) {
    cfg.search.max_coalition_size.reset();
  } else {
    cfg.search.max_coalition_size = js.at("max_coalition_size").get<int>();
  }
  cfg.search.assignment_mode = assignment_mode_from(js.at("assignment_mode").get<std::string>());
  cfg.search.comm_model.mode = comm_mode_from(js.at("comm_mode").get<std::string>());
  cfg.search.comm_model.gamma0 = js.at("gamma0").get<double>();
  cfg.search.prune = js.at("prune").get<bool>();
  cfg.search.selection = selection_from_string(js.at("selection").get<std::string>());

  validate_config(cfg);
}

void emit_default_config(const std::string& path) {
  write_json_file(path, json(ExperimentConfig{}));
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config \"" + path + "\"");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError("config \"" + path + "\": " + e.what());
  }
  return j.get<ExperimentConfig>();
}

}  // namespace coalnet
