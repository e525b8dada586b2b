// Command-line front end: config bootstrap, network generation, single-task
// coalition search, the staged case study, and the Monte-Carlo breadth sweep.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"

#include "coalnet/errors.hpp"
#include "coalnet/harness.hpp"
#include "coalnet/network.hpp"
#include "coalnet/search.hpp"
#include "coalnet/workflow.hpp"

namespace {

constexpr int kExitFound = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;

nlohmann::json read_json_file(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw coalnet::IoError(std::string("cannot open ") + what + " \"" + path + "\"");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw coalnet::ParseError(std::string(what) + " \"" + path + "\": " + e.what());
  }
  return j;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw coalnet::IoError("cannot open \"" + path + "\" for writing");
  out << j.dump(2) << "\n";
  if (!out) throw coalnet::IoError("failed writing \"" + path + "\"");
}

coalnet::ExperimentConfig config_or_default(const std::string& path) {
  return path.empty() ? coalnet::ExperimentConfig{} : coalnet::load_config(path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coalition formation over capability-typed agent networks"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads, "worker thread count (0 = library default)");

  // init-config
  std::string init_path;
  auto* init = app.add_subcommand("init-config", "write the documented default config");
  init->add_option("path", init_path, "output path")->required();

  // gen-network
  std::string gen_config, gen_out;
  std::optional<std::uint64_t> gen_seed;
  auto* gen = app.add_subcommand("gen-network", "generate a random network");
  gen->add_option("--config", gen_config, "experiment config (defaults used if omitted)");
  gen->add_option("--seed", gen_seed, "seed override (defaults to the config seed)");
  gen->add_option("--out", gen_out, "output network JSON")->required();

  // solve
  std::string solve_net, solve_task, solve_out, solve_trace;
  bool use_oracle = false;
  coalnet::SearchConfig scfg;
  int max_size = 0;
  std::string asg_mode = "SHARED", comm_mode = "FIXED_PER_NODE", selection = "TOTAL_EFFORT";
  auto* sol = app.add_subcommand("solve", "find a minimum-effort feasible coalition");
  sol->add_option("--network", solve_net, "network JSON")->required();
  sol->add_option("--task", solve_task, "task JSON")->required();
  sol->add_option("--out", solve_out, "result JSON")->required();
  sol->add_option("--trace", solve_trace, "best-cost trace CSV");
  sol->add_option("--k-max", scfg.k_max, "maximum hop radius");
  sol->add_option("--max-coalition-size", max_size,
                  "coalition size cap (0 = number of distinct required capabilities)");
  sol->add_option("--assignment-mode", asg_mode, "SHARED or ONE_TO_ONE");
  sol->add_option("--comm-mode", comm_mode, "FIXED_PER_NODE or DISTANCE_PROPORTIONAL");
  sol->add_option("--gamma0", scfg.comm_model.gamma0, "per-hop communication cost");
  sol->add_option("--selection", selection, "TOTAL_EFFORT or TOTAL_COST");
  sol->add_flag("--no-prune", "evaluate candidates with non-contributing nodes too");
  sol->add_flag("--oracle", use_oracle, "exhaustive reference search instead of radius loop");

  // case-study
  std::string cs_config, cs_out_dir;
  std::optional<std::uint64_t> cs_seed;
  auto* cs = app.add_subcommand("case-study", "run the staged pipeline case study");
  cs->add_option("--config", cs_config, "experiment config (defaults used if omitted)");
  cs->add_option("--seed", cs_seed, "seed override (defaults to the config seed)");
  cs->add_option("--out-dir", cs_out_dir, "output directory")->required();

  // sweep
  std::string sw_config, sw_out, sw_summary;
  auto* sw = app.add_subcommand("sweep", "Monte-Carlo sweep over capability breadth");
  sw->add_option("--config", sw_config, "experiment config (defaults used if omitted)");
  sw->add_option("--out", sw_out, "records CSV")->required();
  sw->add_option("--summary", sw_summary, "per-breadth summary CSV");

  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif

  try {
    if (*init) {
      coalnet::emit_default_config(init_path);
      return kExitFound;
    }

    if (*gen) {
      const auto cfg = config_or_default(gen_config);
      const auto net = coalnet::generate_network(cfg, gen_seed.value_or(cfg.seed));
      write_json_file(gen_out, nlohmann::json(net));
      return kExitFound;
    }

    if (*sol) {
      const coalnet::Network net =
          read_json_file(solve_net, "network").get<coalnet::Network>();
      const coalnet::TaskSpec task =
          read_json_file(solve_task, "task").get<coalnet::TaskSpec>();
      if (max_size > 0) scfg.max_coalition_size = max_size;
      scfg.assignment_mode = asg_mode == "ONE_TO_ONE" ? coalnet::AssignmentMode::OneToOne
                                                      : coalnet::AssignmentMode::Shared;
      scfg.comm_model.mode = comm_mode == "DISTANCE_PROPORTIONAL"
                                 ? coalnet::CommMode::DistanceProportional
                                 : coalnet::CommMode::FixedPerNode;
      scfg.selection = coalnet::selection_from_string(selection);
      scfg.prune = sol->count("--no-prune") == 0;

      const coalnet::SearchResult result = use_oracle
                                               ? coalnet::brute_force_oracle(net, task, scfg)
                                               : coalnet::solve(net, task, scfg);
      write_json_file(solve_out, nlohmann::json(result));
      if (!solve_trace.empty()) coalnet::write_trace_csv(result, solve_trace);
      if (result.status == coalnet::SearchStatus::Found) {
        std::cout << "FOUND coalition of " << result.coalition.size() << " node(s) at radius "
                  << result.radius << ": effort " << result.total_effort << ", cost "
                  << result.total_cost << ", reward " << result.report.reward << "\n";
        return kExitFound;
      }
      std::cout << "INFEASIBLE after " << result.evaluations << " evaluations\n";
      return kExitInfeasible;
    }

    if (*cs) {
      const auto cfg = config_or_default(cs_config);
      const auto out = coalnet::run_case_study(cfg, cs_seed.value_or(cfg.seed), cs_out_dir);
      if (out.result.status == coalnet::SearchStatus::Found) {
        std::cout << "FOUND coalition of " << out.result.coalition.size()
                  << " node(s) at radius " << out.result.radius << ": cost "
                  << out.result.total_cost << ", reward " << out.result.report.reward
                  << ", surplus " << out.result.report.reward - out.result.total_cost << "\n";
        return kExitFound;
      }
      std::cout << "INFEASIBLE after " << out.result.evaluations << " evaluations\n";
      return kExitInfeasible;
    }

    if (*sw) {
      const auto cfg = config_or_default(sw_config);
      const auto records = coalnet::run_breadth_sweep(cfg);
      coalnet::write_sweep_csv(records, sw_out);
      if (!sw_summary.empty()) {
        coalnet::write_sweep_summary_csv(coalnet::summarize_sweep(records), sw_summary);
      }
      std::cout << records.size() << " trials written to " << sw_out << "\n";
      return kExitFound;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
