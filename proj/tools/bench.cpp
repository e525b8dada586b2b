// Times the parallel candidate-evaluation kernel against the serial reference
// on the staged case study, and the trial-parallel sweep against one thread.
// Results are asserted identical before any timing is reported.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "coalnet/harness.hpp"
#include "coalnet/search.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

bool same_result(const coalnet::SearchResult& a, const coalnet::SearchResult& b) {
  return a.status == b.status && a.radius == b.radius && a.coalition == b.coalition &&
         a.total_effort == b.total_effort && a.total_cost == b.total_cost &&
         a.evaluations == b.evaluations && a.trace.size() == b.trace.size();
}

}  // namespace

int main(int argc, char** argv) {
  std::uint64_t seed = 7;
  int repeats = 5;
  int sweep_trials = 10;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--seed") seed = std::strtoull(argv[i + 1], nullptr, 10);
    if (flag == "--repeats") repeats = std::atoi(argv[i + 1]);
    if (flag == "--sweep-trials") sweep_trials = std::atoi(argv[i + 1]);
  }

  coalnet::ExperimentConfig cfg;
  const coalnet::Network net = coalnet::generate_network(cfg, seed);
  const coalnet::TaskSpec task = coalnet::make_case_study_task(cfg);

#ifdef _OPENMP
  const int threads = omp_get_max_threads();
#else
  const int threads = 1;
#endif
  std::cout << "threads: " << threads << ", seed: " << seed << ", repeats: " << repeats
            << "\n\n";

  const coalnet::SearchResult ref = coalnet::solve_serial(net, task, cfg.search);
  const coalnet::SearchResult par = coalnet::solve(net, task, cfg.search);
  if (!same_result(ref, par)) {
    std::cerr << "FATAL: parallel solve differs from the serial reference\n";
    return 1;
  }
  std::cout << "solve: " << to_string(ref.status) << ", " << ref.evaluations
            << " evaluations per run\n";

  auto t0 = Clock::now();
  for (int r = 0; r < repeats; ++r) (void)coalnet::solve_serial(net, task, cfg.search);
  const double serial_ms = ms_since(t0) / repeats;

  t0 = Clock::now();
  for (int r = 0; r < repeats; ++r) (void)coalnet::solve(net, task, cfg.search);
  const double parallel_ms = ms_since(t0) / repeats;

  std::cout << "  serial reference : " << serial_ms << " ms\n";
  std::cout << "  openmp kernel    : " << parallel_ms << " ms  (x"
            << serial_ms / parallel_ms << ")\n\n";

  coalnet::ExperimentConfig sweep_cfg;
  sweep_cfg.trials = sweep_trials;
  sweep_cfg.seed = seed;

#ifdef _OPENMP
  omp_set_num_threads(1);
#endif
  t0 = Clock::now();
  const auto records_1 = coalnet::run_breadth_sweep(sweep_cfg);
  const double sweep_1_ms = ms_since(t0);

#ifdef _OPENMP
  omp_set_num_threads(threads);
#endif
  t0 = Clock::now();
  const auto records_n = coalnet::run_breadth_sweep(sweep_cfg);
  const double sweep_n_ms = ms_since(t0);

  for (size_t i = 0; i < records_1.size(); ++i) {
    if (records_1[i].status != records_n[i].status ||
        records_1[i].total_cost != records_n[i].total_cost ||
        records_1[i].evaluations != records_n[i].evaluations) {
      std::cerr << "FATAL: sweep records depend on the thread count\n";
      return 1;
    }
  }

  std::cout << "sweep (" << records_1.size() << " trials):\n";
  std::cout << "  1 thread  : " << sweep_1_ms << " ms\n";
  std::cout << "  " << threads << " thread(s): " << sweep_n_ms << " ms  (x"
            << sweep_1_ms / sweep_n_ms << ")\n";
  return 0;
}
