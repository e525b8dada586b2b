#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "coalnet/errors.hpp"
#include "coalnet/harness.hpp"

using namespace coalnet;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("coalnet_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// Small, fast configuration for file-level tests.
ExperimentConfig mini_config() {
  ExperimentConfig cfg;
  cfg.n_nodes = 14;
  cfg.edge_prob = 0.3;
  cfg.trials = 4;
  cfg.max_caps_values = {1, 3, 5};
  cfg.search.k_max = 3;
  cfg.seed = 99;
  return cfg;
}

}  // namespace

TEST_CASE("default config emits, documents itself, and round-trips") {
  const fs::path dir = temp_dir("config");
  const std::string path = (dir / "config.json").string();
  emit_default_config(path);

  const ExperimentConfig loaded = load_config(path);
  CHECK(nlohmann::json(loaded) == nlohmann::json(ExperimentConfig{}));
  CHECK(loaded.n_nodes == 40);
  CHECK(loaded.capability_space.size() == 5);
  CHECK(loaded.search.k_max == 4);
  CHECK(loaded.trials == 200);

  const nlohmann::json j = nlohmann::json::parse(slurp(path));
  CHECK(j.contains("_doc"));

  SUBCASE("unknown keys are rejected by name") {
    nlohmann::json bad = j;
    bad["n_node"] = 10;
    CHECK_THROWS_WITH_AS(bad.get<ExperimentConfig>(), doctest::Contains("n_node"), ParseError);
  }
  SUBCASE("invariants enforced on load") {
    nlohmann::json bad = j;
    bad["trials"] = 0;
    CHECK_THROWS_AS(bad.get<ExperimentConfig>(), InvalidConfig);
    nlohmann::json bad2 = j;
    bad2["max_caps"] = 9;
    CHECK_THROWS_AS(bad2.get<ExperimentConfig>(), InvalidConfig);
    nlohmann::json bad3 = j;
    bad3["search"]["k_max"] = 0;
    CHECK_THROWS_AS(bad3.get<ExperimentConfig>(), InvalidConfig);
  }
  fs::remove_all(dir);
}

TEST_CASE("case-study task is the staged chain over the capability space") {
  const TaskSpec task = make_case_study_task(ExperimentConfig{});
  CHECK(task.initiator == 0);
  REQUIRE(task.workflow.subtasks.size() == 5);
  CHECK(task.workflow.subtasks.front().capability == "OCR");
  CHECK(task.workflow.subtasks.back().capability == "CONS");
  CHECK(task.workflow.deps.size() == 4);
  CHECK(task.requirements.counts.size() == 5);
  CHECK(validate_workflow(task.workflow).size() == 5);
  CHECK(terminal_subtasks(task.workflow) == std::vector<std::string>{"s5_CONS"});
}

TEST_CASE("case-study runs are deterministic on disk") {
  const ExperimentConfig cfg = mini_config();
  const fs::path d1 = temp_dir("cs1");
  const fs::path d2 = temp_dir("cs2");
  const CaseStudyOutput a = run_case_study(cfg, 5, d1.string());
  const CaseStudyOutput b = run_case_study(cfg, 5, d2.string());

  for (const char* name : {"network.json", "task.json", "result.json", "trace.csv"}) {
    CHECK(slurp(d1 / name) == slurp(d2 / name));
  }
  CHECK(a.result.status == b.result.status);

  SUBCASE("a different seed changes the network") {
    const fs::path d3 = temp_dir("cs3");
    run_case_study(cfg, 6, d3.string());
    CHECK(slurp(d1 / "network.json") != slurp(d3 / "network.json"));
    fs::remove_all(d3);
  }
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("breadth sweep") {
  ExperimentConfig cfg = mini_config();

  SUBCASE("single trial, single breadth") {
    cfg.trials = 1;
    cfg.max_caps_values = {2};
    const auto records = run_breadth_sweep(cfg);
    REQUIRE(records.size() == 1);
    CHECK(records[0].x == 2);
    CHECK(records[0].trial == 0);
    CHECK(records[0].evaluations > 0);
  }

  SUBCASE("records are grid-ordered and FOUND rows are budget-covered") {
    const auto records = run_breadth_sweep(cfg);
    REQUIRE(records.size() == cfg.max_caps_values.size() * static_cast<size_t>(cfg.trials));
    size_t idx = 0;
    for (int x : cfg.max_caps_values) {
      for (int t = 0; t < cfg.trials; ++t, ++idx) {
        CHECK(records[idx].x == x);
        CHECK(records[idx].trial == t);
        if (records[idx].status == SearchStatus::Found) {
          CHECK(records[idx].reward >= records[idx].total_cost);
          CHECK(records[idx].k >= 1);
          CHECK(records[idx].k <= cfg.search.k_max);
        } else {
          CHECK(records[idx].k == -1);
        }
      }
    }
  }

  SUBCASE("sub-seeding: adding trials never changes earlier records") {
    ExperimentConfig more = cfg;
    more.trials = cfg.trials + 3;
    const auto base = run_breadth_sweep(cfg);
    const auto extended = run_breadth_sweep(more);
    for (size_t xi = 0; xi < cfg.max_caps_values.size(); ++xi) {
      for (int t = 0; t < cfg.trials; ++t) {
        const auto& a = base[xi * static_cast<size_t>(cfg.trials) + static_cast<size_t>(t)];
        const auto& b =
            extended[xi * static_cast<size_t>(more.trials) + static_cast<size_t>(t)];
        CHECK(a.x == b.x);
        CHECK(a.trial == b.trial);
        CHECK(a.status == b.status);
        CHECK(a.total_cost == b.total_cost);
        CHECK(a.evaluations == b.evaluations);
      }
    }
  }

  SUBCASE("CSV emission is deterministic with the exact header") {
    const fs::path dir = temp_dir("sweep");
    const auto records = run_breadth_sweep(cfg);
    write_sweep_csv(records, (dir / "a.csv").string());
    write_sweep_csv(run_breadth_sweep(cfg), (dir / "b.csv").string());
    const std::string a = slurp(dir / "a.csv");
    CHECK(a == slurp(dir / "b.csv"));
    CHECK(a.rfind("x,trial,status,k,coalition_size,total_effort,total_cost,reward,"
                  "evaluations\n",
                  0) == 0);
    fs::remove_all(dir);
  }

  SUBCASE("summary statistics recompute from the emitted CSV bytes") {
    const fs::path dir = temp_dir("sweep_csv_recompute");
    const auto records = run_breadth_sweep(cfg);
    write_sweep_csv(records, (dir / "records.csv").string());
    write_sweep_summary_csv(summarize_sweep(records), (dir / "summary.csv").string());

    struct Parsed {
      int x;
      bool found;
      int k;
      int size;
    };
    std::vector<Parsed> parsed;
    {
      std::ifstream in(dir / "records.csv");
      std::string line;
      std::getline(in, line);  // header
      while (std::getline(in, line)) {
        std::vector<std::string> cols;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
        REQUIRE(cols.size() == 9);
        parsed.push_back({std::stoi(cols[0]), cols[2] == "FOUND", std::stoi(cols[3]),
                          std::stoi(cols[4])});
      }
    }
    std::ifstream sum(dir / "summary.csv");
    std::string line;
    std::getline(sum, line);  // header
    while (std::getline(sum, line)) {
      std::vector<std::string> cols;
      std::stringstream ss(line);
      for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
      REQUIRE(cols.size() == 8);
      const int x = std::stoi(cols[0]);
      int trials = 0, found = 0;
      double sum_k = 0.0, sum_size = 0.0;
      for (const auto& p : parsed) {
        if (p.x != x) continue;
        ++trials;
        if (p.found) {
          ++found;
          sum_k += p.k;
          sum_size += p.size;
        }
      }
      CHECK(std::stoi(cols[1]) == trials);
      CHECK(std::stoi(cols[2]) == found);
      CHECK(std::stod(cols[3]) ==
            doctest::Approx(static_cast<double>(found) / trials).epsilon(1e-9));
      if (found > 0) {
        CHECK(std::stod(cols[4]) == doctest::Approx(sum_k / found).epsilon(1e-9));
        CHECK(std::stod(cols[6]) == doctest::Approx(sum_size / found).epsilon(1e-9));
      }
      if (found > 1) {
        const double mean_k = sum_k / found, mean_size = sum_size / found;
        double ss_k = 0.0, ss_size = 0.0;
        for (const auto& p : parsed) {
          if (p.x == x && p.found) {
            ss_k += (p.k - mean_k) * (p.k - mean_k);
            ss_size += (p.size - mean_size) * (p.size - mean_size);
          }
        }
        CHECK(std::stod(cols[5]) ==
              doctest::Approx(std::sqrt(ss_k / (found - 1))).epsilon(1e-9));
        CHECK(std::stod(cols[7]) ==
              doctest::Approx(std::sqrt(ss_size / (found - 1))).epsilon(1e-9));
      }
    }
    fs::remove_all(dir);
  }

  SUBCASE("summary statistics recompute from the records") {
    const auto records = run_breadth_sweep(cfg);
    const auto rows = summarize_sweep(records);
    REQUIRE(rows.size() == cfg.max_caps_values.size());
    for (const auto& row : rows) {
      int found = 0, trials = 0;
      double sum_k = 0.0;
      for (const auto& r : records) {
        if (r.x != row.x) continue;
        ++trials;
        if (r.status == SearchStatus::Found) {
          ++found;
          sum_k += r.k;
        }
      }
      CHECK(row.trials == trials);
      CHECK(row.found == found);
      CHECK(row.feasibility_rate ==
            doctest::Approx(static_cast<double>(found) / trials).epsilon(1e-12));
      if (found > 0) {
        CHECK(row.mean_k == doctest::Approx(sum_k / found).epsilon(1e-9));
        double ss = 0.0;
        for (const auto& r : records) {
          if (r.x == row.x && r.status == SearchStatus::Found) {
            ss += (r.k - row.mean_k) * (r.k - row.mean_k);
          }
        }
        const double expect_std = found > 1 ? std::sqrt(ss / (found - 1)) : 0.0;
        CHECK(row.std_k == doctest::Approx(expect_std).epsilon(1e-9));
      }
    }
  }
}
