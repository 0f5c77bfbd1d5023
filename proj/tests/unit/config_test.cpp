#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "adn/config.hpp"
#include "adn/errors.hpp"

using namespace adn;

TEST_CASE("config json round-trip and defaults") {
  nlohmann::json j = {{"n", 4}, {"delta", 2}};
  RunConfig cfg = RunConfig::from_json(j);
  CHECK(cfg.n == 4);
  CHECK(cfg.c == 3.0);
  CHECK(cfg.effective_max_k() == 16);
  CHECK(cfg.effective_float_rel_tol() == 1e-9);
  CHECK_NOTHROW(cfg.validate());

  RunConfig again = RunConfig::from_json(cfg.to_json());
  CHECK(again.to_json() == cfg.to_json());
}

TEST_CASE("unknown fields rejected") {
  CHECK_THROWS_AS(
      RunConfig::from_json({{"n", 4}, {"delta", 2}, {"bogus", 1}}),
      ConfigError);
  CHECK_THROWS_AS(
      RunConfig::from_json(
          {{"n", 4},
           {"delta", 2},
           {"adversary", {{"kind", "static-line"}, {"oops", 3}}}}),
      ConfigError);
}

TEST_CASE("mode defaults for comparison slack") {
  RunConfig cfg = RunConfig::from_json(
      {{"n", 4}, {"delta", 2}, {"arithmetic", "exact-rational"}});
  CHECK(cfg.effective_float_rel_tol() == 0.0);
  CHECK_NOTHROW(cfg.validate());

  // Explicit nonzero slack in rational mode violates the field invariant.
  cfg.float_rel_tol = 1e-9;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("c at or below log2(5) is rejected") {
  RunConfig cfg = RunConfig::from_json({{"n", 4}, {"delta", 2}, {"c", 2.0}});
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("infeasible adversary rejected") {
  RunConfig cfg = RunConfig::from_json(
      {{"n", 5}, {"delta", 3}, {"adversary", {{"kind", "static-star"}}}});
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("tau table loading") {
  const std::string path = "tau_table_test.json";
  {
    std::ofstream out(path);
    out << "{\"2\": 6, \"3\": 27, \"4\": 92}";
  }
  TauTable table = load_tau_table(path, 4);
  CHECK(table.at(2) == 6);
  CHECK(table.at(4) == 92);
  CHECK_THROWS_AS(load_tau_table(path, 5), ConfigError);  // missing k=5
  {
    std::ofstream out(path);
    out << "{\"2\": 0}";
  }
  CHECK_THROWS_AS(load_tau_table(path, 2), ConfigError);  // tau >= 1
  std::remove(path.c_str());
}

TEST_CASE("execute_run produces a result document") {
  RunConfig cfg = RunConfig::from_json({{"n", 4}, {"delta", 2}, {"seed", 1}});
  RunOutput out = execute_run(cfg);
  CHECK(out.result.output_count == 4);
  CHECK(out.result_json.at("total_rounds") == 1681);
  CHECK(out.result_json.at("config").at("n") == 4);
  // The embedded config excludes output locations: identical runs give
  // identical bytes wherever they write.
  CHECK_FALSE(out.result_json.at("config").contains("out_dir"));

  RunOutput rerun = execute_run(cfg);
  CHECK(out.result_json.dump() == rerun.result_json.dump());
}

TEST_CASE("empirical-override tau mode runs to acceptance") {
  RunConfig cfg = RunConfig::from_json({{"n", 4},
                                        {"delta", 2},
                                        {"tau_mode", "empirical-override"},
                                        {"max_k", 8}});
  RunOutput out = execute_run(cfg);
  CHECK(out.result.output_count == 4);
  // Measured-with-margin schedules are far shorter than the default.
  CHECK(out.result.total_rounds < 1681);
}

TEST_CASE("iterations csv shape") {
  RunConfig cfg = RunConfig::from_json({{"n", 4}, {"delta", 2}});
  RunOutput out = execute_run(cfg);
  const std::string csv = iterations_csv(out.result);
  CHECK(csv.find("k,collection_rounds") == 0);
  // Header + one line per iteration (k = 2, 3, 4).
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}
