#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "adn/batch.hpp"
#include "adn/cli.hpp"
#include "adn/errors.hpp"

namespace adn::cli {

const char* kSweepCsvHeader =
    "n,delta,c,arithmetic,adversary,extra_edge_prob,seed,tau_mode,max_k,"
    "strict,status,output_count,total_rounds,max_nonleader_energy,"
    "conservation_max_deviation,empirical_collection_rounds,note";

namespace {

struct SweepGrid {
  std::vector<int> ns;
  std::vector<int> deltas;
  std::vector<AdversaryKind> adversaries;
  std::vector<std::uint64_t> seeds;
  RunConfig base;  // scalar fields shared by every cell
};

SweepGrid parse_grid(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("sweep grid must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    static const char* known[] = {"n",          "delta",
                                  "adversary",  "seed",
                                  "c",          "arithmetic",
                                  "float_rel_tol", "tau_mode",
                                  "tau_table_path", "extra_edge_prob",
                                  "max_k",      "strict"};
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw ConfigError("unknown field '" + it.key() + "' in grid");
  }
  SweepGrid g;
  try {
    for (const auto& v : j.at("n")) g.ns.push_back(v.get<int>());
    for (const auto& v : j.at("delta")) g.deltas.push_back(v.get<int>());
    for (const auto& v : j.at("adversary")) {
      g.adversaries.push_back(parse_adversary_kind(v.get<std::string>()));
    }
    for (const auto& v : j.at("seed")) {
      g.seeds.push_back(v.get<std::uint64_t>());
    }
    if (j.contains("c")) g.base.c = j.at("c").get<double>();
    if (j.contains("arithmetic")) {
      g.base.arithmetic =
          parse_arithmetic_mode(j.at("arithmetic").get<std::string>());
    }
    if (j.contains("float_rel_tol")) {
      g.base.float_rel_tol = j.at("float_rel_tol").get<double>();
    }
    if (j.contains("tau_mode")) {
      g.base.tau_mode = parse_tau_mode(j.at("tau_mode").get<std::string>());
    }
    if (j.contains("tau_table_path")) {
      g.base.tau_table_path = j.at("tau_table_path").get<std::string>();
    }
    if (j.contains("extra_edge_prob")) {
      g.base.extra_edge_prob = j.at("extra_edge_prob").get<double>();
    }
    if (j.contains("max_k")) g.base.max_k = j.at("max_k").get<int>();
    if (j.contains("strict")) g.base.strict = j.at("strict").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad grid value: ") + e.what());
  }
  return g;
}

std::string csv_row(const RunConfig& cfg, const std::string& status,
                    const RunResult* result, const std::string& note) {
  std::ostringstream row;
  row << cfg.n << ',' << cfg.delta << ',' << nlohmann::json(cfg.c).dump()
      << ',' << to_string(cfg.arithmetic) << ',' << to_string(cfg.adversary)
      << ','
      << (cfg.adversary == AdversaryKind::RandomConnected
              ? nlohmann::json(cfg.extra_edge_prob).dump()
              : std::string())
      << ',' << cfg.seed << ',' << to_string(cfg.tau_mode) << ','
      << cfg.effective_max_k() << ',' << (cfg.strict ? "true" : "false")
      << ',' << status << ',';
  if (result) {
    // Empirical collection rounds: first Collection round of the accepted
    // iteration (k = n) at which the leader crossed k-1-1/k^c.
    std::int64_t empirical = -1;
    if (!result->per_iteration.empty() && result->halted_uniformly) {
      empirical = result->per_iteration.back().first_threshold_crossing_round;
    }
    row << result->output_count << ',' << result->total_rounds << ','
        << nlohmann::json(result->max_nonleader_energy).dump() << ','
        << nlohmann::json(result->conservation_max_deviation).dump() << ',';
    if (empirical >= 0) row << empirical;
  } else {
    row << ",,,,";
  }
  row << ',' << note;
  return row.str();
}

}  // namespace

int cmd_sweep(const SweepOptions& options, std::ostream& log,
              std::ostream& err) {
  try {
    std::ifstream in(options.grid_path);
    if (!in) throw ConfigError("cannot open grid file: " + options.grid_path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("grid is not valid JSON: " + std::string(e.what()));
    }
    SweepGrid grid = parse_grid(j);

    std::vector<RunConfig> cells;
    for (int n : grid.ns) {
      for (int delta : grid.deltas) {
        for (AdversaryKind kind : grid.adversaries) {
          for (std::uint64_t seed : grid.seeds) {
            RunConfig cfg = grid.base;
            cfg.n = n;
            cfg.delta = delta;
            cfg.adversary = kind;
            cfg.seed = seed;
            cells.push_back(cfg);
          }
        }
      }
    }

    std::vector<std::string> rows(cells.size());
    run_parallel(options.jobs == 0 ? default_jobs() : options.jobs,
                 cells.size(), [&](std::size_t i) {
                   const RunConfig& cfg = cells[i];
                   std::string note =
                       cfg.n < 4 ? "outside-lemma3-precondition" : "";
                   try {
                     RunOutput out = execute_run(cfg);
                     rows[i] = csv_row(cfg, "ok", &out.result, note);
                   } catch (const ConfigError& e) {
                     rows[i] = csv_row(cfg, "config-error", nullptr, e.what());
                   } catch (const InvariantError& e) {
                     rows[i] =
                         csv_row(cfg, "invariant-violation", nullptr, e.what());
                   } catch (const ScheduleError& e) {
                     rows[i] = csv_row(cfg, "schedule-insufficient", nullptr,
                                       e.what());
                   } catch (const std::exception& e) {
                     rows[i] = csv_row(cfg, "error", nullptr, e.what());
                   }
                 });

    std::filesystem::create_directories(options.out_dir);
    const auto path =
        std::filesystem::path(options.out_dir) / "sweep.csv";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << kSweepCsvHeader << "\n";
    for (const auto& row : rows) out << row << "\n";
    log << "sweep: " << rows.size() << " rows -> " << path.string() << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace adn::cli
