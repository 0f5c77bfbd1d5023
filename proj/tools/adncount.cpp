// adncount: round-based simulator for exact population counting in
// anonymous dynamic networks (energy-transfer collection, threshold
// verification, halt flooding) against pluggable adversarial topologies.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "adn/bounds.hpp"
#include "adn/cli.hpp"
#include "adn/errors.hpp"

namespace {

struct RunFlags {
  std::string config_path;
  int n = 0;
  int delta = 0;
  double c = 3.0;
  std::string arithmetic = "float64";
  double float_rel_tol = -1.0;  // <0: mode default
  std::string tau_mode = "default-corollary";
  std::string tau_table;
  std::string adversary = "static-line";
  double extra_edge_prob = 0.2;
  std::uint64_t seed = 1;
  int max_k = 0;  // 0: default 4n
  bool strict = true;
  bool lenient = false;
  std::string trace = "summary";
  std::string out_dir;
  std::string topology_file;
  std::string export_topology;
};

std::string default_out_dir() {
  // Environment override is limited to the output directory.
  if (const char* env = std::getenv("ADNCOUNT_OUT")) return env;
  return ".";
}

adn::RunConfig build_config(const RunFlags& f, const CLI::App& cmd) {
  adn::RunConfig cfg;
  if (!f.config_path.empty()) cfg = adn::RunConfig::from_file(f.config_path);

  auto given = [&cmd](const std::string& flag) {
    return cmd.count(flag) > 0;
  };
  if (given("--n")) cfg.n = f.n;
  if (given("--delta")) cfg.delta = f.delta;
  if (given("--c")) cfg.c = f.c;
  if (given("--arithmetic"))
    cfg.arithmetic = adn::parse_arithmetic_mode(f.arithmetic);
  if (given("--float-rel-tol")) cfg.float_rel_tol = f.float_rel_tol;
  if (given("--tau-mode")) cfg.tau_mode = adn::parse_tau_mode(f.tau_mode);
  if (given("--tau-table")) {
    cfg.tau_table_path = f.tau_table;
    if (!given("--tau-mode") && f.config_path.empty()) {
      cfg.tau_mode = adn::TauMode::UserTable;
    }
  }
  if (given("--adversary"))
    cfg.adversary = adn::parse_adversary_kind(f.adversary);
  if (given("--extra-edge-prob")) cfg.extra_edge_prob = f.extra_edge_prob;
  if (given("--seed")) cfg.seed = f.seed;
  if (given("--max-k")) cfg.max_k = f.max_k;
  if (given("--strict")) cfg.strict = true;
  if (given("--lenient")) cfg.strict = false;
  if (given("--trace")) cfg.trace = adn::parse_trace_verbosity(f.trace);
  if (given("--out")) {
    cfg.out_dir = f.out_dir;
  } else if (cfg.out_dir == ".") {
    cfg.out_dir = default_out_dir();
  }
  if (given("--topology-file")) cfg.topology_file = f.topology_file;
  if (given("--export-topology")) cfg.export_topology = f.export_topology;
  return cfg;
}

void add_run_flags(CLI::App& cmd, RunFlags& f) {
  cmd.add_option("--config", f.config_path, "config JSON (flags override)");
  cmd.add_option("--n", f.n, "network size");
  cmd.add_option("--delta", f.delta, "known max-degree bound");
  cmd.add_option("--c", f.c, "threshold exponent (default 3)");
  cmd.add_option("--arithmetic", f.arithmetic, "float64 | exact-rational");
  cmd.add_option("--float-rel-tol", f.float_rel_tol,
                 "float-mode comparison slack (default 1e-9)");
  cmd.add_option("--tau-mode", f.tau_mode,
                 "default-corollary | user-table | empirical-override");
  cmd.add_option("--tau-table", f.tau_table, "tau table JSON file");
  cmd.add_option("--adversary", f.adversary,
                 "static-line | static-ring | static-star | "
                 "random-connected | leader-peripheral");
  cmd.add_option("--extra-edge-prob", f.extra_edge_prob,
                 "random-connected extra-edge probability");
  cmd.add_option("--seed", f.seed, "adversary seed");
  cmd.add_option("--max-k", f.max_k, "candidate cap (default 4n)");
  cmd.add_flag("--strict", f.strict, "abort on first invariant breach");
  cmd.add_flag("--lenient", f.lenient, "log invariant breaches and continue");
  cmd.add_option("--trace", f.trace, "summary | leader | full");
  cmd.add_option("--out", f.out_dir, "output directory");
  cmd.add_option("--topology-file", f.topology_file,
                 "replay topology JSONL instead of an adversary");
  cmd.add_option("--export-topology", f.export_topology,
                 "write every drawn round as JSONL (filename under --out)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"counting-protocol simulator for anonymous dynamic networks"};
  app.require_subcommand(1);

  RunFlags run_flags;
  CLI::App* run_cmd = app.add_subcommand("run", "execute one protocol run");
  add_run_flags(*run_cmd, run_flags);

  adn::cli::SweepOptions sweep_options;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "run a (n, delta, adversary, seed) grid");
  sweep_cmd->add_option("--grid", sweep_options.grid_path, "grid JSON file")
      ->required();
  sweep_cmd->add_option("--out", sweep_options.out_dir, "output directory");
  sweep_cmd->add_option("--jobs", sweep_options.jobs, "parallel runs");

  std::string suite;
  std::size_t check_jobs = 0;
  CLI::App* check_cmd =
      app.add_subcommand("check", "run a named property suite");
  check_cmd->add_option("suite", suite, "suite name")->required();
  check_cmd->add_option("--jobs", check_jobs, "parallel runs");

  int bounds_n = 0, bounds_delta = 0;
  double bounds_c = 3.0;
  bool bounds_empirical = false;
  std::string bounds_adversary = "static-line";
  std::string bounds_out;
  CLI::App* bounds_cmd =
      app.add_subcommand("bounds", "closed-form round-bound report");
  bounds_cmd->add_option("--n", bounds_n, "network size")->required();
  bounds_cmd->add_option("--delta", bounds_delta, "max-degree bound")
      ->required();
  bounds_cmd->add_option("--c", bounds_c, "threshold exponent");
  bounds_cmd->add_flag("--empirical", bounds_empirical,
                       "also measure a full run (float64)");
  bounds_cmd->add_option("--adversary", bounds_adversary,
                         "adversary for the empirical run");
  bounds_cmd->add_option("--out", bounds_out,
                         "write bounds.json here (default stdout only)");

  int topo_n = 0, topo_delta = 0, topo_rounds = 10;
  std::string topo_adversary = "random-connected";
  std::uint64_t topo_seed = 1;
  double topo_extra = 0.2;
  CLI::App* topo_cmd = app.add_subcommand(
      "topology", "emit an adversary's edge sequence as JSONL to stdout");
  topo_cmd->add_option("--n", topo_n, "network size")->required();
  topo_cmd->add_option("--delta", topo_delta, "max-degree bound")->required();
  topo_cmd->add_option("--rounds", topo_rounds, "rounds to emit");
  topo_cmd->add_option("--adversary", topo_adversary, "adversary kind");
  topo_cmd->add_option("--seed", topo_seed, "adversary seed");
  topo_cmd->add_option("--extra-edge-prob", topo_extra,
                       "random-connected extra-edge probability");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      adn::RunConfig cfg = build_config(run_flags, *run_cmd);
      return adn::cli::cmd_run(cfg, std::cout, std::cerr);
    }
    if (sweep_cmd->parsed()) {
      if (sweep_options.out_dir == ".") {
        sweep_options.out_dir = default_out_dir();
      }
      return adn::cli::cmd_sweep(sweep_options, std::cout, std::cerr);
    }
    if (check_cmd->parsed()) {
      return adn::cli::cmd_check(suite, check_jobs, std::cout);
    }
    if (bounds_cmd->parsed()) {
      adn::AdversarySpec spec{adn::parse_adversary_kind(bounds_adversary),
                              topo_seed, 0.2};
      adn::BoundReport report = adn::make_bound_report(
          bounds_n, bounds_delta, bounds_c, bounds_empirical, spec);
      std::cout << adn::bound_report_table(report);
      if (!bounds_out.empty()) {
        std::ofstream out(bounds_out, std::ios::binary);
        if (!out) throw adn::ConfigError("cannot write " + bounds_out);
        out << adn::bound_report_json(report) << "\n";
      }
      return adn::cli::kExitOk;
    }
    if (topo_cmd->parsed()) {
      adn::AdversarySpec spec{adn::parse_adversary_kind(topo_adversary),
                              topo_seed, topo_extra};
      spec.validate(topo_n, topo_delta);
      for (int r = 1; r <= topo_rounds; ++r) {
        adn::Topology t =
            adn::next_topology(spec, r, topo_n, topo_delta, /*leader=*/0);
        adn::write_topology_jsonl(std::cout, t);
      }
      return adn::cli::kExitOk;
    }
  } catch (const adn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return adn::cli::kExitConfig;
  } catch (const adn::InvariantError& e) {
    std::cerr << "invariant breach: " << e.what() << "\n";
    return adn::cli::kExitInvariant;
  } catch (const adn::ScheduleError& e) {
    std::cerr << "schedule error: " << e.what() << "\n";
    return adn::cli::kExitSchedule;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return adn::cli::kExitError;
  }
  return adn::cli::kExitConfig;
}
