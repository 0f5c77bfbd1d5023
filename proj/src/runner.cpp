#include <filesystem>
#include <fstream>
#include <ostream>

#include "adn/cli.hpp"
#include "adn/errors.hpp"

namespace adn::cli {

namespace {

void write_text(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << body;
}

}  // namespace

int cmd_run(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
  try {
    cfg.validate();
    std::filesystem::create_directories(cfg.out_dir);
    const std::filesystem::path out_dir(cfg.out_dir);

    std::ofstream trace_file;
    std::ostream* trace_out = nullptr;
    std::string trace_name;
    if (cfg.trace != TraceVerbosity::Summary) {
      trace_name = "trace.jsonl";
      trace_file.open(out_dir / trace_name, std::ios::binary);
      if (!trace_file) throw ConfigError("cannot write trace file");
      trace_out = &trace_file;
    }
    std::ofstream topo_file;
    std::ostream* topo_out = nullptr;
    if (!cfg.export_topology.empty()) {
      topo_file.open(out_dir / cfg.export_topology, std::ios::binary);
      if (!topo_file) throw ConfigError("cannot write topology export file");
      topo_out = &topo_file;
    }

    RunOutput out = execute_run(cfg, trace_out, topo_out);
    out.result.trace_path = trace_name;
    out.result_json = result_to_json(cfg, out.result);

    write_text(out_dir / "result.json", out.result_json.dump(2) + "\n");
    write_text(out_dir / "iterations.csv", iterations_csv(out.result));

    log << "output_count=" << out.result.output_count
        << " total_rounds=" << out.result.total_rounds
        << " halted_uniformly=" << (out.result.halted_uniformly ? "true" : "false")
        << " violations=" << out.result.violations_total << "\n";

    const bool ok = out.result.output_count == cfg.n &&
                    out.result.violations_total == 0;
    return ok ? kExitOk : kExitError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvariantError& e) {
    err << "invariant breach (strict mode): " << e.what() << "\n";
    return kExitInvariant;
  } catch (const ScheduleError& e) {
    err << "schedule error: " << e.what() << "\n";
    return kExitSchedule;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace adn::cli
