#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "adn/adversary.hpp"
#include "adn/engine.hpp"
#include "adn/params.hpp"

namespace adn {

std::string to_string(TraceVerbosity v);
TraceVerbosity parse_trace_verbosity(const std::string& s);

/// One run, fully described. Serializes to/from a canonical JSON document;
/// unknown fields are rejected so archived configs stay replayable.
struct RunConfig {
  int n = 0;
  int delta = 0;
  double c = 3.0;
  ArithmeticMode arithmetic = ArithmeticMode::Float64;
  // Absent in JSON means mode default: 1e-9 for float64, 0 for rational.
  std::optional<double> float_rel_tol;
  TauMode tau_mode = TauMode::DefaultCorollary;
  std::string tau_table_path;  // user-table mode
  AdversaryKind adversary = AdversaryKind::StaticLine;
  double extra_edge_prob = 0.2;
  std::uint64_t seed = 1;
  std::optional<int> max_k;  // default 4n
  bool strict = true;
  TraceVerbosity trace = TraceVerbosity::Summary;
  std::string out_dir = ".";
  std::string topology_file;     // replaces the adversary when set
  std::string export_topology;   // JSONL dump of every drawn round

  int effective_max_k() const { return max_k ? *max_k : 4 * n; }
  double effective_float_rel_tol() const {
    if (float_rel_tol) return *float_rel_tol;
    return arithmetic == ArithmeticMode::Float64 ? 1e-9 : 0.0;
  }

  ProtocolParams protocol_params() const;
  void validate() const;  // throws ConfigError

  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig from_file(const std::string& path);
  /// Full canonical document (defaults materialized), archivable.
  nlohmann::json to_json() const;
  /// Behavior-affecting subset embedded in result files: excludes output
  /// locations and trace verbosity so identical runs produce identical
  /// result bytes regardless of where they write.
  nlohmann::json identity_json() const;
};

/// Loads a tau table {"2": 6, "3": 27, ...}; requires coverage of [2, max_k].
TauTable load_tau_table(const std::string& path, int max_k);

/// Builds the tau table for empirical-override mode: per candidate k, twice
/// the measured collection rounds on a size-k network under the run's own
/// adversary kind and seed.
TauTable build_empirical_tau_table(const RunConfig& cfg);

struct RunOutput {
  RunResult result;
  nlohmann::json result_json;
};

/// Executes one run per the config (dispatching on arithmetic mode), with
/// optional trace/topology streams. Invariant and schedule errors propagate
/// as their exception types.
RunOutput execute_run(const RunConfig& cfg, std::ostream* trace_out = nullptr,
                      std::ostream* topology_out = nullptr);

nlohmann::json result_to_json(const RunConfig& cfg, const RunResult& result);
std::string iterations_csv(const RunResult& result);

}  // namespace adn
