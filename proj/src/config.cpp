#include "adn/config.hpp"

#include <fstream>
#include <memory>
#include <sstream>

#include "adn/bounds.hpp"
#include "adn/errors.hpp"

namespace adn {

std::string to_string(TraceVerbosity v) {
  switch (v) {
    case TraceVerbosity::Summary:
      return "summary";
    case TraceVerbosity::Leader:
      return "leader";
    case TraceVerbosity::Full:
      return "full";
  }
  return "?";
}

TraceVerbosity parse_trace_verbosity(const std::string& s) {
  if (s == "summary") return TraceVerbosity::Summary;
  if (s == "leader") return TraceVerbosity::Leader;
  if (s == "full") return TraceVerbosity::Full;
  throw ConfigError("unknown trace verbosity '" + s + "'");
}

ProtocolParams RunConfig::protocol_params() const {
  ProtocolParams p;
  p.delta = delta;
  p.c = c;
  p.tau_mode = tau_mode;
  p.arithmetic = arithmetic;
  p.float_rel_tol = effective_float_rel_tol();
  if (tau_mode == TauMode::UserTable) {
    p.tau_table = load_tau_table(tau_table_path, effective_max_k());
  } else if (tau_mode == TauMode::EmpiricalOverride) {
    p.tau_table = build_empirical_tau_table(*this);
  }
  return p;
}

void RunConfig::validate() const {
  if (n < 2) throw ConfigError("n must be >= 2");
  if (effective_max_k() < n) {
    throw ConfigError("max_k (" + std::to_string(effective_max_k()) +
                      ") must be >= n");
  }
  if (tau_mode == TauMode::UserTable && tau_table_path.empty()) {
    throw ConfigError("tau-mode user-table needs a tau table file");
  }
  ProtocolParams p;
  p.delta = delta;
  p.c = c;
  p.tau_mode = tau_mode;
  p.arithmetic = arithmetic;
  p.float_rel_tol = effective_float_rel_tol();
  p.validate();
  if (topology_file.empty()) {
    AdversarySpec spec{adversary, seed, extra_edge_prob};
    spec.validate(n, delta);
  }
}

namespace {

void reject_unknown_keys(const nlohmann::json& j,
                         std::initializer_list<const char*> known,
                         const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) {
      if (it.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw ConfigError("unknown field '" + it.key() + "' in " + where);
    }
  }
}

template <class T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<T>();
}

}  // namespace

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown_keys(
      j,
      {"n", "delta", "c", "arithmetic", "float_rel_tol", "tau_mode",
       "tau_table_path", "adversary", "seed", "max_k", "strict", "trace",
       "out_dir", "topology_file", "export_topology"},
      "config");
  RunConfig cfg;
  try {
    if (!j.contains("n") || !j.contains("delta")) {
      throw ConfigError("config requires 'n' and 'delta'");
    }
    cfg.n = j.at("n").get<int>();
    cfg.delta = j.at("delta").get<int>();
    cfg.c = get_or(j, "c", cfg.c);
    cfg.arithmetic =
        parse_arithmetic_mode(get_or<std::string>(j, "arithmetic", "float64"));
    if (j.contains("float_rel_tol")) {
      cfg.float_rel_tol = j.at("float_rel_tol").get<double>();
    }
    cfg.tau_mode = parse_tau_mode(
        get_or<std::string>(j, "tau_mode", "default-corollary"));
    cfg.tau_table_path = get_or<std::string>(j, "tau_table_path", "");
    if (j.contains("adversary")) {
      const auto& a = j.at("adversary");
      if (!a.is_object() || !a.contains("kind")) {
        throw ConfigError("'adversary' must be an object with a 'kind'");
      }
      reject_unknown_keys(a, {"kind", "extra_edge_prob"}, "adversary");
      cfg.adversary = parse_adversary_kind(a.at("kind").get<std::string>());
      cfg.extra_edge_prob =
          get_or(a, "extra_edge_prob", cfg.extra_edge_prob);
    }
    cfg.seed = get_or<std::uint64_t>(j, "seed", cfg.seed);
    if (j.contains("max_k")) cfg.max_k = j.at("max_k").get<int>();
    cfg.strict = get_or(j, "strict", cfg.strict);
    cfg.trace =
        parse_trace_verbosity(get_or<std::string>(j, "trace", "summary"));
    cfg.out_dir = get_or<std::string>(j, "out_dir", cfg.out_dir);
    cfg.topology_file = get_or<std::string>(j, "topology_file", "");
    cfg.export_topology = get_or<std::string>(j, "export_topology", "");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return from_json(j);
}

nlohmann::json RunConfig::identity_json() const {
  nlohmann::json j;
  j["n"] = n;
  j["delta"] = delta;
  j["c"] = c;
  j["arithmetic"] = to_string(arithmetic);
  j["float_rel_tol"] = effective_float_rel_tol();
  j["tau_mode"] = to_string(tau_mode);
  if (!tau_table_path.empty()) j["tau_table_path"] = tau_table_path;
  j["adversary"] = {{"kind", to_string(adversary)}};
  if (adversary == AdversaryKind::RandomConnected) {
    j["adversary"]["extra_edge_prob"] = extra_edge_prob;
  }
  j["seed"] = seed;
  j["max_k"] = effective_max_k();
  j["strict"] = strict;
  if (!topology_file.empty()) j["topology_file"] = topology_file;
  return j;
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j = identity_json();
  j["trace"] = to_string(trace);
  j["out_dir"] = out_dir;
  if (!export_topology.empty()) j["export_topology"] = export_topology;
  return j;
}

TauTable load_tau_table(const std::string& path, int max_k) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open tau table: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("tau table is not valid JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) {
    throw ConfigError("tau table must be an object {\"k\": tau(k), ...}");
  }
  TauTable table;
  for (auto it = j.begin(); it != j.end(); ++it) {
    int k = 0;
    try {
      k = std::stoi(it.key());
    } catch (...) {
      throw ConfigError("tau table key '" + it.key() + "' is not an integer");
    }
    const std::int64_t tau = it.value().get<std::int64_t>();
    if (tau < 1) {
      throw ConfigError("tau table entry for k=" + std::to_string(k) +
                        " must be >= 1");
    }
    table[k] = tau;
  }
  for (int k = 2; k <= max_k; ++k) {
    if (!table.count(k)) {
      throw ConfigError("tau table must cover k in [2, " +
                        std::to_string(max_k) + "]; missing k=" +
                        std::to_string(k));
    }
  }
  return table;
}

TauTable build_empirical_tau_table(const RunConfig& cfg) {
  TauTable table;
  AdversarySpec spec{cfg.adversary, cfg.seed, cfg.extra_edge_prob};
  for (int k = 2; k <= cfg.effective_max_k(); ++k) {
    AdversarySpec sized = spec;
    // Star needs delta >= k-1; fall back to a line measurement when the
    // run's delta cannot realize the kind at size k.
    try {
      sized.validate(k, cfg.delta);
    } catch (const ConfigError&) {
      sized.kind = AdversaryKind::StaticLine;
    }
    EmpiricalCollection m =
        empirical_min_collection_rounds(k, cfg.delta, cfg.c, sized, cfg.seed);
    table[k] = std::max<std::int64_t>(1, 2 * m.rounds);
  }
  return table;
}

namespace {

template <class S>
RunOutput execute_run_typed(const RunConfig& cfg, std::ostream* trace_out,
                            std::ostream* topology_out) {
  std::unique_ptr<TopologyProvider> provider;
  const int leader = 0;  // harness placement; the protocol never sees it
  if (!cfg.topology_file.empty()) {
    provider = std::make_unique<FileTopologyProvider>(cfg.topology_file, cfg.n);
  } else {
    provider = std::make_unique<AdversaryProvider>(
        AdversarySpec{cfg.adversary, cfg.seed, cfg.extra_edge_prob}, cfg.n,
        cfg.delta, leader);
  }
  EngineOptions options;
  options.strict = cfg.strict;
  options.trace = cfg.trace;
  options.trace_out = trace_out;
  options.topology_out = topology_out;
  Simulator<S> sim(cfg.n, leader, cfg.protocol_params(), *provider, options);
  RunOutput out;
  out.result = sim.run(cfg.effective_max_k());
  out.result_json = result_to_json(cfg, out.result);
  return out;
}

}  // namespace

RunOutput execute_run(const RunConfig& cfg, std::ostream* trace_out,
                      std::ostream* topology_out) {
  cfg.validate();
  if (cfg.arithmetic == ArithmeticMode::Float64) {
    return execute_run_typed<double>(cfg, trace_out, topology_out);
  }
  return execute_run_typed<Rat>(cfg, trace_out, topology_out);
}

nlohmann::json result_to_json(const RunConfig& cfg, const RunResult& result) {
  nlohmann::json j;
  j["config"] = cfg.identity_json();
  j["output_count"] = result.output_count;
  j["total_rounds"] = result.total_rounds;
  j["halted_uniformly"] = result.halted_uniformly;
  j["max_nonleader_energy"] = result.max_nonleader_energy;
  j["conservation_max_deviation"] = result.conservation_max_deviation;
  auto iters = nlohmann::json::array();
  for (const auto& it : result.per_iteration) {
    iters.push_back({{"k", it.k},
                     {"collection_rounds", it.collection_rounds},
                     {"verification_rounds", it.verification_rounds},
                     {"notification_rounds", it.notification_rounds},
                     {"end_of_collection_leader_energy",
                      it.end_of_collection_leader_energy},
                     {"is_correct_at_verification_end",
                      it.is_correct_at_verification_end},
                     {"first_threshold_crossing_round",
                      it.first_threshold_crossing_round},
                     {"max_nonleader_energy", it.max_nonleader_energy},
                     {"conservation_max_deviation",
                      it.conservation_max_deviation}});
  }
  j["per_iteration"] = std::move(iters);
  auto viols = nlohmann::json::array();
  for (const auto& v : result.violations) {
    viols.push_back({{"round", v.round}, {"kind", v.kind}, {"detail", v.detail}});
  }
  j["violations"] = std::move(viols);
  j["violations_total"] = result.violations_total;
  j["trace_file"] = result.trace_path.empty()
                        ? nlohmann::json(nullptr)
                        : nlohmann::json(result.trace_path);
  return j;
}

std::string iterations_csv(const RunResult& result) {
  std::ostringstream out;
  out << "k,collection_rounds,verification_rounds,notification_rounds,"
         "end_of_collection_leader_energy,is_correct_at_verification_end,"
         "first_threshold_crossing_round,max_nonleader_energy,"
         "conservation_max_deviation\n";
  for (const auto& it : result.per_iteration) {
    out << it.k << ',' << it.collection_rounds << ','
        << it.verification_rounds << ',' << it.notification_rounds << ','
        << nlohmann::json(it.end_of_collection_leader_energy).dump() << ','
        << (it.is_correct_at_verification_end ? "true" : "false") << ','
        << it.first_threshold_crossing_round << ','
        << nlohmann::json(it.max_nonleader_energy).dump() << ','
        << nlohmann::json(it.conservation_max_deviation).dump() << '\n';
  }
  return out.str();
}

}  // namespace adn
