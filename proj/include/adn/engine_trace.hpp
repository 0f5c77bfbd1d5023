#pragma once

// Trace emission for Simulator, kept out of the main header so the hot loop
// reads without the JSON machinery in view. Included by engine.hpp.

#include <nlohmann/json.hpp>

namespace adn {

template <class S, class Update>
void Simulator<S, Update>::emit_trace(std::int64_t delivered) {
  if (options_.trace == TraceVerbosity::Summary || !options_.trace_out)
    return;
  nlohmann::json line;
  line["round"] = round_;
  line["k"] = k_;
  line["phase"] = phase_name(phase_);
  line["leader_energy"] = Arith<S>::to_double(leader_state_.e_leader);
  line["messages"] = delivered;
  if (options_.trace == TraceVerbosity::Full) {
    auto energies = nlohmann::json::array();
    for (int i = 0; i < n_; ++i)
      energies.push_back(Arith<S>::to_double(energy_of(i)));
    line["energies"] = std::move(energies);
  }
  *options_.trace_out << line.dump() << '\n';
}

}  // namespace adn
