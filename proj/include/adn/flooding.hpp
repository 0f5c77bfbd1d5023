#pragma once

#include <cstdint>
#include <vector>

#include "adn/adversary.hpp"
#include "adn/errors.hpp"

namespace adn {

/// Floods a token from start_node under the given topology sequence: every
/// holder broadcasts each round, any neighbor of a holder becomes a holder.
/// Returns the number of rounds until all n nodes hold the token. Under
/// 1-interval connectivity this is at most n-1; max_rounds bounds runaway
/// sequences (throws TopologyError if exceeded).
inline std::int64_t flood_rounds(int n, TopologyProvider& topology,
                                 int start_node,
                                 std::int64_t max_rounds = 1 << 20) {
  std::vector<char> holds(static_cast<std::size_t>(n), 0);
  holds[static_cast<std::size_t>(start_node)] = 1;
  int holders = 1;
  Topology t;
  std::int64_t round = 0;
  std::vector<char> next(holds);
  while (holders < n) {
    if (round >= max_rounds) {
      throw TopologyError("flooding did not complete within " +
                          std::to_string(max_rounds) + " rounds");
    }
    ++round;
    topology.next(round, t);
    next = holds;
    for (auto [u, v] : t.edges) {
      if (holds[static_cast<std::size_t>(u)] &&
          !next[static_cast<std::size_t>(v)]) {
        next[static_cast<std::size_t>(v)] = 1;
        ++holders;
      }
      if (holds[static_cast<std::size_t>(v)] &&
          !next[static_cast<std::size_t>(u)]) {
        next[static_cast<std::size_t>(u)] = 1;
        ++holders;
      }
    }
    holds.swap(next);
  }
  return round;
}

}  // namespace adn
