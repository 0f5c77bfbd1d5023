#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace adn {

/// Bad or infeasible run configuration (rejected before any round runs).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The topology source produced (or a file supplied) an invalid edge set.
struct TopologyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Schedule-supply failure: a user tau table that never lets the protocol
/// accept (schedule-insufficient), or tau(k) overflowing the 64-bit round
/// counter (schedule-overflow). Never wraps silently.
struct ScheduleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exact-rational mode exceeded the denominator bit-length cap.
struct RationalLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A runtime invariant check failed while the engine runs in strict mode.
struct InvariantError : std::runtime_error {
  InvariantError(std::int64_t round, std::string kind, const std::string& detail)
      : std::runtime_error("invariant violation [" + kind + "] at round " +
                           std::to_string(round) + ": " + detail),
        round(round),
        kind(std::move(kind)) {}

  std::int64_t round;
  std::string kind;
};

}  // namespace adn
