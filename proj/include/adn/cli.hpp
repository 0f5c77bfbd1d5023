#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>

#include "adn/config.hpp"

namespace adn::cli {

// Exit codes (total over run outcome categories):
//   0 success; 1 unexpected/numeric-limit error; 2 config error;
//   3 strict-mode invariant breach; 4 schedule error
//   (insufficient schedule or tau overflow).
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInvariant = 3;
inline constexpr int kExitSchedule = 4;

/// Executes one run and writes result.json + iterations.csv (and the
/// optional trace/topology files) under cfg.out_dir. Exit 0 iff the output
/// count equals n with no violations.
int cmd_run(const RunConfig& cfg, std::ostream& log, std::ostream& err);

struct SweepOptions {
  std::string grid_path;
  std::string out_dir = ".";
  std::size_t jobs = 0;  // 0 = hardware concurrency
};

/// Expands the grid JSON over (n, delta, adversary, seed), runs every cell
/// (batch-parallel), and writes sweep.csv. Per-run failures are recorded
/// in-row; the sweep itself still exits 0.
int cmd_sweep(const SweepOptions& options, std::ostream& log,
              std::ostream& err);

/// Named property suites at desk scale. Unknown suite -> exit 2.
int cmd_check(const std::string& suite, std::size_t jobs, std::ostream& out);

/// The frozen sweep CSV header (documented in the README).
extern const char* kSweepCsvHeader;

}  // namespace adn::cli
