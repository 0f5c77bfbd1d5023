#include <atomic>
#include <cmath>
#include <mutex>
#include <ostream>
#include <sstream>
#include <vector>

#include "adn/batch.hpp"
#include "adn/bounds.hpp"
#include "adn/cli.hpp"
#include "adn/errors.hpp"
#include "adn/flooding.hpp"

namespace adn::cli {

namespace {

struct CaseResult {
  RunConfig cfg;
  bool ok = true;
  std::string detail;
  RunResult result;
};

std::string describe(const RunConfig& cfg) {
  std::ostringstream s;
  s << "n=" << cfg.n << " delta=" << cfg.delta << " "
    << to_string(cfg.adversary) << " seed=" << cfg.seed;
  return s.str();
}

/// Desk-scale grid shared by the run-based suites: n in [lo,8] at delta=2
/// plus n in [lo,6] at delta=3, all adversary kinds, seeds {1,2}.
std::vector<RunConfig> desk_grid(int n_lo) {
  std::vector<RunConfig> grid;
  const AdversaryKind kinds[] = {
      AdversaryKind::StaticLine, AdversaryKind::StaticRing,
      AdversaryKind::RandomConnected, AdversaryKind::LeaderPeripheral};
  auto add = [&](int n, int delta) {
    for (AdversaryKind kind : kinds) {
      for (std::uint64_t seed : {1ULL, 2ULL}) {
        RunConfig cfg;
        cfg.n = n;
        cfg.delta = delta;
        cfg.adversary = kind;
        cfg.seed = seed;
        cfg.strict = false;  // record, report, never mask
        grid.push_back(cfg);
      }
    }
  };
  for (int n = n_lo; n <= 8; ++n) add(n, 2);
  for (int n = n_lo; n <= 6; ++n) add(n, 3);
  return grid;
}

std::vector<CaseResult> run_grid(const std::vector<RunConfig>& grid,
                                 std::size_t jobs) {
  std::vector<CaseResult> results(grid.size());
  run_parallel(jobs, grid.size(), [&](std::size_t i) {
    results[i].cfg = grid[i];
    try {
      results[i].result = execute_run(grid[i]).result;
    } catch (const std::exception& e) {
      results[i].ok = false;
      results[i].detail = e.what();
    }
  });
  return results;
}

int report(std::ostream& out, const std::string& suite, std::size_t cases,
           const std::vector<std::string>& failures) {
  if (failures.empty()) {
    out << "[PASS] " << suite << ": " << cases << " cases\n";
    return kExitOk;
  }
  out << "[FAIL] " << suite << ": " << failures.size() << "/" << cases
      << " cases failed\n";
  out << "  first counterexample: " << failures.front() << "\n";
  return kExitError;
}

int check_lemma1(std::size_t jobs, std::ostream& out) {
  auto results = run_grid(desk_grid(/*n_lo=*/2), jobs);
  std::vector<std::string> failures;
  double worst = 0.0;
  for (const auto& r : results) {
    if (!r.ok) {
      failures.push_back(describe(r.cfg) + ": " + r.detail);
      continue;
    }
    worst = std::max(worst, r.result.max_nonleader_energy);
    const double bound = 1.0 + r.cfg.n * kConservationTol;
    bool lemma1_violated = false;
    for (const auto& v : r.result.violations) {
      lemma1_violated |= v.kind == "lemma1-energy";
    }
    if (lemma1_violated || r.result.max_nonleader_energy > bound) {
      failures.push_back(describe(r.cfg) + ": max non-leader energy " +
                         std::to_string(r.result.max_nonleader_energy));
    }
  }
  out << "  max non-leader energy observed: " << worst << "\n";
  return report(out, "lemma1-energy", results.size(), failures);
}

int check_conservation(std::size_t jobs, std::ostream& out) {
  std::vector<RunConfig> grid;
  for (int n : {4, 5}) {
    for (AdversaryKind kind :
         {AdversaryKind::StaticLine, AdversaryKind::RandomConnected}) {
      RunConfig cfg;
      cfg.n = n;
      cfg.delta = 2;
      cfg.adversary = kind;
      cfg.arithmetic = ArithmeticMode::ExactRational;
      cfg.strict = false;
      grid.push_back(cfg);
    }
  }
  for (AdversaryKind kind :
       {AdversaryKind::StaticLine, AdversaryKind::StaticRing,
        AdversaryKind::RandomConnected, AdversaryKind::LeaderPeripheral}) {
    RunConfig cfg;
    cfg.n = 6;
    cfg.delta = 2;
    cfg.adversary = kind;
    cfg.strict = false;
    grid.push_back(cfg);
  }
  auto results = run_grid(grid, jobs);
  std::vector<std::string> failures;
  for (const auto& r : results) {
    if (!r.ok) {
      failures.push_back(describe(r.cfg) + ": " + r.detail);
      continue;
    }
    bool conservation_violated = false;
    for (const auto& v : r.result.violations) {
      conservation_violated |= v.kind == "conservation";
    }
    const bool exact = r.cfg.arithmetic == ArithmeticMode::ExactRational;
    const double dev = r.result.conservation_max_deviation;
    if (conservation_violated || (exact && dev != 0.0) ||
        (!exact && dev > r.cfg.n * kConservationTol)) {
      failures.push_back(describe(r.cfg) + ": deviation " +
                         std::to_string(dev));
    }
  }
  return report(out, "conservation", results.size(), failures);
}

int check_flooding(std::size_t jobs, std::ostream& out) {
  const int sizes[] = {4, 8, 16, 32, 64};
  std::vector<std::string> failures;
  std::mutex mu;
  std::atomic<std::size_t> cases{0};
  run_parallel(jobs, std::size(sizes), [&](std::size_t idx) {
    const int n = sizes[idx];
    for (std::uint64_t seq = 1; seq <= 1000; ++seq) {
      const int deltas[] = {2, 3, n - 1};
      const double probs[] = {0.0, 0.1, 0.5};
      const int delta = deltas[seq % 3];
      AdversarySpec spec{AdversaryKind::RandomConnected, seq,
                         probs[(seq / 3) % 3]};
      AdversaryProvider provider(spec, n, delta, /*leader=*/0);
      const int start = static_cast<int>(seq % static_cast<std::uint64_t>(n));
      const std::int64_t rounds = flood_rounds(n, provider, start);
      ++cases;
      if (rounds > n - 1) {
        std::lock_guard<std::mutex> lock(mu);
        failures.push_back("n=" + std::to_string(n) + " seq=" +
                           std::to_string(seq) + ": " +
                           std::to_string(rounds) + " rounds > n-1");
      }
    }
  });
  return report(out, "flooding", cases.load(), failures);
}

int check_verification_iff(std::size_t jobs, std::ostream& out) {
  auto results = run_grid(desk_grid(/*n_lo=*/4), jobs);
  std::vector<std::string> failures;
  for (const auto& r : results) {
    if (!r.ok) {
      failures.push_back(describe(r.cfg) + ": " + r.detail);
      continue;
    }
    for (const auto& it : r.result.per_iteration) {
      const bool expect = it.k == r.cfg.n;
      if (it.is_correct_at_verification_end != expect) {
        failures.push_back(describe(r.cfg) + ": k=" + std::to_string(it.k) +
                           " verification verdict " +
                           (it.is_correct_at_verification_end ? "true"
                                                              : "false"));
      }
    }
  }
  return report(out, "verification-iff", results.size(), failures);
}

int check_uniform_halt(std::size_t jobs, std::ostream& out) {
  auto results = run_grid(desk_grid(/*n_lo=*/4), jobs);
  std::vector<std::string> failures;
  for (const auto& r : results) {
    if (!r.ok) {
      failures.push_back(describe(r.cfg) + ": " + r.detail);
      continue;
    }
    if (!r.result.halted_uniformly || r.result.output_count != r.cfg.n) {
      failures.push_back(describe(r.cfg) + ": output " +
                         std::to_string(r.result.output_count));
    }
    for (const auto& v : r.result.violations) {
      if (v.kind == "uniform-halt") {
        failures.push_back(describe(r.cfg) + ": " + v.detail);
      }
    }
  }
  return report(out, "uniform-halt", results.size(), failures);
}

int check_bounds_ordering(std::ostream& out) {
  std::vector<std::string> failures;
  std::size_t cases = 0;
  for (int n = 7; n <= 9; ++n) {
    for (int delta = 1; delta <= n - 1; ++delta) {
      ++cases;
      ProtocolParams params;
      params.delta = delta;
      const mpz_class total = theorem1_total_z(n, params);
      const long double bound = corollary1_bound(n, delta);
      const long double total_ld = mpz_get_d(total.get_mpz_t());
      if (!(total_ld < bound)) {
        failures.push_back("n=" + std::to_string(n) + " delta=" +
                           std::to_string(delta) + ": total " +
                           total.get_str() + " !< bound");
      }
    }
  }
  return report(out, "bounds-ordering", cases, failures);
}

int check_tau_sufficiency(std::size_t jobs, std::ostream& out) {
  std::vector<std::string> failures;
  std::mutex mu;

  // Closed-form leg: the default rho drains enough energy.
  std::size_t cases = 0;
  for (int k = 2; k <= 12; ++k) {
    for (int delta = 1; delta <= 8; ++delta) {
      ++cases;
      const long double bound =
          leader_energy_lower_bound(k, delta, default_rho(k, delta));
      const long double need =
          static_cast<long double>(k) - 1.0L -
          1.0L / powl(static_cast<long double>(k), 3.0L);
      if (!(bound >= need)) {
        failures.push_back("rho inequality fails at k=" + std::to_string(k) +
                           " delta=" + std::to_string(delta));
      }
    }
  }

  // Empirical leg.
  struct Cell {
    int n;
    int delta;
    AdversaryKind kind;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (int n = 4; n <= 8; ++n) {
    for (int delta : {2, 3}) {
      for (AdversaryKind kind :
           {AdversaryKind::StaticLine, AdversaryKind::StaticRing,
            AdversaryKind::RandomConnected,
            AdversaryKind::LeaderPeripheral}) {
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
          cells.push_back({n, delta, kind, seed});
        }
      }
    }
  }
  run_parallel(jobs, cells.size(), [&](std::size_t i) {
    const Cell& cell = cells[i];
    AdversarySpec spec{cell.kind, cell.seed, 0.2};
    EmpiricalCollection m = empirical_min_collection_rounds(
        cell.n, cell.delta, 3.0, spec, cell.seed);
    if (!m.crossed) {
      std::lock_guard<std::mutex> lock(mu);
      failures.push_back("n=" + std::to_string(cell.n) + " delta=" +
                         std::to_string(cell.delta) + " " +
                         to_string(cell.kind) + " seed=" +
                         std::to_string(cell.seed) +
                         ": no crossing within default tau(n)");
    }
  });
  return report(out, "tau-sufficiency", cases + cells.size(), failures);
}

}  // namespace

int cmd_check(const std::string& suite, std::size_t jobs, std::ostream& out) {
  if (jobs == 0) jobs = default_jobs();
  if (suite == "lemma1-energy") return check_lemma1(jobs, out);
  if (suite == "conservation") return check_conservation(jobs, out);
  if (suite == "flooding") return check_flooding(jobs, out);
  if (suite == "verification-iff") return check_verification_iff(jobs, out);
  if (suite == "uniform-halt") return check_uniform_halt(jobs, out);
  if (suite == "bounds-ordering") return check_bounds_ordering(out);
  if (suite == "tau-sufficiency") return check_tau_sufficiency(jobs, out);
  out << "unknown suite '" << suite
      << "' (expected one of: lemma1-energy, conservation, flooding, "
         "verification-iff, uniform-halt, bounds-ordering, tau-sufficiency)\n";
  return kExitConfig;
}

}  // namespace adn::cli
