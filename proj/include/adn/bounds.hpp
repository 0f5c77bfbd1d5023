#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "adn/adversary.hpp"
#include "adn/params.hpp"

namespace adn {

/// Closed-form worst-case total: (2*delta)^{n+1} * (n+1) * ln(n+1) /
/// ln(2*delta), valid for n > 6 and 1 <= delta <= n-1 (throws ConfigError
/// outside that range). Evaluated in 80-bit extended precision.
long double corollary1_bound(int n, int delta);

/// Exact total round count sum_{k=2..n} (tau(k) + V(k) + k) as a big
/// integer; never wraps. tau is supplied per k (defaults to the schedule's
/// own tau when built from params).
mpz_class theorem1_total_z(int n, double c,
                           const std::function<mpz_class(int)>& tau);
mpz_class theorem1_total_z(int n, const ProtocolParams& params);

/// int64 view of the above; throws ScheduleError when it does not fit.
std::int64_t theorem1_total(int n, const ProtocolParams& params);

/// Closed-form Collection progress guarantee: k * (1 - (((2*delta)^k - 1) /
/// (2*delta)^k)^rho). Evaluated with log1p/expm1 in extended precision.
long double leader_energy_lower_bound(int k, int delta, std::int64_t rho);

/// rho needed by the default schedule: ceil((2*delta)^k * ln k), narrowed
/// to int64 (throws ScheduleError on overflow).
std::int64_t default_rho(int k, int delta);

struct EmpiricalCollection {
  std::int64_t rounds = 0;  // first round with e_l >= n-1-1/n^c, or the cap
  bool crossed = false;     // false means "result >= cap"
  std::int64_t cap = 0;     // default tau(n)
};

/// Measurement oracle for tau tightness: runs the Collection dynamics alone
/// (float64) at k = n under the given adversary until the leader crosses
/// n-1-1/n^c, capped at the default tau(n).
EmpiricalCollection empirical_min_collection_rounds(int n, int delta, double c,
                                                    AdversarySpec adversary,
                                                    std::uint64_t seed);

struct BoundReport {
  int n = 0;
  int delta = 0;
  double c = 3.0;
  mpz_class theorem1_total;   // exact per-iteration sum
  bool corollary_applicable = false;  // n > 6 and delta <= n-1
  long double corollary1_bound = 0.0L;
  std::int64_t empirical_total = -1;  // measured run, -1 if not measured
  std::vector<std::pair<int, mpz_class>> tau_table;  // (k, tau(k)), k=2..n
  double margin_theorem_vs_corollary = 0.0;  // theorem1_total / bound
};

BoundReport make_bound_report(int n, int delta, double c,
                              bool measure_empirical,
                              const AdversarySpec& adversary);

std::string bound_report_json(const BoundReport& r);
std::string bound_report_table(const BoundReport& r);

}  // namespace adn
