#include "adn/bounds.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "adn/engine.hpp"
#include "adn/errors.hpp"

namespace adn {

long double corollary1_bound(int n, int delta) {
  if (n <= 6) {
    throw ConfigError("corollary bound requires n > 6 (got n=" +
                      std::to_string(n) + ")");
  }
  if (delta < 1 || delta > n - 1) {
    throw ConfigError("corollary bound requires 1 <= delta <= n-1");
  }
  const long double two_delta = 2.0L * delta;
  const long double np1 = n + 1;
  return powl(two_delta, np1) * np1 * logl(np1) / logl(two_delta);
}

mpz_class theorem1_total_z(int n, double c,
                           const std::function<mpz_class(int)>& tau) {
  if (n < 2) throw ConfigError("theorem total defined for n >= 2");
  mpz_class total = 0;
  for (int k = 2; k <= n; ++k) {
    total += tau(k);
    total += verification_rounds(k, c);
    total += k;
  }
  return total;
}

mpz_class theorem1_total_z(int n, const ProtocolParams& params) {
  return theorem1_total_z(n, params.c, [&params](int k) -> mpz_class {
    if (params.tau_mode == TauMode::DefaultCorollary) {
      return tau_default_z(k, params.delta);
    }
    auto it = params.tau_table.find(k);
    if (it == params.tau_table.end()) {
      throw ScheduleError("tau table has no entry for k=" + std::to_string(k));
    }
    return mpz_class(static_cast<long>(it->second));
  });
}

std::int64_t theorem1_total(int n, const ProtocolParams& params) {
  mpz_class t = theorem1_total_z(n, params);
  if (t > mpz_class(std::numeric_limits<std::int64_t>::max())) {
    throw ScheduleError("theorem total exceeds int64; use theorem1_total_z");
  }
  return static_cast<std::int64_t>(t.get_si());
}

long double leader_energy_lower_bound(int k, int delta, std::int64_t rho) {
  if (k < 2 || delta < 1 || rho < 0) {
    throw ConfigError("leader_energy_lower_bound needs k>=2, delta>=1, rho>=0");
  }
  if (rho == 0) return 0.0L;
  // k * (1 - (1 - 1/(2*delta)^k)^rho), via expm1/log1p to keep the tiny
  // 1/(2*delta)^k from washing out.
  const long double m = powl(2.0L * delta, static_cast<long double>(k));
  const long double log_base = log1pl(-1.0L / m);
  return static_cast<long double>(k) *
         (-expm1l(static_cast<long double>(rho) * log_base));
}

std::int64_t default_rho(int k, int delta) {
  mpz_class rho = default_rho_z(k, delta);
  if (rho > mpz_class(std::numeric_limits<std::int64_t>::max())) {
    throw ScheduleError("rho(k) exceeds int64");
  }
  return static_cast<std::int64_t>(rho.get_si());
}

EmpiricalCollection empirical_min_collection_rounds(int n, int delta, double c,
                                                    AdversarySpec adversary,
                                                    std::uint64_t seed) {
  adversary.seed = seed;
  ProtocolParams params;
  params.delta = delta;
  params.c = c;
  params.arithmetic = ArithmeticMode::Float64;
  EmpiricalCollection out;
  out.cap = tau_default(n, delta);

  AdversaryProvider provider(adversary, n, delta, /*leader=*/0);
  Simulator<double> sim(n, 0, params, provider);
  sim.begin_iteration(n);
  for (std::int64_t r = 1; r <= out.cap; ++r) {
    sim.run_round();
    if (sim.threshold_crossed()) {
      out.rounds = r;
      out.crossed = true;
      return out;
    }
  }
  out.rounds = out.cap;
  out.crossed = false;
  return out;
}

BoundReport make_bound_report(int n, int delta, double c,
                              bool measure_empirical,
                              const AdversarySpec& adversary) {
  BoundReport r;
  r.n = n;
  r.delta = delta;
  r.c = c;
  ProtocolParams params;
  params.delta = delta;
  params.c = c;
  r.theorem1_total = theorem1_total_z(n, params);
  for (int k = 2; k <= n; ++k) {
    r.tau_table.emplace_back(k, tau_default_z(k, delta));
  }
  r.corollary_applicable = n > 6 && delta >= 1 && delta <= n - 1;
  if (r.corollary_applicable) {
    r.corollary1_bound = corollary1_bound(n, delta);
    r.margin_theorem_vs_corollary =
        static_cast<double>(mpz_get_d(r.theorem1_total.get_mpz_t()) /
                            static_cast<double>(r.corollary1_bound));
  }
  if (measure_empirical) {
    AdversaryProvider provider(adversary, n, delta, /*leader=*/0);
    Simulator<double> sim(n, 0, params, provider);
    RunResult res = sim.run(/*max_k=*/4 * n);
    r.empirical_total = res.total_rounds;
  }
  return r;
}

std::string bound_report_json(const BoundReport& r) {
  nlohmann::json j;
  j["n"] = r.n;
  j["delta"] = r.delta;
  j["c"] = r.c;
  j["theorem1_total"] = r.theorem1_total.get_str();
  if (r.corollary_applicable) {
    j["corollary1_bound"] = static_cast<double>(r.corollary1_bound);
    j["margin_theorem_vs_corollary"] = r.margin_theorem_vs_corollary;
  } else {
    j["corollary1_bound"] = nullptr;
  }
  j["empirical_total"] =
      r.empirical_total >= 0 ? nlohmann::json(r.empirical_total)
                             : nlohmann::json(nullptr);
  auto tau = nlohmann::json::array();
  for (const auto& [k, t] : r.tau_table) {
    tau.push_back({{"k", k}, {"tau", t.get_str()}});
  }
  j["tau_table"] = std::move(tau);
  return j.dump(2);
}

std::string bound_report_table(const BoundReport& r) {
  std::ostringstream out;
  out << "n=" << r.n << " delta=" << r.delta << " c=" << r.c << "\n";
  out << "  k      tau(k)\n";
  for (const auto& [k, t] : r.tau_table) {
    out << "  " << k << "      " << t.get_str() << "\n";
  }
  out << "theorem-1 exact total : " << r.theorem1_total.get_str() << "\n";
  if (r.corollary_applicable) {
    out << "corollary-1 bound     : "
        << static_cast<double>(r.corollary1_bound) << "\n";
    out << "total / bound         : " << r.margin_theorem_vs_corollary << "\n";
  } else {
    out << "corollary-1 bound     : n/a (needs n > 6, delta <= n-1)\n";
  }
  if (r.empirical_total >= 0) {
    out << "measured run total    : " << r.empirical_total << "\n";
  }
  return out.str();
}

}  // namespace adn
