#include <doctest.h>

#include <cmath>

#include "adn/bounds.hpp"
#include "adn/errors.hpp"

using namespace adn;

TEST_CASE("corollary bound closed form") {
  // n=7, delta=2: 4^8 * 8 * ln8/ln4 = 65536 * 8 * 1.5 (the log ratio is
  // exactly 3/2).
  CHECK(static_cast<double>(corollary1_bound(7, 2)) ==
        doctest::Approx(786432.0).epsilon(1e-12));
  // n=7, delta=1: 2^8 * 8 * 3.
  CHECK(static_cast<double>(corollary1_bound(7, 1)) ==
        doctest::Approx(6144.0).epsilon(1e-12));
  CHECK_THROWS_AS(corollary1_bound(6, 2), ConfigError);
  CHECK_THROWS_AS(corollary1_bound(8, 8), ConfigError);
}

TEST_CASE("theorem total") {
  ProtocolParams p;
  p.delta = 2;
  CHECK(theorem1_total(4, p) == 1681);

  p.delta = 1;
  CHECK(theorem1_total(2, p) == 12);  // tau(2)+V(2)+2 = 6+4+2

  SUBCASE("degenerate tau table: sum of verification + notification only") {
    // tau identically 1 (tables must be >= 1): total = sum (1 + V(k) + k),
    // strictly monotone in n.
    ProtocolParams q;
    q.delta = 2;
    q.tau_mode = TauMode::UserTable;
    for (int k = 2; k <= 12; ++k) q.tau_table[k] = 1;
    std::int64_t prev = 0;
    for (int n = 2; n <= 12; ++n) {
      const std::int64_t t = theorem1_total(n, q);
      std::int64_t expected = 0;
      for (int k = 2; k <= n; ++k) expected += 1 + verification_rounds(k, 3.0) + k;
      CHECK(t == expected);
      CHECK(t > prev);
      prev = t;
    }
  }
  SUBCASE("big-integer form never wraps") {
    ProtocolParams q;
    q.delta = 3;
    mpz_class big = theorem1_total_z(40, q);
    CHECK(big > mpz_class("18446744073709551615"));  // beyond uint64
  }
}

TEST_CASE("leader energy lower bound") {
  // k=2, delta=1, rho=3: 2*(1-(3/4)^3) = 37/32.
  CHECK(static_cast<double>(leader_energy_lower_bound(2, 1, 3)) ==
        doctest::Approx(37.0 / 32).epsilon(1e-15));
  CHECK(static_cast<double>(leader_energy_lower_bound(2, 1, 3)) >
        2 - 1 - 1.0 / 8);
  CHECK(leader_energy_lower_bound(5, 2, 0) == 0.0L);
  // rho -> large drains everything: bound -> k.
  CHECK(static_cast<double>(leader_energy_lower_bound(3, 1, 1'000'000)) ==
        doctest::Approx(3.0));
}

TEST_CASE("default rho meets the collection requirement") {
  for (int k = 2; k <= 12; ++k) {
    for (int delta = 1; delta <= 8; ++delta) {
      const long double bound =
          leader_energy_lower_bound(k, delta, default_rho(k, delta));
      const long double need =
          k - 1.0L - 1.0L / powl(static_cast<long double>(k), 3.0L);
      CHECK(bound >= need);
    }
  }
}

TEST_CASE("empirical collection rounds, n=2 geometric decay") {
  // Oracle: e_l after r rounds is 1 - 2^{-r}; the first r with
  // 1 - 2^{-r} >= 1 - 1/8 is r = 3.
  AdversarySpec spec{AdversaryKind::StaticLine, 1, 0.0};
  EmpiricalCollection m = empirical_min_collection_rounds(2, 1, 3.0, spec, 1);
  CHECK(m.crossed);
  CHECK(m.rounds == 3);
  CHECK(m.cap == 6);
}

TEST_CASE("empirical result never exceeds the default schedule") {
  for (AdversaryKind kind :
       {AdversaryKind::StaticLine, AdversaryKind::StaticStar,
        AdversaryKind::LeaderPeripheral}) {
    AdversarySpec spec{kind, 5, 0.2};
    const int delta = kind == AdversaryKind::StaticStar ? 5 : 2;
    EmpiricalCollection m =
        empirical_min_collection_rounds(6, delta, 3.0, spec, 5);
    CHECK(m.crossed);
    CHECK(m.rounds <= tau_default(6, delta));
  }
}

TEST_CASE("star drains at least as fast as leader-peripheral") {
  AdversarySpec star{AdversaryKind::StaticStar, 3, 0.0};
  AdversarySpec peri{AdversaryKind::LeaderPeripheral, 3, 0.0};
  EmpiricalCollection ms = empirical_min_collection_rounds(6, 5, 3.0, star, 3);
  EmpiricalCollection mp = empirical_min_collection_rounds(6, 5, 3.0, peri, 3);
  CHECK(ms.crossed);
  CHECK(mp.crossed);
  CHECK(ms.rounds <= mp.rounds);
}

TEST_CASE("bound report") {
  AdversarySpec spec{AdversaryKind::StaticLine, 1, 0.0};
  BoundReport r = make_bound_report(7, 2, 3.0, false, spec);
  CHECK(r.theorem1_total > 0);
  CHECK(r.corollary_applicable);
  CHECK(r.margin_theorem_vs_corollary < 1.0);
  CHECK(r.tau_table.size() == 6);  // k = 2..7
  CHECK(bound_report_json(r).find("\"theorem1_total\"") != std::string::npos);
  CHECK(bound_report_table(r).find("corollary-1 bound") != std::string::npos);
}
