#include <doctest.h>

#include <cmath>

#include "adn/errors.hpp"
#include "adn/params.hpp"

using namespace adn;

TEST_CASE("params validation") {
  ProtocolParams p;
  p.delta = 2;
  CHECK_NOTHROW(p.validate());

  SUBCASE("delta >= 1") {
    p.delta = 0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
  }
  SUBCASE("c must exceed log2(5)") {
    p.c = 2.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p.c = std::log2(5.0);  // boundary itself is rejected (strictly greater)
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p.c = 2.33;
    CHECK_NOTHROW(p.validate());
  }
  SUBCASE("rational mode forces zero comparison slack") {
    p.arithmetic = ArithmeticMode::ExactRational;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p.float_rel_tol = 0.0;
    CHECK_NOTHROW(p.validate());
  }
}

TEST_CASE("default tau values") {
  // Hand-evaluated k * ceil((2*delta)^k * ln k).
  CHECK(tau_default(2, 1) == 6);     // 2 * ceil(4 * 0.6931) = 2 * 3
  CHECK(tau_default(2, 2) == 24);    // 2 * ceil(16 * 0.6931) = 2 * 12
  CHECK(tau_default(3, 2) == 213);   // 3 * ceil(64 * 1.0986) = 3 * 71
  CHECK(tau_default(4, 2) == 1420);  // 4 * ceil(256 * 1.3863) = 4 * 355
  CHECK(tau_default(5, 2) == 8245);
  CHECK(tau_default(6, 2) == 44040);
  CHECK(tau_default(7, 2) == 223174);
  CHECK(tau_default(8, 2) == 1090232);
  CHECK(tau_default(2, 3) == 50);  // 2 * ceil(36 * 0.6931) = 2 * 25
}

TEST_CASE("tau ceiling matches long-double bracketing") {
  // rho = tau/k must satisfy rho-1 < (2*delta)^k ln k <= rho.
  for (int delta = 1; delta <= 4; ++delta) {
    for (int k = 2; k <= 14; ++k) {
      const long double x =
          powl(2.0L * delta, k) * logl(static_cast<long double>(k));
      const std::int64_t rho = tau_default(k, delta) / k;
      CHECK(static_cast<long double>(rho - 1) < x + 1e-6L);
      CHECK(x <= static_cast<long double>(rho) + 1e-6L);
    }
  }
}

TEST_CASE("tau overflow is an explicit error") {
  CHECK_THROWS_AS(tau_default(64, 8), ScheduleError);
  // The big-integer form still evaluates.
  CHECK(tau_default_z(64, 8) > 0);
}

TEST_CASE("verification phase length") {
  CHECK(verification_rounds(2, 3.0) == 4);  // 1 + ceil(2/(7/8))
  CHECK(verification_rounds(3, 3.0) == 5);
  CHECK(verification_rounds(4, 3.0) == 6);  // 1 + ceil(4/(63/64))
  CHECK(verification_rounds(5, 3.0) == 7);
  CHECK(verification_rounds(8, 3.0) == 10);
  // Non-integral exponent path agrees with a direct evaluation.
  const double c = 2.5;
  const double x = 4.0 / (1.0 - std::pow(4.0, -c));
  CHECK(verification_rounds(4, c) == 1 + static_cast<std::int64_t>(std::ceil(x)));
}

TEST_CASE("phase schedule") {
  ProtocolParams p;
  p.delta = 1;
  PhaseSchedule s2 = phase_schedule(2, p);
  CHECK(s2.collection_rounds == 6);
  CHECK(s2.verification_rounds == 4);
  CHECK(s2.notification_rounds == 2);

  p.delta = 2;
  CHECK(phase_schedule(2, p) ==
        PhaseSchedule{24, 4, 2});
  CHECK(phase_schedule(4, p) ==
        PhaseSchedule{1420, 6, 4});

  SUBCASE("deterministic: equal inputs, equal outputs") {
    for (int k = 2; k <= 9; ++k) {
      CHECK(phase_schedule(k, p) == phase_schedule(k, p));
    }
  }
  SUBCASE("user table consulted, missing entries rejected") {
    p.tau_mode = TauMode::UserTable;
    p.tau_table = {{2, 7}, {3, 9}};
    CHECK(phase_schedule(2, p).collection_rounds == 7);
    CHECK(phase_schedule(3, p).collection_rounds == 9);
    CHECK_THROWS_AS(phase_schedule(4, p), ScheduleError);
  }
}
