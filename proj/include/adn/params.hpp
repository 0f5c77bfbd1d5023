#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <string>

namespace adn {

enum class ArithmeticMode { Float64, ExactRational };
enum class TauMode { DefaultCorollary, UserTable, EmpiricalOverride };

std::string to_string(ArithmeticMode mode);
std::string to_string(TauMode mode);
ArithmeticMode parse_arithmetic_mode(const std::string& s);
TauMode parse_tau_mode(const std::string& s);

/// Smallest admissible threshold exponent: the total-round analysis needs
/// c strictly above log2(5) ~ 2.3219.
double min_threshold_exponent();

using TauTable = std::map<int, std::int64_t>;

struct ProtocolParams {
  int delta = 2;           // known max-degree bound, >= 1
  double c = 3.0;          // threshold exponent, > log2(5)
  TauMode tau_mode = TauMode::DefaultCorollary;
  ArithmeticMode arithmetic = ArithmeticMode::Float64;
  double float_rel_tol = 1e-9;  // must be 0 in exact-rational mode
  TauTable tau_table;           // consulted for UserTable / EmpiricalOverride
  std::size_t max_denominator_bits = 1'000'000;

  /// Throws ConfigError on any violated field invariant.
  void validate() const;
};

struct PhaseSchedule {
  std::int64_t collection_rounds = 0;
  std::int64_t verification_rounds = 0;
  std::int64_t notification_rounds = 0;

  std::int64_t total() const {
    return collection_rounds + verification_rounds + notification_rounds;
  }
  friend bool operator==(const PhaseSchedule&, const PhaseSchedule&) = default;
};

/// rho(k) = ceil((2*delta)^k * ln k), the per-unit Collection budget behind
/// the default schedule. Exact: evaluated with MPFR directed rounding until
/// the lower and upper ceilings agree.
mpz_class default_rho_z(int k, int delta);

/// Default Collection length tau(k) = k * rho(k), as an exact big integer.
mpz_class tau_default_z(int k, int delta);

/// Same, narrowed to int64 for the round loop. Throws ScheduleError if the
/// value does not fit (never wraps).
std::int64_t tau_default(int k, int delta);

/// Verification-phase length 1 + ceil(k / (1 - 1/k^c)). Exact integer
/// arithmetic for integral c, MPFR directed rounding otherwise.
std::int64_t verification_rounds(int k, double c);

/// Phase lengths for candidate k: a pure function of (k, delta, c,
/// tau_mode, tau_table). Throws ScheduleError on tau overflow or a table
/// with no entry for k.
PhaseSchedule phase_schedule(int k, const ProtocolParams& params);

}  // namespace adn
