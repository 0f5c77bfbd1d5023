#include "adn/params.hpp"

#include <mpfr.h>

#include <cmath>
#include <limits>

#include "adn/errors.hpp"

namespace adn {

std::string to_string(ArithmeticMode mode) {
  return mode == ArithmeticMode::Float64 ? "float64" : "exact-rational";
}

std::string to_string(TauMode mode) {
  switch (mode) {
    case TauMode::DefaultCorollary:
      return "default-corollary";
    case TauMode::UserTable:
      return "user-table";
    case TauMode::EmpiricalOverride:
      return "empirical-override";
  }
  return "?";
}

ArithmeticMode parse_arithmetic_mode(const std::string& s) {
  if (s == "float64" || s == "float") return ArithmeticMode::Float64;
  if (s == "exact-rational" || s == "rational")
    return ArithmeticMode::ExactRational;
  throw ConfigError("unknown arithmetic mode '" + s +
                    "' (expected float64 or exact-rational)");
}

TauMode parse_tau_mode(const std::string& s) {
  if (s == "default-corollary") return TauMode::DefaultCorollary;
  if (s == "user-table") return TauMode::UserTable;
  if (s == "empirical-override") return TauMode::EmpiricalOverride;
  throw ConfigError("unknown tau mode '" + s + "'");
}

double min_threshold_exponent() { return std::log2(5.0); }

void ProtocolParams::validate() const {
  if (delta < 1) throw ConfigError("delta must be >= 1");
  if (!(c > min_threshold_exponent())) {
    throw ConfigError("c must exceed log2(5) ~ 2.3219 (got " +
                      std::to_string(c) + ")");
  }
  if (arithmetic == ArithmeticMode::ExactRational && float_rel_tol != 0.0) {
    throw ConfigError("float_rel_tol must be 0 in exact-rational mode");
  }
  if (float_rel_tol < 0.0) throw ConfigError("float_rel_tol must be >= 0");
  if (max_denominator_bits == 0)
    throw ConfigError("max_denominator_bits must be positive");
}

namespace {

// ceil of an MPFR value into an mpz.
mpz_class mpz_ceil(mpfr_t x) {
  mpfr_t c;
  mpfr_init2(c, mpfr_get_prec(x));
  mpfr_ceil(c, x);
  mpz_class out;
  mpfr_get_z(out.get_mpz_t(), c, MPFR_RNDN);
  mpfr_clear(c);
  return out;
}

}  // namespace

mpz_class default_rho_z(int k, int delta) {
  if (k < 2) throw ScheduleError("tau/rho defined for k >= 2");
  if (delta < 1) throw ScheduleError("delta must be >= 1");
  mpz_class pow;  // (2*delta)^k, exact
  mpz_ui_pow_ui(pow.get_mpz_t(), 2UL * static_cast<unsigned long>(delta),
                static_cast<unsigned long>(k));

  // ln k is irrational for integer k >= 2, so the product is never exactly
  // an integer and the two directed-rounding ceilings must eventually agree.
  for (mpfr_prec_t prec = 128; prec <= 1 << 20; prec *= 2) {
    mpfr_t lo, hi, ln_lo, ln_hi;
    mpfr_inits2(prec, lo, hi, ln_lo, ln_hi, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_ui(ln_lo, static_cast<unsigned long>(k), MPFR_RNDD);
    mpfr_set_ui(ln_hi, static_cast<unsigned long>(k), MPFR_RNDU);
    mpfr_log(ln_lo, ln_lo, MPFR_RNDD);
    mpfr_log(ln_hi, ln_hi, MPFR_RNDU);
    mpfr_set_z(lo, pow.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(hi, pow.get_mpz_t(), MPFR_RNDU);
    mpfr_mul(lo, lo, ln_lo, MPFR_RNDD);
    mpfr_mul(hi, hi, ln_hi, MPFR_RNDU);
    mpz_class cl = mpz_ceil(lo);
    mpz_class ch = mpz_ceil(hi);
    mpfr_clears(lo, hi, ln_lo, ln_hi, static_cast<mpfr_ptr>(nullptr));
    if (cl == ch) return cl;
  }
  throw ScheduleError("rho(k) ceiling did not stabilize");
}

mpz_class tau_default_z(int k, int delta) {
  return mpz_class(k) * default_rho_z(k, delta);
}

std::int64_t tau_default(int k, int delta) {
  mpz_class t = tau_default_z(k, delta);
  if (!t.fits_slong_p() ||
      t > mpz_class(std::numeric_limits<std::int64_t>::max())) {
    throw ScheduleError("schedule-overflow: tau(" + std::to_string(k) +
                        ") with delta=" + std::to_string(delta) +
                        " exceeds the 64-bit round counter");
  }
  return static_cast<std::int64_t>(t.get_si());
}

std::int64_t verification_rounds(int k, double c) {
  if (k < 2) throw ScheduleError("verification length defined for k >= 2");
  if (c == std::floor(c) && c > 0 && c < 63) {
    // 1 + ceil(k^{c+1} / (k^c - 1)), all exact.
    mpz_class kc;
    mpz_ui_pow_ui(kc.get_mpz_t(), static_cast<unsigned long>(k),
                  static_cast<unsigned long>(c));
    mpz_class num = kc * k;
    mpz_class den = kc - 1;
    mpz_class q = (num + den - 1) / den;
    return 1 + static_cast<std::int64_t>(q.get_si());
  }
  // Certified ceiling of k / (1 - k^{-c}) via interval evaluation.
  for (mpfr_prec_t prec = 128; prec <= 1 << 16; prec *= 2) {
    mpfr_t t_lo, t_hi, x_lo, x_hi;
    mpfr_inits2(prec, t_lo, t_hi, x_lo, x_hi, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_ui(t_lo, static_cast<unsigned long>(k), MPFR_RNDN);
    mpfr_set_d(x_lo, -c, MPFR_RNDN);  // c is a double, exact
    mpfr_pow(t_hi, t_lo, x_lo, MPFR_RNDU);  // upper bound of k^-c
    mpfr_pow(t_lo, t_lo, x_lo, MPFR_RNDD);  // lower bound of k^-c
    mpfr_ui_sub(x_lo, 1, t_hi, MPFR_RNDD);  // lower bound of 1-k^-c
    mpfr_ui_sub(x_hi, 1, t_lo, MPFR_RNDU);  // upper bound of 1-k^-c
    mpfr_ui_div(t_lo, static_cast<unsigned long>(k), x_hi, MPFR_RNDD);
    mpfr_ui_div(t_hi, static_cast<unsigned long>(k), x_lo, MPFR_RNDU);
    mpz_class cl = mpz_ceil(t_lo);
    mpz_class ch = mpz_ceil(t_hi);
    mpfr_clears(t_lo, t_hi, x_lo, x_hi, static_cast<mpfr_ptr>(nullptr));
    if (cl == ch) return 1 + static_cast<std::int64_t>(cl.get_si());
    if (prec == 1 << 16) return 1 + static_cast<std::int64_t>(ch.get_si());
  }
  throw ScheduleError("unreachable");
}

PhaseSchedule phase_schedule(int k, const ProtocolParams& params) {
  if (k < 2) throw ScheduleError("phase schedule defined for k >= 2");
  PhaseSchedule s;
  switch (params.tau_mode) {
    case TauMode::DefaultCorollary:
      s.collection_rounds = tau_default(k, params.delta);
      break;
    case TauMode::UserTable:
    case TauMode::EmpiricalOverride: {
      auto it = params.tau_table.find(k);
      if (it == params.tau_table.end()) {
        throw ScheduleError("tau table has no entry for k=" +
                            std::to_string(k));
      }
      if (it->second < 1) {
        throw ScheduleError("tau table entry for k=" + std::to_string(k) +
                            " must be >= 1");
      }
      s.collection_rounds = it->second;
      break;
    }
  }
  s.verification_rounds = verification_rounds(k, params.c);
  s.notification_rounds = k;
  return s;
}

}  // namespace adn
