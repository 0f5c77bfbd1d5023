#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <span>

#include "adn/rational.hpp"

namespace adn {

/// Arithmetic-mode traits shared by everything templated on the energy
/// scalar. Exactly two scalars are supported: double (float64 mode) and
/// Rat (exact-rational mode).
template <class S>
struct Arith;

template <>
struct Arith<double> {
  static constexpr bool exact = false;
  static double from_int(std::int64_t v) { return static_cast<double>(v); }
  static double ratio(std::int64_t num, std::int64_t den) {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  static double to_double(double v) { return v; }
  static double max(double a, double b) { return a < b ? b : a; }
};

template <>
struct Arith<Rat> {
  static constexpr bool exact = true;
  static Rat from_int(std::int64_t v) { return Rat(static_cast<long>(v)); }
  static Rat ratio(std::int64_t num, std::int64_t den) {
    return Rat(static_cast<long>(num), static_cast<long>(den));
  }
  static double to_double(const Rat& v) { return v.to_double(); }
  static Rat max(const Rat& a, const Rat& b) { return a < b ? b : a; }
};

/// The per-iteration energy threshold 1/k^c. In exact-rational mode an
/// integral c gives the exact rational 1/k^c; a non-integral c falls back
/// to the correctly-rounded double of k^{-c} taken exactly as a rational
/// (exactness is only promised for integer exponents).
template <class S>
S threshold_energy(int k, double c) {
  assert(k >= 2);
  if constexpr (Arith<S>::exact) {
    if (c == std::floor(c) && c > 0 && c < 63) {
      mpz_class den;
      mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(k),
                    static_cast<unsigned long>(c));
      return Rat(mpz_class(1), den);
    }
    return Rat::from_double(std::pow(static_cast<double>(k), -c));
  } else {
    return std::pow(static_cast<double>(k), -c);
  }
}

/// Sum of per-node energies. Exact in rational mode; Neumaier-compensated
/// in float mode so the conservation check is not polluted by the summation
/// itself.
inline double system_energy(std::span<const double> energies) {
  double sum = 0.0;
  double comp = 0.0;
  for (double e : energies) {
    double t = sum + e;
    if (std::abs(sum) >= std::abs(e)) {
      comp += (sum - t) + e;
    } else {
      comp += (e - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

inline Rat system_energy(std::span<const Rat> energies) {
  Rat sum;
  for (const Rat& e : energies) sum += e;
  return sum;
}

struct ConservationResult {
  bool pass = false;
  double deviation = 0.0;  // |sum - (n-1)|, double view in either mode
};

/// Float-mode conservation tolerance is n * kConservationTol (pinned).
inline constexpr double kConservationTol = 1e-9;

inline ConservationResult conservation_check(double sys_energy, int n) {
  const double dev = std::abs(sys_energy - static_cast<double>(n - 1));
  return {dev <= static_cast<double>(n) * kConservationTol, dev};
}

inline ConservationResult conservation_check(const Rat& sys_energy, int n) {
  const Rat expected(static_cast<long>(n - 1));
  const bool pass = sys_energy == expected;
  return {pass, abs(sys_energy - expected).to_double()};
}

}  // namespace adn
