#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>

namespace adn {

/// Arbitrary-precision rational, always held in canonical reduced form
/// (gcd(num, den) = 1, den > 0). Thin wrapper over GMP's mpq_class that
/// canonicalizes on construction; mpq arithmetic keeps canonical inputs
/// canonical, so results stay reduced.
class Rat {
 public:
  Rat() : v_(0) {}
  Rat(long num, long den) : v_(num, den) { v_.canonicalize(); }
  explicit Rat(long value) : v_(value) {}
  explicit Rat(const mpq_class& v) : v_(v) { v_.canonicalize(); }
  explicit Rat(mpz_class num, mpz_class den)
      : v_(std::move(num), std::move(den)) {
    v_.canonicalize();
  }

  /// Exact value of a binary64 double (every finite double is rational).
  static Rat from_double(double value) {
    Rat r;
    r.v_ = mpq_class(value);
    return r;
  }

  double to_double() const { return v_.get_d(); }
  std::string str() const { return v_.get_str(); }

  const mpz_class& num() const { return v_.get_num(); }
  const mpz_class& den() const { return v_.get_den(); }

  /// Bit length of the (reduced) denominator.
  std::size_t den_bits() const {
    return mpz_sizeinbase(v_.get_den().get_mpz_t(), 2);
  }

  int sign() const { return sgn(v_); }

  Rat& operator+=(const Rat& o) {
    v_ += o.v_;
    return *this;
  }
  Rat& operator-=(const Rat& o) {
    v_ -= o.v_;
    return *this;
  }
  Rat& operator*=(const Rat& o) {
    v_ *= o.v_;
    return *this;
  }

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }

  friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rat& a, const Rat& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rat& a, const Rat& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rat& a, const Rat& b) { return a.v_ >= b.v_; }

 private:
  mpq_class v_;
};

inline Rat abs(const Rat& r) { return r.sign() < 0 ? Rat(0) - r : r; }

inline const Rat& max(const Rat& a, const Rat& b) { return a < b ? b : a; }

}  // namespace adn
