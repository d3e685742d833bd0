#pragma once

#include <optional>
#include <string>

#include "tzeta/int_matrix.hpp"
#include "tzeta/polynomial.hpp"

namespace tzeta {

/// ord_p(x); x must be nonzero.
long p_valuation(const Integer& x, long p);
long p_valuation(const Rational& x, long p);
/// e with q = p^e, e >= 1; throws InvalidArgument otherwise (p must be prime).
long prime_power_exponent(long q, long p);
Integer ipow(long base, unsigned long exp);

/// Element of Q_p known modulo p^N (absolute precision N). Stored as the
/// canonical lift u * p^v with 0 < u < p^(N-v), p not dividing u, or as zero
/// to precision N when the value is divisible by p^N.
class PadicScalar {
 public:
  PadicScalar() = default;

  static PadicScalar from_integer(long p, const Integer& value, long precision);
  static PadicScalar from_rational(long p, const Rational& value, long precision);
  static PadicScalar zero(long p, long precision);

  [[nodiscard]] long prime() const noexcept { return p_; }
  [[nodiscard]] long precision() const noexcept { return n_; }
  [[nodiscard]] bool is_zero() const noexcept { return lift_ == 0; }
  /// Exact valuation when nonzero to precision; nullopt when zero.
  [[nodiscard]] std::optional<long> valuation() const;
  /// Lower bound on the valuation: exact one, or the precision when zero.
  [[nodiscard]] long valuation_floor() const { return is_zero() ? n_ : v_; }
  /// Canonical lift; an exact rational whose denominator is a power of p.
  [[nodiscard]] const Rational& lift() const noexcept { return lift_; }
  /// Value mod p^N in [0, p^N); needs valuation >= 0.
  [[nodiscard]] Integer residue() const;
  [[nodiscard]] bool is_unit() const { return !is_zero() && v_ == 0; }

  /// Same value reduced to a lower precision.
  [[nodiscard]] PadicScalar reduce(long precision) const;
  /// Congruence test modulo p^min(N_a, N_b).
  [[nodiscard]] bool congruent(const PadicScalar& o) const;

  friend PadicScalar operator+(const PadicScalar& a, const PadicScalar& b);
  friend PadicScalar operator-(const PadicScalar& a, const PadicScalar& b);
  friend PadicScalar operator-(const PadicScalar& a);
  friend PadicScalar operator*(const PadicScalar& a, const PadicScalar& b);
  /// Division by units only; anything else raises Pole.
  friend PadicScalar operator/(const PadicScalar& a, const PadicScalar& b);
  /// Division by any element with known valuation, shrinking precision
  /// accordingly. Raises Pole when b is zero to its precision.
  [[nodiscard]] PadicScalar divide_tracking(const PadicScalar& b) const;
  [[nodiscard]] PadicScalar pow(unsigned long k) const;

  /// "val=v, residue=x mod p^N"
  [[nodiscard]] std::string str() const;

 private:
  PadicScalar(long p, long n, Rational lift);
  static void check_prime(long p);

  long p_ = 2;
  long n_ = 0;
  long v_ = 0;  // meaningful when lift_ != 0
  Rational lift_ = 0;
};

}  // namespace tzeta
