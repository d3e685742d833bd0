#include "tzeta/padic.hpp"

#include <algorithm>

#include "tzeta/error.hpp"

namespace tzeta {

long p_valuation(const Integer& x, long p) {
  if (x == 0) throw Error(ErrorKind::InvalidArgument, "valuation of zero");
  Integer y = x;
  long v = 0;
  while (mpz_divisible_ui_p(y.get_mpz_t(), static_cast<unsigned long>(p))) {
    mpz_divexact_ui(y.get_mpz_t(), y.get_mpz_t(), static_cast<unsigned long>(p));
    ++v;
  }
  return v;
}

long p_valuation(const Rational& x, long p) {
  return p_valuation(Integer(x.get_num()), p) - p_valuation(Integer(x.get_den()), p);
}

Integer ipow(long base, unsigned long exp) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), exp);
  return r;
}

long prime_power_exponent(long q, long p) {
  if (p < 2 || mpz_probab_prime_p(Integer(p).get_mpz_t(), 30) == 0)
    throw Error(ErrorKind::InvalidArgument, "p = " + std::to_string(p) + " is not prime");
  if (q < 2) throw Error(ErrorKind::InvalidArgument, "q must be at least 2");
  long e = 0;
  long x = q;
  while (x % p == 0) {
    x /= p;
    ++e;
  }
  if (x != 1) throw Error(ErrorKind::InvalidArgument, "q = " + std::to_string(q) + " is not a power of p = " + std::to_string(p));
  return e;
}

void PadicScalar::check_prime(long p) {
  if (p < 2 || mpz_probab_prime_p(Integer(p).get_mpz_t(), 30) == 0)
    throw Error(ErrorKind::InvalidArgument, "p = " + std::to_string(p) + " is not prime");
}

PadicScalar::PadicScalar(long p, long n, Rational lift) : p_(p), n_(n) {
  if (lift == 0) return;
  const long v = p_valuation(lift, p);
  if (v >= n) return;
  // unit part mod p^(n-v)
  Rational unit = lift;
  if (v > 0) unit /= Rational(ipow(p, static_cast<unsigned long>(v)));
  if (v < 0) unit *= Rational(ipow(p, static_cast<unsigned long>(-v)));
  const Integer m = ipow(p, static_cast<unsigned long>(n - v));
  Integer inv;
  const Integer den(unit.get_den());
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t());
  Integer u = Integer(unit.get_num()) * inv;
  mpz_fdiv_r(u.get_mpz_t(), u.get_mpz_t(), m.get_mpz_t());
  v_ = v;
  lift_ = Rational(u);
  if (v > 0) lift_ *= Rational(ipow(p, static_cast<unsigned long>(v)));
  if (v < 0) lift_ /= Rational(ipow(p, static_cast<unsigned long>(-v)));
  lift_.canonicalize();
}

PadicScalar PadicScalar::from_integer(long p, const Integer& value, long precision) {
  return from_rational(p, Rational(value), precision);
}

PadicScalar PadicScalar::from_rational(long p, const Rational& value, long precision) {
  check_prime(p);
  return PadicScalar(p, precision, value);
}

PadicScalar PadicScalar::zero(long p, long precision) {
  check_prime(p);
  return PadicScalar(p, precision, Rational(0));
}

std::optional<long> PadicScalar::valuation() const {
  if (is_zero()) return std::nullopt;
  return v_;
}

Integer PadicScalar::residue() const {
  if (is_zero()) return 0;
  if (v_ < 0) throw Error(ErrorKind::InvalidArgument, "residue of a non-integral p-adic number");
  return Integer(lift_.get_num());
}

PadicScalar PadicScalar::reduce(long precision) const { return PadicScalar(p_, std::min(precision, n_), lift_); }

bool PadicScalar::congruent(const PadicScalar& o) const { return (*this - o).is_zero(); }

namespace {

void same_prime(const PadicScalar& a, const PadicScalar& b) {
  if (a.prime() != b.prime()) throw Error(ErrorKind::InvalidArgument, "p-adic operands use different primes");
}

}  // namespace

PadicScalar operator+(const PadicScalar& a, const PadicScalar& b) {
  same_prime(a, b);
  return PadicScalar(a.p_, std::min(a.n_, b.n_), a.lift_ + b.lift_);
}

PadicScalar operator-(const PadicScalar& a, const PadicScalar& b) {
  same_prime(a, b);
  return PadicScalar(a.p_, std::min(a.n_, b.n_), a.lift_ - b.lift_);
}

PadicScalar operator-(const PadicScalar& a) { return PadicScalar(a.p_, a.n_, -a.lift_); }

PadicScalar operator*(const PadicScalar& a, const PadicScalar& b) {
  same_prime(a, b);
  const long n = std::min(a.n_ + b.valuation_floor(), b.n_ + a.valuation_floor());
  return PadicScalar(a.p_, n, a.lift_ * b.lift_);
}

PadicScalar operator/(const PadicScalar& a, const PadicScalar& b) {
  same_prime(a, b);
  if (!b.is_unit()) throw Error(ErrorKind::Pole, "division by a non-unit: " + b.str());
  return a.divide_tracking(b);
}

PadicScalar PadicScalar::divide_tracking(const PadicScalar& b) const {
  same_prime(*this, b);
  if (b.is_zero()) throw Error(ErrorKind::Pole, "division by an element that is zero to precision " + std::to_string(b.n_));
  const long vb = b.v_;
  const long n = std::min(n_ - vb, valuation_floor() - 2 * vb + b.n_);
  return PadicScalar(p_, n, lift_ / b.lift_);
}

PadicScalar PadicScalar::pow(unsigned long k) const {
  // x^0 = 1 exactly; report it at the precision of x.
  if (k == 0) return PadicScalar(p_, std::max(n_, 1L), Rational(1));
  std::optional<PadicScalar> result;
  PadicScalar base = *this;
  while (k > 0) {
    if (k & 1) result = result ? *result * base : base;
    k >>= 1;
    if (k) base = base * base;
  }
  return *result;
}

std::string PadicScalar::str() const {
  const std::string mod = " mod " + std::to_string(p_) + "^" + std::to_string(n_);
  if (is_zero()) return "val>=" + std::to_string(n_) + ", residue=0" + mod;
  std::string res;
  if (v_ >= 0) {
    res = Integer(lift_.get_num()).get_str();
  } else {
    res = Integer(lift_.get_num()).get_str() + "/" + std::to_string(p_) + "^" + std::to_string(-v_);
  }
  return "val=" + std::to_string(v_) + ", residue=" + res + mod;
}

}  // namespace tzeta
