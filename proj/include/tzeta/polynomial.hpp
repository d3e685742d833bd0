#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace tzeta {

using Rational = mpq_class;
using Exponent = std::vector<int>;

/// Sparse multivariate polynomial with exact rational coefficients.
/// Zero coefficients are never stored.
class Polynomial {
 public:
  explicit Polynomial(std::size_t nvars = 0) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, const Rational& c);
  static Polynomial variable(std::size_t nvars, std::size_t index);
  static Polynomial monomial(const Exponent& exponent, const Rational& c);

  /// Parses expressions over x1..xn (or x, y, z) with + - * ^ / and parentheses.
  /// nvars = 0 infers the count from the highest variable index seen.
  static Polynomial parse(std::string_view text, std::size_t nvars = 0);

  [[nodiscard]] std::size_t nvars() const noexcept { return nvars_; }
  [[nodiscard]] const std::map<Exponent, Rational>& terms() const noexcept { return terms_; }
  [[nodiscard]] bool is_zero() const noexcept { return terms_.empty(); }
  [[nodiscard]] bool is_constant() const;
  [[nodiscard]] Rational constant_term() const;
  [[nodiscard]] Rational coefficient(const Exponent& e) const;

  [[nodiscard]] int degree_in(std::size_t var) const;  // -1 for the zero polynomial
  [[nodiscard]] int total_degree() const;
  [[nodiscard]] bool depends_on(std::size_t var) const { return degree_in(var) > 0; }

  /// Coefficient of x_var^power, as a polynomial in the remaining variables
  /// (same variable count, x_var absent).
  [[nodiscard]] Polynomial coefficient_in(std::size_t var, int power) const;
  [[nodiscard]] Polynomial leading_coefficient_in(std::size_t var) const;

  [[nodiscard]] Rational evaluate(std::span<const Rational> point) const;
  [[nodiscard]] Rational evaluate(std::span<const long> point) const;

  [[nodiscard]] Polynomial substitute(std::size_t var, const Rational& value) const;
  [[nodiscard]] Polynomial shift(std::size_t var, const Rational& offset) const;  // p(.., x_var + offset, ..)
  [[nodiscard]] Polynomial remove_variable(std::size_t var) const;               // requires degree_in(var) <= 0
  /// p(images[0], ..., images[n-1]); every image shares one variable count.
  [[nodiscard]] Polynomial compose(const std::vector<Polynomial>& images) const;
  /// Forward difference p(x + e_var) - p(x).
  [[nodiscard]] Polynomial difference(std::size_t var) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Rational& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator-(Polynomial a) { return a *= Rational(-1); }
  friend bool operator==(const Polynomial& a, const Polynomial& b) = default;

  [[nodiscard]] Polynomial pow(unsigned k) const;

  [[nodiscard]] std::string str(std::string_view prefix = "x") const;

 private:
  void add_term(const Exponent& e, const Rational& c);

  std::size_t nvars_;
  std::map<Exponent, Rational> terms_;
};

/// Smallest integer B >= 0 with |r| <= B for every real root r of the
/// univariate coefficient list (ascending), by the Cauchy bound.
long cauchy_root_bound(const std::vector<Rational>& ascending);

std::string rational_str(const Rational& r);  // always "num/den"
Rational parse_rational(std::string_view text);

}  // namespace tzeta
