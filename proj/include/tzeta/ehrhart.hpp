#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tzeta/polynomial.hpp"
#include "tzeta/toric.hpp"

namespace tzeta {

/// f(n) = components[n mod period](n). Coefficients ascending in n.
struct QuasiPolynomial {
  long period = 1;
  std::vector<std::vector<Rational>> components;

  [[nodiscard]] int degree() const;
  [[nodiscard]] Rational evaluate(long n) const;
  [[nodiscard]] std::string to_json() const;
  static QuasiPolynomial from_json(const std::string& text);

  friend bool operator==(const QuasiPolynomial&, const QuasiPolynomial&) = default;
};

/// Components are polynomials in r variables, indexed by residue tuples.
/// Agreement with the fitted function is claimed only for n_i >= threshold.
struct MultivariateQuasiPolynomial {
  std::size_t r = 0;
  std::vector<long> periods;
  std::map<std::vector<long>, Polynomial> components;
  long threshold = 0;

  [[nodiscard]] int degree() const;
  [[nodiscard]] Rational evaluate(std::span<const long> n) const;
};

using Sampler = std::function<Rational(std::span<const long>)>;

/// Exact solve of a square or overdetermined system; nullopt when inconsistent.
/// Throws InsufficientSamples when the system is underdetermined.
std::optional<std::vector<Rational>> solve_exact(std::vector<std::vector<Rational>> a, std::vector<Rational> b);

QuasiPolynomial fit_quasi_polynomial(const std::map<long, Rational>& samples, long period, int degree_bound);

/// Smallest period in 1..max_period whose fit reproduces f on 0..validate_upto.
QuasiPolynomial search_quasi_polynomial(const std::function<Rational(long)>& f, int degree_bound,
                                        long max_period = 12, long validate_upto = 50);

struct MultivariateFitOptions {
  std::vector<long> periods;
  std::vector<int> degree_bounds;
  std::optional<long> threshold;  // doubled from 0 when absent
  long holdout_extent = 0;        // 0 picks a default from periods and degrees
  long max_threshold = 64;
};

MultivariateQuasiPolynomial fit_multivariate_qp(const Sampler& sampler, std::size_t r,
                                                const MultivariateFitOptions& options);

struct QpReport {
  std::vector<std::vector<long>> mismatches;
  [[nodiscard]] bool pass() const { return mismatches.empty(); }
};

QpReport validate_qp(const QuasiPolynomial& qp, const std::function<Rational(long)>& f, std::span<const long> grid);
QpReport validate_qp(const MultivariateQuasiPolynomial& qp, const Sampler& f,
                     const std::vector<std::vector<long>>& grid);

/// n -> l(E + n_1 D_1 + ... + n_r D_r).
Sampler section_sampler(const Fan& fan, const TorusDivisor& base, const std::vector<TorusDivisor>& directions);

/// Fits l(E + nD) by period search and checks 1 <= degree <= dim.
QuasiPolynomial fit_toric_family(const Fan& fan, const TorusDivisor& base, const TorusDivisor& direction,
                                 long max_period = 12, long validate_upto = 50);

}  // namespace tzeta
