#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tzeta/padic.hpp"

namespace tzeta {

/// ord_p(c_r) >= c * r^2 + d for every r, stored or not.
struct NpBound {
  Rational c;
  Rational d;

  [[nodiscard]] Rational at(long r) const { return c * r * r + d; }
};

/// Bound for a product of two series carrying bounds a and b.
NpBound combine_bounds(const NpBound& a, const NpBound& b);

struct CertifiedSeries {
  long p = 2;
  std::vector<PadicScalar> coeffs;  // c_0..c_R
  std::optional<NpBound> bound;

  [[nodiscard]] long truncation() const { return static_cast<long>(coeffs.size()) - 1; }

  /// Integer coefficients stored mod p^precision.
  static CertifiedSeries from_integers(long p, const std::vector<Integer>& c, long precision);
};

/// Product truncated at the shorter input; bounds combine when both exist.
CertifiedSeries multiply(const CertifiedSeries& a, const CertifiedSeries& b);

struct NewtonPolygon {
  std::vector<std::pair<long, long>> vertices;  // (index, valuation)
  [[nodiscard]] std::vector<Rational> slopes() const;
};

/// Lower convex hull of (r, ord c_r) over coefficients nonzero to precision.
NewtonPolygon newton_polygon(const CertifiedSeries& s);

struct QuadraticCheck {
  bool pass = false;
  std::optional<long> witness;       // first index violating the bound
  std::vector<long> inconclusive;    // zero to a precision below the bound
};

QuadraticCheck check_quadratic_bound(const CertifiedSeries& s, const Rational& c, const Rational& d);

/// Smallest R* >= 0 with c r^2 + d + r * w >= target for all r > R*.
long tail_cutoff(const NpBound& bound, long w, long target);

/// sum c_r t^r mod p^N, using the bound to discard the tail.
PadicScalar eval_entire(const CertifiedSeries& s, const PadicScalar& t, long precision);

/// CSV rows "r,coefficient,valuation" with a header line.
std::string series_csv(const CertifiedSeries& s);

}  // namespace tzeta
