#include "tzeta/series.hpp"

#include <algorithm>
#include <sstream>

#include "tzeta/error.hpp"

namespace tzeta {

NpBound combine_bounds(const NpBound& a, const NpBound& b) {
  if (a.c <= 0 || b.c <= 0) throw Error(ErrorKind::InvalidArgument, "Newton polygon bounds need c > 0");
  // min over real i + j = r of c1 i^2 + c2 j^2 is c1 c2 r^2 / (c1 + c2)
  return {a.c * b.c / (a.c + b.c), a.d + b.d};
}

CertifiedSeries CertifiedSeries::from_integers(long p, const std::vector<Integer>& c, long precision) {
  CertifiedSeries s;
  s.p = p;
  for (const auto& x : c) s.coeffs.push_back(PadicScalar::from_integer(p, x, precision));
  return s;
}

CertifiedSeries multiply(const CertifiedSeries& a, const CertifiedSeries& b) {
  if (a.p != b.p) throw Error(ErrorKind::InvalidArgument, "series over different primes");
  CertifiedSeries out;
  out.p = a.p;
  const std::size_t len = std::min(a.coeffs.size(), b.coeffs.size());
  for (std::size_t r = 0; r < len; ++r) {
    PadicScalar acc = a.coeffs[0] * b.coeffs[r];
    for (std::size_t i = 1; i <= r; ++i) acc = acc + a.coeffs[i] * b.coeffs[r - i];
    out.coeffs.push_back(acc);
  }
  if (a.bound && b.bound) out.bound = combine_bounds(*a.bound, *b.bound);
  return out;
}

std::vector<Rational> NewtonPolygon::slopes() const {
  std::vector<Rational> out;
  for (std::size_t i = 1; i < vertices.size(); ++i)
    out.emplace_back(Rational(vertices[i].second - vertices[i - 1].second, vertices[i].first - vertices[i - 1].first));
  for (auto& s : out) s.canonicalize();
  return out;
}

NewtonPolygon newton_polygon(const CertifiedSeries& s) {
  std::vector<std::pair<long, long>> pts;
  for (std::size_t r = 0; r < s.coeffs.size(); ++r)
    if (auto v = s.coeffs[r].valuation()) pts.emplace_back(static_cast<long>(r), *v);
  if (pts.empty()) throw Error(ErrorKind::InvalidArgument, "Newton polygon of a series that is zero to precision");
  NewtonPolygon np;
  auto& h = np.vertices;
  for (const auto& pt : pts) {
    // pop while the last turn is not strictly convex from below
    while (h.size() >= 2) {
      const auto& a = h[h.size() - 2];
      const auto& b = h.back();
      const long cross = (b.first - a.first) * (pt.second - a.second) - (b.second - a.second) * (pt.first - a.first);
      if (cross > 0) break;
      h.pop_back();
    }
    h.push_back(pt);
  }
  return np;
}

QuadraticCheck check_quadratic_bound(const CertifiedSeries& s, const Rational& c, const Rational& d) {
  if (c <= 0) throw Error(ErrorKind::InvalidArgument, "quadratic bound needs c > 0");
  const NpBound b{c, d};
  QuadraticCheck out;
  for (std::size_t r = 0; r < s.coeffs.size(); ++r) {
    const PadicScalar& x = s.coeffs[r];
    const Rational need = b.at(static_cast<long>(r));
    if (auto v = x.valuation()) {
      if (Rational(*v) < need && !out.witness) out.witness = static_cast<long>(r);
    } else if (Rational(x.precision()) < need) {
      out.inconclusive.push_back(static_cast<long>(r));
    }
  }
  out.pass = !out.witness && out.inconclusive.empty();
  return out;
}

long tail_cutoff(const NpBound& bound, long w, long target) {
  if (bound.c <= 0) throw Error(ErrorKind::InvalidArgument, "tail cutoff needs c > 0");
  auto g = [&](long r) -> Rational { return bound.at(r) + Rational(r * w); };
  // g is convex with minimum near -w / (2c); past that it only grows.
  const Rational vertex = Rational(-w) / (2 * bound.c);
  long last_bad = 0;
  for (long r = 1;; ++r) {
    if (g(r) < target) last_bad = r;
    else if (Rational(r) > vertex) break;
    if (r > (1L << 24)) throw Error(ErrorKind::InsufficientTruncation, "tail cutoff does not fit in range");
  }
  return last_bad;
}

PadicScalar eval_entire(const CertifiedSeries& s, const PadicScalar& t, long precision) {
  if (!s.bound) throw Error(ErrorKind::Certification, "eval_entire needs a Newton polygon bound");
  if (s.coeffs.empty()) throw Error(ErrorKind::InsufficientTruncation, "empty series");
  if (t.prime() != s.p) throw Error(ErrorKind::InvalidArgument, "evaluation point over a different prime");
  const long w = t.valuation_floor();
  const long cutoff = tail_cutoff(*s.bound, w, precision);
  if (s.truncation() < cutoff)
    throw Error(ErrorKind::InsufficientTruncation, "series truncated at R = " + std::to_string(s.truncation()) +
                                                       " but the tail is only negligible beyond R* = " +
                                                       std::to_string(cutoff));
  PadicScalar acc = s.coeffs[0];
  PadicScalar power = t;
  for (long r = 1; r <= cutoff; ++r) {
    acc = acc + s.coeffs[static_cast<std::size_t>(r)] * power;
    if (r < cutoff) power = power * t;
  }
  if (acc.precision() < precision)
    throw Error(ErrorKind::InsufficientPrecision, "partial sum only known mod p^" + std::to_string(acc.precision()) +
                                                      ", requested p^" + std::to_string(precision));
  return acc.reduce(precision);
}

std::string series_csv(const CertifiedSeries& s) {
  std::ostringstream os;
  os << "r,coefficient,valuation\n";
  for (std::size_t r = 0; r < s.coeffs.size(); ++r) {
    const PadicScalar& x = s.coeffs[r];
    os << r << ',';
    if (x.is_zero()) {
      os << "0,>=" << x.precision() << '\n';
    } else {
      os << x.lift().get_str() << ',' << *x.valuation() << '\n';
    }
  }
  return os.str();
}

}  // namespace tzeta
