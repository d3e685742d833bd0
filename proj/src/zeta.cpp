#include "tzeta/zeta.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "tzeta/error.hpp"

namespace tzeta {

namespace {

struct ClassData {
  EffectiveClass cls;
  Integer sections;
};

std::vector<std::vector<ClassData>> classes_with_sections(const ToricVarietyModel& model, long dmax) {
  if (dmax < 0) throw Error(ErrorKind::InvalidArgument, "Dmax must be nonnegative");
  std::vector<std::vector<ClassData>> out;
  for (auto& level : enumerate_effective_classes_upto(model, dmax)) {
    std::vector<ClassData> row;
    for (auto& c : level) {
      Integer l = sections_dim(model.fan, {c.representative});
      row.push_back({std::move(c), std::move(l)});
    }
    out.push_back(std::move(row));
  }
  return out;
}

Integer power(long q, const Integer& l) {
  if (!l.fits_ulong_p()) throw Error(ErrorKind::InvalidArgument, "section count too large");
  return ipow(q, l.get_ui());
}

void check_q(long q) {
  if (q < 2) throw Error(ErrorKind::InvalidArgument, "q must be at least 2");
}

long capped_valuation(const Integer& x, long p, long cap) {
  if (x == 0) return cap;
  return std::min(p_valuation(x, p), cap);
}

std::vector<Integer> times_one_minus_t(std::vector<Integer> c, long j) {
  for (long k = 0; k < j; ++k)
    for (std::size_t d = c.size(); d-- > 1;) c[d] -= c[d - 1];
  return c;
}

}  // namespace

ZetaTruncation zeta_coefficients(const ToricVarietyModel& model, long q, long dmax) {
  check_q(q);
  ZetaTruncation z;
  z.q = q;
  for (const auto& level : classes_with_sections(model, dmax)) {
    Integer m = 0;
    for (const auto& c : level) m += (power(q, c.sections) - 1) / (q - 1);
    z.coeffs.push_back(m);
  }
  return z;
}

std::vector<Integer> section_power_series(const ToricVarietyModel& model, long q, long dmax) {
  check_q(q);
  std::vector<Integer> out;
  for (const auto& level : classes_with_sections(model, dmax)) {
    Integer s = 0;
    for (const auto& c : level) s += power(q, c.sections);
    out.push_back(s);
  }
  return out;
}

std::string zeta_csv(const ZetaTruncation& z, long p) {
  std::ostringstream os;
  os << "d,M_d,ord_p M_d\n";
  for (std::size_t d = 0; d < z.coeffs.size(); ++d) {
    os << d << ',' << z.coeffs[d].get_str() << ',';
    if (z.coeffs[d] == 0) os << "inf";
    else os << p_valuation(z.coeffs[d], p);
    os << '\n';
  }
  return os.str();
}

ClassCountSeries class_count_series(const ToricVarietyModel& model, long dmax) {
  ClassCountSeries s;
  for (const auto& g : minimal_generators(model)) s.generator_degrees.push_back(g.degree);
  for (const auto& level : enumerate_effective_classes_upto(model, dmax)) s.counts.emplace_back(level.size());
  long bound = 0;
  for (long d : s.generator_degrees) bound += d;
  if (dmax <= bound)
    throw Error(ErrorKind::Certification, "Dmax = " + std::to_string(dmax) +
                                              " cannot show the class count numerator terminates; need Dmax > " +
                                              std::to_string(bound));
  std::vector<Integer> num = s.counts;
  for (long g : s.generator_degrees)
    for (std::size_t d = num.size(); d-- > static_cast<std::size_t>(g);) num[d] -= num[d - static_cast<std::size_t>(g)];
  for (std::size_t d = static_cast<std::size_t>(bound) + 1; d < num.size(); ++d)
    if (num[d] != 0)
      throw Error(ErrorKind::Certification, "class count numerator has a nonzero coefficient at degree " +
                                                std::to_string(d) + "; it does not terminate by Dmax");
  num.resize(static_cast<std::size_t>(bound) + 1);
  while (num.size() > 1 && num.back() == 0) num.pop_back();
  s.numerator = std::move(num);
  return s;
}

PoleReport pole_analysis(const ToricVarietyModel& model, long q, long p, long dmax, long precision) {
  const long e_q = prime_power_exponent(q, p);
  if (precision <= 0) throw Error(ErrorKind::InvalidArgument, "precision must be positive");
  const auto data = classes_with_sections(model, dmax);
  std::vector<Integer> m;
  for (const auto& level : data) {
    Integer s = 0;
    for (const auto& c : level) s += (power(q, c.sections) - 1) / (q - 1);
    m.push_back(s);
  }

  PoleReport r;
  r.order = static_cast<long>(model.class_group.rank);
  r.precision = precision;
  r.dmax = dmax;
  r.leading = times_one_minus_t(m, r.order);
  r.subleading = times_one_minus_t(m, r.order - 1);
  for (const auto& c : r.leading) r.leading_valuations.push_back(capped_valuation(c, p, precision));
  for (const auto& c : r.subleading) r.subleading_valuations.push_back(capped_valuation(c, p, precision));

  r.d0 = 0;
  for (long d = 0; d <= dmax; ++d)
    if (r.leading_valuations[static_cast<std::size_t>(d)] < precision) r.d0 = d;
  if (r.d0 >= dmax)
    throw Error(ErrorKind::Certification, "coefficients of (1-T)^" + std::to_string(r.order) +
                                              " Z have not reached valuation " + std::to_string(precision) +
                                              " by Dmax = " + std::to_string(dmax));
  bool all_small = true, some_unit = false;
  for (long d = r.d0 + 1; d <= dmax; ++d) {
    const long v = r.subleading_valuations[static_cast<std::size_t>(d)];
    all_small = all_small && v < precision;
    some_unit = some_unit || v == 0;
  }
  r.subleading_bounded = all_small && some_unit;

  // (1-T)^rho Z -> -1/(q-1) * lim (1-T)^rho H, since (1-T)^rho E vanishes at 1.
  const ClassCountSeries h = class_count_series(model, dmax);
  std::vector<Integer> k = h.numerator;
  const long extra = static_cast<long>(h.generator_degrees.size()) - r.order;
  for (long j = 0; j < extra; ++j) {
    Integer rem = 0;
    for (auto& c : k) {
      rem += c;
      c = rem;
    }
    if (rem != 0) throw Error(ErrorKind::Certification, "class count numerator does not vanish to the expected order");
  }
  Integer k1 = 0;
  for (const auto& c : k) k1 += c;
  Integer degs = 1;
  for (long g : h.generator_degrees) degs *= g;
  const Rational special = -Rational(k1) / Rational(degs) / Rational(q - 1);
  r.special_value = PadicScalar::from_rational(p, special, precision);

  Integer e1 = 0;
  for (const auto& level : data)
    for (const auto& c : level) e1 += power(q, c.sections);
  r.entire_value = PadicScalar::from_integer(p, e1, precision);
  long maxgen = 0;
  for (long g : h.generator_degrees) maxgen = std::max(maxgen, g);
  r.entire_value_certified = true;
  for (long d = std::max(0L, dmax - maxgen + 1); d <= dmax; ++d)
    for (const auto& c : data[static_cast<std::size_t>(d)])
      if (c.sections * e_q < precision) r.entire_value_certified = false;
  return r;
}

std::string PoleReport::str() const {
  std::ostringstream os;
  os << "order=" << order << '\n';
  os << "precision=" << precision << '\n';
  os << "window=(" << d0 << "," << dmax << "]\n";
  os << "special_value_residue=" << (special_value.is_zero() ? std::string("0") : special_value.residue().get_str())
     << '\n';
  os << "special_value=" << special_value.str() << '\n';
  os << "entire_value_at_1=" << entire_value.str() << (entire_value_certified ? " (certified)" : " (uncertified)")
     << '\n';
  os << "subleading_bounded=" << (subleading_bounded ? "yes" : "no") << '\n';
  os << "d,(1-T)^" << order << "Z,val,(1-T)^" << order - 1 << "Z,val\n";
  for (std::size_t d = 0; d < leading.size(); ++d)
    os << d << ',' << leading[d].get_str() << ',' << leading_valuations[d] << ',' << subleading[d].get_str() << ','
       << subleading_valuations[d] << '\n';
  return os.str();
}

namespace {

IntVector subtract_class(const FinAbGroupPresentation& g, const IntVector& a, const IntVector& b) {
  IntVector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
  for (std::size_t k = 0; k < g.invariant_factors.size(); ++k) {
    Integer& x = c[g.rank + k];
    mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), g.invariant_factors[k].get_mpz_t());
  }
  return c;
}

std::size_t free_rank(const std::vector<EffectiveClass>& chosen, std::size_t rank) {
  if (chosen.empty()) return 0;
  IntMatrix a(chosen.size(), rank);
  for (std::size_t i = 0; i < chosen.size(); ++i)
    for (std::size_t j = 0; j < rank; ++j) a(i, j) = chosen[i].class_coords[j];
  return smith_normal_form(a).rank();
}

MultivariateQuasiPolynomial fit_exponent(const Sampler& sampler, std::size_t r, int degree) {
  std::optional<Error> last;
  for (long period = 1; period <= 6; ++period) {
    MultivariateFitOptions opt;
    opt.periods.assign(r, period);
    opt.degree_bounds.assign(r, degree);
    opt.threshold = 0;
    try {
      return fit_multivariate_qp(sampler, r, opt);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ValidationFailed) throw;
      last = e;
    }
  }
  throw *last;
}

}  // namespace

ClassSeriesDecomposition decompose_class_series(const ToricVarietyModel& model, long q, long p, long dmax, long precision) {
  const long e_q = prime_power_exponent(q, p);
  const auto& g = model.class_group;
  ClassSeriesDecomposition w;
  const auto gens = minimal_generators(model);
  for (const auto& c : gens) {
    auto trial = w.directions;
    trial.push_back(c);
    if (free_rank(trial, g.rank) == trial.size()) w.directions = std::move(trial);
  }
  if (w.directions.size() != g.rank)
    throw Error(ErrorKind::Unsupported, "generators do not contain a basis of the free part");

  const auto levels = enumerate_effective_classes_upto(model, dmax);
  std::vector<std::set<IntVector>> present(levels.size());
  for (std::size_t d = 0; d < levels.size(); ++d)
    for (const auto& c : levels[d]) present[d].insert(c.class_coords);

  // Fundamental set: classes from which no direction can be subtracted.
  std::vector<EffectiveClass> base;
  for (std::size_t d = 0; d < levels.size(); ++d)
    for (const auto& c : levels[d]) {
      bool fundamental = true;
      for (const auto& dir : w.directions) {
        const long rest = static_cast<long>(d) - dir.degree;
        if (rest >= 0 && present[static_cast<std::size_t>(rest)].count(subtract_class(g, c.class_coords, dir.class_coords)))
          fundamental = false;
      }
      if (fundamental) base.push_back(c);
    }

  // The translates E + N D must tile the monoid up to Dmax.
  std::map<IntVector, long> hits;
  for (const auto& e : base) {
    // walk n in N^rho by degree
    std::function<void(std::size_t, IntVector, long)> walk = [&](std::size_t i, IntVector coords, long deg) {
      if (i == w.directions.size()) {
        ++hits[coords];
        return;
      }
      while (deg <= dmax) {
        walk(i + 1, coords, deg);
        for (std::size_t k = 0; k < coords.size(); ++k) coords[k] += w.directions[i].class_coords[k];
        coords = subtract_class(g, coords, IntVector(coords.size(), Integer(0)));
        deg += w.directions[i].degree;
      }
    };
    walk(0, e.class_coords, e.degree);
  }
  for (std::size_t d = 0; d < levels.size(); ++d)
    for (const auto& c : levels[d]) {
      auto it = hits.find(c.class_coords);
      if (it == hits.end() || it->second != 1)
        throw Error(ErrorKind::Unsupported, "effective classes are not a free module over the chosen directions");
    }

  std::vector<TorusDivisor> dirs;
  for (const auto& dir : w.directions) dirs.push_back({dir.representative});
  w.class_counts = class_count_series(model, dmax);
  w.part.q = q;
  w.part.p = p;
  w.part.e_q = e_q;
  w.part.truncation = dmax;
  w.part.working_precision = precision;
  const std::size_t r = w.directions.size();
  for (const auto& e : base) {
    ClassSeriesPiece piece;
    piece.base_class = e.class_coords;
    piece.base_degree = e.degree;
    const Sampler sampler = section_sampler(model.fan, {e.representative}, dirs);
    piece.exponent = fit_exponent(sampler, r, static_cast<int>(model.fan.dim));
    for (const auto& [res, comp] : piece.exponent.components) {
      std::vector<Polynomial> images;
      std::vector<long> degrees;
      long shift = e.degree;
      for (std::size_t i = 0; i < r; ++i) {
        const long period = piece.exponent.periods[i];
        images.push_back(Polynomial::variable(r, i) * Rational(period) + Polynomial::constant(r, Rational(res[i])));
        degrees.push_back(period * w.directions[i].degree);
        shift += res[i] * w.directions[i].degree;
      }
      const Polynomial f = comp.compose(images);
      (void)check_increasing(f);
      for (auto& t : decompose(f, degrees, shift, 1L << 12)) piece.terms.push_back(std::move(t));
    }
    for (auto t : piece.terms) {
      materialize(t, q, p, dmax, precision);
      w.part.working_precision = std::max(w.part.working_precision,
                                          t.numerator ? t.numerator->coeffs[0].precision() : precision);
      w.part.terms.push_back(std::move(t));
    }
    w.pieces.push_back(std::move(piece));
  }
  return w;
}

}  // namespace tzeta
