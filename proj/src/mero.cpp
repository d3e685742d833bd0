#include "tzeta/mero.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "tzeta/error.hpp"

namespace tzeta {

namespace {

void for_each_box(const std::vector<long>& hi, const std::function<void(const std::vector<long>&)>& visit) {
  std::vector<long> x(hi.size(), 0);
  while (true) {
    visit(x);
    std::size_t i = 0;
    while (i < x.size() && x[i] == hi[i]) x[i++] = 0;
    if (i == x.size()) return;
    ++x[i];
  }
}

// Points k >= 0 with weights . k <= budget; visit gets k and weights . k.
void for_each_weighted(const std::vector<long>& weights, long budget,
                       const std::function<void(const std::vector<long>&, long)>& visit) {
  std::vector<long> k(weights.size(), 0);
  std::function<void(std::size_t, long)> rec = [&](std::size_t i, long used) {
    if (i == weights.size()) {
      visit(k, used);
      return;
    }
    for (long v = 0; used + v * weights[i] <= budget; ++v) {
      k[i] = v;
      rec(i + 1, used + v * weights[i]);
    }
    k[i] = 0;
  };
  rec(0, 0);
}

Integer integer_value(const Polynomial& f, std::span<const long> x) {
  const Rational v = f.evaluate(x);
  if (v.get_den() != 1) throw Error(ErrorKind::InvalidArgument, "polynomial is not integer valued on the grid");
  return Integer(v.get_num());
}

long small_value(const Polynomial& f, std::span<const long> x) {
  const Integer v = integer_value(f, x);
  if (!v.fits_slong_p()) throw Error(ErrorKind::InvalidArgument, "exponent overflows");
  return v.get_si();
}

std::string point_str(std::span<const long> x) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
  os << ')';
  return os.str();
}

}  // namespace

IncreasingPolynomial check_increasing(const Polynomial& f, long grid_bound) {
  const std::size_t n = f.nvars();
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "increasing polynomial needs at least one variable");
  const long b = std::max<long>(grid_bound, f.total_degree());
  std::vector<Polynomial> diffs;
  for (std::size_t i = 0; i < n; ++i) diffs.push_back(f.difference(i));
  // leading coefficient of each difference in each variable
  std::vector<std::pair<std::string, Polynomial>> leads;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!diffs[i].is_zero())
        leads.emplace_back("leading coefficient in x" + std::to_string(j + 1) + " of the x" + std::to_string(i + 1) +
                               "-difference",
                           diffs[i].leading_coefficient_in(j));

  const std::vector<long> zero(n, 0);
  if (integer_value(f, zero) < 0) throw Error(ErrorKind::NotIncreasing, "f(0) is negative");
  for_each_box(std::vector<long>(n, b), [&](const std::vector<long>& x) {
    (void)integer_value(f, x);
    for (std::size_t i = 0; i < n; ++i)
      if (diffs[i].evaluate(x) < 0)
        throw Error(ErrorKind::NotIncreasing, "forward difference in x" + std::to_string(i + 1) + " is negative at " +
                                                  point_str(x) + " for f = " + f.str());
    for (const auto& [what, p] : leads)
      if (p.evaluate(x) < 0)
        throw Error(ErrorKind::NotIncreasing, what + " is negative at " + point_str(x) + " for f = " + f.str());
  });
  return {f, b};
}

bool ConeTerm::contains(const std::vector<long>& x) const {
  long below = -1;  // value of the following block
  for (std::size_t j = blocks.size(); j-- > 0;) {
    const long v = x[blocks[j][0]];
    for (std::size_t i : blocks[j])
      if (x[i] != v) return false;
    if (v < below) return false;
    below = v;
  }
  return true;
}

std::vector<ConeTerm> cone_decomposition(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "cone decomposition needs n >= 1");
  if (n > 16) throw Error(ErrorKind::InvalidArgument, "cone decomposition supports n <= 16");
  std::vector<ConeTerm> out;
  std::vector<std::vector<std::size_t>> prefix;
  std::function<void(unsigned)> rec = [&](unsigned remaining) {
    if (remaining == 0) {
      ConeTerm t;
      t.blocks = prefix;
      t.coefficient = ((n - prefix.size()) % 2 == 0) ? 1 : -1;
      out.push_back(std::move(t));
      return;
    }
    // every nonempty subset of the remaining elements as the next block
    for (unsigned s = remaining; s != 0; s = (s - 1) & remaining) {
      std::vector<std::size_t> block;
      for (std::size_t i = 0; i < n; ++i)
        if (s & (1u << i)) block.push_back(i);
      prefix.push_back(std::move(block));
      rec(remaining & ~s);
      prefix.pop_back();
    }
  };
  rec((1u << n) - 1);
  std::sort(out.begin(), out.end(), [](const ConeTerm& a, const ConeTerm& b) {
    if (a.blocks.size() != b.blocks.size()) return a.blocks.size() > b.blocks.size();
    return a.blocks < b.blocks;
  });
  return out;
}

bool verify_cone_decomposition(const std::vector<ConeTerm>& terms, std::size_t n, long box) {
  bool ok = true;
  for_each_box(std::vector<long>(n, box), [&](const std::vector<long>& x) {
    long sum = 0;
    for (const auto& t : terms)
      if (t.contains(x)) sum += t.coefficient;
    if (sum != 1) ok = false;
  });
  return ok;
}

Polynomial triangular_substitute(const Polynomial& f, const ConeTerm& h) {
  const std::size_t r = h.blocks.size();
  std::vector<Polynomial> images(f.nvars(), Polynomial(r));
  for (std::size_t j = 0; j < r; ++j) {
    Polynomial tail(r);
    for (std::size_t l = j; l < r; ++l) tail += Polynomial::variable(r, l);
    for (std::size_t i : h.blocks[j]) images.at(i) = tail;
  }
  return f.compose(images);
}

std::vector<long> cone_weights(const ConeTerm& h, const std::vector<long>& degrees) {
  std::vector<long> w;
  long acc = 0;
  for (const auto& block : h.blocks) {
    for (std::size_t i : block) acc += degrees.at(i);
    w.push_back(acc);
  }
  return w;
}

namespace {

struct Core {
  Integer mult = 1;
  long shift = 0;
  std::vector<DenominatorAtom> atoms;
  Polynomial u;
  std::vector<long> e;
  std::vector<VaryingDenominator> dens;
};

long nonnegative_integer(const Rational& c, const char* what) {
  if (c.get_den() != 1 || c < 0 || !Integer(c.get_num()).fits_slong_p())
    throw Error(ErrorKind::InvalidArgument, std::string(what) + " is not a small nonnegative integer");
  return Integer(c.get_num()).get_si();
}

// Degree of p restricted to the i-th coordinate axis.
int axis_degree(const Polynomial& p, std::size_t i) {
  int best = -1;
  for (const auto& [ex, c] : p.terms()) {
    bool on_axis = true;
    for (std::size_t j = 0; j < ex.size(); ++j)
      if (j != i && ex[j] != 0) on_axis = false;
    if (on_axis) best = std::max(best, ex[i]);
  }
  return best;
}

bool depends(const VaryingDenominator& den, std::size_t i) { return den.v.depends_on(i); }

Polynomial drop(const Polynomial& p, std::size_t i, long value) {
  return p.substitute(i, Rational(value)).remove_variable(i);
}

Core fix_variable(const Core& c, std::size_t i, long value) {
  Core out = c;
  out.u = drop(c.u, i, value);
  for (auto& den : out.dens) den.v = drop(den.v, i, value);
  out.shift += c.e[i] * value;
  out.e.erase(out.e.begin() + static_cast<std::ptrdiff_t>(i));
  return out;
}

Core shift_variables(const Core& c, const std::vector<std::size_t>& vars, long s) {
  Core out = c;
  for (std::size_t j : vars) {
    out.u = out.u.shift(j, Rational(s));
    for (auto& den : out.dens) den.v = den.v.shift(j, Rational(s));
    out.shift += c.e[j] * s;
  }
  return out;
}

struct Offender {
  std::size_t var;
  Polynomial poly;  // the polynomial whose axis restriction is too small
  Polynomial lead;  // its leading coefficient in var
};

void reduce(Core c, long cap, std::vector<MeroTerm>& out) {
  while (true) {
    for (std::size_t j = 0; j < c.dens.size();) {
      if (c.dens[j].v.is_constant()) {
        c.atoms.push_back({nonnegative_integer(c.dens[j].v.constant_term(), "denominator exponent"), c.dens[j].d});
        c.dens.erase(c.dens.begin() + static_cast<std::ptrdiff_t>(j));
      } else {
        ++j;
      }
    }
    const std::size_t m = c.e.size();
    if (m == 0) break;
    // A direction where u is at most linear and no denominator varies sums as
    // a geometric series: u = g0 + k_i g1.
    bool removed = false;
    for (std::size_t i = 0; i < m && !removed; ++i) {
      if (c.u.degree_in(i) > 1) continue;
      if (std::any_of(c.dens.begin(), c.dens.end(), [&](const auto& d) { return depends(d, i); })) continue;
      Polynomial g1 = c.u.coefficient_in(i, 1).remove_variable(i);
      Polynomial g0 = drop(c.u, i, 0);
      const long ei = c.e[i];
      c.u = std::move(g0);
      for (auto& den : c.dens) den.v = den.v.remove_variable(i);
      c.e.erase(c.e.begin() + static_cast<std::ptrdiff_t>(i));
      c.dens.push_back({std::move(g1), ei});
      removed = true;
    }
    if (removed) continue;

    std::optional<Offender> bad;
    for (std::size_t i = 0; i < m && !bad; ++i) {
      if (c.u.degree_in(i) <= 1)
        throw Error(ErrorKind::Unsupported, "direction k" + std::to_string(i + 1) +
                                                " is linear in the exponent but also varies a denominator; core " +
                                                c.u.str("k"));
      if (axis_degree(c.u, i) < 2) bad = Offender{i, c.u, c.u.leading_coefficient_in(i)};
    }
    for (std::size_t j = 0; j < c.dens.size() && !bad; ++j)
      for (std::size_t i = 0; i < m && !bad; ++i)
        if (c.dens[j].v.depends_on(i) && axis_degree(c.dens[j].v, i) < 1)
          bad = Offender{i, c.dens[j].v, c.dens[j].v.leading_coefficient_in(i)};
    if (!bad) {
      MeroTerm t;
      t.multiplicity = c.mult;
      t.t_shift = c.shift;
      t.atoms = c.atoms;
      t.core = c.u;
      t.weights = c.e;
      t.dens = c.dens;
      out.push_back(std::move(t));
      return;
    }

    // Split off the slab where the leading coefficient may vanish.
    std::vector<std::size_t> supp;
    for (std::size_t j = 0; j < m; ++j)
      if (bad->lead.depends_on(j)) supp.push_back(j);
    long s = 1;
    while (true) {
      std::vector<Rational> pt(m, Rational(0));
      for (std::size_t j : supp) pt[j] = s;
      if (bad->lead.evaluate(pt) > 0) break;
      s *= 2;
      if (s > cap)
        throw Error(ErrorKind::ThresholdExceeded, "no threshold up to " + std::to_string(cap) + " for variable k" +
                                                      std::to_string(bad->var + 1) + " of " + bad->poly.str("k"));
    }
    // Region k_{supp[0]} < s, then k_{supp[0]} >= s and k_{supp[1]} < s, ...
    Core rest = c;
    std::vector<std::size_t> shifted;
    for (std::size_t idx = 0; idx < supp.size(); ++idx) {
      const std::size_t j = supp[idx];
      for (long v = 0; v < s; ++v) reduce(fix_variable(rest, j, v), cap, out);
      rest = shift_variables(rest, {j}, s);
    }
    c = std::move(rest);
  }
  MeroTerm t;
  t.multiplicity = c.mult;
  t.t_shift = c.shift;
  t.atoms = c.atoms;
  t.core = Polynomial::constant(0, c.u.constant_term());
  out.push_back(std::move(t));
}

}  // namespace

std::vector<MeroTerm> decompose(const Polynomial& f, const std::vector<long>& degrees, long t_shift,
                                long threshold_cap) {
  const std::size_t n = f.nvars();
  if (degrees.size() != n) throw Error(ErrorKind::InvalidArgument, "need one T-degree per variable");
  for (long d : degrees)
    if (d <= 0) throw Error(ErrorKind::InvalidArgument, "T-degrees must be positive");
  std::vector<MeroTerm> out;
  for (const ConeTerm& h : cone_decomposition(n)) {
    Core c;
    c.mult = h.coefficient;
    c.shift = t_shift;
    c.u = triangular_substitute(f, h);
    c.e = cone_weights(h, degrees);
    reduce(std::move(c), threshold_cap, out);
  }
  return out;
}

std::string MeroTerm::describe() const {
  std::ostringstream os;
  os << multiplicity.get_str() << " * T^" << t_shift;
  for (const auto& a : atoms) os << " / (1 - q^" << a.c << " T^" << a.d << ")";
  if (is_rational()) {
    os << " * q^" << rational_str(core.constant_term());
    return os.str();
  }
  os << " * sum_k q^(" << core.str("k") << ") T^(";
  for (std::size_t i = 0; i < weights.size(); ++i) os << (i ? " + " : "") << weights[i] << "*k" << i + 1;
  os << ")";
  for (const auto& d : dens) os << " / (1 - q^(" << d.v.str("k") << ") T^" << d.d << ")";
  return os.str();
}

namespace {

Integer qpow(long q, long e) { return ipow(q, static_cast<unsigned long>(e)); }

// Univariate restriction of p to the i-th axis, ascending coefficients.
std::vector<Rational> axis_restriction(const Polynomial& p, std::size_t i) {
  std::vector<Rational> c;
  for (const auto& [ex, coef] : p.terms()) {
    bool on_axis = true;
    for (std::size_t j = 0; j < ex.size(); ++j)
      if (j != i && ex[j] != 0) on_axis = false;
    if (!on_axis) continue;
    const auto k = static_cast<std::size_t>(ex[i]);
    if (c.size() <= k) c.resize(k + 1, Rational(0));
    c[k] = coef;
  }
  return c;
}

Rational eval_univariate(const std::vector<Rational>& c, const Rational& x) {
  Rational acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

// a, b with h(x) >= a x^2 + b for all integers x >= 0; h has degree >= 2 and
// positive leading coefficient.
std::pair<Rational, Rational> quadratic_minorant(std::vector<Rational> h) {
  const std::size_t deg = h.size() - 1;
  const Rational lambda = h.back();
  Rational a = lambda;
  if (deg == 2 && h[1] < 0) a = lambda / 2;
  h[2] -= a;
  while (h.size() > 1 && h.back() == 0) h.pop_back();
  // past the largest real root of h' the remainder only grows
  std::vector<Rational> dh;
  for (std::size_t k = 1; k < h.size(); ++k) dh.push_back(h[k] * static_cast<long>(k));
  while (!dh.empty() && dh.back() == 0) dh.pop_back();
  const long bound = dh.size() >= 2 ? cauchy_root_bound(dh) : 0;
  Rational b = eval_univariate(h, Rational(0));
  for (long x = 1; x <= bound + 1; ++x) b = std::min(b, eval_univariate(h, Rational(x)));
  return {a, b};
}

struct TermBounds {
  NpBound core;         // q^{u(k)} summed over e.k = r
  std::optional<NpBound> denominator;
  NpBound numerator;    // equals core when there are no denominators
};

TermBounds term_bounds(const MeroTerm& t, long e_q) {
  const std::size_t m = t.weights.size();
  Rational a, b;
  long wsum = 0;
  for (std::size_t i = 0; i < m; ++i) {
    auto [ai, bi] = quadratic_minorant(axis_restriction(t.core, i));
    if (i == 0 || ai < a) a = ai;
    if (i == 0 || bi < b) b = bi;
    wsum += t.weights[i];
  }
  // u(k) >= max_i h_i(k_i) and max_i k_i >= (e.k) / sum(e)
  TermBounds out;
  out.core = {Rational(e_q) * a / (wsum * wsum), Rational(e_q) * b};
  for (const auto& den : t.dens) {
    const Rational v0 = den.v.constant_term();
    const Rational alpha(e_q, 2 * den.d * den.d);
    const Rational beta = Rational(e_q) * (v0 - Rational(1, 2)) / den.d;
    NpBound g{alpha / 2, beta < 0 ? Rational(-beta * beta / (2 * alpha)) : Rational(0)};
    out.denominator = out.denominator ? combine_bounds(*out.denominator, g) : g;
  }
  out.numerator = out.denominator ? combine_bounds(out.core, *out.denominator) : out.core;
  return out;
}

long ceil_long(const Rational& x) {
  Integer c;
  mpz_cdiv_q(c.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return c.get_si();
}

using Coeffs = std::vector<Integer>;

void reduce_mod(Coeffs& s, const Integer& mod) {
  for (auto& x : s) mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t());
}

// s / (1 - a T^d), truncated at s.size()
Coeffs divide_factor(const Coeffs& s, const Integer& a, long d, const Integer* mod) {
  Coeffs out = s;
  for (std::size_t r = static_cast<std::size_t>(d); r < out.size(); ++r) {
    out[r] += a * out[r - static_cast<std::size_t>(d)];
    if (mod) mpz_fdiv_r(out[r].get_mpz_t(), out[r].get_mpz_t(), mod->get_mpz_t());
  }
  return out;
}

Coeffs multiply_truncated(const Coeffs& a, const Coeffs& b, const Integer* mod) {
  Coeffs out(a.size(), Integer(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; i + j < out.size() && j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  if (mod) reduce_mod(out, *mod);
  return out;
}

CertifiedSeries to_certified(long p, const Coeffs& c, long precision, const NpBound& bound) {
  CertifiedSeries s = CertifiedSeries::from_integers(p, c, precision);
  s.bound = bound;
  return s;
}

}  // namespace

void materialize(MeroTerm& term, long q, long p, long truncation, long precision) {
  term.numerator.reset();
  term.denominator.reset();
  term.denominator_factors = 0;
  if (term.is_rational()) return;
  if (truncation < 0) throw Error(ErrorKind::InvalidArgument, "truncation must be nonnegative");
  const long e_q = prime_power_exponent(q, p);
  const TermBounds tb = term_bounds(term, e_q);
  Rational top = std::max(tb.numerator.at(0), tb.numerator.at(truncation));
  if (tb.denominator) top = std::max({top, tb.denominator->at(0), tb.denominator->at(truncation)});
  const long nw = std::max({precision, ceil_long(top) + 1, 1L});
  const Integer mod = ipow(p, static_cast<unsigned long>(nw));
  const auto len = static_cast<std::size_t>(truncation) + 1;

  // G_j mod p^{N_w}: factors 1 - q^w T^{d_j} over distinct values w of v_j
  // with w * e_q < N_w.
  std::vector<Coeffs> g;
  std::vector<std::set<long>> values(term.dens.size());
  const long wcap = (nw + e_q - 1) / e_q;
  for (std::size_t j = 0; j < term.dens.size(); ++j) {
    const auto& den = term.dens[j];
    const std::size_t m = term.weights.size();
    std::vector<long> hi(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
      if (!den.v.depends_on(i)) continue;
      std::vector<long> pt(m, 0);
      while (true) {
        if (small_value(den.v, pt) >= wcap) break;
        ++pt[i];
      }
      hi[i] = pt[i];
    }
    for_each_box(hi, [&](const std::vector<long>& k) {
      const long w = small_value(den.v, k);
      if (w < wcap) values[j].insert(w);
    });
    Coeffs gj(len, Integer(0));
    gj[0] = 1;
    for (long w : values[j]) {
      Coeffs factor(len, Integer(0));
      factor[0] = 1;
      if (static_cast<std::size_t>(den.d) < len) factor[static_cast<std::size_t>(den.d)] = -qpow(q, w);
      gj = multiply_truncated(gj, factor, &mod);
      if (w * e_q < precision) ++term.denominator_factors;
    }
    g.push_back(std::move(gj));
  }

  std::map<std::pair<std::size_t, long>, Coeffs> quotient_cache;
  auto quotient = [&](std::size_t j, long w) -> const Coeffs& {
    const auto key = std::make_pair(j, w < wcap ? w : -1);
    auto it = quotient_cache.find(key);
    if (it != quotient_cache.end()) return it->second;
    Coeffs qj = key.second < 0 ? g[j] : divide_factor(g[j], qpow(q, w), term.dens[j].d, &mod);
    return quotient_cache.emplace(key, std::move(qj)).first->second;
  };

  Coeffs num(len, Integer(0));
  for_each_weighted(term.weights, truncation, [&](const std::vector<long>& k, long used) {
    const long u = small_value(term.core, k);
    if (u < 0) throw Error(ErrorKind::InvalidArgument, "negative exponent in core");
    Integer coef;
    const Integer base(q);
    mpz_powm_ui(coef.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(u), mod.get_mpz_t());
    if (coef == 0) return;
    Coeffs piece(len, Integer(0));
    piece[static_cast<std::size_t>(used)] = coef;
    for (std::size_t j = 0; j < term.dens.size(); ++j)
      piece = multiply_truncated(piece, quotient(j, small_value(term.dens[j].v, k)), &mod);
    for (std::size_t r = 0; r < len; ++r) num[r] += piece[r];
  });
  reduce_mod(num, mod);

  term.numerator = to_certified(p, num, nw, tb.numerator);
  if (!term.dens.empty()) {
    Coeffs den(len, Integer(0));
    den[0] = 1;
    for (const auto& gj : g) den = multiply_truncated(den, gj, &mod);
    term.denominator = to_certified(p, den, nw, *tb.denominator);
  }
}

MeromorphicPart reduce_to_mero_parts(const IncreasingPolynomial& f, const std::vector<long>& degrees,
                                     const MeroOptions& options) {
  MeromorphicPart part;
  part.q = options.q;
  part.p = options.p;
  part.e_q = prime_power_exponent(options.q, options.p);
  part.truncation = options.truncation;
  part.terms = decompose(f.f, degrees, 0, options.threshold_cap);
  part.working_precision = options.precision;
  for (auto& t : part.terms) {
    materialize(t, part.q, part.p, options.truncation, options.precision);
    if (t.numerator) part.working_precision = std::max(part.working_precision, t.numerator->coeffs[0].precision());
  }
  return part;
}

std::vector<Integer> expand_term(const MeroTerm& term, long q, long truncation) {
  const auto len = static_cast<std::size_t>(truncation) + 1;
  Coeffs out(len, Integer(0));
  if (term.t_shift > truncation) return out;
  const long budget = truncation - term.t_shift;
  const auto blen = static_cast<std::size_t>(budget) + 1;
  Coeffs core(blen, Integer(0));
  if (term.is_rational()) {
    core[0] = qpow(q, nonnegative_integer(term.core.constant_term(), "constant exponent"));
  } else {
    for_each_weighted(term.weights, budget, [&](const std::vector<long>& k, long used) {
      Coeffs piece(blen, Integer(0));
      piece[static_cast<std::size_t>(used)] = qpow(q, small_value(term.core, k));
      for (const auto& den : term.dens) {
        Coeffs geom(blen, Integer(0));
        geom[0] = 1;
        piece = multiply_truncated(piece, divide_factor(geom, qpow(q, small_value(den.v, k)), den.d, nullptr),
                                   nullptr);
      }
      for (std::size_t r = 0; r < blen; ++r) core[r] += piece[r];
    });
  }
  for (const auto& a : term.atoms) core = divide_factor(core, qpow(q, a.c), a.d, nullptr);
  for (std::size_t r = 0; r < blen; ++r) out[r + static_cast<std::size_t>(term.t_shift)] = term.multiplicity * core[r];
  return out;
}

std::vector<Integer> expand_part(const MeromorphicPart& part, long truncation) {
  Coeffs out(static_cast<std::size_t>(truncation) + 1, Integer(0));
  for (const auto& t : part.terms) {
    const Coeffs c = expand_term(t, part.q, truncation);
    for (std::size_t r = 0; r < out.size(); ++r) out[r] += c[r];
  }
  return out;
}

std::vector<Integer> direct_lattice_sum(const Polynomial& f, const std::vector<long>& degrees, long q,
                                        long truncation) {
  Coeffs out(static_cast<std::size_t>(truncation) + 1, Integer(0));
  for_each_weighted(degrees, truncation, [&](const std::vector<long>& x, long used) {
    out[static_cast<std::size_t>(used)] += qpow(q, small_value(f, x));
  });
  return out;
}

PadicScalar evaluate_term(const MeroTerm& term, long q, const PadicScalar& t, long precision) {
  const long p = t.prime();
  // exact constants get ample precision; the result precision is tracked
  const long big = 4 * precision + 256 + 4 * std::abs(t.valuation_floor()) * (term.t_shift + 1);
  auto exact = [&](const Integer& x) { return PadicScalar::from_integer(p, x, big); };
  PadicScalar value = exact(term.multiplicity);
  if (term.t_shift > 0) value = value * t.pow(static_cast<unsigned long>(term.t_shift));
  for (const auto& a : term.atoms) {
    const PadicScalar den = exact(1) - exact(qpow(q, a.c)) * t.pow(static_cast<unsigned long>(a.d));
    value = value.divide_tracking(den);
  }
  if (term.is_rational()) return value * exact(qpow(q, nonnegative_integer(term.core.constant_term(), "exponent")));
  if (!term.numerator) throw Error(ErrorKind::InsufficientTruncation, "term is not materialized");
  const PadicScalar n = eval_entire(*term.numerator, t, precision);
  if (!term.denominator) return value * n;
  const PadicScalar g = eval_entire(*term.denominator, t, precision);
  return value * n.divide_tracking(g);
}

PadicScalar evaluate_meromorphic(const MeromorphicPart& part, const PadicScalar& t, long precision) {
  std::optional<PadicScalar> total;
  for (const auto& term : part.terms) {
    std::optional<PadicScalar> value;
    std::optional<Error> last;
    for (long extra = 0; extra <= 256 && !value; extra = extra == 0 ? 8 : 2 * extra) {
      try {
        PadicScalar v = evaluate_term(term, part.q, t, precision + extra);
        if (v.precision() >= precision) value = v;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::InsufficientTruncation && e.kind() != ErrorKind::InsufficientPrecision) throw;
        last = e;
        break;
      }
    }
    if (!value) {
      if (last) throw *last;
      throw Error(ErrorKind::InsufficientPrecision, "term " + term.describe() + " lost too much precision");
    }
    total = total ? *total + *value : *value;
  }
  if (!total) return PadicScalar::zero(t.prime(), precision);
  return total->reduce(precision);
}

PadicScalar evaluate_meromorphic_auto(MeromorphicPart part, const PadicScalar& t, long precision) {
  const long w = t.valuation_floor();
  std::optional<Error> last;
  for (long slack = 8; slack <= 256; slack *= 2) {
    const long target = precision + slack;
    long r = 1;
    for (const auto& term : part.terms) {
      if (term.is_rational()) continue;
      const TermBounds tb = term_bounds(term, part.e_q);
      r = std::max(r, tail_cutoff(tb.numerator, w, target));
      if (tb.denominator) r = std::max(r, tail_cutoff(*tb.denominator, w, target));
    }
    const long nw = target + r * std::max(0L, -w) + 8;
    for (auto& term : part.terms) materialize(term, part.q, part.p, r, nw);
    part.truncation = r;
    part.working_precision = nw;
    try {
      return evaluate_meromorphic(part, t, precision);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InsufficientTruncation && e.kind() != ErrorKind::InsufficientPrecision) throw;
      last = e;
    }
  }
  throw *last;
}

}  // namespace tzeta
