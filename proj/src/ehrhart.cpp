#include "tzeta/ehrhart.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "tzeta/error.hpp"

namespace tzeta {

namespace {

long mod_floor(long n, long p) {
  const long r = n % p;
  return r < 0 ? r + p : r;
}

Rational horner(const std::vector<Rational>& c, const Rational& x) {
  Rational acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

void trim(std::vector<Rational>& c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

std::string point_str(std::span<const long> n) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < n.size(); ++i) os << (i ? "," : "") << n[i];
  os << ')';
  return os.str();
}

// Univariate polynomial through (x_k, y_k); nodes must be distinct.
std::vector<Rational> interpolate(const std::vector<long>& xs, const std::vector<Rational>& ys) {
  std::vector<std::vector<Rational>> a;
  for (long x : xs) {
    std::vector<Rational> row;
    Rational pw = 1;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      row.push_back(pw);
      pw *= x;
    }
    a.push_back(std::move(row));
  }
  auto sol = solve_exact(std::move(a), ys);
  if (!sol) throw Error(ErrorKind::InconsistentSamples, "interpolation nodes are not distinct");
  return *sol;
}

}  // namespace

int QuasiPolynomial::degree() const {
  int d = -1;
  for (const auto& c : components) d = std::max(d, static_cast<int>(c.size()) - 1);
  return d;
}

Rational QuasiPolynomial::evaluate(long n) const {
  return horner(components.at(static_cast<std::size_t>(mod_floor(n, period))), Rational(n));
}

std::string QuasiPolynomial::to_json() const {
  nlohmann::json j;
  j["period"] = period;
  j["components"] = nlohmann::json::array();
  for (const auto& c : components) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& x : c) row.push_back(rational_str(x));
    j["components"].push_back(row);
  }
  return j.dump();
}

QuasiPolynomial QuasiPolynomial::from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    QuasiPolynomial qp;
    qp.period = j.at("period").get<long>();
    for (const auto& row : j.at("components")) {
      std::vector<Rational> c;
      for (const auto& x : row) c.push_back(parse_rational(x.get<std::string>()));
      qp.components.push_back(std::move(c));
    }
    if (qp.period <= 0 || qp.components.size() != static_cast<std::size_t>(qp.period))
      throw Error(ErrorKind::Parse, "quasi-polynomial period does not match its component count");
    return qp;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("bad quasi-polynomial json: ") + e.what());
  }
}

int MultivariateQuasiPolynomial::degree() const {
  int d = -1;
  for (const auto& [res, p] : components) d = std::max(d, p.total_degree());
  return d;
}

Rational MultivariateQuasiPolynomial::evaluate(std::span<const long> n) const {
  if (n.size() != r) throw Error(ErrorKind::InvalidArgument, "evaluation point has the wrong length");
  std::vector<long> res(r);
  for (std::size_t i = 0; i < r; ++i) res[i] = mod_floor(n[i], periods[i]);
  return components.at(res).evaluate(n);
}

std::optional<std::vector<Rational>> solve_exact(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t m = a.size();
  const std::size_t n = m == 0 ? 0 : a[0].size();
  std::size_t row = 0;
  std::vector<std::size_t> pivots;
  for (std::size_t col = 0; col < n && row < m; ++col) {
    std::size_t p = row;
    while (p < m && a[p][col] == 0) ++p;
    if (p == m) continue;
    std::swap(a[p], a[row]);
    std::swap(b[p], b[row]);
    for (std::size_t i = 0; i < m; ++i) {
      if (i == row || a[i][col] == 0) continue;
      const Rational f = a[i][col] / a[row][col];
      for (std::size_t j = col; j < n; ++j) a[i][j] -= f * a[row][j];
      b[i] -= f * b[row];
    }
    pivots.push_back(col);
    ++row;
  }
  if (pivots.size() < n) throw Error(ErrorKind::InsufficientSamples, "linear system is underdetermined");
  for (std::size_t i = row; i < m; ++i)
    if (b[i] != 0) return std::nullopt;
  std::vector<Rational> x(n);
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = b[i] / a[i][pivots[i]];
  return x;
}

QuasiPolynomial fit_quasi_polynomial(const std::map<long, Rational>& samples, long period, int degree_bound) {
  if (period <= 0) throw Error(ErrorKind::InvalidArgument, "period must be positive");
  if (degree_bound < 0) throw Error(ErrorKind::InvalidArgument, "degree bound must be nonnegative");
  QuasiPolynomial qp;
  qp.period = period;
  for (long res = 0; res < period; ++res) {
    std::vector<std::vector<Rational>> a;
    std::vector<Rational> b;
    for (const auto& [n, v] : samples) {
      if (mod_floor(n, period) != res) continue;
      std::vector<Rational> row;
      Rational pw = 1;
      for (int j = 0; j <= degree_bound; ++j) {
        row.push_back(pw);
        pw *= n;
      }
      a.push_back(std::move(row));
      b.push_back(v);
    }
    if (a.size() < static_cast<std::size_t>(degree_bound) + 1)
      throw Error(ErrorKind::InsufficientSamples, "residue class " + std::to_string(res) + " has " +
                                                      std::to_string(a.size()) + " samples, need " +
                                                      std::to_string(degree_bound + 1));
    auto sol = solve_exact(std::move(a), std::move(b));
    if (!sol)
      throw Error(ErrorKind::InconsistentSamples, "samples in residue class " + std::to_string(res) +
                                                      " fit no polynomial of degree <= " +
                                                      std::to_string(degree_bound));
    trim(*sol);
    qp.components.push_back(std::move(*sol));
  }
  return qp;
}

QuasiPolynomial search_quasi_polynomial(const std::function<Rational(long)>& f, int degree_bound, long max_period,
                                        long validate_upto) {
  std::map<long, Rational> cache;
  auto value = [&](long n) -> const Rational& {
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, f(n)).first;
    return it->second;
  };
  for (long p = 1; p <= max_period; ++p) {
    // One spare sample per residue makes the system overdetermined.
    const long count = p * (degree_bound + 2);
    std::map<long, Rational> samples;
    for (long n = 0; n < count; ++n) samples.emplace(n, value(n));
    QuasiPolynomial qp;
    try {
      qp = fit_quasi_polynomial(samples, p, degree_bound);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::InconsistentSamples) continue;
      throw;
    }
    bool ok = true;
    for (long n = count; n <= std::max(validate_upto, count) && ok; ++n) ok = qp.evaluate(n) == value(n);
    if (ok) return qp;
  }
  throw Error(ErrorKind::ValidationFailed,
              "no period up to " + std::to_string(max_period) + " fits with degree <= " + std::to_string(degree_bound));
}

namespace {

struct TensorFit {
  const Sampler& sampler;
  std::size_t r;
  // nodes[i]: sample abscissae for variable i
  std::vector<std::vector<long>> nodes;

  // Polynomial in the first m variables (padded to r) interpolating g on the node grid.
  Polynomial fit(std::size_t m, const std::function<Rational(const std::vector<long>&)>& g) const {
    if (m == 0) return Polynomial::constant(r, g({}));
    const std::size_t var = m - 1;
    std::map<std::vector<long>, std::vector<Rational>> coeffs;
    auto coeff_of = [&](const std::vector<long>& prefix) -> const std::vector<Rational>& {
      auto it = coeffs.find(prefix);
      if (it != coeffs.end()) return it->second;
      std::vector<Rational> ys;
      std::vector<long> point = prefix;
      point.push_back(0);
      for (long x : nodes[var]) {
        point.back() = x;
        ys.push_back(g(point));
      }
      return coeffs.emplace(prefix, interpolate(nodes[var], ys)).first->second;
    };
    Polynomial out(r);
    for (std::size_t j = 0; j < nodes[var].size(); ++j) {
      Polynomial cj = fit(var, [&](const std::vector<long>& prefix) { return coeff_of(prefix)[j]; });
      Exponent e(r, 0);
      e[var] = static_cast<int>(j);
      out += cj * Polynomial::monomial(e, Rational(1));
    }
    return out;
  }
};

void for_each_grid_point(const std::vector<long>& lo, const std::vector<long>& hi,
                         const std::function<void(const std::vector<long>&)>& visit) {
  std::vector<long> p = lo;
  if (p.empty()) {
    visit(p);
    return;
  }
  while (true) {
    visit(p);
    std::size_t i = 0;
    while (i < p.size() && p[i] == hi[i]) {
      p[i] = lo[i];
      ++i;
    }
    if (i == p.size()) return;
    ++p[i];
  }
}

MultivariateQuasiPolynomial fit_at_threshold(const Sampler& sampler, std::size_t r,
                                             const MultivariateFitOptions& opt, long threshold) {
  MultivariateQuasiPolynomial qp;
  qp.r = r;
  qp.periods = opt.periods;
  qp.threshold = threshold;
  std::vector<long> zero(r, 0), top(r);
  for (std::size_t i = 0; i < r; ++i) top[i] = opt.periods[i] - 1;
  for_each_grid_point(zero, top, [&](const std::vector<long>& res) {
    TensorFit tf{sampler, r, {}};
    for (std::size_t i = 0; i < r; ++i) {
      const long base = threshold + mod_floor(res[i] - threshold, opt.periods[i]);
      std::vector<long> xs;
      for (int j = 0; j <= opt.degree_bounds[i]; ++j) xs.push_back(base + opt.periods[i] * j);
      tf.nodes.push_back(std::move(xs));
    }
    Polynomial p = tf.fit(r, [&](const std::vector<long>& n) { return sampler(n); });
    qp.components.emplace(res, std::move(p));
  });
  return qp;
}

}  // namespace

MultivariateQuasiPolynomial fit_multivariate_qp(const Sampler& sampler, std::size_t r,
                                                const MultivariateFitOptions& opt) {
  if (r == 0) throw Error(ErrorKind::InvalidArgument, "need at least one variable");
  if (opt.periods.size() != r || opt.degree_bounds.size() != r)
    throw Error(ErrorKind::InvalidArgument, "periods and degree bounds need one entry per variable");
  for (std::size_t i = 0; i < r; ++i)
    if (opt.periods[i] <= 0 || opt.degree_bounds[i] < 0)
      throw Error(ErrorKind::InvalidArgument, "periods must be positive and degree bounds nonnegative");

  long extent = opt.holdout_extent;
  if (extent <= 0) {
    extent = 8;
    for (std::size_t i = 0; i < r; ++i) extent = std::max(extent, 2 * opt.periods[i] * (opt.degree_bounds[i] + 2));
  }

  std::vector<long> thresholds;
  if (opt.threshold) {
    thresholds.push_back(*opt.threshold);
  } else {
    thresholds.push_back(0);
    for (long t = 1; t <= opt.max_threshold; t *= 2) thresholds.push_back(t);
  }

  std::string last_witness;
  for (long threshold : thresholds) {
    auto qp = fit_at_threshold(sampler, r, opt, threshold);
    std::vector<std::vector<long>> grid;
    for_each_grid_point(std::vector<long>(r, threshold), std::vector<long>(r, threshold + extent),
                        [&](const std::vector<long>& p) { grid.push_back(p); });
    const QpReport report = validate_qp(qp, sampler, grid);
    if (report.pass()) return qp;
    last_witness = point_str(report.mismatches.front());
  }
  throw Error(ErrorKind::ValidationFailed, "held-out validation failed at " + last_witness +
                                               "; periods, degree bounds or threshold are too small");
}

QpReport validate_qp(const QuasiPolynomial& qp, const std::function<Rational(long)>& f, std::span<const long> grid) {
  QpReport report;
  for (long n : grid)
    if (qp.evaluate(n) != f(n)) report.mismatches.push_back({n});
  return report;
}

QpReport validate_qp(const MultivariateQuasiPolynomial& qp, const Sampler& f,
                     const std::vector<std::vector<long>>& grid) {
  QpReport report;
  for (const auto& n : grid)
    if (qp.evaluate(n) != f(n)) report.mismatches.push_back(n);
  return report;
}

Sampler section_sampler(const Fan& fan, const TorusDivisor& base, const std::vector<TorusDivisor>& directions) {
  for (const auto& d : directions)
    if (d.coeffs.size() != base.coeffs.size())
      throw Error(ErrorKind::InvalidArgument, "direction divisor length mismatch");
  return [fan, base, directions](std::span<const long> n) -> Rational {
    if (n.size() != directions.size()) throw Error(ErrorKind::InvalidArgument, "sample point length mismatch");
    TorusDivisor d = base;
    for (std::size_t k = 0; k < directions.size(); ++k)
      for (std::size_t i = 0; i < d.coeffs.size(); ++i) d.coeffs[i] += n[k] * directions[k].coeffs[i];
    return Rational(sections_dim(fan, d));
  };
}

QuasiPolynomial fit_toric_family(const Fan& fan, const TorusDivisor& base, const TorusDivisor& direction,
                                 long max_period, long validate_upto) {
  const Sampler s = section_sampler(fan, base, {direction});
  auto f = [&](long n) {
    const long pt[1] = {n};
    return s(pt);
  };
  QuasiPolynomial qp = search_quasi_polynomial(f, static_cast<int>(fan.dim), max_period, validate_upto);
  const int deg = qp.degree();
  if (deg < 1 || deg > static_cast<int>(fan.dim))
    throw Error(ErrorKind::ValidationFailed,
                "fitted degree " + std::to_string(deg) + " outside [1, " + std::to_string(fan.dim) + "]");
  return qp;
}

}  // namespace tzeta
