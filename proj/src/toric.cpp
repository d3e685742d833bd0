#include "tzeta/toric.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "tzeta/error.hpp"

namespace tzeta {

namespace {

std::string ray_str(const std::vector<long>& r) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
  os << ')';
  return os.str();
}

// 0 for angles in [0, pi), 1 for [pi, 2pi).
int half_plane(const std::vector<long>& v) { return (v[1] > 0 || (v[1] == 0 && v[0] > 0)) ? 0 : 1; }

long cross(const std::vector<long>& a, const std::vector<long>& b) { return a[0] * b[1] - a[1] * b[0]; }

void verify_planar_completeness(const Fan& fan) {
  std::vector<std::size_t> order(fan.rays.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& u = fan.rays[a];
    const auto& v = fan.rays[b];
    if (half_plane(u) != half_plane(v)) return half_plane(u) < half_plane(v);
    return cross(u, v) > 0;
  });
  if (order.size() < 3)
    throw Error(ErrorKind::InvalidFan, "incomplete fan: fewer than three rays cannot cover the plane");
  std::set<std::set<std::size_t>> consecutive;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::size_t a = order[i];
    const std::size_t b = order[(i + 1) % order.size()];
    if (cross(fan.rays[a], fan.rays[b]) <= 0)
      throw Error(ErrorKind::InvalidFan, "incomplete fan: angular gap of at least pi between rays " +
                                             ray_str(fan.rays[a]) + " and " + ray_str(fan.rays[b]));
    consecutive.insert({a, b});
  }
  if (fan.max_cones.empty()) return;
  std::set<std::set<std::size_t>> given;
  for (const auto& cone : fan.max_cones) given.insert(std::set<std::size_t>(cone.begin(), cone.end()));
  if (given != consecutive)
    throw Error(ErrorKind::InvalidFan, "max_cones do not match the angularly consecutive ray pairs");
}

struct Constraint {
  IntVector a;  // a . m >= beta
  Integer beta;

  friend bool operator<(const Constraint& x, const Constraint& y) {
    if (x.a != y.a) return x.a < y.a;
    return x.beta < y.beta;
  }
};

// Divides through by the content and rounds beta up; valid for integer points.
Constraint tighten(Constraint c) {
  Integer g = 0;
  for (const auto& x : c.a) g = gcd(g, x);
  if (g > 1) {
    for (auto& x : c.a) x /= g;
    Integer b;
    mpz_cdiv_q(b.get_mpz_t(), c.beta.get_mpz_t(), g.get_mpz_t());
    c.beta = b;
  }
  return c;
}

enum class RangeStatus { Empty, Bounded };

struct Range {
  RangeStatus status = RangeStatus::Empty;
  Integer lo, hi;
};

// Range of the first coordinate over the (integer-tightened) projection.
Range first_coordinate_range(const std::vector<Constraint>& system, std::size_t k) {
  std::set<Constraint> cur;
  for (const auto& c : system) cur.insert(tighten(c));
  for (std::size_t j = k; j-- > 1;) {
    std::vector<Constraint> pos, neg;
    std::set<Constraint> next;
    for (const auto& c : cur) {
      if (c.a[j] > 0) pos.push_back(c);
      else if (c.a[j] < 0) neg.push_back(c);
      else next.insert(c);
    }
    for (const auto& p : pos)
      for (const auto& n : neg) {
        const Integer wp = -n.a[j];
        const Integer wn = p.a[j];
        Constraint c;
        c.a.resize(k);
        for (std::size_t i = 0; i < k; ++i) c.a[i] = wp * p.a[i] + wn * n.a[i];
        c.beta = wp * p.beta + wn * n.beta;
        next.insert(tighten(std::move(c)));
      }
    cur = std::move(next);
  }
  bool has_lo = false, has_hi = false;
  Range r;
  for (const auto& c : cur) {
    const Integer& a0 = c.a[0];
    if (a0 == 0) {
      if (c.beta > 0) return r;  // 0 >= positive: empty
      continue;
    }
    Integer bound;
    if (a0 > 0) {
      mpz_cdiv_q(bound.get_mpz_t(), c.beta.get_mpz_t(), a0.get_mpz_t());
      if (!has_lo || bound > r.lo) r.lo = bound;
      has_lo = true;
    } else {
      mpz_fdiv_q(bound.get_mpz_t(), c.beta.get_mpz_t(), a0.get_mpz_t());
      if (!has_hi || bound < r.hi) r.hi = bound;
      has_hi = true;
    }
  }
  if (!has_lo || !has_hi) throw Error(ErrorKind::Unbounded, "unbounded polytope: coordinate range has no finite bound");
  r.status = r.lo <= r.hi ? RangeStatus::Bounded : RangeStatus::Empty;
  return r;
}

std::vector<Constraint> fix_first(const std::vector<Constraint>& system, const Integer& value) {
  std::vector<Constraint> out;
  out.reserve(system.size());
  for (const auto& c : system) {
    Constraint d;
    d.a.assign(c.a.begin() + 1, c.a.end());
    d.beta = c.beta - c.a[0] * value;
    out.push_back(std::move(d));
  }
  return out;
}

// Returns false when the visitor asked to stop.
bool walk(const std::vector<Constraint>& system, std::size_t k, IntVector& prefix,
          const std::function<bool(const IntVector&)>& visit) {
  if (k == 0) {
    for (const auto& c : system)
      if (c.beta > 0) return true;
    return visit(prefix);
  }
  const Range r = first_coordinate_range(system, k);
  if (r.status == RangeStatus::Empty) return true;
  for (Integer v = r.lo; v <= r.hi; ++v) {
    prefix.push_back(v);
    const bool go_on = walk(fix_first(system, v), k - 1, prefix, visit);
    prefix.pop_back();
    if (!go_on) return false;
  }
  return true;
}

Integer count_points(const std::vector<Constraint>& system, std::size_t k) {
  if (k == 0) {
    for (const auto& c : system)
      if (c.beta > 0) return 0;
    return 1;
  }
  const Range r = first_coordinate_range(system, k);
  if (r.status == RangeStatus::Empty) return 0;
  if (k == 1) return r.hi - r.lo + 1;
  Integer total = 0;
  for (Integer v = r.lo; v <= r.hi; ++v) total += count_points(fix_first(system, v), k - 1);
  return total;
}

std::vector<Constraint> to_system(const RationalPolytope& p) {
  if (p.ineq.rows() != p.rhs.size()) throw Error(ErrorKind::InvalidArgument, "polytope rhs length mismatch");
  std::vector<Constraint> system;
  for (std::size_t i = 0; i < p.ineq.rows(); ++i) system.push_back({p.ineq.row(i), -p.rhs[i]});
  return system;
}

IntVector add_classes(const FinAbGroupPresentation& g, const IntVector& a, const IntVector& b) {
  IntVector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  for (std::size_t k = 0; k < g.invariant_factors.size(); ++k) {
    Integer& r = c[g.rank + k];
    mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), g.invariant_factors[k].get_mpz_t());
  }
  return c;
}

}  // namespace

Fan validate_fan(Fan fan) {
  if (fan.dim == 0) throw Error(ErrorKind::InvalidFan, "fan dimension must be positive");
  if (fan.rays.empty()) throw Error(ErrorKind::InvalidFan, "fan has no rays");
  for (std::size_t i = 0; i < fan.rays.size(); ++i) {
    const auto& r = fan.rays[i];
    if (r.size() != fan.dim)
      throw Error(ErrorKind::InvalidFan, "ray " + std::to_string(i) + " has wrong length");
    long g = 0;
    for (long x : r) g = std::gcd(g, x);
    if (g != 1) throw Error(ErrorKind::InvalidFan, "non-primitive ray " + std::to_string(i) + " " + ray_str(r));
    for (std::size_t j = 0; j < i; ++j)
      if (fan.rays[j] == r)
        throw Error(ErrorKind::InvalidFan, "duplicate ray " + std::to_string(i) + " " + ray_str(r));
  }
  for (const auto& cone : fan.max_cones)
    for (std::size_t idx : cone)
      if (idx >= fan.rays.size()) throw Error(ErrorKind::InvalidFan, "max cone references unknown ray");

  fan.completeness_verified = false;
  if (!fan.complete) throw Error(ErrorKind::InvalidFan, "fan is not flagged complete");
  if (fan.dim == 1) {
    const bool pos = std::any_of(fan.rays.begin(), fan.rays.end(), [](const auto& r) { return r[0] > 0; });
    const bool neg = std::any_of(fan.rays.begin(), fan.rays.end(), [](const auto& r) { return r[0] < 0; });
    if (!pos || !neg) throw Error(ErrorKind::InvalidFan, "incomplete fan: a half-line is uncovered");
    fan.completeness_verified = true;
  } else if (fan.dim == 2) {
    verify_planar_completeness(fan);
    fan.completeness_verified = true;
  }
  return fan;
}

IntMatrix ray_matrix(const Fan& fan) { return IntMatrix::from_rows(fan.rays, fan.dim); }

FinAbGroupPresentation divisor_class_group(const Fan& fan) { return cokernel(ray_matrix(fan)); }

RationalPolytope polytope_of_divisor(const Fan& fan, const TorusDivisor& d) {
  if (d.coeffs.size() != fan.rays.size())
    throw Error(ErrorKind::InvalidArgument, "divisor length does not match the ray count");
  return {ray_matrix(fan), d.coeffs};
}

Integer count_lattice_points(const RationalPolytope& p) { return count_points(to_system(p), p.ineq.cols()); }

void for_each_lattice_point(const RationalPolytope& p, const std::function<bool(const IntVector&)>& visit) {
  IntVector prefix;
  walk(to_system(p), p.ineq.cols(), prefix, visit);
}

std::optional<IntVector> first_lattice_point(const RationalPolytope& p) {
  std::optional<IntVector> found;
  for_each_lattice_point(p, [&](const IntVector& m) {
    found = m;
    return false;
  });
  return found;
}

Integer sections_dim(const Fan& fan, const TorusDivisor& d) {
  return count_lattice_points(polytope_of_divisor(fan, d));
}

TorusDivisor principal_divisor(const Fan& fan, std::span<const Integer> m) {
  return {ray_matrix(fan) * m};
}

long class_degree(const ToricVarietyModel& model, std::span<const Integer> class_coords) {
  Integer deg = 0;
  for (std::size_t i = 0; i < model.grading.size(); ++i) deg += model.grading[i] * class_coords[i];
  if (!deg.fits_slong_p()) throw Error(ErrorKind::InvalidArgument, "class degree overflows");
  return deg.get_si();
}

ToricVarietyModel make_model(const Fan& fan, const IntVector& grading) {
  ToricVarietyModel model;
  model.fan = validate_fan(fan);
  model.class_group = divisor_class_group(model.fan);
  if (grading.size() != model.class_group.rank)
    throw Error(ErrorKind::InvalidArgument, "grading has " + std::to_string(grading.size()) +
                                                " entries but the class group has rank " +
                                                std::to_string(model.class_group.rank));
  model.grading = grading;
  (void)effective_generators(model);  // rejects nonpositive gradings
  return model;
}

std::vector<EffectiveClass> effective_generators(const ToricVarietyModel& model) {
  std::vector<EffectiveClass> gens;
  const std::size_t n = model.fan.rays.size();
  for (std::size_t i = 0; i < n; ++i) {
    IntVector coords = model.class_group.classify_unit(i);
    const long deg = class_degree(model, coords);
    if (deg <= 0)
      throw Error(ErrorKind::InvalidArgument, "grading is not positive on the class of ray " + std::to_string(i));
    if (std::any_of(gens.begin(), gens.end(), [&](const EffectiveClass& g) { return g.class_coords == coords; }))
      continue;
    IntVector rep(n, Integer(0));
    rep[i] = 1;
    gens.push_back({std::move(coords), std::move(rep), deg});
  }
  return gens;
}

namespace {

using Level = std::map<IntVector, IntVector>;  // class coords -> representative

std::vector<Level> graded_closure(const ToricVarietyModel& model, const std::vector<EffectiveClass>& gens,
                                  long max_degree) {
  const std::size_t n = model.fan.rays.size();
  const std::size_t width = model.class_group.projection.rows();
  std::vector<Level> levels(static_cast<std::size_t>(max_degree) + 1);
  levels[0].emplace(IntVector(width, Integer(0)), IntVector(n, Integer(0)));
  for (long d = 1; d <= max_degree; ++d) {
    Level& cur = levels[static_cast<std::size_t>(d)];
    for (const auto& g : gens) {
      if (g.degree > d) continue;
      for (const auto& [coords, rep] : levels[static_cast<std::size_t>(d - g.degree)]) {
        IntVector c = add_classes(model.class_group, coords, g.class_coords);
        if (cur.count(c)) continue;
        IntVector r = rep;
        for (std::size_t i = 0; i < n; ++i) r[i] += g.representative[i];
        cur.emplace(std::move(c), std::move(r));
      }
    }
  }
  return levels;
}

}  // namespace

std::vector<EffectiveClass> minimal_generators(const ToricVarietyModel& model) {
  const auto gens = effective_generators(model);
  std::vector<EffectiveClass> minimal;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    std::vector<EffectiveClass> others;
    for (std::size_t j = 0; j < gens.size(); ++j)
      if (j != i) others.push_back(gens[j]);
    const auto levels = graded_closure(model, others, gens[i].degree);
    if (!levels[static_cast<std::size_t>(gens[i].degree)].count(gens[i].class_coords)) minimal.push_back(gens[i]);
  }
  return minimal;
}

std::vector<std::vector<EffectiveClass>> enumerate_effective_classes_upto(const ToricVarietyModel& model,
                                                                          long max_degree) {
  if (max_degree < 0) throw Error(ErrorKind::InvalidArgument, "degree must be nonnegative");
  const auto levels = graded_closure(model, effective_generators(model), max_degree);
  std::vector<std::vector<EffectiveClass>> out(levels.size());
  for (std::size_t d = 0; d < levels.size(); ++d)
    for (const auto& [coords, rep] : levels[d]) out[d].push_back({coords, rep, static_cast<long>(d)});
  return out;
}

std::vector<EffectiveClass> enumerate_effective_classes(const ToricVarietyModel& model, long degree) {
  return enumerate_effective_classes_upto(model, degree).back();
}

std::optional<IntVector> lift_to_effective(const ToricVarietyModel& model, std::span<const Integer> class_coords) {
  const auto& g = model.class_group;
  const std::size_t n = g.ambient_dim;
  const std::size_t t = g.invariant_factors.size();
  if (class_coords.size() != g.rank + t) throw Error(ErrorKind::InvalidArgument, "class coordinate length mismatch");
  // Torsion coordinates are congruences: append one slack column per factor.
  IntMatrix a(g.rank + t, n + t);
  for (std::size_t i = 0; i < g.rank + t; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = g.projection(i, j);
  for (std::size_t k = 0; k < t; ++k) a(g.rank + k, n + k) = g.invariant_factors[k];
  const auto sol = solve_preimage(a, class_coords);
  if (!sol) return std::nullopt;
  IntVector x(sol->begin(), sol->begin() + static_cast<std::ptrdiff_t>(n));
  // A nonnegative representative x + div(m) exists iff P_x has a lattice point m.
  const auto m = first_lattice_point(polytope_of_divisor(model.fan, {x}));
  if (!m) return std::nullopt;
  const TorusDivisor shift = principal_divisor(model.fan, *m);
  for (std::size_t i = 0; i < n; ++i) x[i] += shift.coeffs[i];
  return x;
}

BuiltinVariety builtin_variety(std::string_view name) {
  BuiltinVariety v;
  v.name = std::string(name);
  Fan& f = v.fan;
  f.complete = true;
  if (name == "p1") {
    f.dim = 1;
    f.rays = {{1}, {-1}};
    f.max_cones = {{0}, {1}};
    v.grading = {1};
  } else if (name == "p2") {
    f.dim = 2;
    f.rays = {{1, 0}, {0, 1}, {-1, -1}};
    f.max_cones = {{0, 1}, {1, 2}, {2, 0}};
    v.grading = {1};
  } else if (name == "p1xp1") {
    f.dim = 2;
    f.rays = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    f.max_cones = {{0, 2}, {2, 1}, {1, 3}, {3, 0}};
    v.grading = {1, 1};
  } else if (name == "wp112") {
    f.dim = 2;
    f.rays = {{1, 0}, {0, 1}, {-1, -2}};
    f.max_cones = {{0, 1}, {1, 2}, {2, 0}};
    v.grading = {1};
  } else if (name.starts_with("hirzebruch:")) {
    long a = 0;
    try {
      std::size_t used = 0;
      const std::string arg(name.substr(11));
      a = std::stol(arg, &used);
      if (used != arg.size() || a < 0) throw std::invalid_argument("bad");
    } catch (const std::exception&) {
      throw Error(ErrorKind::Parse, "hirzebruch:a needs a nonnegative integer a");
    }
    f.dim = 2;
    f.rays = {{1, 0}, {0, 1}, {-1, a}, {0, -1}};
    f.max_cones = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
    v.grading = {1, 1};
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown builtin variety '" + std::string(name) + "'");
  }
  return v;
}

}  // namespace tzeta
