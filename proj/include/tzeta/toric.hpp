#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tzeta/int_matrix.hpp"

namespace tzeta {

/// Complete fan in N = Z^dim. Rays are primitive generators; max_cones hold ray
/// indices.
struct Fan {
  std::size_t dim = 0;
  std::vector<std::vector<long>> rays;
  std::vector<std::vector<std::size_t>> max_cones;
  bool complete = true;
  // Set by validate_fan: completeness was checked geometrically (dim <= 2)
  // rather than taken from the complete flag.
  bool completeness_verified = false;

  friend bool operator==(const Fan&, const Fan&) = default;
};

/// T-invariant divisor sum_rho b_rho D_rho, indexed like Fan::rays.
struct TorusDivisor {
  IntVector coeffs;
};

/// { m in R^dim : ineq * m >= -rhs }.
struct RationalPolytope {
  IntMatrix ineq;
  IntVector rhs;
};

struct ToricVarietyModel {
  Fan fan;
  FinAbGroupPresentation class_group;
  IntVector grading;  // weights on the free class coordinates
};

struct EffectiveClass {
  IntVector class_coords;
  IntVector representative;  // nonnegative ray coefficients
  long degree = 0;

  friend bool operator==(const EffectiveClass&, const EffectiveClass&) = default;
};

Fan validate_fan(Fan fan);
IntMatrix ray_matrix(const Fan& fan);

FinAbGroupPresentation divisor_class_group(const Fan& fan);

RationalPolytope polytope_of_divisor(const Fan& fan, const TorusDivisor& d);

/// Exact integer point count. Bounds for each coordinate come from
/// Fourier-Motzkin projection of the remaining system; a missing bound means
/// the polytope is unbounded.
Integer count_lattice_points(const RationalPolytope& p);
/// Visits points in lexicographic order; the visitor returns false to stop.
void for_each_lattice_point(const RationalPolytope& p, const std::function<bool(const IntVector&)>& visit);
std::optional<IntVector> first_lattice_point(const RationalPolytope& p);

/// l(D) = #(P_D cap M).
Integer sections_dim(const Fan& fan, const TorusDivisor& d);

/// Divisor of the character m: coefficients <m, v_rho>.
TorusDivisor principal_divisor(const Fan& fan, std::span<const Integer> m);

ToricVarietyModel make_model(const Fan& fan, const IntVector& grading);
long class_degree(const ToricVarietyModel& model, std::span<const Integer> class_coords);

std::vector<EffectiveClass> effective_generators(const ToricVarietyModel& model);
/// Generators that are not sums of the others.
std::vector<EffectiveClass> minimal_generators(const ToricVarietyModel& model);

std::vector<EffectiveClass> enumerate_effective_classes(const ToricVarietyModel& model, long degree);
/// result[d] holds every effective class of degree d, for d = 0..max_degree.
std::vector<std::vector<EffectiveClass>> enumerate_effective_classes_upto(const ToricVarietyModel& model,
                                                                          long max_degree);

/// Nonnegative representative of a class, or nullopt when the class is not
/// effective.
std::optional<IntVector> lift_to_effective(const ToricVarietyModel& model, std::span<const Integer> class_coords);

struct BuiltinVariety {
  std::string name;
  Fan fan;
  IntVector grading;
};

/// p1, p2, p1xp1, hirzebruch:a, wp112.
BuiltinVariety builtin_variety(std::string_view name);

}  // namespace tzeta
