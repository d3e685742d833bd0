#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tzeta/ehrhart.hpp"
#include "tzeta/mero.hpp"
#include "tzeta/toric.hpp"

namespace tzeta {

struct ZetaTruncation {
  long q = 2;
  std::vector<Integer> coeffs;  // M_0..M_Dmax
};

/// M_d = sum over effective classes of degree d of (q^l - 1) / (q - 1).
ZetaTruncation zeta_coefficients(const ToricVarietyModel& model, long q, long dmax);

/// E(T) = sum over effective classes q^{l(class)} T^{deg}, so that
/// Z = (E - H) / (q - 1) with H the class count series.
std::vector<Integer> section_power_series(const ToricVarietyModel& model, long q, long dmax);

/// CSV rows "d,M_d,ord_p M_d".
std::string zeta_csv(const ZetaTruncation& z, long p);

/// sum_d #classes(d) T^d = numerator / prod_i (1 - T^{generator_degrees[i]})
struct ClassCountSeries {
  std::vector<long> generator_degrees;  // minimal generators
  std::vector<Integer> counts;          // #classes of degree d, d <= Dmax
  std::vector<Integer> numerator;       // trimmed polynomial
};

ClassCountSeries class_count_series(const ToricVarietyModel& model, long dmax);

struct PoleReport {
  long order = 0;  // rho, rank of the class group
  long precision = 0;
  long d0 = 0;     // last index where (1-T)^rho Z has valuation < N
  long dmax = 0;
  std::vector<Integer> leading;     // coefficients of (1-T)^rho Z
  std::vector<Integer> subleading;  // coefficients of (1-T)^(rho-1) Z
  std::vector<long> leading_valuations;     // capped at N
  std::vector<long> subleading_valuations;  // capped at N
  bool subleading_bounded = false;  // every tail valuation < N, some equal to 0
  PadicScalar special_value;        // lim (1-T)^rho Z mod p^N
  PadicScalar entire_value;         // E(1) mod p^N
  bool entire_value_certified = false;

  [[nodiscard]] std::string str() const;
};

PoleReport pole_analysis(const ToricVarietyModel& model, long q, long p, long dmax, long precision);

/// Z_E = sum_n q^{l(E + n.D)} T^{deg E + n.deg D}, realized as decomposed
/// terms of its quasi-polynomial exponent.
struct ClassSeriesPiece {
  IntVector base_class;
  long base_degree = 0;
  MultivariateQuasiPolynomial exponent;
  std::vector<MeroTerm> terms;
};

struct ClassSeriesDecomposition {
  std::vector<EffectiveClass> directions;  // D_1..D_rho
  std::vector<ClassSeriesPiece> pieces;
  ClassCountSeries class_counts;
  MeromorphicPart part;  // all terms of all pieces, materialized
};

ClassSeriesDecomposition decompose_class_series(const ToricVarietyModel& model, long q, long p, long dmax, long precision);

}  // namespace tzeta
