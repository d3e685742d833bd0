#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tzeta/polynomial.hpp"
#include "tzeta/series.hpp"

namespace tzeta {

/// Polynomial whose forward differences were checked nonnegative on [0, B]^n,
/// and which is integer valued there with f(0) >= 0.
struct IncreasingPolynomial {
  Polynomial f;
  long grid_bound = 0;
};

IncreasingPolynomial check_increasing(const Polynomial& f, long grid_bound = 10);

/// Ordered set partition (B_1, ..., B_r) of {0..n-1}: the cone of points that
/// are constant on each block with x_{B_1} >= ... >= x_{B_r} >= 0.
struct ConeTerm {
  std::vector<std::vector<std::size_t>> blocks;
  int coefficient = 0;

  [[nodiscard]] bool contains(const std::vector<long>& x) const;
};

std::vector<ConeTerm> cone_decomposition(std::size_t n);
/// Checks sum_H c_H 1_H = 1 at every point of [0, box]^n.
bool verify_cone_decomposition(const std::vector<ConeTerm>& terms, std::size_t n, long box);

/// f with x_i = k_j + ... + k_r for i in B_j; result has r variables.
Polynomial triangular_substitute(const Polynomial& f, const ConeTerm& h);
/// T-degree weights of k_1..k_r: cumulative block degree sums.
std::vector<long> cone_weights(const ConeTerm& h, const std::vector<long>& degrees);

/// 1 / (1 - q^c T^d)
struct DenominatorAtom {
  long c = 0;
  long d = 1;
  friend bool operator==(const DenominatorAtom&, const DenominatorAtom&) = default;
};

/// 1 / (1 - q^{v(k)} T^d) inside the core sum.
struct VaryingDenominator {
  Polynomial v;
  long d = 1;
};

/// multiplicity * T^t_shift * prod atoms *
///   sum_{k >= 0} q^{core(k)} T^{weights . k} / prod_j (1 - q^{v_j(k)} T^{d_j})
/// With no variables left the sum is the single value q^{core}.
struct MeroTerm {
  Integer multiplicity = 1;
  long t_shift = 0;
  std::vector<DenominatorAtom> atoms;
  Polynomial core;
  std::vector<long> weights;
  std::vector<VaryingDenominator> dens;

  // Materialized entire parts. Without dens only `numerator` is set and holds
  // the core series itself.
  std::optional<CertifiedSeries> numerator;
  std::optional<CertifiedSeries> denominator;
  long denominator_factors = 0;  // factors of G that are not 1 mod p^N_w

  [[nodiscard]] bool is_rational() const { return core.nvars() == 0; }
  [[nodiscard]] std::string describe() const;
};

struct MeroOptions {
  long q = 2;
  long p = 2;
  long truncation = 20;  // R
  long precision = 8;    // N
  long threshold_cap = 1L << 12;
};

struct MeromorphicPart {
  long q = 2;
  long p = 2;
  long e_q = 1;  // ord_p q
  long truncation = 0;
  long working_precision = 0;  // N_w used for the entire parts
  std::vector<MeroTerm> terms;
};

/// Decomposes sum_{x >= 0} q^{f(x)} T^{degrees . x} into terms whose entire
/// parts carry Newton polygon bounds, then materializes them to T^R.
MeromorphicPart reduce_to_mero_parts(const IncreasingPolynomial& f, const std::vector<long>& degrees,
                                     const MeroOptions& options);

/// Same, starting from a core that already carries a T shift (used for
/// quasi-polynomial pieces).
std::vector<MeroTerm> decompose(const Polynomial& f, const std::vector<long>& degrees, long t_shift,
                                long threshold_cap);

/// Fills numerator/denominator to T^R mod p^{N_w}, N_w >= precision, large
/// enough that every stored coefficient is exact up to the emitted bound.
void materialize(MeroTerm& term, long q, long p, long truncation, long precision);

/// Exact T-expansion of a term through T^R from its symbolic form.
std::vector<Integer> expand_term(const MeroTerm& term, long q, long truncation);
std::vector<Integer> expand_part(const MeromorphicPart& part, long truncation);

/// sum_{x >= 0, d.x <= R} q^{f(x)} T^{d.x}
std::vector<Integer> direct_lattice_sum(const Polynomial& f, const std::vector<long>& degrees, long q, long truncation);

PadicScalar evaluate_term(const MeroTerm& term, long q, const PadicScalar& t, long precision);
PadicScalar evaluate_meromorphic(const MeromorphicPart& part, const PadicScalar& t, long precision);
/// Re-materializes with growing truncation and working precision until the
/// value is certified mod p^N.
PadicScalar evaluate_meromorphic_auto(MeromorphicPart part, const PadicScalar& t, long precision);

}  // namespace tzeta
