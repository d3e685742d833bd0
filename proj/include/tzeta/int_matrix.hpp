#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace tzeta {

using Integer = mpz_class;
using IntVector = std::vector<Integer>;

/// Dense row-major matrix of arbitrary-precision integers.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<std::vector<long>>& rows, std::size_t cols);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  [[nodiscard]] IntVector row(std::size_t r) const;
  [[nodiscard]] IntVector column(std::size_t c) const;
  [[nodiscard]] IntMatrix transpose() const;

  void swap_rows(std::size_t a, std::size_t b);
  void swap_cols(std::size_t a, std::size_t b);
  // row[dst] += factor * row[src]
  void add_row_multiple(std::size_t dst, std::size_t src, const Integer& factor);
  void add_col_multiple(std::size_t dst, std::size_t src, const Integer& factor);
  void negate_row(std::size_t r);

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend IntVector operator*(const IntMatrix& a, std::span<const Integer> x);
  friend bool operator==(const IntMatrix& a, const IntMatrix& b) = default;

  [[nodiscard]] std::string str() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

/// Determinant by fraction-free (Bareiss) elimination; square matrices only.
Integer determinant(const IntMatrix& a);

struct SnfDecomposition {
  IntMatrix U;  // unimodular, rows x rows
  IntMatrix S;  // diagonal, s_1 | s_2 | ...
  IntMatrix V;  // unimodular, cols x cols

  [[nodiscard]] IntVector diagonal() const;
  [[nodiscard]] std::size_t rank() const;
};

/// U*A*V = S. Pivot: smallest nonzero |a_ij| in the active block, ties broken
/// by row-major position.
SnfDecomposition smith_normal_form(const IntMatrix& a);

/// Z^rank (+) Z/f_1 (+) ... presented as the cokernel of a map into Z^ambient_dim.
struct FinAbGroupPresentation {
  std::size_t rank = 0;
  IntVector invariant_factors;  // each > 1
  std::size_t ambient_dim = 0;
  // (rank + #factors) x ambient_dim; free rows first, then torsion rows.
  IntMatrix projection;

  [[nodiscard]] Integer torsion_order() const;
  /// Canonical coordinates: free part, then torsion residues in [0, f_i).
  [[nodiscard]] IntVector classify(std::span<const Integer> ambient) const;
  [[nodiscard]] IntVector classify_unit(std::size_t index) const;
};

/// Cokernel of A : Z^cols -> Z^rows. The free rows of the projection are in
/// Hermite normal form, which makes the free coordinates independent of the
/// elimination path.
FinAbGroupPresentation cokernel(const IntMatrix& a);

/// Some x with A*x = t, or nullopt if t is not in the image lattice.
std::optional<IntVector> solve_preimage(const IntMatrix& a, std::span<const Integer> t);

/// Row-style Hermite normal form of the lattice spanned by the rows (zero rows
/// dropped): positive pivots, entries above each pivot reduced into [0, pivot).
IntMatrix hermite_rows(const IntMatrix& a);

IntVector to_integers(std::span<const long> v);

}  // namespace tzeta
