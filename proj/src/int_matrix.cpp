#include "tzeta/int_matrix.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <utility>

#include "tzeta/error.hpp"

namespace tzeta {

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Integer(0)) {}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorKind::InvalidArgument, "ragged matrix literal");
    for (long v : r) data_.emplace_back(v);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows, std::size_t cols) {
  IntMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw Error(ErrorKind::InvalidArgument, "row length mismatch");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntVector IntMatrix::row(std::size_t r) const {
  return IntVector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                   data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

IntVector IntMatrix::column(std::size_t c) const {
  IntVector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, c);
  return out;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

void IntMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
}

void IntMatrix::swap_cols(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
}

void IntMatrix::add_row_multiple(std::size_t dst, std::size_t src, const Integer& factor) {
  if (factor == 0) return;
  for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += factor * (*this)(src, j);
}

void IntMatrix::add_col_multiple(std::size_t dst, std::size_t src, const Integer& factor) {
  if (factor == 0) return;
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += factor * (*this)(i, src);
}

void IntMatrix::negate_row(std::size_t r) {
  for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) = -(*this)(r, j);
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols_ != b.rows_) throw Error(ErrorKind::InvalidArgument, "matrix product shape mismatch");
  IntMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Integer& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

IntVector operator*(const IntMatrix& a, std::span<const Integer> x) {
  if (a.cols_ != x.size()) throw Error(ErrorKind::InvalidArgument, "matrix-vector shape mismatch");
  IntVector y(a.rows_, Integer(0));
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t j = 0; j < a.cols_; ++j) y[i] += a(i, j) * x[j];
  return y;
}

std::string IntMatrix::str() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j).get_str();
    os << ']';
  }
  os << ']';
  return os.str();
}

Integer determinant(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::InvalidArgument, "determinant of non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  IntMatrix m = a;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t swap = k + 1;
      while (swap < n && m(swap, k) == 0) ++swap;
      if (swap == n) return 0;
      m.swap_rows(k, swap);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer t = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        m(i, j) = t;
      }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

IntVector SnfDecomposition::diagonal() const {
  IntVector d;
  for (std::size_t i = 0; i < std::min(S.rows(), S.cols()); ++i) d.push_back(S(i, i));
  return d;
}

std::size_t SnfDecomposition::rank() const {
  std::size_t r = 0;
  for (const auto& s : diagonal())
    if (s != 0) ++r;
  return r;
}

namespace {

// Smallest nonzero |entry| in rows/cols >= t, row-major tie break.
bool find_pivot(const IntMatrix& a, std::size_t t, std::size_t& pr, std::size_t& pc) {
  bool found = false;
  Integer best;
  for (std::size_t i = t; i < a.rows(); ++i)
    for (std::size_t j = t; j < a.cols(); ++j) {
      if (a(i, j) == 0) continue;
      Integer v = abs(a(i, j));
      if (!found || v < best) {
        found = true;
        best = v;
        pr = i;
        pc = j;
      }
    }
  return found;
}

}  // namespace

SnfDecomposition smith_normal_form(const IntMatrix& a) {
  if (a.empty()) throw Error(ErrorKind::InvalidArgument, "smith_normal_form of an empty matrix");
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  IntMatrix s = a;
  IntMatrix u = IntMatrix::identity(m);
  IntMatrix v = IntMatrix::identity(n);

  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    while (true) {
      std::size_t pr = 0, pc = 0;
      if (!find_pivot(s, t, pr, pc)) break;
      s.swap_rows(t, pr);
      u.swap_rows(t, pr);
      s.swap_cols(t, pc);
      v.swap_cols(t, pc);

      bool dirty = false;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (s(i, t) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), s(i, t).get_mpz_t(), s(t, t).get_mpz_t());
        s.add_row_multiple(i, t, -q);
        u.add_row_multiple(i, t, -q);
        if (s(i, t) != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (s(t, j) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), s(t, j).get_mpz_t(), s(t, t).get_mpz_t());
        s.add_col_multiple(j, t, -q);
        v.add_col_multiple(j, t, -q);
        if (s(t, j) != 0) dirty = true;
      }
      if (dirty) continue;

      // Divisibility chain: fold an offending row into the pivot row.
      bool folded = false;
      for (std::size_t i = t + 1; i < m && !folded; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (!mpz_divisible_p(s(i, j).get_mpz_t(), s(t, t).get_mpz_t())) {
            s.add_row_multiple(t, i, 1);
            u.add_row_multiple(t, i, 1);
            folded = true;
            break;
          }
      if (!folded) break;
    }
    if (s(t, t) < 0) {
      s.negate_row(t);
      u.negate_row(t);
    }
  }
  return {std::move(u), std::move(s), std::move(v)};
}

IntMatrix hermite_rows(const IntMatrix& a) {
  IntMatrix h = a;
  std::size_t pivot_row = 0;
  for (std::size_t c = 0; c < h.cols() && pivot_row < h.rows(); ++c) {
    // Euclid on column c among rows >= pivot_row.
    while (true) {
      std::size_t best = h.rows();
      for (std::size_t i = pivot_row; i < h.rows(); ++i)
        if (h(i, c) != 0 && (best == h.rows() || abs(h(i, c)) < abs(h(best, c)))) best = i;
      if (best == h.rows()) break;
      h.swap_rows(pivot_row, best);
      bool others = false;
      for (std::size_t i = pivot_row + 1; i < h.rows(); ++i) {
        if (h(i, c) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), h(i, c).get_mpz_t(), h(pivot_row, c).get_mpz_t());
        h.add_row_multiple(i, pivot_row, -q);
        if (h(i, c) != 0) others = true;
      }
      if (!others) break;
    }
    if (h(pivot_row, c) == 0) continue;
    if (h(pivot_row, c) < 0) h.negate_row(pivot_row);
    for (std::size_t i = 0; i < pivot_row; ++i) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), h(i, c).get_mpz_t(), h(pivot_row, c).get_mpz_t());
      h.add_row_multiple(i, pivot_row, -q);
    }
    ++pivot_row;
  }
  IntMatrix out(pivot_row, h.cols());
  for (std::size_t i = 0; i < pivot_row; ++i)
    for (std::size_t j = 0; j < h.cols(); ++j) out(i, j) = h(i, j);
  return out;
}

Integer FinAbGroupPresentation::torsion_order() const {
  Integer h = 1;
  for (const auto& f : invariant_factors) h *= f;
  return h;
}

IntVector FinAbGroupPresentation::classify(std::span<const Integer> ambient) const {
  IntVector c = projection * ambient;
  for (std::size_t i = 0; i < invariant_factors.size(); ++i) {
    Integer& r = c[rank + i];
    mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), invariant_factors[i].get_mpz_t());
  }
  return c;
}

IntVector FinAbGroupPresentation::classify_unit(std::size_t index) const {
  IntVector e(ambient_dim, Integer(0));
  e.at(index) = 1;
  return classify(e);
}

FinAbGroupPresentation cokernel(const IntMatrix& a) {
  const SnfDecomposition snf = smith_normal_form(a);
  const std::size_t m = a.rows();
  const std::size_t r = snf.rank();
  const IntVector diag = snf.diagonal();

  FinAbGroupPresentation g;
  g.ambient_dim = m;
  g.rank = m - r;

  IntMatrix free_rows(g.rank, m);
  for (std::size_t i = 0; i < g.rank; ++i)
    for (std::size_t j = 0; j < m; ++j) free_rows(i, j) = snf.U(r + i, j);
  if (g.rank > 0) free_rows = hermite_rows(free_rows);

  std::vector<std::size_t> torsion_rows;
  for (std::size_t i = 0; i < r; ++i)
    if (diag[i] > 1) {
      torsion_rows.push_back(i);
      g.invariant_factors.push_back(diag[i]);
    }

  g.projection = IntMatrix(g.rank + torsion_rows.size(), m);
  for (std::size_t i = 0; i < g.rank; ++i)
    for (std::size_t j = 0; j < m; ++j) g.projection(i, j) = free_rows(i, j);
  for (std::size_t k = 0; k < torsion_rows.size(); ++k)
    for (std::size_t j = 0; j < m; ++j) {
      Integer e = snf.U(torsion_rows[k], j);
      mpz_fdiv_r(e.get_mpz_t(), e.get_mpz_t(), g.invariant_factors[k].get_mpz_t());
      g.projection(g.rank + k, j) = e;
    }
  return g;
}

std::optional<IntVector> solve_preimage(const IntMatrix& a, std::span<const Integer> t) {
  if (t.size() != a.rows()) throw Error(ErrorKind::InvalidArgument, "solve_preimage: dimension mismatch");
  const SnfDecomposition snf = smith_normal_form(a);
  const IntVector ut = snf.U * t;
  IntVector y(a.cols(), Integer(0));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const bool has_pivot = i < a.cols() && snf.S(i, i) != 0;
    if (!has_pivot) {
      if (ut[i] != 0) return std::nullopt;
      continue;
    }
    if (!mpz_divisible_p(ut[i].get_mpz_t(), snf.S(i, i).get_mpz_t())) return std::nullopt;
    y[i] = ut[i] / snf.S(i, i);
  }
  return snf.V * std::span<const Integer>(y);
}

IntVector to_integers(std::span<const long> v) {
  IntVector out;
  out.reserve(v.size());
  for (long x : v) out.emplace_back(x);
  return out;
}

}  // namespace tzeta
