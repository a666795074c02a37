#pragma once

#include <algorithm>
#include <cstddef>
#include <ostream>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "iwalab/error.hpp"

namespace iwalab {

using BigInt = boost::multiprecision::cpp_int;

/// Dense matrix of arbitrary-size integers.
class IntMatrix {
public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  BigInt& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const BigInt& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  friend IntMatrix operator*(const IntMatrix& x, const IntMatrix& y) {
    if (x.cols_ != y.rows_) raise(ErrorCode::ConfigError, "matrix dimension mismatch");
    IntMatrix r(x.rows_, y.cols_);
    for (std::size_t i = 0; i < x.rows_; ++i)
      for (std::size_t k = 0; k < x.cols_; ++k) {
        const BigInt& v = x(i, k);
        if (v == 0) continue;
        for (std::size_t j = 0; j < y.cols_; ++j) r(i, j) += v * y(k, j);
      }
    return r;
  }
  friend IntMatrix operator+(IntMatrix x, const IntMatrix& y) {
    for (std::size_t i = 0; i < x.a_.size(); ++i) x.a_[i] += y.a_[i];
    return x;
  }
  friend IntMatrix operator-(IntMatrix x, const IntMatrix& y) {
    for (std::size_t i = 0; i < x.a_.size(); ++i) x.a_[i] -= y.a_[i];
    return x;
  }
  friend bool operator==(const IntMatrix& x, const IntMatrix& y) {
    return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
  }

  IntMatrix transposed() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  IntMatrix block(std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) const {
    IntMatrix b(r1 - r0, c1 - c0);
    for (std::size_t i = r0; i < r1; ++i)
      for (std::size_t j = c0; j < c1; ++j) b(i - r0, j - c0) = (*this)(i, j);
    return b;
  }

  bool is_diagonal() const {
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (i != j && (*this)(i, j) != 0) return false;
    return true;
  }

  /// Fraction-free (Bareiss) determinant of a square matrix.
  BigInt det() const {
    if (rows_ != cols_) raise(ErrorCode::ConfigError, "determinant of a non-square matrix");
    std::size_t n = rows_;
    if (n == 0) return 1;
    IntMatrix a = *this;
    BigInt prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      if (a(k, k) == 0) {
        std::size_t p = k + 1;
        while (p < n && a(p, k) == 0) ++p;
        if (p == n) return 0;
        for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
        sign = -sign;
      }
      for (std::size_t i = k + 1; i < n; ++i)
        for (std::size_t j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
      prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
  }

  friend std::ostream& operator<<(std::ostream& os, const IntMatrix& m) {
    for (std::size_t i = 0; i < m.rows_; ++i) {
      for (std::size_t j = 0; j < m.cols_; ++j) os << (j ? " " : "") << m(i, j);
      os << "\n";
    }
    return os;
  }

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<BigInt> a_;
};

/// U * M * V = D with U, V unimodular and d_1 | d_2 | ... on the diagonal.
struct SmithForm {
  IntMatrix U, D, V, V_inv;

  std::size_t rank() const {
    std::size_t r = 0;
    while (r < std::min(D.rows(), D.cols()) && D(r, r) != 0) ++r;
    return r;
  }
  std::vector<BigInt> diagonal() const {
    std::vector<BigInt> d;
    for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i) d.push_back(D(i, i));
    return d;
  }
};

inline SmithForm smith_normal_form(const IntMatrix& M) {
  const std::size_t r = M.rows(), c = M.cols();
  SmithForm s{IntMatrix::identity(r), M, IntMatrix::identity(c), IntMatrix::identity(c)};
  IntMatrix& A = s.D;

  auto swap_rows = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < c; ++k) std::swap(A(i, k), A(j, k));
    for (std::size_t k = 0; k < r; ++k) std::swap(s.U(i, k), s.U(j, k));
  };
  auto swap_cols = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < r; ++k) std::swap(A(k, i), A(k, j));
    for (std::size_t k = 0; k < c; ++k) std::swap(s.V(k, i), s.V(k, j));
    for (std::size_t k = 0; k < c; ++k) std::swap(s.V_inv(i, k), s.V_inv(j, k));
  };
  // row_i -= q row_t
  auto row_sub = [&](std::size_t i, std::size_t t, const BigInt& q) {
    if (q == 0) return;
    for (std::size_t k = 0; k < c; ++k) A(i, k) -= q * A(t, k);
    for (std::size_t k = 0; k < r; ++k) s.U(i, k) -= q * s.U(t, k);
  };
  // col_j -= q col_t
  auto col_sub = [&](std::size_t j, std::size_t t, const BigInt& q) {
    if (q == 0) return;
    for (std::size_t k = 0; k < r; ++k) A(k, j) -= q * A(k, t);
    for (std::size_t k = 0; k < c; ++k) s.V(k, j) -= q * s.V(k, t);
    for (std::size_t k = 0; k < c; ++k) s.V_inv(t, k) += q * s.V_inv(j, k);
  };

  for (std::size_t t = 0; t < std::min(r, c); ++t) {
    // smallest nonzero entry of the trailing block becomes the pivot
    std::size_t pi = r, pj = c;
    for (std::size_t i = t; i < r; ++i)
      for (std::size_t j = t; j < c; ++j)
        if (A(i, j) != 0 && (pi == r || abs(A(i, j)) < abs(A(pi, pj)))) {
          pi = i;
          pj = j;
        }
    if (pi == r) break;
    swap_rows(t, pi);
    swap_cols(t, pj);

    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < r; ++i) {
        row_sub(i, t, BigInt(A(i, t) / A(t, t)));
        if (A(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < c; ++j) {
        col_sub(j, t, BigInt(A(t, j) / A(t, t)));
        if (A(t, j) != 0) clean = false;
      }
      if (!clean) {
        std::size_t bi = t, bj = t;
        for (std::size_t i = t + 1; i < r; ++i)
          if (A(i, t) != 0 && abs(A(i, t)) < abs(A(bi, bj))) {
            bi = i;
            bj = t;
          }
        for (std::size_t j = t + 1; j < c; ++j)
          if (A(t, j) != 0 && abs(A(t, j)) < abs(A(bi, bj))) {
            bi = t;
            bj = j;
          }
        swap_rows(t, bi);
        swap_cols(t, bj);
        continue;
      }
      // divisibility condition on the trailing block
      bool divides = true;
      for (std::size_t i = t + 1; i < r && divides; ++i)
        for (std::size_t j = t + 1; j < c; ++j)
          if (A(i, j) % A(t, t) != 0) {
            // row_t += row_i
            row_sub(t, i, BigInt(-1));
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (A(t, t) < 0) {
      for (std::size_t k = 0; k < c; ++k) A(t, k) = -A(t, k);
      for (std::size_t k = 0; k < r; ++k) s.U(t, k) = -s.U(t, k);
    }
  }
  return s;
}

/// Invariants of a finitely generated abelian group: Z^free_rank + sum Z/d_i.
struct AbelianInvariants {
  std::vector<BigInt> torsion;
  std::size_t free_rank = 0;

  bool is_trivial() const { return torsion.empty() && free_rank == 0; }
  BigInt order() const {
    BigInt o = 1;
    for (auto& d : torsion) o *= d;
    return o;
  }
};

/// Z^n / (column span of R) for an n x k relation matrix R.
inline AbelianInvariants cokernel_invariants(const IntMatrix& R) {
  AbelianInvariants inv;
  SmithForm s = smith_normal_form(R);
  std::size_t rk = s.rank();
  for (std::size_t i = 0; i < rk; ++i)
    if (s.D(i, i) != 1) inv.torsion.push_back(s.D(i, i));
  inv.free_rank = R.rows() - rk;
  return inv;
}

/// ker(K) / im(B) for integer matrices with K * B = 0 (columns are elements).
inline AbelianInvariants subquotient_invariants(const IntMatrix& K, const IntMatrix& B) {
  SmithForm s = smith_normal_form(K);
  std::size_t rk = s.rank();
  std::size_t n = K.cols();
  // coordinates of im(B) with respect to the kernel basis V[:, rk..]
  IntMatrix coords = s.V_inv * B;
  for (std::size_t i = 0; i < rk; ++i)
    for (std::size_t j = 0; j < B.cols(); ++j)
      if (coords(i, j) != 0) raise(ErrorCode::OutOfModel, "image not contained in kernel");
  return cokernel_invariants(coords.block(rk, n, 0, B.cols()));
}

} // namespace iwalab
