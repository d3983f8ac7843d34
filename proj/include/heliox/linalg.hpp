#pragma once

// Dense symmetric and generalized-symmetric eigensolvers.
//
// Householder tridiagonalisation followed by implicit QL iterations
// (the EISPACK tred2/tql2 pair). Everything is templated on the scalar so
// the variational problem can run in extended precision while the large
// kernel matrices stay in double.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "heliox/error.hpp"
#include "heliox/real.hpp"

namespace heliox::linalg {

/// Column-major dense matrix.
template <RealScalar Real>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Real(0)) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Real& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
  Real operator()(std::size_t i, std::size_t j) const {
    return data_[j * rows_ + i];
  }

  std::span<Real> column(std::size_t j) {
    return {data_.data() + j * rows_, rows_};
  }
  std::span<const Real> column(std::size_t j) const {
    return {data_.data() + j * rows_, rows_};
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Real> data_;
};

/// Symmetric matrix holding only its lower triangle (packed by rows), so
/// A(i,j) == A(j,i) holds exactly.
template <RealScalar Real>
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(std::size_t dim)
      : dim_(dim), packed_(dim * (dim + 1) / 2, Real(0)) {}

  std::size_t dim() const noexcept { return dim_; }

  Real operator()(std::size_t i, std::size_t j) const {
    return packed_[index(i, j)];
  }
  Real& at(std::size_t i, std::size_t j) { return packed_[index(i, j)]; }
  void set(std::size_t i, std::size_t j, Real v) { packed_[index(i, j)] = v; }

  std::span<const Real> packed() const noexcept { return packed_; }

  /// Largest absolute entry.
  Real max_abs() const {
    Real m = 0;
    for (Real v : packed_) m = std::max(m, abs(v));
    return m;
  }

  DenseMatrix<Real> to_dense() const {
    DenseMatrix<Real> out(dim_, dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j <= i; ++j) out(i, j) = out(j, i) = (*this)(i, j);
    return out;
  }

  template <RealScalar Other>
  SymmetricMatrix<Other> cast() const {
    SymmetricMatrix<Other> out(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j <= i; ++j)
        out.set(i, j, static_cast<Other>((*this)(i, j)));
    return out;
  }

 private:
  static std::size_t index(std::size_t i, std::size_t j) noexcept {
    if (i < j) std::swap(i, j);
    return i * (i + 1) / 2 + j;
  }

  std::size_t dim_ = 0;
  std::vector<Real> packed_;
};

/// Hamiltonian / overlap pair of a generalized eigenproblem H c = E S c.
template <RealScalar Real>
struct MatrixPair {
  SymmetricMatrix<Real> H;
  SymmetricMatrix<Real> S;
};

/// Eigenvalues in ascending order; eigenvectors stored as columns.
template <RealScalar Real>
struct EigenSystem {
  std::vector<Real> values;
  DenseMatrix<Real> vectors;
};

namespace detail {

template <RealScalar Real>
void check_finite(const SymmetricMatrix<Real>& a, const char* who) {
  for (Real v : a.packed())
    if (!isfinite(v))
      throw std::invalid_argument(std::string(who) + ": non-finite matrix entry");
}

// Householder reduction of the symmetric matrix held in v (full storage) to
// tridiagonal form. On exit d holds the diagonal and e the subdiagonal in
// e[1..n-1]; if vectors is set, v holds the orthogonal transformation.
template <RealScalar Real>
void tridiagonalize(DenseMatrix<Real>& v, std::vector<Real>& d,
                    std::vector<Real>& e, bool vectors) {
  const std::size_t n = v.rows();
  d.assign(n, Real(0));
  e.assign(n, Real(0));
  for (std::size_t j = 0; j < n; ++j) d[j] = v(n - 1, j);

  for (std::size_t i = n - 1; i > 0; --i) {
    Real scale = 0;
    Real h = 0;
    for (std::size_t k = 0; k < i; ++k) scale += abs(d[k]);
    if (scale == Real(0)) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = v(i - 1, j);
        v(i, j) = 0;
        v(j, i) = 0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      Real f = d[i - 1];
      Real g = sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) e[j] = 0;

      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        v(j, i) = f;
        g = e[j] + v(j, j) * f;
        auto col = v.column(j);
        for (std::size_t k = j + 1; k < i; ++k) {
          g += col[k] * d[k];
          e[k] += col[k] * f;
        }
        e[j] = g;
      }
      f = 0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const Real hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        auto col = v.column(j);
        for (std::size_t k = j; k < i; ++k) col[k] -= (f * e[k] + g * d[k]);
        d[j] = v(i - 1, j);
        v(i, j) = 0;
      }
    }
    d[i] = h;
  }

  if (!vectors) {
    for (std::size_t j = 0; j < n; ++j) d[j] = v(j, j);
    e[0] = 0;
    return;
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    v(n - 1, i) = v(i, i);
    v(i, i) = 1;
    const Real h = d[i + 1];
    if (h != Real(0)) {
      for (std::size_t k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
      for (std::size_t j = 0; j <= i; ++j) {
        Real g = 0;
        for (std::size_t k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
        for (std::size_t k = 0; k <= i; ++k) v(k, j) -= g * d[k];
      }
    }
    for (std::size_t k = 0; k <= i; ++k) v(k, i + 1) = 0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = v(n - 1, j);
    v(n - 1, j) = 0;
  }
  v(n - 1, n - 1) = 1;
  e[0] = 0;
}

// Implicit QL on the tridiagonal (d, e); rotations are applied to v when
// vectors is set.
template <RealScalar Real>
void tridiagonal_ql(DenseMatrix<Real>& v, std::vector<Real>& d,
                    std::vector<Real>& e, bool vectors) {
  const std::size_t n = d.size();
  constexpr int max_iter = 60;
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0;

  Real f = 0;
  Real tst1 = 0;
  const Real eps = std::numeric_limits<Real>::epsilon();
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, abs(d[l]) + abs(e[l]));
    std::size_t m = l;
    while (m < n - 1 && abs(e[m]) > eps * tst1) ++m;

    if (m > l) {
      int iter = 0;
      do {
        if (++iter > max_iter)
          throw NumericalFailure("sym_eig: QL iteration did not converge");
        Real g = d[l];
        Real p = (d[l + 1] - g) / (2 * e[l]);
        Real r = hypot(p, Real(1));
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const Real dl1 = d[l + 1];
        Real h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        Real c = 1, c2 = 1, c3 = 1;
        const Real el1 = e[l + 1];
        Real s = 0, s2 = 0;
        for (std::size_t ii = m; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[ii];
          h = c * p;
          r = hypot(p, e[ii]);
          e[ii + 1] = s * r;
          s = e[ii] / r;
          c = p / r;
          p = c * d[ii] - s * g;
          d[ii + 1] = h + s * (c * g + s * d[ii]);
          if (vectors) {
            auto ci = v.column(ii);
            auto cj = v.column(ii + 1);
            for (std::size_t k = 0; k < n; ++k) {
              h = cj[k];
              cj[k] = s * ci[k] + c * h;
              ci[k] = c * ci[k] - s * h;
            }
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0;
  }
}

}  // namespace detail

/// Full eigendecomposition A = V diag(values) Vᵀ, values ascending.
template <RealScalar Real>
EigenSystem<Real> sym_eig(const SymmetricMatrix<Real>& a) {
  if (a.dim() == 0) throw std::invalid_argument("sym_eig: empty matrix");
  detail::check_finite(a, "sym_eig");
  const std::size_t n = a.dim();
  DenseMatrix<Real> v = a.to_dense();
  std::vector<Real> d, e;
  detail::tridiagonalize(v, d, e, true);
  detail::tridiagonal_ql(v, d, e, true);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return d[x] < d[y]; });
  EigenSystem<Real> out{std::vector<Real>(n), DenseMatrix<Real>(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = d[order[j]];
    auto src = v.column(order[j]);
    std::copy(src.begin(), src.end(), out.vectors.column(j).begin());
  }
  return out;
}

/// Eigenvalues only, ascending. Skips the accumulation of transformations.
template <RealScalar Real>
std::vector<Real> sym_eigvals(const SymmetricMatrix<Real>& a) {
  if (a.dim() == 0) throw std::invalid_argument("sym_eigvals: empty matrix");
  detail::check_finite(a, "sym_eigvals");
  DenseMatrix<Real> v = a.to_dense();
  std::vector<Real> d, e;
  detail::tridiagonalize(v, d, e, false);
  detail::tridiagonal_ql(v, d, e, false);
  std::sort(d.begin(), d.end());
  return d;
}

/// Lower-triangular Cholesky factor L of S = L Lᵀ.
/// Throws ConditioningError naming the first non-positive pivot.
template <RealScalar Real>
DenseMatrix<Real> cholesky(const SymmetricMatrix<Real>& s) {
  const std::size_t n = s.dim();
  DenseMatrix<Real> l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    Real diag = s(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (!(diag > Real(0)))
      throw ConditioningError(
          j, "cholesky: overlap matrix not positive definite at pivot " +
                 std::to_string(j) + " (reduce the expansion order)");
    const Real ljj = sqrt(diag);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      Real sum = s(i, j);
      for (std::size_t k = 0; k < j; ++k) sum -= l(i, k) * l(j, k);
      l(i, j) = sum / ljj;
    }
  }
  return l;
}

/// C = L⁻¹ A L⁻ᵀ for a lower-triangular L.
template <RealScalar Real>
SymmetricMatrix<Real> reduce_by_cholesky(const DenseMatrix<Real>& l,
                                         const SymmetricMatrix<Real>& a) {
  const std::size_t n = a.dim();
  // W = L⁻¹ A, forward substitution column by column.
  DenseMatrix<Real> w(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    auto wj = w.column(j);
    for (std::size_t i = 0; i < n; ++i) {
      Real sum = a(i, j);
      for (std::size_t k = 0; k < i; ++k) sum -= l(i, k) * wj[k];
      wj[i] = sum / l(i, i);
    }
  }
  // Row i of C is L⁻¹ applied to row i of W; only j <= i is kept.
  SymmetricMatrix<Real> c(n);
  std::vector<Real> row(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      Real sum = w(i, j);
      for (std::size_t k = 0; k < j; ++k) sum -= l(j, k) * row[k];
      row[j] = sum / l(j, j);
      c.set(i, j, row[j]);
    }
  }
  return c;
}

/// Solves Lᵀ x = y in place.
template <RealScalar Real>
void solve_upper_transposed(const DenseMatrix<Real>& l, std::span<Real> y) {
  const std::size_t n = l.rows();
  for (std::size_t ii = n; ii-- > 0;) {
    Real sum = y[ii];
    for (std::size_t k = ii + 1; k < n; ++k) sum -= l(k, ii) * y[k];
    y[ii] = sum / l(ii, ii);
  }
}

/// Generalized problem H c = E S c via S = L Lᵀ. Returned columns satisfy
/// cᵀ S c = 1.
template <RealScalar Real>
EigenSystem<Real> gen_sym_eig(const MatrixPair<Real>& pair) {
  const std::size_t n = pair.H.dim();
  if (pair.S.dim() != n)
    throw std::invalid_argument("gen_sym_eig: H and S dimensions differ");
  detail::check_finite(pair.H, "gen_sym_eig");
  detail::check_finite(pair.S, "gen_sym_eig");
  const DenseMatrix<Real> l = cholesky(pair.S);
  EigenSystem<Real> eig = sym_eig(reduce_by_cholesky(l, pair.H));
  for (std::size_t col = 0; col < n; ++col)
    solve_upper_transposed(l, eig.vectors.column(col));
  return eig;
}

}  // namespace heliox::linalg
