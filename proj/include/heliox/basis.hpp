#pragma once

// Hylleraas basis for singlet S states of two-electron atoms.
//
// Basis functions are e^{-mu s} s^n t^m u^p with s = r1 + r2, t = r1 - r2,
// u = r12, m even and n + m + p <= omega. After the trivial angular
// integrations the volume element is pi^2 u (s^2 - t^2) ds du dt over
// 0 <= |t| <= u <= s. Every overlap, kinetic and potential matrix element
// reduces to the elementary integral
//
//   I(a,b,c; alpha) = int_0^inf e^{-alpha s} s^a ds int_0^s u^b du int_0^u t^c dt
//                   = (a+b+c+2)! / [(c+1)(b+c+2) alpha^{a+b+c+3}].

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "heliox/linalg.hpp"

namespace heliox {

/// Exponent triple (n, m, p) of s^n t^m u^p.
struct BasisTerm {
  int n = 0;
  int m = 0;
  int p = 0;

  int order() const noexcept { return n + m + p; }
  friend auto operator<=>(const BasisTerm&, const BasisTerm&) = default;
};

/// Number of triples with m even and n + m + p <= omega.
inline std::size_t term_count(int omega) {
  if (omega < 0) throw std::invalid_argument("term_count: omega must be >= 0");
  std::size_t count = 0;
  for (int m = 0; m <= omega; m += 2) {
    const auto k = static_cast<std::size_t>(omega - m);
    count += (k + 1) * (k + 2) / 2;
  }
  return count;
}

/// All basis triples of order <= omega, lexicographic in (n, m, p).
inline std::vector<BasisTerm> enumerate_terms(int omega) {
  if (omega < 0)
    throw std::invalid_argument("enumerate_terms: omega must be >= 0");
  std::vector<BasisTerm> terms;
  terms.reserve(term_count(omega));
  for (int n = 0; n <= omega; ++n)
    for (int m = 0; n + m <= omega; m += 2)
      for (int p = 0; n + m + p <= omega; ++p) terms.push_back({n, m, p});
  return terms;
}

/// I(a,b,c; alpha). The factorial is accumulated as a product of k/alpha so
/// intermediate values stay in range.
template <RealScalar Real = double>
Real base_integral(int a, int b, int c, Real alpha) {
  if (a < 0 || b < 0 || c < 0)
    throw std::invalid_argument("base_integral: exponents must be >= 0");
  if (!(alpha > Real(0)))
    throw std::invalid_argument("base_integral: alpha must be > 0");
  const int total = a + b + c + 2;
  Real value = Real(1) / alpha;
  for (int k = 1; k <= total; ++k) value *= static_cast<Real>(k) / alpha;
  value /= static_cast<Real>(c + 1) * static_cast<Real>(b + c + 2);
  if (!isfinite(value) || value == Real(0))
    throw std::range_error("base_integral: result outside floating-point range");
  return value;
}

namespace detail {

// Tabulated I(a,b,c; alpha) for a fixed alpha.
template <RealScalar Real>
class BaseIntegralTable {
 public:
  BaseIntegralTable(int max_a, int max_b, int max_c, Real alpha)
      : na_(max_a + 1), nb_(max_b + 1), nc_(max_c + 1),
        values_(static_cast<std::size_t>(na_ * nb_ * nc_)) {
    for (int a = 0; a < na_; ++a)
      for (int b = 0; b < nb_; ++b)
        for (int c = 0; c < nc_; ++c)
          values_[index(a, b, c)] = base_integral<Real>(a, b, c, alpha);
  }

  Real operator()(int a, int b, int c) const {
    if (a < 0 || b < 0 || c < 0 || a >= na_ || b >= nb_ || c >= nc_)
      throw std::logic_error("base integral table: exponent out of range");
    return values_[index(a, b, c)];
  }

 private:
  std::size_t index(int a, int b, int c) const noexcept {
    return static_cast<std::size_t>((a * nb_ + b) * nc_ + c);
  }

  int na_, nb_, nc_;
  std::vector<Real> values_;
};

// Monomial coef * s^s u^u t^t. Exponents may be negative transiently.
template <RealScalar Real>
struct Monomial {
  Real coef;
  int s, u, t;
};

template <RealScalar Real>
using Poly = std::vector<Monomial<Real>>;

template <RealScalar Real>
Poly<Real> operator*(const Poly<Real>& x, const Poly<Real>& y) {
  Poly<Real> out;
  out.reserve(x.size() * y.size());
  for (const auto& a : x)
    for (const auto& b : y)
      out.push_back({a.coef * b.coef, a.s + b.s, a.u + b.u, a.t + b.t});
  return out;
}

template <RealScalar Real>
Poly<Real> operator+(Poly<Real> x, const Poly<Real>& y) {
  x.insert(x.end(), y.begin(), y.end());
  return x;
}

// Logarithmic derivatives phi_s/phi, phi_t/phi, phi_u/phi; zero-coefficient
// monomials are never emitted.
template <RealScalar Real>
Poly<Real> dlog_s(const BasisTerm& b, Real mu) {
  Poly<Real> out{{-mu, 0, 0, 0}};
  if (b.n != 0) out.push_back({static_cast<Real>(b.n), -1, 0, 0});
  return out;
}
template <RealScalar Real>
Poly<Real> dlog_t(const BasisTerm& b) {
  if (b.m == 0) return {};
  return {{static_cast<Real>(b.m), 0, 0, -1}};
}
template <RealScalar Real>
Poly<Real> dlog_u(const BasisTerm& b) {
  if (b.p == 0) return {};
  return {{static_cast<Real>(b.p), 0, -1, 0}};
}

// pi^2 * integral of e^{-2 mu s} s^N t^M u^P * poly over the full t-range
// [-u, u]; the integrand is even in t, so the t-range is folded and doubled.
template <RealScalar Real, class Integral>
Real integrate(const Poly<Real>& poly, const BasisTerm& bi, const BasisTerm& bj,
               const Integral& integral) {
  const int sn = bi.n + bj.n;
  const int tm = bi.m + bj.m;
  const int up = bi.p + bj.p;
  Real sum = 0;
  for (const auto& mono : poly) {
    if (mono.coef == Real(0)) continue;
    const int a = sn + mono.s;
    const int b = up + mono.u;
    const int c = tm + mono.t;
    if (a < 0 || b < 0 || c < 0)
      throw std::logic_error("hylleraas: singular monomial in matrix element");
    sum += mono.coef * integral(a, b, c);
  }
  return 2 * pi<Real>() * pi<Real>() * sum;
}

template <RealScalar Real, class Integral>
Real overlap_element(const BasisTerm& bi, const BasisTerm& bj,
                     const Integral& integral) {
  // u (s^2 - t^2)
  const Poly<Real> weight{{1, 2, 1, 0}, {-1, 0, 1, 2}};
  return integrate<Real>(weight, bi, bj, integral);
}

template <RealScalar Real, class Integral>
Real kinetic_element(const BasisTerm& bi, const BasisTerm& bj, Real mu,
                     const Integral& integral) {
  const Poly<Real> w_ss{{1, 2, 1, 0}, {-1, 0, 1, 2}};   // u (s^2 - t^2)
  const Poly<Real> w_su{{1, 1, 2, 0}, {-1, 1, 0, 2}};   // s (u^2 - t^2)
  const Poly<Real> w_tu{{1, 2, 0, 1}, {-1, 0, 2, 1}};   // t (s^2 - u^2)

  const auto si = dlog_s(bi, mu), sj = dlog_s(bj, mu);
  const auto ti = dlog_t<Real>(bi), tj = dlog_t<Real>(bj);
  const auto ui = dlog_u<Real>(bi), uj = dlog_u<Real>(bj);

  const Poly<Real> integrand = w_ss * (si * sj + ti * tj + ui * uj) +
                               w_su * (si * uj + ui * sj) +
                               w_tu * (ti * uj + ui * tj);
  return integrate<Real>(integrand, bi, bj, integral);
}

// <i| 1/r1 + 1/r2 |j>: weight 4 s u
template <RealScalar Real, class Integral>
Real nuclear_element(const BasisTerm& bi, const BasisTerm& bj,
                     const Integral& integral) {
  const Poly<Real> weight{{4, 1, 1, 0}};
  return integrate<Real>(weight, bi, bj, integral);
}

// <i| 1/r12 |j>: weight s^2 - t^2
template <RealScalar Real, class Integral>
Real repulsion_element(const BasisTerm& bi, const BasisTerm& bj,
                       const Integral& integral) {
  const Poly<Real> weight{{1, 2, 0, 0}, {-1, 0, 0, 2}};
  return integrate<Real>(weight, bi, bj, integral);
}

template <RealScalar Real, class Integral>
Real potential_element(const BasisTerm& bi, const BasisTerm& bj, Real charge,
                       const Integral& integral) {
  return repulsion_element<Real>(bi, bj, integral) -
         charge * nuclear_element<Real>(bi, bj, integral);
}

template <RealScalar Real>
auto direct_integral(Real alpha) {
  return [alpha](int a, int b, int c) { return base_integral<Real>(a, b, c, alpha); };
}

}  // namespace detail

/// <t_i | t_j> including the exponential e^{-mu s} on both sides.
template <RealScalar Real = double>
Real overlap_element(const BasisTerm& ti, const BasisTerm& tj, Real mu) {
  if (!(mu > Real(0))) throw std::invalid_argument("overlap_element: mu must be > 0");
  return detail::overlap_element<Real>(ti, tj, detail::direct_integral(2 * mu));
}

/// <t_i | H | t_j> for the two-electron Hamiltonian with nuclear charge Z.
template <RealScalar Real = double>
Real hamiltonian_element(const BasisTerm& ti, const BasisTerm& tj, Real mu,
                         Real charge) {
  if (!(mu > Real(0)))
    throw std::invalid_argument("hamiltonian_element: mu must be > 0");
  const auto integral = detail::direct_integral(2 * mu);
  return detail::kinetic_element<Real>(ti, tj, mu, integral) +
         detail::potential_element<Real>(ti, tj, charge, integral);
}

/// Kinetic and potential pieces separately (virial checks, tests).
template <RealScalar Real = double>
Real kinetic_element(const BasisTerm& ti, const BasisTerm& tj, Real mu) {
  if (!(mu > Real(0))) throw std::invalid_argument("kinetic_element: mu must be > 0");
  return detail::kinetic_element<Real>(ti, tj, mu, detail::direct_integral(2 * mu));
}

template <RealScalar Real = double>
Real potential_element(const BasisTerm& ti, const BasisTerm& tj, Real mu,
                       Real charge) {
  if (!(mu > Real(0)))
    throw std::invalid_argument("potential_element: mu must be > 0");
  return detail::potential_element<Real>(ti, tj, charge,
                                         detail::direct_integral(2 * mu));
}

/// Raw (unscaled) H and S over the given terms.
template <RealScalar Real = double>
linalg::MatrixPair<Real> build_matrix_pair(const std::vector<BasisTerm>& terms,
                                           Real mu, Real charge) {
  if (!(mu > Real(0))) throw std::invalid_argument("build_matrix_pair: mu must be > 0");
  int max_order = 0;
  for (const auto& t : terms) max_order = std::max(max_order, t.order());
  // Widest exponents: s^{2w+2}, u^{2w+2}, t^{2w+2} (with slack).
  const int span = 2 * max_order + 3;
  const detail::BaseIntegralTable<Real> table(span, span, span, 2 * mu);

  const std::size_t n = terms.size();
  linalg::MatrixPair<Real> pair{linalg::SymmetricMatrix<Real>(n),
                                linalg::SymmetricMatrix<Real>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      pair.S.set(i, j, detail::overlap_element<Real>(terms[i], terms[j], table));
      pair.H.set(i, j,
                 detail::kinetic_element<Real>(terms[i], terms[j], mu, table) +
                     detail::potential_element<Real>(terms[i], terms[j], charge,
                                                     table));
    }
  }
  return pair;
}

/// Overlap, kinetic, nuclear-attraction (1/r1 + 1/r2) and repulsion (1/r12)
/// matrices kept apart, so H = T - Z N + R can be formed for any charge.
template <RealScalar Real>
struct OperatorMatrices {
  linalg::SymmetricMatrix<Real> S, T, N, R;
};

template <RealScalar Real>
OperatorMatrices<Real> build_operator_matrices(const std::vector<BasisTerm>& terms,
                                               Real mu) {
  if (!(mu > Real(0)))
    throw std::invalid_argument("build_operator_matrices: mu must be > 0");
  int max_order = 0;
  for (const auto& t : terms) max_order = std::max(max_order, t.order());
  const int span = 2 * max_order + 3;
  const detail::BaseIntegralTable<Real> table(span, span, span, 2 * mu);

  const std::size_t n = terms.size();
  OperatorMatrices<Real> ops{linalg::SymmetricMatrix<Real>(n), linalg::SymmetricMatrix<Real>(n),
                             linalg::SymmetricMatrix<Real>(n), linalg::SymmetricMatrix<Real>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      ops.S.set(i, j, detail::overlap_element<Real>(terms[i], terms[j], table));
      ops.T.set(i, j, detail::kinetic_element<Real>(terms[i], terms[j], mu, table));
      ops.N.set(i, j, detail::nuclear_element<Real>(terms[i], terms[j], table));
      ops.R.set(i, j, detail::repulsion_element<Real>(terms[i], terms[j], table));
    }
  }
  return ops;
}

/// Rescales every basis function to unit self-overlap: H -> D H D,
/// S -> D S D with D_ii = S_ii^{-1/2}. Returns D.
template <RealScalar Real>
std::vector<Real> rescale_to_unit_overlap(linalg::MatrixPair<Real>& pair) {
  const std::size_t n = pair.S.dim();
  std::vector<Real> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(pair.S(i, i) > Real(0)))
      throw ConditioningError(i, "rescale: non-positive diagonal overlap");
    d[i] = 1 / sqrt(pair.S(i, i));
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      pair.S.at(i, j) *= d[i] * d[j];
      pair.H.at(i, j) *= d[i] * d[j];
    }
  for (std::size_t i = 0; i < n; ++i) pair.S.set(i, i, Real(1));
  return d;
}

/// A Hylleraas state: psi = norm * sum_k coeffs[k] e^{-mu s} s^n t^m u^p.
template <RealScalar Real = double>
struct HylleraasExpansion {
  Real Z = 2;
  int omega = 0;
  Real mu = 1;
  std::vector<BasisTerm> terms;
  std::vector<Real> coeffs;
  Real norm = 1;

  template <RealScalar Other>
  HylleraasExpansion<Other> cast() const {
    HylleraasExpansion<Other> out{static_cast<Other>(Z), omega,
                                  static_cast<Other>(mu), terms, {},
                                  static_cast<Other>(norm)};
    out.coeffs.reserve(coeffs.size());
    for (Real c : coeffs) out.coeffs.push_back(static_cast<Other>(c));
    return out;
  }
};

/// Expansion over all terms of order <= omega with the given coefficients;
/// norm is left at 1.
template <RealScalar Real = double>
HylleraasExpansion<Real> make_expansion(Real charge, int omega, Real mu,
                                        std::vector<Real> coeffs) {
  HylleraasExpansion<Real> state{charge, omega, mu, enumerate_terms(omega),
                               std::move(coeffs), Real(1)};
  if (state.coeffs.size() != state.terms.size())
    throw std::invalid_argument("make_expansion: coefficient count mismatch");
  if (!(mu > Real(0))) throw std::invalid_argument("make_expansion: mu must be > 0");
  return state;
}

/// C = (cᵀ S c)^{-1/2}.
template <RealScalar Real>
Real norm_constant(const HylleraasExpansion<Real>& state) {
  if (state.coeffs.size() != state.terms.size())
    throw std::invalid_argument("norm_constant: coefficient count mismatch");
  if (std::all_of(state.coeffs.begin(), state.coeffs.end(),
                  [](Real c) { return c == Real(0); }))
    throw std::invalid_argument("norm_constant: zero coefficient vector");
  int max_order = 0;
  for (const auto& t : state.terms) max_order = std::max(max_order, t.order());
  const int span = 2 * max_order + 3;
  const detail::BaseIntegralTable<Real> table(span, span, span, 2 * state.mu);
  Real gram = 0;
  const std::size_t n = state.terms.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (state.coeffs[i] == Real(0)) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (state.coeffs[j] == Real(0)) continue;
      gram += state.coeffs[i] * state.coeffs[j] *
              detail::overlap_element<Real>(state.terms[i], state.terms[j], table);
    }
  }
  if (!(gram > Real(0)))
    throw NumericalFailure("norm_constant: non-positive norm (ill-conditioned basis)");
  return 1 / sqrt(gram);
}

/// psi(r1, r2, cos theta) including the normalization constant.
template <RealScalar Real>
Real wavefunction_value(const HylleraasExpansion<Real>& state, Real r1, Real r2,
                        Real cos_theta) {
  if (!(cos_theta >= Real(-1) && cos_theta <= Real(1)))
    throw std::invalid_argument("wavefunction_value: cos(theta) outside [-1, 1]");
  if (r1 < Real(0) || r2 < Real(0))
    throw std::invalid_argument("wavefunction_value: negative radius");
  const Real s = r1 + r2;
  const Real t = r1 - r2;
  const Real u =
      sqrt(std::max(Real(0), r1 * r1 + r2 * r2 - 2 * r1 * r2 * cos_theta));
  Real sum = 0;
  for (std::size_t k = 0; k < state.terms.size(); ++k) {
    const auto& b = state.terms[k];
    Real v = state.coeffs[k];
    for (int i = 0; i < b.n; ++i) v *= s;
    for (int i = 0; i < b.m; ++i) v *= t;
    for (int i = 0; i < b.p; ++i) v *= u;
    sum += v;
  }
  return state.norm * exp(-state.mu * s) * sum;
}

}  // namespace heliox
