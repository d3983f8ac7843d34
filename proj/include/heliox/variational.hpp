#pragma once

// Ground-state solve: lowest root of H c = E S c and the scalar search over
// the exponent mu.
//
// Coordinate scaling makes the mu dependence exact: with every basis function
// rescaled to unit self-overlap, the matrix pair at mu is congruent to
// (mu^2 T + mu (R - Z N), S) built once at mu = 1. The search therefore
// factors S once, in the working precision, and each E(mu) evaluation is a
// single standard symmetric eigensolve.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "heliox/basis.hpp"
#include "heliox/error.hpp"
#include "heliox/linalg.hpp"
#include "heliox/real.hpp"

namespace heliox {

/// Lowest singlet S state at fixed (Z, omega, mu).
template <RealScalar Real = long double>
struct GroundState {
  Real Z = 2;
  int omega = 0;
  Real mu = 1;
  Real energy = 0;  // hartree
  HylleraasExpansion<Real> expansion;
};

/// Bracket and tolerance for the scalar search over mu.
struct MuSearch {
  double lo = 0;
  double hi = 0;
  double tol = 1e-6;
};

/// (0.5 Z_eff, 2 Z_eff) with Z_eff = Z - 5/16, the single-term optimum.
inline MuSearch default_mu_search(double charge) {
  const double z_eff = charge - 5.0 / 16.0;
  if (!(z_eff > 0))
    throw std::invalid_argument("default_mu_search: Z must exceed 5/16");
  return {0.5 * z_eff, 2.0 * z_eff, 1e-6};
}

/// Smallest gap between the two lowest eigenvalues accepted as a simple root.
inline constexpr double kMinSpectralGap = 1e-8;

/// Highest omega accepted without an explicit override.
inline constexpr int kDefaultOmegaCap = 12;

/// Highest omega whose overlap matrix still factors in x87 extended precision.
inline constexpr int kExtendedOmegaLimit = 12;

enum class Precision { automatic, extended, quad };

namespace detail {

template <RealScalar Real>
void positive_sign(std::vector<Real>& coeffs) {
  for (Real c : coeffs) {
    if (c == Real(0)) continue;
    if (c < Real(0))
      for (Real& x : coeffs) x = -x;
    return;
  }
}

inline void check_gap(const std::vector<long double>& values) {
  if (values.size() > 1 &&
      !(values[1] - values[0] > static_cast<long double>(kMinSpectralGap)))
    throw NumericalFailure("ground state: lowest eigenvalue is not simple");
}

}  // namespace detail

/// Direct route: builds (H, S) at mu from scratch and solves it in Real.
template <RealScalar Real = long double>
GroundState<Real> solve_at_mu(Real charge, int omega, Real mu) {
  if (!(charge > Real(0))) throw std::invalid_argument("solve_at_mu: Z must be > 0");
  if (omega < 0) throw std::invalid_argument("solve_at_mu: omega must be >= 0");
  if (!(mu > Real(0))) throw std::invalid_argument("solve_at_mu: mu must be > 0");

  auto terms = enumerate_terms(omega);
  auto pair = build_matrix_pair<Real>(terms, mu, charge);
  const std::vector<Real> scale = rescale_to_unit_overlap(pair);

  linalg::EigenSystem<Real> eig;
  try {
    eig = linalg::gen_sym_eig(pair);
  } catch (const ConditioningError& err) {
    throw ConditioningError(err.pivot(), std::string(err.what()) + " [omega=" +
                                             std::to_string(omega) + "]");
  }
  if (eig.values.size() > 1 &&
      !(eig.values[1] - eig.values[0] > static_cast<Real>(kMinSpectralGap)))
    throw NumericalFailure("solve_at_mu: lowest eigenvalue is not simple");

  std::vector<Real> coeffs(terms.size());
  auto lowest = eig.vectors.column(0);
  for (std::size_t k = 0; k < terms.size(); ++k) coeffs[k] = scale[k] * lowest[k];
  detail::positive_sign(coeffs);

  GroundState<Real> state{charge, omega, mu, eig.values[0],
                          {charge, omega, mu, std::move(terms), std::move(coeffs), 1}};
  state.expansion.norm = norm_constant(state.expansion);
  return state;
}

/// Matrices of one expansion order at mu = 1, reduced by the Cholesky factor
/// of the unit-diagonal overlap matrix. Independent of Z, so one instance
/// serves a whole isoelectronic sweep.
template <RealScalar Work>
class ScaledHamiltonian {
 public:
  explicit ScaledHamiltonian(int omega) : omega_(omega) {
    if (omega < 0) throw std::invalid_argument("ScaledHamiltonian: omega must be >= 0");
    terms_ = enumerate_terms(omega);
    auto ops = build_operator_matrices<Work>(terms_, Work(1));
    const std::size_t n = terms_.size();
    scale_.resize(n);
    for (std::size_t i = 0; i < n; ++i) scale_[i] = 1 / sqrt(ops.S(i, i));
    for (auto* m : {&ops.S, &ops.T, &ops.N, &ops.R})
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) m->at(i, j) *= scale_[i] * scale_[j];
    for (std::size_t i = 0; i < n; ++i) ops.S.set(i, i, Work(1));

    try {
      chol_ = linalg::cholesky(ops.S);
    } catch (const ConditioningError& err) {
      throw ConditioningError(err.pivot(), std::string(err.what()) + " [omega=" +
                                               std::to_string(omega) + "]");
    }
    kinetic_ = linalg::reduce_by_cholesky(chol_, ops.T).template cast<long double>();
    nuclear_ = linalg::reduce_by_cholesky(chol_, ops.N).template cast<long double>();
    repulsion_ = linalg::reduce_by_cholesky(chol_, ops.R).template cast<long double>();
  }

  int omega() const noexcept { return omega_; }
  std::size_t dim() const noexcept { return terms_.size(); }

  /// Lowest eigenvalue of the pair at (Z, mu).
  long double energy(long double charge, long double mu) const {
    const auto values = linalg::sym_eigvals(hamiltonian(charge, mu));
    detail::check_gap(values);
    return values[0];
  }

  /// Normalised ground state at (Z, mu).
  GroundState<long double> state(long double charge, long double mu) const {
    const auto eig = linalg::sym_eig(hamiltonian(charge, mu));
    detail::check_gap(eig.values);

    const std::size_t n = dim();
    std::vector<Work> y(n);
    auto lowest = eig.vectors.column(0);
    for (std::size_t k = 0; k < n; ++k) y[k] = static_cast<Work>(lowest[k]);
    linalg::solve_upper_transposed(chol_, std::span<Work>(y));

    // Undo the unit-diagonal scaling and map from mu = 1 back to mu:
    // c_k = y_k D_k mu^{order_k + 3} normalises to one at mu.
    const Work mu_w = static_cast<Work>(mu);
    std::vector<Work> coeffs(n);
    for (std::size_t k = 0; k < n; ++k) {
      Work f = y[k] * scale_[k] * mu_w * mu_w * mu_w;
      for (int i = 0; i < terms_[k].order(); ++i) f *= mu_w;
      coeffs[k] = f;
    }
    detail::positive_sign(coeffs);
    HylleraasExpansion<Work> work{static_cast<Work>(charge), omega_, mu_w, terms_,
                                  std::move(coeffs), Work(1)};
    work.norm = norm_constant(work);

    return {charge, omega_, mu, eig.values[0], work.template cast<long double>()};
  }

 private:
  linalg::SymmetricMatrix<long double> hamiltonian(long double charge,
                                                   long double mu) const {
    if (!(charge > 0)) throw std::invalid_argument("ground state: Z must be > 0");
    if (!(mu > 0)) throw std::invalid_argument("ground state: mu must be > 0");
    const std::size_t n = dim();
    linalg::SymmetricMatrix<long double> h(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j)
        h.set(i, j, mu * mu * kinetic_(i, j) +
                        mu * (repulsion_(i, j) - charge * nuclear_(i, j)));
    return h;
  }

  int omega_;
  std::vector<BasisTerm> terms_;
  std::vector<Work> scale_;
  linalg::DenseMatrix<Work> chol_;
  linalg::SymmetricMatrix<long double> kinetic_, nuclear_, repulsion_;
};

/// Golden-section minimisation of E(mu) inside the bracket.
template <RealScalar Work>
GroundState<long double> optimize_mu(const ScaledHamiltonian<Work>& problem,
                                     double charge, const MuSearch& search) {
  if (!(search.lo > 0 && search.lo < search.hi))
    throw std::invalid_argument("optimize_mu: bracket must satisfy 0 < lo < hi");
  if (!(search.tol > 0)) throw std::invalid_argument("optimize_mu: tol must be > 0");

  auto energy = [&](double mu) { return problem.energy(charge, mu); };

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = search.lo, b = search.hi;
  const long double e_lo = energy(a), e_hi = energy(b);
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  long double f1 = energy(x1), f2 = energy(x2);
  while (b - a > search.tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = energy(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = energy(x2);
    }
  }
  const double mu_star = 0.5 * (a + b);
  auto best = problem.state(charge, mu_star);
  if (mu_star - search.lo <= search.tol || search.hi - mu_star <= search.tol ||
      best.energy > e_lo || best.energy > e_hi)
    throw BracketError(static_cast<double>(e_lo), static_cast<double>(e_hi),
                       "optimize_mu: no interior minimum in [" +
                           std::to_string(search.lo) + ", " +
                           std::to_string(search.hi) + "]");
  return best;
}

inline Precision resolve_precision(Precision p, int omega) {
  if (p != Precision::automatic) return p;
  return omega <= kExtendedOmegaLimit ? Precision::extended : Precision::quad;
}

/// Either working precision behind one handle.
class ReducedProblem {
 public:
  explicit ReducedProblem(int omega, Precision precision = Precision::automatic)
      : impl_(make(omega, precision)) {}

  int omega() const {
    return std::visit([](const auto& p) { return p.omega(); }, impl_);
  }
  long double energy(long double charge, long double mu) const {
    return std::visit([&](const auto& p) { return p.energy(charge, mu); }, impl_);
  }
  GroundState<long double> state(long double charge, long double mu) const {
    return std::visit([&](const auto& p) { return p.state(charge, mu); }, impl_);
  }
  GroundState<long double> optimize(double charge, const MuSearch& search) const {
    return std::visit([&](const auto& p) { return optimize_mu(p, charge, search); },
                      impl_);
  }

 private:
  using Impl = std::variant<ScaledHamiltonian<long double>, ScaledHamiltonian<quad>>;

  static Impl make(int omega, Precision precision) {
    if (resolve_precision(precision, omega) == Precision::quad)
      return Impl(std::in_place_type<ScaledHamiltonian<quad>>, omega);
    return Impl(std::in_place_type<ScaledHamiltonian<long double>>, omega);
  }

  Impl impl_;
};

/// Ground state at the energy-minimising mu.
inline GroundState<long double> optimize_mu(double charge, int omega,
                                            const MuSearch& search,
                                            Precision precision = Precision::automatic) {
  if (!(charge > 0)) throw std::invalid_argument("optimize_mu: Z must be > 0");
  return ReducedProblem(omega, precision).optimize(charge, search);
}

inline GroundState<long double> optimize_mu(double charge, int omega) {
  return optimize_mu(charge, omega, default_mu_search(charge));
}

}  // namespace heliox
