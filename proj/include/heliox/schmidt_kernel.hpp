#pragma once

// Partial-wave radial kernels of a normalised Hylleraas state,
//
//   f_l(r1, r2) = r1 r2 (2l+1)/2 int_{-1}^{1} psi(r1, r2, x) P_l(x) dx,
//
// whose eigenfunctions are the radial natural orbitals. Two independent
// backends: a closed form built from the monomial expansion of P_l and the
// moments I(k, p) = int x^k u^p dx, and Gauss-Legendre quadrature of psi P_l.
// The quadrature runs in u = r12 rather than x = cos(theta): with
// x = (A - u^2)/B, A = r1^2 + r2^2, B = 2 r1 r2, the integrand becomes the
// polynomial u psi P_l, so an (l + omega/2 + 2)-point rule is exact, while in
// x the odd powers of u carry a square-root endpoint singularity at r1 = r2.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "heliox/basis.hpp"
#include "heliox/quadrature.hpp"

namespace heliox {

/// Generalised binomial coefficient C(x, k) for real x, integer k >= 0.
inline double binomial(double x, int k) {
  if (k < 0) throw std::invalid_argument("binomial: k must be >= 0");
  double value = 1;
  for (int i = 0; i < k; ++i) value *= (x - i) / (i + 1);
  return value;
}

/// I(k, p) = int_0^pi sin(theta) cos^k(theta) (r1^2 + r2^2 - 2 r1 r2 cos(theta))^{p/2} dtheta.
///
/// With z = B/A <= 1/2, or p even, the binomial series of (1 - z x)^{p/2}
/// is integrated term by term (finite for even p). For odd p and z > 1/2
/// the exact antiderivative in w = A - B x is used.
inline double legendre_theta_integral(int k, int p, double r1, double r2) {
  if (k < 0 || p < 0)
    throw std::invalid_argument("legendre_theta_integral: k and p must be >= 0");
  if (r1 < 0 || r2 < 0)
    throw std::invalid_argument("legendre_theta_integral: negative radius");
  if (r1 == 0 && r2 == 0)
    throw std::invalid_argument("legendre_theta_integral: r1 = r2 = 0 is singular");

  const double a = r1 * r1 + r2 * r2;
  const double b = 2 * r1 * r2;
  const double z = b / a;
  const double half_p = 0.5 * p;

  if (p % 2 == 0 || z <= 0.5) {
    // A^{p/2} sum_j C(p/2, j) (-z)^j int x^{k+j} dx
    double sum = 0;
    double coeff = 1;  // C(p/2, j) (-z)^j
    for (int j = 0; j < 400; ++j) {
      if (j > 0) coeff *= -z * (half_p - (j - 1)) / j;
      if ((k + j) % 2 == 0) sum += coeff * 2.0 / (k + j + 1);
      if (p % 2 == 0 && j >= p / 2) break;
      if (p % 2 == 1 && j > 2 && std::abs(coeff) <= 1e-18 * std::abs(sum)) break;
    }
    return std::pow(a, half_p) * sum;
  }

  // x = (A - w)/B: B^{-k-1} sum_j C(k, j) A^{k-j} (-1)^j [w^{j+p/2+1}/(j+p/2+1)]
  const double w_hi = (r1 + r2) * (r1 + r2);
  const double w_lo = (r1 - r2) * (r1 - r2);
  double sum = 0;
  for (int j = 0; j <= k; ++j) {
    const double q = j + half_p + 1;
    const double term = binomial(k, j) * std::pow(a, k - j) *
                        (std::pow(w_hi, q) - std::pow(w_lo, q)) / q;
    sum += (j % 2 == 0) ? term : -term;
  }
  return sum / std::pow(b, k + 1);
}

enum class KernelBackend { analytic, quadrature };

/// Default Gauss-Legendre node count for kernel matrices.
inline constexpr int kDefaultKernelNodes = 64;

namespace detail {

inline int expansion_order(const HylleraasExpansion<double>& state) {
  int omega = 0;
  for (const auto& b : state.terms) omega = std::max(omega, b.order());
  return omega;
}

// g[p] = sum_{n,m} c_{nmp} s^n t^m for p = 0..omega; scratch buffers are
// reused across calls.
struct RadialPolynomials {
  std::vector<double> s_pow, t_pow, g;

  void evaluate(const HylleraasExpansion<double>& state, int omega, double s, double t) {
    const auto size = static_cast<std::size_t>(omega) + 1;
    s_pow.assign(size, 1.0);
    t_pow.assign(size, 1.0);
    g.assign(size, 0.0);
    for (std::size_t i = 1; i < size; ++i) {
      s_pow[i] = s_pow[i - 1] * s;
      t_pow[i] = t_pow[i - 1] * t;
    }
    for (std::size_t k = 0; k < state.terms.size(); ++k) {
      const auto& b = state.terms[k];
      g[b.p] += state.coeffs[k] * s_pow[b.n] * t_pow[b.m];
    }
  }
};

}  // namespace detail

/// Closed-form f_l. Relies on the monomial form of P_l, whose alternating
/// coefficients grow like 2^l; intended for validation at modest l.
inline double kernel_value_analytic(int l, const HylleraasExpansion<double>& state,
                                    double r1, double r2) {
  if (l < 0) throw std::invalid_argument("kernel_value_analytic: l must be >= 0");
  if (r1 < 0 || r2 < 0)
    throw std::invalid_argument("kernel_value_analytic: negative radius");
  if (r1 == 0 || r2 == 0) return 0;

  const double s = r1 + r2;
  const double t = r2 - r1;
  detail::RadialPolynomials radial;
  radial.evaluate(state, detail::expansion_order(state), s, t);
  const auto& g = radial.g;
  double sum = 0;
  for (int k = 0; k <= l; ++k) {
    const double ak = binomial(l, k) * binomial(0.5 * (l + k - 1), l);
    if (ak == 0) continue;
    double inner = 0;
    for (std::size_t p = 0; p < g.size(); ++p)
      if (g[p] != 0) inner += g[p] * legendre_theta_integral(k, static_cast<int>(p), r1, r2);
    sum += ak * inner;
  }
  return state.norm * std::ldexp(1.0, l - 1) * (2 * l + 1) * r1 * r2 *
         std::exp(-state.mu * s) * sum;
}

/// Evaluates f_0 .. f_lmax at once by Gauss-Legendre quadrature in u = r12.
class KernelEvaluator {
 public:
  KernelEvaluator(const HylleraasExpansion<double>& state, int lmax,
                  int nodes = kDefaultKernelNodes)
      : state_(state), lmax_(lmax), omega_(detail::expansion_order(state)) {
    if (lmax < 0) throw std::invalid_argument("KernelEvaluator: lmax must be >= 0");
    if (nodes < min_nodes(lmax, omega_))
      throw std::invalid_argument("KernelEvaluator: " + std::to_string(nodes) +
                                  " nodes below the exactness guard " +
                                  std::to_string(min_nodes(lmax, omega_)));
    rule_ = gauss_legendre(nodes);
    legendre_.resize(static_cast<std::size_t>(lmax) + 1);
  }

  /// Smallest node count integrating u psi P_l exactly.
  static int min_nodes(int l, int omega) { return l + omega / 2 + 2; }

  int lmax() const noexcept { return lmax_; }
  const HylleraasExpansion<double>& state() const noexcept { return state_; }

  /// out[l] = f_l(r1, r2) for l = 0..lmax.
  void evaluate(double r1, double r2, double* out) {
    std::fill(out, out + lmax_ + 1, 0.0);
    if (r1 < 0 || r2 < 0) throw std::invalid_argument("KernelEvaluator: negative radius");
    if (r1 == 0 || r2 == 0) return;

    const double s = r1 + r2;
    const double t = r1 - r2;
    const double a = r1 * r1 + r2 * r2;
    const double b = 2 * r1 * r2;
    const double u_lo = std::abs(t);
    const double mid = 0.5 * (s + u_lo);
    const double half = 0.5 * (s - u_lo);
    radial_.evaluate(state_, omega_, s, t);
    const auto& g = radial_.g;

    for (std::size_t q = 0; q < rule_.nodes.size(); ++q) {
      const double u = mid + half * rule_.nodes[q];
      double poly = 0;
      for (std::size_t p = g.size(); p-- > 0;) poly = poly * u + g[p];
      const double x = std::clamp((a - u * u) / b, -1.0, 1.0);
      legendre_all(lmax_, x, legendre_.data());
      // r1 r2 dx = u du
      const double w = rule_.weights[q] * u * poly;
      for (int l = 0; l <= lmax_; ++l) out[l] += w * legendre_[l];
    }
    const double scale = state_.norm * std::exp(-state_.mu * s) * half * 0.5;
    for (int l = 0; l <= lmax_; ++l) out[l] *= scale * (2 * l + 1);
  }

 private:
  HylleraasExpansion<double> state_;
  int lmax_;
  int omega_;
  GaussLegendre rule_;
  std::vector<double> legendre_;
  detail::RadialPolynomials radial_;
};

/// f_l by quadrature with the given node count.
inline double kernel_value_quadrature(int l, const HylleraasExpansion<double>& state,
                                      double r1, double r2,
                                      int nodes = kDefaultKernelNodes) {
  if (l < 0) throw std::invalid_argument("kernel_value_quadrature: l must be >= 0");
  KernelEvaluator eval(state, l, nodes);
  std::vector<double> out(static_cast<std::size_t>(l) + 1);
  eval.evaluate(r1, r2, out.data());
  return out[static_cast<std::size_t>(l)];
}

/// f_l bound to one state and backend.
class RadialKernel {
 public:
  RadialKernel(int l, const HylleraasExpansion<double>& state,
               KernelBackend backend = KernelBackend::quadrature,
               int nodes = kDefaultKernelNodes)
      : l_(l), state_(state), backend_(backend), nodes_(nodes) {
    if (l < 0) throw std::invalid_argument("RadialKernel: l must be >= 0");
    if (backend == KernelBackend::quadrature &&
        nodes < KernelEvaluator::min_nodes(l, detail::expansion_order(state)))
      throw std::invalid_argument("RadialKernel: node count below exactness guard");
  }

  int l() const noexcept { return l_; }
  KernelBackend backend() const noexcept { return backend_; }

  double operator()(double r1, double r2) const {
    return backend_ == KernelBackend::analytic
               ? kernel_value_analytic(l_, state_, r1, r2)
               : kernel_value_quadrature(l_, state_, r1, r2, nodes_);
  }

 private:
  int l_;
  HylleraasExpansion<double> state_;
  KernelBackend backend_;
  int nodes_;
};

}  // namespace heliox
