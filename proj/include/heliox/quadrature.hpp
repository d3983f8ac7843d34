#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace heliox {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point rule by Newton iteration on P_n; exact for polynomials of
/// degree <= 2n - 1.
inline GaussLegendre gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  // P_n(x) and P_n'(x)
  auto eval = [n](double x) {
    double p0 = 1, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    return std::pair{p1, n * (x * p1 - p0) / (x * x - 1)};
  };
  GaussLegendre rule{std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = eval(x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = eval(x).second;
    const double w = 2 / ((1 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0;
  return rule;
}

/// P_0(x) .. P_lmax(x) by the upward three-term recurrence.
inline void legendre_all(int lmax, double x, double* out) {
  out[0] = 1;
  if (lmax >= 1) out[1] = x;
  for (int l = 2; l <= lmax; ++l)
    out[l] = ((2 * l - 1) * x * out[l - 1] - (l - 1) * out[l - 2]) / l;
}

inline double legendre_p(int l, double x) {
  if (l < 0) throw std::invalid_argument("legendre_p: l must be >= 0");
  std::vector<double> p(static_cast<std::size_t>(l) + 1);
  legendre_all(l, x, p.data());
  return p[static_cast<std::size_t>(l)];
}

}  // namespace heliox
