#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "heliox/basis.hpp"
#include "heliox/quadrature.hpp"

using namespace heliox;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Nested Gauss-Legendre over 0 <= t <= u <= s with a composite rule in s
// truncated at s = 80/alpha.
double brute_force_integral(int a, int b, int c, double alpha) {
  const auto rule = gauss_legendre(24);
  const double s_max = 80 / alpha;
  const int panels = 60;
  const double h = s_max / panels;
  double total = 0;
  for (int k = 0; k < panels; ++k) {
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double s = h * (k + 0.5 * (rule.nodes[i] + 1));
      double inner_u = 0;
      for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const double u = 0.5 * s * (rule.nodes[j] + 1);
        double inner_t = 0;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
          const double t = 0.5 * u * (rule.nodes[q] + 1);
          inner_t += rule.weights[q] * std::pow(t, c);
        }
        inner_u += rule.weights[j] * std::pow(u, b) * 0.5 * u * inner_t;
      }
      total += rule.weights[i] * std::exp(-alpha * s) * std::pow(s, a) * 0.5 * s * inner_u;
    }
  }
  return 0.5 * h * total;
}

}  // namespace

TEST_CASE("term counts follow the parity-restricted simplex", "[basis]") {
  CHECK(term_count(0) == 1);
  CHECK(term_count(6) == 50);
  CHECK(term_count(10) == 161);
  CHECK(term_count(14) == 372);
  for (int omega : {0, 1, 2, 5, 6, 9, 12})
    CHECK(enumerate_terms(omega).size() == term_count(omega));
}

TEST_CASE("enumerated terms are sorted, unique and in range", "[basis]") {
  const auto terms = enumerate_terms(8);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    CHECK(terms[i].m % 2 == 0);
    CHECK(terms[i].order() <= 8);
    if (i > 0) CHECK(terms[i - 1] < terms[i]);
  }
  const auto zero = enumerate_terms(0);
  REQUIRE(zero.size() == 1);
  CHECK(zero[0] == BasisTerm{0, 0, 0});
  CHECK_THROWS_AS(enumerate_terms(-1), std::invalid_argument);
  CHECK_THROWS_AS(term_count(-3), std::invalid_argument);
}

TEST_CASE("base integral closed values", "[basis]") {
  CHECK_THAT(base_integral(0, 0, 0, 2.0), WithinRel(1.0 / 8, 1e-15));
  CHECK_THAT(base_integral(1, 0, 0, 2.0), WithinRel(3.0 / 16, 1e-15));
  CHECK_THAT(base_integral(0, 0, 0, 1.0), WithinRel(1.0, 1e-15));
  // 7! / (3 * 5 * 2^8)
  CHECK_THAT(base_integral(2, 1, 2, 2.0), WithinRel(5040.0 / (3 * 5 * 256), 1e-15));
}

TEST_CASE("base integral agrees with brute-force quadrature", "[basis][property]") {
  for (double alpha : {1.0, 2.0, 4.0})
    for (int a = 0; a <= 4; ++a)
      for (int b = 0; b <= 4; ++b)
        for (int c = 0; c <= 4; ++c) {
          INFO("a=" << a << " b=" << b << " c=" << c << " alpha=" << alpha);
          CHECK_THAT(base_integral(a, b, c, alpha),
                     WithinRel(brute_force_integral(a, b, c, alpha), 1e-8));
        }
}

TEST_CASE("base integral rejects bad input and overflow", "[basis]") {
  CHECK_THROWS_AS(base_integral(-1, 0, 0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(base_integral(0, 0, 0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(base_integral(0, 0, 0, -2.0), std::invalid_argument);
  CHECK_THROWS_AS(base_integral(400, 0, 0, 0.01), std::range_error);
  CHECK_NOTHROW(base_integral<long double>(400, 0, 0, 0.01L));
}

TEST_CASE("overlap elements match direct integration over r1, r2, r12", "[basis]") {
  // reference values from tests/oracle/oracle_values.py
  CHECK_THAT(overlap_element<double>({0, 0, 0}, {0, 0, 0}, 1.0),
             WithinRel(std::numbers::pi * std::numbers::pi, 1e-14));
  CHECK_THAT(overlap_element<double>({1, 2, 1}, {0, 0, 1}, 0.8),
             WithinRel(10340.758553916149257, 1e-12));
}

TEST_CASE("matrix elements are symmetric", "[basis]") {
  const auto terms = enumerate_terms(4);
  for (const auto& a : terms)
    for (const auto& b : terms) {
      const double s_ab = overlap_element<double>(a, b, 1.3);
      const double s_ba = overlap_element<double>(b, a, 1.3);
      CHECK_THAT(s_ab, WithinRel(s_ba, 1e-14));
      const double h_ab = hamiltonian_element<double>(a, b, 1.3, 2.0);
      const double h_ba = hamiltonian_element<double>(b, a, 1.3, 2.0);
      CHECK_THAT(h_ab, WithinAbs(h_ba, 1e-12 * (1 + std::abs(h_ab))));
    }
}

TEST_CASE("single-term Rayleigh quotient is mu^2 - 2 Z mu + 5 mu / 8", "[basis][property]") {
  const BasisTerm one{0, 0, 0};
  for (double charge : {1.0, 2.0, 3.5})
    for (int i = 0; i <= 50; ++i) {
      const double mu = 0.5 + 2.5 * i / 50;
      const double quotient = hamiltonian_element<double>(one, one, mu, charge) /
                              overlap_element<double>(one, one, mu);
      INFO("Z=" << charge << " mu=" << mu);
      CHECK_THAT(quotient, WithinAbs(mu * mu - 2 * charge * mu + 5 * mu / 8, 1e-10));
    }
}

TEST_CASE("kinetic and potential pieces add up to the hamiltonian", "[basis]") {
  const BasisTerm a{1, 2, 0}, b{0, 0, 3};
  const double h = hamiltonian_element<double>(a, b, 1.7, 2.0);
  const double parts =
      kinetic_element<double>(a, b, 1.7) + potential_element<double>(a, b, 1.7, 2.0);
  CHECK_THAT(h, WithinRel(parts, 1e-14));
  // single term: <T> = mu^2, <V> = -2 Z mu + 5 mu / 8 per unit norm
  const BasisTerm one{0, 0, 0};
  const double s = overlap_element<double>(one, one, 1.7);
  CHECK_THAT(kinetic_element<double>(one, one, 1.7) / s, WithinRel(1.7 * 1.7, 1e-13));
}

TEST_CASE("matrix pair matches element-wise evaluation", "[basis]") {
  const auto terms = enumerate_terms(3);
  const auto pair = build_matrix_pair<double>(terms, 1.4, 2.0);
  for (std::size_t i = 0; i < terms.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      CHECK_THAT(pair.S(i, j), WithinRel(overlap_element<double>(terms[i], terms[j], 1.4), 1e-13));
      CHECK_THAT(pair.H(i, j), WithinAbs(hamiltonian_element<double>(terms[i], terms[j], 1.4, 2.0),
                                         1e-12 * (1 + std::abs(pair.H(i, j)))));
    }
  const auto ops = build_operator_matrices<double>(terms, 1.4);
  for (std::size_t i = 0; i < terms.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j)
      CHECK_THAT(ops.T(i, j) + ops.R(i, j) - 2.0 * ops.N(i, j),
                 WithinAbs(pair.H(i, j), 1e-12 * (1 + std::abs(pair.H(i, j)))));
  CHECK_THROWS_AS(build_matrix_pair<double>(terms, 0.0, 2.0), std::invalid_argument);
}

TEST_CASE("unit-overlap rescaling", "[basis]") {
  auto pair = build_matrix_pair<double>(enumerate_terms(4), 1.2, 2.0);
  const auto original = pair;
  const auto d = rescale_to_unit_overlap(pair);
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(pair.S(i, i) == 1.0);
    CHECK_THAT(d[i], WithinRel(1 / std::sqrt(original.S(i, i)), 1e-15));
  }
  CHECK_THAT(pair.H(3, 1), WithinRel(original.H(3, 1) * d[3] * d[1], 1e-15));
}

TEST_CASE("normalisation constant", "[basis]") {
  auto state = make_expansion<double>(2.0, 0, 1.6875, {1.0});
  const double c = norm_constant(state);
  // (mu^3 / pi) for a pure exponential
  CHECK_THAT(c, WithinRel(std::pow(1.6875, 3) / std::numbers::pi, 1e-14));

  std::vector<double> coeffs{1, 0.3, -0.05, 0.02, -0.1, 0.04, 0.01};
  auto general = make_expansion<double>(2.0, 2, 1.8, coeffs);
  const double c1 = norm_constant(general);
  // reference value from tests/oracle/oracle_values.py
  CHECK_THAT(c1, WithinRel(1.4845534793599940206, 1e-12));
  for (double& x : general.coeffs) x *= 3;
  CHECK_THAT(norm_constant(general), WithinRel(c1 / 3, 1e-14));

  auto zero = make_expansion<double>(2.0, 1, 1.0, {0.0, 0.0, 0.0});
  CHECK_THROWS_AS(norm_constant(zero), std::invalid_argument);
  CHECK_THROWS_AS(make_expansion<double>(2.0, 1, 1.0, {1.0}), std::invalid_argument);
}

TEST_CASE("wavefunction evaluation", "[basis]") {
  auto state = make_expansion<double>(2.0, 1, 1.5, {1.0, 0.5, 0.0});  // 1, u, s
  state.norm = 2.0;
  // r1 = 1, r2 = 1, cos = 0: u = sqrt(2)
  CHECK_THAT(wavefunction_value(state, 1.0, 1.0, 0.0),
             WithinRel(2.0 * std::exp(-3.0) * (1 + 0.5 * std::sqrt(2.0)), 1e-14));
  CHECK_THAT(wavefunction_value(state, 1.0, 1.0, 1.0), WithinRel(2.0 * std::exp(-3.0), 1e-14));
  CHECK_THROWS_AS(wavefunction_value(state, 1.0, 1.0, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(wavefunction_value(state, -1.0, 1.0, 0.0), std::invalid_argument);
}
