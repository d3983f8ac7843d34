"""Independent reference values for the unit tests.

Six-dimensional integrals are done exactly with sympy in (r1, r2, r12)
coordinates, where the volume element is 8 pi^2 r1 r2 r12.  Kernels and
angular moments are one-dimensional mpmath quadratures in cos(theta).
Run: python3 oracle_values.py
"""
import sympy as sp
from mpmath import mp, mpf, quad, exp, sqrt, legendre, cos, sin, pi

mp.dps = 30

MU = sp.Rational(9, 5)
# terms of order <= 2 in (n, m, p) lexicographic order
TERMS = [(0, 0, 0), (0, 0, 1), (0, 0, 2), (0, 2, 0), (1, 0, 0), (1, 0, 1), (2, 0, 0)]
COEFFS = [1, sp.Rational(3, 10), sp.Rational(-1, 20), sp.Rational(1, 50),
          sp.Rational(-1, 10), sp.Rational(1, 25), sp.Rational(1, 100)]

r1, r2, u = sp.symbols("r1 r2 u", positive=True)


def six_dim(poly, mu):
    """8 pi^2 int r1 r2 u poly exp(-2 mu (r1+r2)), using symmetry in r1 <-> r2."""
    f = sp.expand(8 * sp.pi**2 * r1 * r2 * u * poly)
    inner = sp.integrate(f, (u, r1 - r2, r1 + r2))  # region r2 < r1
    inner = sp.integrate(sp.expand(inner) * sp.exp(-2 * mu * r2), (r2, 0, r1))
    outer = sp.integrate(sp.expand(inner) * sp.exp(-2 * mu * r1), (r1, 0, sp.oo))
    # every basis term has an even power of r1 - r2, so the other half is equal
    return sp.simplify(2 * outer)


def term(n, m, p):
    return (r1 + r2) ** n * (r1 - r2) ** m * u**p


def overlap(ti, tj, mu):
    return six_dim(term(*ti) * term(*tj), mu)


def psi_poly():
    return sum(c * term(*t) for c, t in zip(COEFFS, TERMS))


MU_F = mpf(9) / 5
COEFFS_F = [mpf(1), mpf("0.3"), mpf("-0.05"), mpf("0.02"), mpf("-0.1"), mpf("0.04"), mpf("0.01")]


def poly_x(a, b, x):
    s, t = a + b, a - b
    w = sqrt(max(a * a + b * b - 2 * a * b * x, 0))
    return sum(c * s**n * t**m * w**p for c, (n, m, p) in zip(COEFFS_F, TERMS))


def kernel(l, a, b, norm):
    g = lambda x: poly_x(a, b, x) * legendre(l, x)
    return norm * a * b * (2 * l + 1) / 2 * exp(-MU_F * (a + b)) * quad(g, [-1, 1])


def theta_integral(k, p, a, b):
    f = lambda th: sin(th) * cos(th) ** k * (a * a + b * b - 2 * a * b * cos(th)) ** (mpf(p) / 2)
    return quad(f, [0, pi])


if __name__ == "__main__":
    ov = overlap((1, 2, 1), (0, 0, 1), sp.Rational(4, 5))
    print("overlap (1,2,1)x(0,0,1) mu=0.8:", sp.N(ov, 20))
    print("overlap (0,0,0)x(0,0,0) mu=1:", sp.N(overlap((0, 0, 0), (0, 0, 0), 1), 20))
    G = six_dim(sp.expand(psi_poly() ** 2), MU)
    C = mpf(str(sp.N(1 / sp.sqrt(G), 40)))
    print("norm C:", mp.nstr(C, 20))
    for a, b in [("0.7", "1.3"), ("0.5", "0.5"), ("2.0", "0.4")]:
        for l in range(4):
            print(f"f_{l}({a},{b}):", mp.nstr(kernel(l, mpf(a), mpf(b), C), 20))
    for k, p, a, b in [(0, 1, "0.9", "1.0"), (3, 3, "0.9", "1.0"), (2, 5, "0.3", "2.0"), (4, 1, "1.2", "0.2")]:
        print(f"I({k},{p};{a},{b}):", mp.nstr(theta_integral(k, p, mpf(a), mpf(b)), 20))
