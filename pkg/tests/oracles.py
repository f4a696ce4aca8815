"""Independent reference computations (sympy and numpy) for cross-checks."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import sympy as sp

X, Y = sp.symbols("x y")


def to_sympy(p) -> sp.Expr:
    return sum((sp.Rational(c.numerator, c.denominator) * X ** m[0] * Y ** m[1] for m, c in p.items()),
               sp.Integer(0))


def from_sympy(expr):
    from momentlab.poly import MultiPoly

    poly = sp.Poly(sp.expand(expr), X, Y)
    return MultiPoly({m: Fraction(int(c.p), int(c.q)) for m, c in poly.terms()})


def sympy_matrix(rows) -> sp.Matrix:
    return sp.Matrix([[sp.Rational(v.numerator, v.denominator) for v in r] for r in rows])


def grlex_groebner(polys):
    """Reduced Groebner basis in graded order with ties broken by the power of y."""
    gb = sp.groebner([to_sympy(p) for p in polys], Y, X, order="grlex")
    return [from_sympy(g) for g in gb.exprs]


def grlex_reduce(p, polys):
    gb = sp.groebner([to_sympy(q) for q in polys], Y, X, order="grlex")
    return from_sympy(gb.reduce(to_sympy(p))[1])


def moment_matrix(beta) -> sp.Matrix:
    labels = [(i - j, j) for i in range(beta.n + 1) for j in range(i + 1)]
    return sp.Matrix(len(labels), len(labels), lambda a, b: sp.Rational(
        *_pq(beta.moments[(labels[a][0] + labels[b][0], labels[a][1] + labels[b][1])])))


def _pq(v: Fraction):
    return v.numerator, v.denominator


def min_eigenvalue(rows) -> float:
    a = np.array([[float(v) for v in r] for r in rows])
    return float(np.linalg.eigvalsh(a).min())


def real_roots(coeffs_low_first):
    t = sp.Symbol("t")
    poly = sp.Poly(sum(sp.Rational(c.numerator, c.denominator) * t**k for k, c in enumerate(coeffs_low_first)), t)
    return sorted(set(sp.real_roots(poly)), key=lambda r: float(r))
