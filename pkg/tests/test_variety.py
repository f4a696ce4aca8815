from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from momentlab.moments import build_moment_matrix, moments_from_atoms
from momentlab.poly import MultiPoly
from momentlab.variety import (
    NoRelations, PositiveDimensional, UnivariatePoly, VarietyPoint, compute_variety, isolate_real_roots,
    rational_root_in, residuals, solve_system, sturm_sequence, sylvester_resultant, vanishes_at, vanishes_on,
    verify_cardinality,
)

from oracles import X, Y, from_sympy, real_roots, to_sympy
from synth import eight_on_cubic, seven_on_cubic

P = MultiPoly.parse
F_EX = P("x^3 - y")
G_EX = P("y^3 - 35/4*x*y^2 + 22*x^2*y + 13/4*y^2 - 65/4*x*y + 13*x^2 - 45/4*y - 3*x")
RATIONAL_POINTS = {(-2, -8), (-1, -1), (0, 0), (Fraction(1, 2), Fraction(1, 8)), (1, 1), (2, 8)}
SQRT13 = sp.sqrt(13)
IRRATIONAL_X = [(-1 - SQRT13) / 2, (-1 + SQRT13) / 2]


@pytest.fixture(scope="module")
def worked_variety():
    return compute_variety([F_EX, G_EX])


def test_univariate_basics():
    p = UnivariatePoly([-1, 0, 1])
    q = UnivariatePoly([1, 1])
    assert p(3) == 8
    assert p.divmod(q) == (UnivariatePoly([-1, 1]), UnivariatePoly())
    assert p.gcd(q) == q
    sq = (p * p * q).squarefree()
    assert sq == p.monic()
    assert p.derivative() == UnivariatePoly([0, 2])
    assert UnivariatePoly([0, 0]).is_zero()


def test_isolation_examples():
    ivs = isolate_real_roots(UnivariatePoly([-1, 0, 1]))
    assert len(ivs) == 2
    assert ivs[0].contains(-1) and ivs[1].contains(1)
    assert isolate_real_roots(UnivariatePoly([1, 0, 1])) == []
    assert isolate_real_roots(UnivariatePoly([5])) == []
    with pytest.raises(ZeroDivisionError):
        isolate_real_roots(UnivariatePoly())


def test_isolation_roots_hit_by_bisection():
    # roots at 0 and at dyadic midpoints must not stall the bisection
    p = UnivariatePoly([0, -1, 0, 1]) * UnivariatePoly([-1, 2])
    ivs = isolate_real_roots(p)
    assert [rational_root_in(p, iv) for iv in ivs] == [-1, 0, Fraction(1, 2), 1]


@given(st.lists(st.integers(-6, 6), min_size=2, max_size=7).filter(lambda c: c[-1] != 0))
def test_isolation_matches_sympy(coeffs):
    p = UnivariatePoly(coeffs)
    ivs = isolate_real_roots(p)
    roots = real_roots([Fraction(c) for c in coeffs])
    assert len(ivs) == len(roots)
    for iv, r in zip(ivs, roots):
        assert float(iv.lo) - 1e-12 <= float(r) <= float(iv.hi) + 1e-12
    for a, b in zip(ivs, ivs[1:]):
        assert a.hi < b.lo


@given(st.lists(st.integers(-5, 5), min_size=2, max_size=6).filter(lambda c: c[-1] != 0))
def test_sturm_sequence_counts_distinct_roots(coeffs):
    p = UnivariatePoly(coeffs).squarefree()
    if p.degree < 1:
        return
    seq = sturm_sequence(p)
    assert seq[0] == p and seq[1] == p.derivative()
    assert seq[-1].degree == 0


def test_resultant_examples():
    # det [[-1, x^2], [1, -1]] = 1 - x^2, the same value sympy returns
    assert sylvester_resultant(P("x^2 - y"), P("y - 1"), "y") == UnivariatePoly([1, 0, -1])
    res = sylvester_resultant(F_EX, G_EX, "y")
    assert res.degree == 9
    assert len(isolate_real_roots(res)) == 8


@pytest.mark.parametrize("seed", range(8))
def test_resultant_matches_sympy(seed):
    rng = random.Random(seed)
    f = MultiPoly({(i, j): rng.randint(-3, 3) for i in range(3) for j in range(3 - i)})
    g = MultiPoly({(i, j): rng.randint(-3, 3) for i in range(3) for j in range(3 - i)})
    if f.degree_in(1) < 1 or g.degree_in(1) < 1:
        pytest.skip("degenerate draw")
    ours = sylvester_resultant(f, g, "y")
    ref = sp.Poly(sp.resultant(to_sympy(f), to_sympy(g), Y), X)
    ref_poly = UnivariatePoly([Fraction(int(c.p), int(c.q)) for c in reversed(ref.all_coeffs())])
    assert ours == ref_poly


def test_solve_simple_systems():
    pts = solve_system([P("x"), P("y")])
    assert [p.coords() for p in pts] == [(0, 0)]
    assert solve_system([P("x^2 - y"), P("x^2 + y + 1")]) == []
    with pytest.raises(NoRelations):
        solve_system([MultiPoly()])
    with pytest.raises(PositiveDimensional):
        solve_system([P("x*y - x"), P("x^2*y - x^2")])


def test_worked_example_points(worked_variety):
    pts = worked_variety.points
    assert len(pts) == 8
    exact = {p.coords() for p in pts if p.is_rational}
    assert exact == {(Fraction(a), Fraction(b)) for a, b in RATIONAL_POINTS}
    irr = [p.refined(Fraction(1, 10**30)) for p in pts if not p.is_rational]
    assert len(irr) == 2
    for p, x in zip(sorted(irr, key=lambda p: p.x.mid), IRRATIONAL_X):
        assert abs(float(p.x.mid - sp.Rational(sp.N(x, 60)))) < 1e-25
        assert abs(float(p.y.mid - sp.Rational(sp.N(x**3, 60)))) < 1e-25
        assert p.radius <= Fraction(1, 10**30)


def test_worked_example_points_from_sympy(worked_variety):
    # projection completeness: every real root of the eliminant is some point's abscissa
    real_x = sp.Poly(sp.resultant(to_sympy(F_EX), to_sympy(G_EX), Y), X).real_roots()
    xs = sorted(set(real_x), key=float)
    got = sorted(worked_variety.points, key=lambda p: p.x.mid)
    assert len(xs) == len(got)
    for r, p in zip(xs, got):
        assert p.x.contains(sp.Rational(sp.N(r, 40))) or abs(float(p.x.mid) - float(r)) < 1e-12


def test_worked_example_cardinality(worked_variety):
    rep = verify_cardinality(worked_variety.points, [F_EX, G_EX])
    assert rep.relation_quotient_dim == 9
    assert rep.radical_quotient_dim == 8
    assert rep.card == 8 and rep.complete and rep.boxes_disjoint
    assert worked_variety.all_points_real


def test_cardinality_examples():
    assert verify_cardinality(solve_system([P("x"), P("y")]), [P("x"), P("y")]).card == 1
    rels = [P("x^2 - 1"), P("y")]
    rep = verify_cardinality(solve_system(rels), rels)
    assert rep.card == 2 and rep.complete
    rels = [P("x^2 + 1"), P("y")]
    rep = verify_cardinality(solve_system(rels), rels)
    assert rep.card == 0 and rep.nonreal_points == 2 and not rep.complete


def test_boxes_disjoint_and_residuals(worked_variety):
    pts = worked_variety.points
    for a, b in combinations(pts, 2):
        assert not (a.x.overlaps(b.x) and a.y.overlaps(b.y))
    for r in residuals(F_EX, pts) + residuals(G_EX, pts):
        assert r.contains_zero()


def test_exact_vanishing_at_irrational_points(worked_variety):
    pts = worked_variety.points
    s2 = P("x^2*y^2 + 1/2*x*y^2 - x^2*y - 17/2*y^2 + 43/2*x*y - 14*x^2 - 11/2*y + 6*x")
    assert vanishes_on(F_EX, pts) and vanishes_on(G_EX, pts) and vanishes_on(s2, pts)
    irr = [p for p in pts if not p.is_rational]
    assert all(vanishes_at(P("x^2 + x - 3"), p) for p in irr)
    assert not any(vanishes_at(P("x^2 + x - 3 + 1/100000000000000000000"), p)
                   for p in irr)
    h_printed = P("x^4 + 6*x - 11/2*y - 14*x^2 + 43/2*x*y - 17/2*y^2 - x^2*y + 1/2*x*y^2")
    assert not vanishes_on(h_printed, pts)


def test_swapped_points(worked_variety):
    for p in worked_variety.points:
        q = p.swapped()
        assert q.x == p.y and q.y == p.x
        assert vanishes_at(F_EX.swap_variables(), q)


def test_rational_point_constructor():
    p = VarietyPoint.rational(1, 2, [P("x - 1"), P("y - 3")])
    assert p.is_rational and p.coords() == (1, 2)
    assert [r.lo for r in p.residuals] == [0, -1]
    d = p.to_dict()
    assert d["x"]["exact"] == "1" and d["y"]["rad"] == "0"


@pytest.mark.parametrize("seed", range(10))
def test_planted_atoms_recovered(seed):
    rng = random.Random(seed)
    atoms = eight_on_cubic(rng) if seed % 2 else seven_on_cubic(rng)
    beta = moments_from_atoms(atoms, [1] * len(atoms), 3)
    mm = build_moment_matrix(beta)
    vr = compute_variety(mm.relations)
    assert {p.coords() for p in vr.points} == set(atoms)
    assert vr.all_points_real


@pytest.mark.parametrize("seed", range(6))
def test_real_solutions_match_sympy(seed):
    rng = random.Random(100 + seed)
    f = MultiPoly({(i, j): rng.randint(-4, 4) for i in range(3) for j in range(3 - i)})
    g = MultiPoly({(i, j): rng.randint(-4, 4) for i in range(3) for j in range(3 - i)})
    try:
        ours = solve_system([f, g])
    except PositiveDimensional:
        pytest.skip("common component")
    sols = sp.solve([to_sympy(f), to_sympy(g)], [X, Y], dict=True)
    real = [s for s in sols if all(sp.im(sp.N(v, 30)) == 0 for v in s.values()) and len(s) == 2]
    ref = {(round(float(sp.re(s[X])), 8), round(float(sp.re(s[Y])), 8)) for s in real}
    got = {(round(float(p.x.mid), 8), round(float(p.y.mid), 8)) for p in ours}
    assert got == ref


def test_from_sympy_round_trip():
    assert from_sympy(to_sympy(G_EX)) == G_EX
