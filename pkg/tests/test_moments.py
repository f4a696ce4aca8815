from __future__ import annotations

import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from momentlab.linalg import psd_check
from momentlab.moments import (
    DegreeOverflow, DegreeTooHigh, IncompleteSequence, LengthMismatch, MomentFormatError, MomentSequence,
    NonpositiveDensity, NotExtremal, all_indices, build_moment_matrix, certify_nonsingular,
    check_consistency_generators, check_recursive, check_weak_consistency, label, moments_from_atoms, riesz,
    vandermonde,
)
from momentlab.poly import MultiPoly, monomials_up_to
from momentlab.variety import VarietyPoint, compute_variety

from oracles import moment_matrix
from synth import eight_on_cubic, instance

P = MultiPoly.parse
F_EX = P("x^3 - y")
G_EX = P("y^3 - 35/4*x*y^2 + 22*x^2*y + 13/4*y^2 - 65/4*x*y + 13*x^2 - 45/4*y - 3*x")
G_PRINTED = P("y^3 - 3*x + 3/4*y + 13*x^2 - 65/4*x*y + 13/4*y^2 - 12*x^3 + 22*x^2*y - 35/4*x*y^2")
H_PRINTED = P("x^4 + 6*x - 11/2*y - 14*x^2 + 43/2*x*y - 17/2*y^2 - x^2*y + 1/2*x*y^2")

small = st.fractions(min_value=-4, max_value=4, max_denominator=3)
atom_lists = st.integers(1, 9).flatmap(
    lambda k: st.tuples(
        st.lists(st.tuples(small, small), min_size=k, max_size=k, unique=True),
        st.lists(st.fractions(min_value=Fraction(1, 4), max_value=4, max_denominator=4), min_size=k, max_size=k),
    )
)


def polys(degree):
    return st.dictionaries(st.sampled_from(monomials_up_to(degree)), small, max_size=6).map(MultiPoly)


def test_point_mass_matrix():
    beta = moments_from_atoms([(1, 1)], [1], 1)
    mm = build_moment_matrix(beta)
    assert mm.matrix.to_lists() == [[1] * 3] * 3
    assert mm.rank == 1
    assert list(mm.relations) == [P("x - 1"), P("y - 1")]
    rep = check_recursive(mm)
    assert rep.ok and rep.checked == 0


def test_zero_sequence_rank_zero():
    beta = MomentSequence(3, {m: 0 for m in all_indices(3)})
    assert build_moment_matrix(beta).rank == 0


def test_worked_example_matrix(worked_beta):
    mm = build_moment_matrix(worked_beta)
    assert mm.rank == 8
    assert psd_check(mm.matrix).is_psd
    assert list(mm.relations) == [F_EX, G_EX]
    # the printed second relation differs from ours by a multiple of the first
    assert G_PRINTED == G_EX - 12 * F_EX
    assert mm.is_relation(G_PRINTED)
    assert check_recursive(mm).ok
    assert [label(mm.labels[c]) for c in mm.basis_columns] == ["1", "X", "Y", "X^2", "X*Y", "Y^2", "X^2*Y", "X*Y^2"]
    assert mm.matrix.to_lists() == [[Fraction(str(v)) for v in row] for row in moment_matrix(worked_beta).tolist()]


def test_riesz_examples(worked_beta):
    assert riesz(worked_beta, MultiPoly()) == 0
    assert riesz(worked_beta, H_PRINTED) == Fraction(-320081, 256)
    assert riesz(moments_from_atoms([(1, 2)], [1], 1), P("x*y")) == 2
    with pytest.raises(DegreeTooHigh):
        riesz(worked_beta, P("x^7"))


def test_moments_from_atoms_examples():
    beta = moments_from_atoms([(0, 0)], [5], 2)
    assert beta.mass == 5 and all(v == 0 for m, v in beta.moments.items() if m != (0, 0))
    beta = moments_from_atoms([(1, 1), (-1, -1)], [1, 1], 1)
    assert [beta[m] for m in all_indices(1)] == [2, 0, 0, 2, 2, 2]
    with pytest.raises(LengthMismatch):
        moments_from_atoms([(0, 0)], [1, 2], 1)
    with pytest.raises(NonpositiveDensity):
        moments_from_atoms([(0, 0)], [0], 1)


def test_json_round_trip(worked_beta):
    text = worked_beta.to_json()
    assert MomentSequence.from_json(text) == worked_beta
    data = json.loads(text)
    assert data["n"] == 3 and len(data["moments"]) == 28
    assert all(isinstance(v, str) for v in data["moments"].values())


def test_missing_indices_are_all_listed():
    data = {"n": 1, "moments": {"0,0": "1", "1,0": "0"}}
    with pytest.raises(IncompleteSequence) as exc:
        MomentSequence.from_dict(data)
    assert "(0,1), (2,0), (1,1), (0,2)" in str(exc.value)
    with pytest.raises(IncompleteSequence):
        MomentSequence(0, {(0, 0): 1, (1, 0): 1})


@pytest.mark.parametrize("text, fragment", [
    ("{", "line 1"),
    ("[]", "top level"),
    ('{"n": 1}', "expected keys"),
    ('{"n": -1, "moments": {}}', "nonnegative"),
    ('{"n": 0, "moments": {"a": "1"}}', "'i,j'"),
    ('{"n": 0, "moments": {"0,0": 0.5}}', "strings"),
    ('{"n": 0, "moments": {"0,0": "1/0"}}', "cannot parse"),
])
def test_json_errors(text, fragment):
    with pytest.raises(MomentFormatError) as exc:
        MomentSequence.from_json(text)
    assert fragment in str(exc.value)


def test_truncate_swap_scale(worked_beta):
    b1 = worked_beta.truncate(1)
    assert b1.n == 1 and len(b1.moments) == 6
    assert worked_beta.swapped().swapped() == worked_beta
    assert worked_beta.swapped()[(0, 1)] == worked_beta[(1, 0)]
    assert (worked_beta + worked_beta) == worked_beta.scaled(2)


@given(atom_lists, polys(3), polys(3))
def test_matrix_identity(data, p, q):
    atoms, rho = data
    beta = moments_from_atoms(atoms, rho, 3)
    mm = build_moment_matrix(beta)
    assert mm.inner(p, q) == riesz(beta, p * q)


@given(atom_lists, polys(6), polys(6), small)
def test_riesz_linearity(data, p, q, a):
    beta = moments_from_atoms(*data, 3)
    assert riesz(beta, p * a + q) == a * riesz(beta, p) + riesz(beta, q)


@given(atom_lists)
def test_measure_closure_and_support(data):
    atoms, rho = data
    beta = moments_from_atoms(atoms, rho, 3)
    mm = build_moment_matrix(beta)
    assert psd_check(mm.matrix).is_psd
    assert mm.rank <= len(atoms)
    assert check_recursive(mm).ok
    assert check_consistency_generators(beta, list(mm.relations), [6 - r.degree for r in mm.relations]).ok
    for r in mm.relations:
        assert all(r.evaluate(x, y) == 0 for x, y in atoms)


def test_recursiveness_violation_detected():
    atoms = [(0, 0), (0, 1), (0, -1), (1, 0), (1, 2), (1, -1), (0, 2), (1, 3)]
    beta = moments_from_atoms(atoms, [1] * len(atoms), 3)
    assert check_recursive(build_moment_matrix(beta)).ok
    bumped = dict(beta.moments)
    bumped[(6, 0)] += 1
    mm = build_moment_matrix(MomentSequence(3, bumped))
    assert mm.is_relation(P("x^2 - x"))
    assert not mm.is_relation(P("x^3 - x^2"))
    rep = check_recursive(mm)
    assert not rep.ok
    assert (P("x^2 - x"), (1, 0)) in rep.violations


def _pts(*coords):
    return [VarietyPoint.rational(x, y) for x, y in coords]


def test_vandermonde_examples():
    sl = vandermonde(_pts((0, 0), (1, 1)), [(1, 0), (0, 0)])
    assert sl.monomials == ((0, 0), (1, 0))
    assert sl.exact.to_lists() == [[1, 0], [1, 1]]
    assert certify_nonsingular(_pts((0, 0), (1, 1)), [(0, 0), (1, 0)]).status == "nonsingular"
    dup = certify_nonsingular(_pts((1, 2), (1, 2)), [(0, 0), (1, 0)])
    assert dup.status == "singular" and dup.value == 0
    with pytest.raises(ValueError):
        vandermonde(_pts((0, 0)), [])


def test_weak_consistency_worked_example(worked_beta):
    mm = build_moment_matrix(worked_beta)
    vr = compute_variety(mm.relations)
    res = check_weak_consistency(mm, vr.points)
    assert res.ok is True
    assert res.certificate.method == "interval"
    assert res.basis == mm.basis
    with pytest.raises(NotExtremal):
        check_weak_consistency(mm, vr.points[:7])


def test_weak_consistency_quotient_fallback(worked_beta):
    mm = build_moment_matrix(worked_beta)
    vr = compute_variety(mm.relations)
    # x^4 = x*y on V, so this slice is singular; intervals cannot show it, the quotient ring can
    bad_basis = list(mm.basis[:-1]) + [(4, 0)]
    cert = certify_nonsingular(vr.points, bad_basis, precision_cap=256)
    assert cert.status == "indeterminate"
    cert = certify_nonsingular(vr.points, bad_basis, precision_cap=256, quotient=vr.quotient)
    assert cert.status == "singular" and cert.method == "quotient"


def test_weak_consistency_point_mass():
    beta = moments_from_atoms([(3, -1)], [2], 1)
    mm = build_moment_matrix(beta)
    res = check_weak_consistency(mm, _pts((3, -1)))
    assert res.ok is True and res.basis == ((0, 0),)


def test_consistency_generators_examples(worked_beta):
    mm = build_moment_matrix(worked_beta)
    rep = check_consistency_generators(worked_beta, list(mm.relations), 3)
    assert rep.ok and len(rep.checks) == 20
    rep = check_consistency_generators(worked_beta, [H_PRINTED], [2])
    first = rep.violations[0]
    assert first.multiplier == (0, 0) and first.value == Fraction(-320081, 256)
    with pytest.raises(DegreeOverflow):
        check_consistency_generators(worked_beta, [H_PRINTED], 3)
    with pytest.raises(LengthMismatch):
        check_consistency_generators(worked_beta, [H_PRINTED], [1, 2])


@pytest.mark.parametrize("seed", range(5))
def test_genuine_measure_passes_auxiliary_battery(seed):
    rng = random.Random(seed)
    atoms = eight_on_cubic(rng)
    beta = moments_from_atoms(atoms, [Fraction(rng.randint(1, 5)) for _ in atoms], 3)
    mm = build_moment_matrix(beta)
    vr = compute_variety(mm.relations)
    q = vr.quotient
    gens = []
    for lead in [(4, 0), (3, 1), (2, 2), (1, 3), (0, 4)]:
        m = MultiPoly.monomial(lead)
        gens.append(m - q.nf(m))
    assert check_consistency_generators(beta, gens, 2).ok


def test_synthetic_instances_are_psd():
    rng = random.Random(3)
    for _ in range(10):
        _, _, beta = instance(rng)
        mm = build_moment_matrix(beta)
        assert psd_check(mm.matrix).is_psd and mm.rank <= 8
