"""Decision procedure for extremal sextic moment problems.

For ``M(3)`` positive semidefinite with ``M(2)`` invertible and rank
``r`` equal to the number ``v`` of points in the variety, a representing
measure exists exactly when every polynomial of degree at most 6 that
vanishes on the variety has zero Riesz value.  Checking that directly is
replaced here by a finite battery: the column relations with multipliers of
degree at most 3, plus one auxiliary quartic per basis case with multipliers
of degree at most 2.  Which quartics are needed depends on which cubic
columns are independent, so the six rank-8 and four rank-7 basis patterns
are told apart first.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Sequence

import mpmath

from .linalg import (
    LinAlgError, RatMatrix, as_fraction, kernel_basis, psd_check, solve_linear, PsdCertificate,
)
from .moments import (
    DEFAULT_PRECISION_CAP, ConsistencyCheck, ConsistencyReport, MomentMatrix, MomentSequence,
    WeakConsistencyResult, build_moment_matrix, check_consistency_generators, check_recursive,
    check_weak_consistency, label, riesz, vandermonde,
)
from .poly import Monomial, MultiPoly, format_monomial, monomials_up_to
from .variety import (
    DEFAULT_TOL, PositiveDimensional, VarietyPoint, VarietyResult, compute_variety,
    residuals, vanishes_on,
)


class SolverError(ValueError):
    pass


class M2Singular(SolverError):
    pass


class RankOutOfRange(SolverError):
    pass


class VandermondeSingular(SolverError):
    pass


class ReconstructionFailed(SolverError):
    pass


class SingularSystem(SolverError):
    pass


class Verdict(str, Enum):
    MEASURE_EXISTS = "MeasureExists"
    NO_MEASURE = "NoMeasure"
    OUT_OF_SCOPE = "OutOfScope"
    INDETERMINATE = "Indeterminate"

    @property
    def exit_code(self) -> int:
        return {"MeasureExists": 0, "NoMeasure": 1, "OutOfScope": 2, "Indeterminate": 3}[self.value]


INFINITE = None  # variety cardinality when the variety is a curve


# ---------------------------------------------------------------------------
# classification by rank and variety size


@dataclass(frozen=True)
class Classification:
    r: int
    v: int | None  # None means infinite
    extremal: bool
    max_extension: str  # "M(4)", "M(5)", "M(6)" or "N/A"
    feasibility: str  # "possible", "impossible", "no measure"
    in_scope: bool
    note: str

    def describe(self) -> str:
        vs = "inf" if self.v is None else str(self.v)
        head = f"r={self.r}, v={vs}"
        if self.feasibility == "impossible":
            return f"{head}, impossible"
        if self.feasibility == "no measure":
            return f"{head}, {self.note}"
        parts = [head]
        if self.extremal:
            parts.append("extremal")
        if self.max_extension != "N/A":
            parts.append(f"max extension {self.max_extension}")
        if not self.in_scope:
            parts.append("out of solver scope")
        return ", ".join(parts)

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "v": "inf" if self.v is None else self.v,
            "extremal": self.extremal,
            "max_extension": self.max_extension,
            "feasibility": self.feasibility,
            "in_scope": self.in_scope,
            "description": self.describe(),
        }


# (r, v) -> max extension; None is an infinite variety
_TABLE = {
    (7, 7): "M(4)",
    (7, 8): "M(5)",
    (7, 9): "M(6)",
    (7, None): "N/A",
    (8, 8): "M(4)",
    (8, 9): "M(5)",
    (8, None): "N/A",
    (9, 9): "N/A",
    (9, None): "N/A",
    (10, None): "N/A",
}


def classify(r: int, v: int | None) -> Classification:
    """Place ``(rank, card V)`` in the sextic classification table."""
    if r < 7:
        return Classification(r, v, False, "N/A", "possible", False,
                              "rank below 7 (M(2) singular or quartic-type case)")
    if r > 10:
        raise RankOutOfRange(f"rank {r} exceeds the size of M(3)")
    if v is not None and v < r:
        return Classification(r, v, False, "N/A", "no measure", False,
                              "variety condition fails (v < r)")
    if (r, v) == (9, 9):
        return Classification(r, v, True, "N/A", "impossible", False,
                              "a single cubic relation has an infinite zero set")
    if (r, v) not in _TABLE:
        return Classification(r, v, False, "N/A", "impossible", False,
                              "cannot occur: too many common zeros for the relations")
    ext = _TABLE[(r, v)]
    extremal = v == r
    return Classification(r, v, extremal, ext, "possible", extremal and r in (7, 8),
                          "extremal" if extremal else "out of solver scope")


# ---------------------------------------------------------------------------
# basis cases

X3, X2Y, XY2, Y3 = (3, 0), (2, 1), (1, 2), (0, 3)
_LOW = tuple(monomials_up_to(2))

_CASES = {
    # rank 7
    frozenset({X3}): ("B1", ((4, 0),), None),
    frozenset({X2Y}): ("B2", (), None),
    frozenset({XY2}): ("B3", (), None),
    frozenset({Y3}): ("B4", ((0, 4),), "B1"),
    # rank 8
    frozenset({X3, X2Y}): ("𝔅1", ((4, 0), (3, 1)), None),
    frozenset({X3, XY2}): ("𝔅2", ((4, 0),), None),
    frozenset({X3, Y3}): ("𝔅3", ((4, 0), (0, 4)), None),
    frozenset({X2Y, XY2}): ("𝔅4", ((2, 2), (4, 0)), None),
    frozenset({X2Y, Y3}): ("𝔅5", ((0, 4),), "𝔅2"),
    frozenset({XY2, Y3}): ("𝔅6", ((0, 4), (1, 3)), "𝔅1"),
}


@dataclass(frozen=True)
class BasisCase:
    rank: int
    tag: str
    monomials: tuple[Monomial, ...]
    auxiliary_leads: tuple[Monomial, ...]
    swap_to: str | None = None  # handled by exchanging x and y first

    @property
    def needs_swap(self) -> bool:
        return self.swap_to is not None

    def to_dict(self) -> dict:
        d = {
            "rank": self.rank,
            "tag": self.tag,
            "monomials": [label(m) for m in self.monomials],
            "auxiliary_leads": [format_monomial(m) for m in self.auxiliary_leads],
        }
        if self.swap_to:
            d["swap_to"] = self.swap_to
        return d


def m2_certificate(mm: MomentMatrix) -> PsdCertificate:
    return psd_check(mm.block(2))


def choose_basis_case(mm: MomentMatrix) -> BasisCase:
    """Identify the basis case from the greedy column basis of ``M(3)``."""
    if mm.n != 3:
        raise RankOutOfRange(f"basis cases are defined for M(3), got M({mm.n})")
    cert = m2_certificate(mm)
    if not (cert.is_psd and cert.rank == len(_LOW)):
        raise M2Singular("the M(2) block is not positive definite")
    if mm.rank not in (7, 8):
        raise RankOutOfRange(f"rank {mm.rank}; basis cases exist for ranks 7 and 8")
    basis = mm.basis
    if basis[: len(_LOW)] != _LOW:  # pragma: no cover - implied by M(2) > 0
        raise M2Singular("degree-two columns are dependent")
    cubic = frozenset(basis[len(_LOW):])
    tag, leads, swap_to = _CASES[cubic]
    return BasisCase(mm.rank, tag, basis, leads, swap_to)


def degree_one_swap(beta: MomentSequence) -> MomentSequence:
    """Exchange the roles of x and y: ``beta'[i, j] = beta[j, i]``."""
    return beta.swapped()


# ---------------------------------------------------------------------------
# auxiliary polynomials


@dataclass(frozen=True)
class Auxiliary:
    lead: Monomial
    polynomial: MultiPoly
    method: str  # "normal-form" or "vandermonde"

    def to_dict(self) -> dict:
        return {"lead": format_monomial(self.lead), "polynomial": str(self.polynomial), "method": self.method}


def _combination(lead: Monomial, basis: Sequence[Monomial], coeffs: Sequence[Fraction]) -> MultiPoly:
    s = MultiPoly.monomial(lead)
    for b, c in zip(basis, coeffs):
        if c:
            s = s - MultiPoly.monomial(b, c)
    return s


def auxiliary_polynomial(
    variety: VarietyResult | Sequence[VarietyPoint],
    basis: BasisCase | Sequence[Monomial],
    lead: Monomial,
    relations: Sequence[MultiPoly] = (),
    *,
    precision: int = 256,
    denominator_bound: int = 10**12,
) -> Auxiliary:
    """``lead - sum c_b b`` over the basis, vanishing on the variety.

    The exact route works in the quotient by the radical of the relation
    ideal, available when that quotient has one dimension per real point:
    ``lead`` and the basis monomials are reduced to normal forms and the
    coefficients come from an exact linear solve.  Otherwise the
    Vandermonde system is solved numerically, the coefficients are rounded to
    nearby rationals, and the result is accepted only if it vanishes exactly
    at every point.
    """
    mons = tuple(basis.monomials if isinstance(basis, BasisCase) else basis)
    if isinstance(variety, VarietyResult):
        vr = variety
    else:
        vr = compute_variety(relations) if relations else None
    points = list(vr.points if vr is not None else variety)
    if len(points) != len(mons):
        raise VandermondeSingular(f"{len(points)} points for {len(mons)} basis monomials")
    if vr is not None and vr.all_points_real and vr.radical_quotient_dim:
        q = vr.quotient
        coeffs = q.express(MultiPoly.monomial(lead), [MultiPoly.monomial(b) for b in mons])
        if coeffs is None:
            raise VandermondeSingular("basis monomials are dependent on the variety")
        return Auxiliary(lead, _combination(lead, mons, coeffs), "normal-form")
    return _auxiliary_numeric(points, mons, lead, precision, denominator_bound)


def _auxiliary_numeric(points, mons, lead, precision, bound) -> Auxiliary:
    sl = vandermonde(points, mons)
    if sl.is_exact:
        try:
            coeffs = solve_linear(sl.exact, [p.exact_x ** lead[0] * p.exact_y ** lead[1] for p in points])
        except LinAlgError:
            raise VandermondeSingular("Vandermonde slice is singular") from None
        # columns of the slice are in graded order
        return Auxiliary(lead, _combination(lead, sl.monomials, coeffs), "vandermonde")
    ctx = mpmath.mp.clone()
    ctx.prec = precision
    pts = [p.refined(Fraction(1, 2 ** (precision - 8))) for p in points]

    def mpv(v: Fraction):
        return ctx.mpf(v.numerator) / v.denominator

    W = ctx.matrix([[mpv(p.x.mid) ** m[0] * mpv(p.y.mid) ** m[1] for m in sl.monomials] for p in pts])
    rhs = ctx.matrix([mpv(p.x.mid) ** lead[0] * mpv(p.y.mid) ** lead[1] for p in pts])
    try:
        sol = ctx.lu_solve(W, rhs)
    except ZeroDivisionError:
        raise VandermondeSingular("Vandermonde slice is numerically singular") from None
    coeffs = [Fraction(ctx.nstr(c, precision // 4, min_fixed=-ctx.inf, max_fixed=ctx.inf)).limit_denominator(bound)
              for c in sol]
    s = _combination(lead, sl.monomials, coeffs)
    if not vanishes_on(s, points):
        raise ReconstructionFailed(f"rounded coefficients for {format_monomial(lead)} do not vanish on the variety")
    return Auxiliary(lead, s, "vandermonde")


# ---------------------------------------------------------------------------
# witnesses and measures


@dataclass(frozen=True)
class Witness:
    """A polynomial certifying that no representing measure exists.

    ``kind`` says which necessary condition it breaks.  For ``"psd"`` the
    polynomial is a square with negative Riesz value.  For every other kind
    it vanishes on the variety and has nonzero Riesz value.
    """

    kind: str
    polynomial: MultiPoly
    value: Fraction
    vanishes_on_variety: bool | None
    residuals: tuple = ()
    multiplier: Monomial | None = None
    generator: MultiPoly | None = None
    note: str = ""

    def swapped(self) -> "Witness":
        return replace(
            self,
            polynomial=self.polynomial.swap_variables(),
            residuals=self.residuals,
            multiplier=None if self.multiplier is None else self.multiplier[::-1],
            generator=None if self.generator is None else self.generator.swap_variables(),
        )

    def to_dict(self) -> dict:
        d = {
            "kind": self.kind,
            "polynomial": str(self.polynomial),
            "riesz_value": str(self.value),
            "vanishes_on_variety": self.vanishes_on_variety,
        }
        if self.multiplier is not None:
            d["multiplier"] = format_monomial(self.multiplier)
        if self.generator is not None:
            d["generator"] = str(self.generator)
        if self.note:
            d["note"] = self.note
        return d


@dataclass(frozen=True)
class Measure:
    atoms: tuple[VarietyPoint, ...]
    densities: tuple[Fraction, ...]
    exact: bool
    positive: bool
    max_relative_error: Fraction

    def swapped(self) -> "Measure":
        return replace(self, atoms=tuple(a.swapped() for a in self.atoms))

    def to_dict(self) -> dict:
        out = []
        for a, r in zip(self.atoms, self.densities):
            d = a.to_dict()
            d.pop("residuals", None)
            d["density"] = str(r) if self.exact else _approx(r)
            out.append(d)
        return {
            "exact": self.exact,
            "positive": self.positive,
            "max_relative_error": "0" if self.max_relative_error == 0 else f"{float(self.max_relative_error):.3e}",
            "atoms": out,
        }


def _approx(v: Fraction) -> str:
    return mpmath.nstr(mpmath.mpf(v.numerator) / v.denominator, 20)


def _relative_error(beta: MomentSequence, got: dict) -> Fraction:
    worst = Fraction(0)
    for m, want in beta.moments.items():
        scale = abs(want) if want else abs(beta.mass) or Fraction(1)
        worst = max(worst, abs(got[m] - want) / scale)
    return worst


def extract_measure(
    beta: MomentSequence,
    points: Sequence[VarietyPoint],
    basis: BasisCase | Sequence[Monomial],
    *,
    precision: int = 256,
) -> Measure:
    """Densities from the transposed Vandermonde system ``W_B^T rho = beta_B``.

    With rational atoms the solve and the moment reconstruction are exact.
    Otherwise it runs at ``precision`` bits on tightly refined points and
    ``max_relative_error`` reports the worst moment mismatch.
    """
    mons = tuple(basis.monomials if isinstance(basis, BasisCase) else basis)
    pts = tuple(points)
    if len(pts) != len(mons):
        raise SingularSystem(f"{len(pts)} atoms for {len(mons)} basis monomials")
    sl = vandermonde(pts, mons)
    if sl.is_exact:
        try:
            rho = solve_linear(sl.exact.T, [beta[m] for m in sl.monomials])
        except LinAlgError:
            raise SingularSystem("Vandermonde slice is singular") from None
        got = {
            m: sum((r * p.exact_x ** m[0] * p.exact_y ** m[1] for p, r in zip(pts, rho)), Fraction(0))
            for m in beta.moments
        }
        err = _relative_error(beta, got)
        return Measure(pts, tuple(rho), True, all(r > 0 for r in rho), err)
    ctx = mpmath.mp.clone()
    ctx.prec = precision
    fine = tuple(p.refined(Fraction(1, 2 ** (precision - 8))) for p in pts)

    def mpv(v: Fraction):
        return ctx.mpf(v.numerator) / v.denominator

    xs = [mpv(p.x.mid) for p in fine]
    ys = [mpv(p.y.mid) for p in fine]
    WT = ctx.matrix([[x ** m[0] * y ** m[1] for x, y in zip(xs, ys)] for m in sl.monomials])
    try:
        sol = ctx.lu_solve(WT, ctx.matrix([mpv(beta[m]) for m in sl.monomials]))
    except ZeroDivisionError:
        raise SingularSystem("Vandermonde slice is numerically singular") from None
    rho = [_mp_fraction(c) for c in sol]
    got = {}
    for m in beta.moments:
        got[m] = _mp_fraction(ctx.fsum(r * x ** m[0] * y ** m[1] for r, x, y in zip(sol, xs, ys)))
    err = _relative_error(beta, got)
    # a density is positive only if it clearly exceeds the working error
    eps = Fraction(1, 2 ** (precision // 2))
    return Measure(fine, tuple(rho), False, all(r > eps * abs(beta.mass) for r in rho), err)


def _mp_fraction(v) -> Fraction:
    # read the raw (sign, mantissa, exponent) triple; converting through
    # mpmath.mpf would round to the global 53-bit context
    sign, man, exp, _ = v._mpf_
    if not man:
        return Fraction(0)
    f = Fraction(int(man)) * Fraction(2) ** exp
    return -f if sign else f


# ---------------------------------------------------------------------------
# the pipeline


@dataclass(frozen=True)
class SolverConfig:
    tol: Fraction = DEFAULT_TOL
    precision_cap: int = DEFAULT_PRECISION_CAP
    relative_tolerance: Fraction = Fraction(1, 10**9)

    def __post_init__(self):
        object.__setattr__(self, "tol", as_fraction(self.tol))
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.precision_cap < 128:
            raise ValueError("precision cap must be at least 128 bits")


@dataclass
class SolverReport:
    verdict: Verdict
    reason: str
    n: int
    psd: PsdCertificate | None = None
    rank: int | None = None
    variety_card: int | None = None
    basis_case: BasisCase | None = None
    working_case: BasisCase | None = None
    swapped: bool = False
    relations: tuple[MultiPoly, ...] = ()
    variety: tuple[VarietyPoint, ...] = ()
    quotient_dims: tuple[int, int] | None = None  # (relation ideal, its radical)
    recursive: bool | None = None
    weak_consistency: WeakConsistencyResult | None = None
    auxiliaries: tuple[Auxiliary, ...] = ()
    consistency: ConsistencyReport | None = None
    relation_battery: ConsistencyReport | None = None
    full_consistency: bool | None = None
    witness: Witness | None = None
    measure: Measure | None = None
    classification: Classification | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return self.verdict.exit_code

    def to_dict(self) -> dict:
        d = {
            "verdict": self.verdict.value,
            "reason": self.reason,
            "n": self.n,
            "rank": self.rank,
            "variety_card": self.variety_card,
            "classification": self.classification.to_dict() if self.classification else None,
            "psd": None if self.psd is None else {"psd": self.psd.is_psd, "pivots": self.psd.rank},
            "basis_case": self.basis_case.to_dict() if self.basis_case else None,
            "working_case": self.working_case.tag if self.working_case else None,
            "swapped": self.swapped,
            "relations": [str(r) for r in self.relations],
            "quotient_dims": None if self.quotient_dims is None else {
                "relations": self.quotient_dims[0], "radical": self.quotient_dims[1]},
            "variety": [p.to_dict() for p in self.variety],
            "recursive": self.recursive,
            "weak_consistency": self.weak_consistency.to_dict() if self.weak_consistency else None,
            "auxiliaries": [a.to_dict() for a in self.auxiliaries],
            "relation_battery": self.relation_battery.to_dict() if self.relation_battery else None,
            "consistency": None,
            "full_consistency": self.full_consistency,
            "witness": self.witness.to_dict() if self.witness else None,
            "measure": self.measure.to_dict() if self.measure else None,
            "notes": list(self.notes),
        }
        if self.consistency is not None:
            d["consistency"] = {
                **self.consistency.to_dict(),
                "results": [c.to_dict() for c in self.consistency.checks],
            }
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)


def _square_witness(kind: str, p: MultiPoly, beta: MomentSequence, pts, note: str) -> Witness:
    sq = p * p
    return Witness(kind, sq, riesz(beta, sq), vanishes_on(sq, pts) if pts else True,
                   residuals(sq, pts), note=note)


def _vanishing_combination(mons, vr: VarietyResult) -> MultiPoly | None:
    """Nonzero polynomial in the span of ``mons`` vanishing on the variety, if one is exact."""
    pts = vr.points
    if not pts:
        return MultiPoly.monomial(mons[0])
    if all(p.is_rational for p in pts):
        W = RatMatrix([[p.exact_x ** m[0] * p.exact_y ** m[1] for m in mons] for p in pts])
        ker = kernel_basis(W)
        return MultiPoly.from_vector(ker[0], mons) if ker else None
    if vr.all_points_real:
        dep = vr.quotient.dependency([MultiPoly.monomial(m) for m in mons])
        return None if dep is None else MultiPoly.from_vector(dep, mons)
    return None


def _full_consistency(beta: MomentSequence, vr: VarietyResult):
    """Riesz values on a basis of all degree-6 polynomials vanishing on the variety.

    Exact whenever the radical quotient has one dimension per real point,
    so that vanishing on the variety is membership in that radical.
    Returns ``(ok, witness polynomial or None)``, or ``(None, None)`` when
    not applicable.
    """
    if not vr.all_points_real or not vr.radical_quotient_dim:
        return None, None
    q = vr.quotient
    mons = monomials_up_to(2 * beta.n)
    cols = [q.vector(MultiPoly.monomial(m)) for m in mons]
    A = RatMatrix([[c[i] for c in cols] for i in range(q.dim)])
    for vec in kernel_basis(A):
        p = MultiPoly.from_vector(vec, mons)
        if riesz(beta, p) != 0:
            return False, p
    return True, None


def decide_extremal(beta: MomentSequence, config: SolverConfig | None = None) -> SolverReport:
    """Run the full pipeline on a degree-6 moment sequence.

    Never raises on mathematical grounds: every outcome is a verdict, and
    numeric certification failures are reported as Indeterminate.
    """
    cfg = config or SolverConfig()
    if beta.n != 3:
        return SolverReport(Verdict.OUT_OF_SCOPE, f"only sextic problems (n = 3) are handled, got n = {beta.n}",
                            beta.n)
    mm = build_moment_matrix(beta)
    rep = SolverReport(Verdict.INDETERMINATE, "", 3, rank=mm.rank, relations=mm.relations)
    rep.psd = psd_check(mm.matrix)
    if not rep.psd.is_psd:
        p = MultiPoly.from_vector(rep.psd.witness, mm.labels)
        sq = p * p
        rep.verdict = Verdict.NO_MEASURE
        rep.reason = "M(3) is not positive semidefinite"
        rep.witness = Witness("psd", sq, riesz(beta, sq), None, note="Riesz value of a square is negative")
        return rep
    cert2 = m2_certificate(mm)
    if cert2.rank < len(_LOW):
        rep.verdict = Verdict.OUT_OF_SCOPE
        rep.reason = "M(2) is singular"
        rep.classification = classify(mm.rank, None)
        return rep
    if mm.rank >= 9:
        rep.variety_card = None
        rep.classification = classify(mm.rank, None)
        rep.verdict = Verdict.OUT_OF_SCOPE
        rep.reason = "at most one column relation, so the variety is infinite"
        return rep
    if mm.rank < 7:
        rep.classification = classify(mm.rank, None)
        rep.verdict = Verdict.OUT_OF_SCOPE
        rep.reason = f"rank {mm.rank} is below 7"
        return rep
    case = choose_basis_case(mm)
    rep.basis_case = case
    if case.needs_swap:
        inner = _decide_case(beta.swapped(), cfg)
        return _unswap(inner, rep, mm)
    return _decide_case(beta, cfg, mm, rep)


def _unswap(inner: SolverReport, outer: SolverReport, mm: MomentMatrix) -> SolverReport:
    inner.swapped = True
    inner.basis_case = outer.basis_case
    inner.relations = mm.relations
    inner.psd = outer.psd
    inner.variety = tuple(p.swapped() for p in inner.variety)
    inner.auxiliaries = tuple(
        Auxiliary(a.lead[::-1], a.polynomial.swap_variables(), a.method) for a in inner.auxiliaries
    )
    if inner.consistency is not None:
        inner.consistency = ConsistencyReport(tuple(
            ConsistencyCheck(c.multiplier[::-1], c.generator.swap_variables(), c.value)
            for c in inner.consistency.checks
        ))
    if inner.witness is not None:
        inner.witness = inner.witness.swapped()
    if inner.measure is not None:
        inner.measure = inner.measure.swapped()
    inner.notes.insert(0, f"case {outer.basis_case.tag} handled after exchanging x and y")
    return inner


def _decide_case(beta: MomentSequence, cfg: SolverConfig, mm: MomentMatrix | None = None,
                 rep: SolverReport | None = None) -> SolverReport:
    if mm is None:
        mm = build_moment_matrix(beta)
        rep = SolverReport(Verdict.INDETERMINATE, "", 3, rank=mm.rank, relations=mm.relations)
        rep.psd = psd_check(mm.matrix)
    case = choose_basis_case(mm)
    if case.needs_swap:  # pragma: no cover - one exchange always suffices
        raise SolverError(f"case {case.tag} persists after exchanging x and y")
    if rep.basis_case is None:
        rep.basis_case = case
    rep.working_case = case
    r = mm.rank

    rec = check_recursive(mm)
    rep.recursive = rec.ok
    try:
        vr = compute_variety(mm.relations, cfg.tol)
    except PositiveDimensional:
        vr = None
    if not rec.ok:
        f, g = rec.violations[0]
        p = f * MultiPoly.monomial(g)
        pts = vr.points if vr is not None else ()
        rep.verdict = Verdict.NO_MEASURE
        rep.reason = "M(3) is not recursively generated"
        rep.witness = _square_witness("recursiveness", p, beta, pts,
                                      f"({format_monomial(g)})*({f}) vanishes on the variety but is not a column relation")
        if vr is not None:
            rep.variety, rep.variety_card = tuple(vr.points), vr.card
        return rep
    if vr is None:
        rep.classification = classify(r, None)
        rep.verdict = Verdict.OUT_OF_SCOPE
        rep.reason = "the column relations share a curve, so the variety is infinite"
        return rep

    v = vr.card
    rep.variety, rep.variety_card = tuple(vr.points), v
    rep.quotient_dims = (vr.relation_quotient_dim, vr.radical_quotient_dim)
    rep.classification = classify(r, v)
    if vr.radical_quotient_dim > v:
        rep.notes.append(f"{vr.radical_quotient_dim - v} non-real common zeros of the relations")
    if vr.relation_quotient_dim > vr.radical_quotient_dim:
        rep.notes.append("the relation ideal is not radical; its radical is used for normal forms")

    if v < r:
        rep.verdict = Verdict.NO_MEASURE
        rep.reason = f"variety condition fails: rank {r} exceeds card V = {v}"
        p = _vanishing_combination(case.monomials, vr)
        if p is not None:
            rep.witness = _square_witness("variety", p, beta, vr.points,
                                          "vanishes on the variety but is not a column relation")
        return rep
    if v > r:
        rep.verdict = Verdict.OUT_OF_SCOPE
        rep.reason = f"not extremal: card V = {v} exceeds rank {r}"
        return rep

    q = vr.quotient if vr.all_points_real else None
    wc = check_weak_consistency(mm, vr.points, case.monomials, cfg.precision_cap, q)
    rep.weak_consistency = wc
    if wc.ok is None:
        rep.verdict = Verdict.INDETERMINATE
        rep.reason = "could not certify invertibility of the Vandermonde slice"
        return rep
    if not wc.ok:
        rep.verdict = Verdict.NO_MEASURE
        rep.reason = "not weakly consistent: the Vandermonde slice on the column basis is singular"
        p = _vanishing_combination(case.monomials, vr)
        if p is not None:
            rep.witness = _square_witness("weak-consistency", p, beta, vr.points,
                                          "vanishes on the variety but is not a column relation")
        return rep

    rel_battery = check_consistency_generators(beta, list(mm.relations), 3)
    rep.relation_battery = rel_battery
    if not rel_battery.ok:  # pragma: no cover - forced by symmetry of M(3)
        raise AssertionError("a column relation has nonzero Riesz value; moment matrix identity broken")

    auxes = []
    for lead in case.auxiliary_leads:
        try:
            auxes.append(auxiliary_polynomial(vr, case, lead))
        except (ReconstructionFailed, VandermondeSingular) as exc:
            rep.auxiliaries = tuple(auxes)
            rep.verdict = Verdict.INDETERMINATE
            rep.reason = f"auxiliary polynomial for {format_monomial(lead)}: {exc}"
            return rep
    rep.auxiliaries = tuple(auxes)
    battery = check_consistency_generators(beta, [a.polynomial for a in auxes], 2)
    rep.consistency = battery
    full_ok, full_p = _full_consistency(beta, vr)
    rep.full_consistency = full_ok

    if not battery.ok:
        bad = battery.violations[0]
        p = bad.generator.mul_term(bad.multiplier, Fraction(1))
        rep.verdict = Verdict.NO_MEASURE
        rep.reason = "not consistent: an auxiliary polynomial multiple vanishing on V has nonzero Riesz value"
        rep.witness = Witness("consistency", p, bad.value, vanishes_on(p, vr.points), residuals(p, vr.points),
                              bad.multiplier, bad.generator)
        return rep
    if full_ok is False:
        rep.verdict = Verdict.NO_MEASURE
        rep.reason = "not consistent: a degree-6 polynomial vanishing on V has nonzero Riesz value"
        rep.notes.append("the auxiliary battery passed but the exhaustive degree-6 check did not")
        rep.witness = Witness("full-consistency", full_p, riesz(beta, full_p), vanishes_on(full_p, vr.points),
                              residuals(full_p, vr.points))
        return rep

    measure = extract_measure(beta, vr.points, case.monomials)
    rep.measure = measure
    if not measure.positive:
        rep.verdict = Verdict.INDETERMINATE
        rep.reason = "consistency holds but a recovered density is not positive"
        return rep
    if measure.max_relative_error > cfg.relative_tolerance:
        rep.verdict = Verdict.INDETERMINATE
        rep.reason = f"recovered measure misses the moments (relative error {float(measure.max_relative_error):.2e})"
        return rep
    rep.verdict = Verdict.MEASURE_EXISTS
    rep.reason = f"extremal, positive and consistent: unique {r}-atomic representing measure"
    return rep
