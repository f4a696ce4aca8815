"""Moment sequences, moment matrices and the necessary conditions on them.

A bivariate moment sequence of degree ``2n`` is a table ``beta[i, j]`` for
``i + j <= 2n``.  Its moment matrix is indexed by the monomials of degree at
most ``n`` in graded order (``1, X, Y, X^2, XY, Y^2, ...``) and has entry
``beta[p + q]`` at row ``p``, column ``q``.  The Riesz functional sends
``x^i y^j`` to ``beta[i, j]``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .intervals import RatInterval, from_iv, iv_context, iv_determinant, to_iv
from .linalg import RatMatrix, as_fraction, independent_columns, kernel_basis
from .poly import Monomial, MultiPoly, format_monomial, monomials_up_to

DEFAULT_PRECISION = 128
DEFAULT_PRECISION_CAP = 1024


class MomentError(ValueError):
    pass


class IncompleteSequence(MomentError):
    pass


class DegreeTooHigh(MomentError):
    pass


class DegreeOverflow(MomentError):
    pass


class LengthMismatch(MomentError):
    pass


class NonpositiveDensity(MomentError):
    pass


class NotExtremal(MomentError):
    pass


class MomentFormatError(MomentError):
    pass


def _index_key(i: int, j: int) -> str:
    return f"{i},{j}"


def all_indices(n: int) -> list[Monomial]:
    """Every ``(i, j)`` with ``i + j <= 2n`` in graded order."""
    return monomials_up_to(2 * n)


@dataclass(frozen=True)
class MomentSequence:
    n: int
    moments: Mapping[Monomial, Fraction]

    def __post_init__(self):
        if self.n < 0:
            raise MomentError("order n must be nonnegative")
        clean = {}
        for k, v in self.moments.items():
            clean[(int(k[0]), int(k[1]))] = as_fraction(v)
        need = set(all_indices(self.n))
        missing = sorted(need - set(clean), key=lambda m: (sum(m), m[1]))
        if missing:
            raise IncompleteSequence("missing moments: " + ", ".join(f"({i},{j})" for i, j in missing))
        extra = sorted(set(clean) - need)
        if extra:
            raise IncompleteSequence(
                f"moments above degree {2 * self.n}: " + ", ".join(f"({i},{j})" for i, j in extra)
            )
        object.__setattr__(self, "moments", clean)

    def __getitem__(self, idx: Monomial) -> Fraction:
        return self.moments[idx]

    def __hash__(self) -> int:
        return hash((self.n, tuple(sorted(self.moments.items()))))

    @property
    def mass(self) -> Fraction:
        return self.moments[(0, 0)]

    def swapped(self) -> "MomentSequence":
        return MomentSequence(self.n, {(j, i): v for (i, j), v in self.moments.items()})

    def truncate(self, n: int) -> "MomentSequence":
        if n > self.n:
            raise MomentError(f"cannot extend order {self.n} to {n}")
        return MomentSequence(n, {m: v for m, v in self.moments.items() if sum(m) <= 2 * n})

    def scaled(self, c) -> "MomentSequence":
        c = as_fraction(c)
        return MomentSequence(self.n, {m: c * v for m, v in self.moments.items()})

    def __add__(self, other: "MomentSequence") -> "MomentSequence":
        if other.n != self.n:
            raise MomentError("orders differ")
        return MomentSequence(self.n, {m: v + other.moments[m] for m, v in self.moments.items()})

    # -- JSON ------------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "moments": {_index_key(*m): str(self.moments[m]) for m in all_indices(self.n)},
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, data) -> "MomentSequence":
        if not isinstance(data, dict):
            raise MomentFormatError("top level must be an object with keys 'n' and 'moments'")
        if "n" not in data or "moments" not in data:
            raise MomentFormatError("expected keys 'n' and 'moments'")
        n = data["n"]
        if not isinstance(n, int) or isinstance(n, bool) or n < 0:
            raise MomentFormatError(f"field 'n': expected a nonnegative integer, got {n!r}")
        raw = data["moments"]
        if not isinstance(raw, dict):
            raise MomentFormatError("field 'moments' must be an object")
        moments = {}
        for key, val in raw.items():
            try:
                i, j = (int(t) for t in key.split(","))
            except ValueError:
                raise MomentFormatError(f"moments key {key!r}: expected 'i,j'") from None
            if i < 0 or j < 0:
                raise MomentFormatError(f"moments key {key!r}: negative index")
            if isinstance(val, float):
                raise MomentFormatError(f"moments[{key!r}]: write rationals as strings, not floats")
            try:
                moments[(i, j)] = as_fraction(val)
            except (ValueError, ZeroDivisionError, TypeError):
                raise MomentFormatError(f"moments[{key!r}]: cannot parse {val!r} as a rational") from None
        return cls(n, moments)

    @classmethod
    def from_json(cls, text: str) -> "MomentSequence":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MomentFormatError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
        return cls.from_dict(data)

    @classmethod
    def load(cls, path) -> "MomentSequence":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(fh.read())


def moments_from_atoms(atoms: Sequence, densities: Sequence, n: int) -> MomentSequence:
    """Moments of ``sum_k rho_k * delta_(x_k, y_k)`` up to degree ``2n``."""
    if len(atoms) != len(densities):
        raise LengthMismatch(f"{len(atoms)} atoms but {len(densities)} densities")
    pts = [(as_fraction(a), as_fraction(b)) for a, b in atoms]
    rho = [as_fraction(r) for r in densities]
    for k, r in enumerate(rho):
        if r <= 0:
            raise NonpositiveDensity(f"density {k} is {r}")
    moments = {}
    for i, j in all_indices(n):
        moments[(i, j)] = sum((r * x**i * y**j for (x, y), r in zip(pts, rho)), Fraction(0))
    return MomentSequence(n, moments)


def riesz(beta: MomentSequence, p: MultiPoly) -> Fraction:
    """Riesz functional: replace each monomial ``x^i y^j`` by ``beta[i, j]``."""
    if not p.is_zero() and p.degree > 2 * beta.n:
        raise DegreeTooHigh(f"degree {p.degree} exceeds {2 * beta.n}")
    return sum((c * beta.moments[m] for m, c in p.items()), Fraction(0))


def label(m: Monomial) -> str:
    return format_monomial(m, ("X", "Y"))


@dataclass(frozen=True)
class MomentMatrix:
    source: MomentSequence
    matrix: RatMatrix
    labels: tuple[Monomial, ...]
    rank: int
    basis_columns: tuple[int, ...]  # greedy independent columns
    relations: tuple[MultiPoly, ...]

    @property
    def n(self) -> int:
        return self.source.n

    @property
    def basis(self) -> tuple[Monomial, ...]:
        return tuple(self.labels[c] for c in self.basis_columns)

    @property
    def size(self) -> int:
        return len(self.labels)

    def column_label(self, k: int) -> str:
        return label(self.labels[k])

    def vector(self, p: MultiPoly) -> tuple[Fraction, ...]:
        return p.to_vector(self.labels)

    def apply(self, p: MultiPoly) -> tuple[Fraction, ...]:
        """``M p-hat``: the column combination that the relation ``p`` names."""
        return self.matrix.matvec(self.vector(p))

    def is_relation(self, p: MultiPoly) -> bool:
        return not any(self.apply(p))

    def inner(self, p: MultiPoly, q: MultiPoly) -> Fraction:
        """``<M p-hat, q-hat>``."""
        return sum((a * b for a, b in zip(self.apply(p), self.vector(q))), Fraction(0))

    def block(self, k: int) -> RatMatrix:
        """The leading block indexed by monomials of degree at most ``k``."""
        idx = [c for c, m in enumerate(self.labels) if sum(m) <= k]
        return self.matrix.submatrix(idx, idx)


def build_moment_matrix(beta: MomentSequence, n: int | None = None) -> MomentMatrix:
    """Assemble ``M(n)``, its rank, greedy column basis and column relations.

    Each relation is the kernel vector for one dependent column: it has
    coefficient 1 on that column, the largest label it involves, and zero on
    every other dependent column.
    """
    n = beta.n if n is None else n
    if n > beta.n:
        raise IncompleteSequence(f"M({n}) needs moments of degree {2 * n}, have {2 * beta.n}")
    labels = tuple(monomials_up_to(n))
    mat = RatMatrix([[beta.moments[(p[0] + q[0], p[1] + q[1])] for q in labels] for p in labels])
    cols = tuple(independent_columns(mat))
    rels = tuple(MultiPoly.from_vector(v, labels) for v in kernel_basis(mat))
    return MomentMatrix(beta, mat, labels, len(cols), cols, rels)


# ---------------------------------------------------------------------------
# recursiveness


@dataclass(frozen=True)
class RecursivenessReport:
    ok: bool
    checked: int
    violations: tuple[tuple[MultiPoly, Monomial], ...]  # (relation, multiplier)

    def to_dict(self) -> dict:
        return {
            "recursive": self.ok,
            "checked": self.checked,
            "violations": [
                {"relation": str(r), "multiplier": format_monomial(m)} for r, m in self.violations
            ],
        }


def check_recursive(mm: MomentMatrix) -> RecursivenessReport:
    """Check that ``f = 0`` in the columns forces ``f*g = 0`` whenever ``deg fg <= n``."""
    viol = []
    checked = 0
    for f in mm.relations:
        room = mm.n - f.degree
        for g in monomials_up_to(room) if room >= 0 else []:
            if g == (0, 0):
                continue
            checked += 1
            if not mm.is_relation(f * MultiPoly.monomial(g)):
                viol.append((f, g))
    return RecursivenessReport(not viol, checked, tuple(viol))


# ---------------------------------------------------------------------------
# Vandermonde slices and weak consistency


@dataclass(frozen=True)
class VandermondeSlice:
    """Monomials evaluated at points: row per point, column per monomial."""

    points: tuple
    monomials: tuple[Monomial, ...]
    exact: RatMatrix | None
    enclosure: tuple[tuple[RatInterval, ...], ...]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.points), len(self.monomials)

    @property
    def is_exact(self) -> bool:
        return self.exact is not None


def _mono_at(m: Monomial, x, y):
    return x ** m[0] * y ** m[1]


def vandermonde(points: Sequence, monos: Iterable[Monomial]) -> VandermondeSlice:
    """Generalized Vandermonde matrix; columns sorted into graded order."""
    mons = sorted(set(monos), key=lambda m: (sum(m), m[1]))
    if not mons:
        raise ValueError("need at least one monomial")
    pts = tuple(points)
    ivs = []
    for p in pts:
        x, y = p.x, p.y
        ivs.append(tuple(_as_iv(_mono_at(m, x, y)) for m in mons))
    exact = None
    if all(p.is_rational for p in pts):
        exact = RatMatrix([[_mono_at(m, p.exact_x, p.exact_y) for m in mons] for p in pts])
    return VandermondeSlice(pts, tuple(mons), exact, tuple(ivs))


def _as_iv(v) -> RatInterval:
    return v if isinstance(v, RatInterval) else RatInterval.point(v)


@dataclass(frozen=True)
class DeterminantCertificate:
    status: str  # "nonsingular" | "singular" | "indeterminate"
    method: str  # "exact" | "interval" | "quotient"
    precision: int | None = None
    value: Fraction | None = None
    enclosure: RatInterval | None = None

    def to_dict(self) -> dict:
        d = {"status": self.status, "method": self.method}
        if self.precision is not None:
            d["precision_bits"] = self.precision
        if self.value is not None:
            d["value"] = str(self.value)
        if self.enclosure is not None:
            d["enclosure"] = [f"{float(self.enclosure.lo):.6e}", f"{float(self.enclosure.hi):.6e}"]
        return d


def certify_nonsingular(
    points: Sequence,
    monos: Sequence[Monomial],
    precision_cap: int = DEFAULT_PRECISION_CAP,
    quotient=None,
) -> DeterminantCertificate:
    """Decide whether the square Vandermonde slice is invertible.

    Rational points are decided exactly.  Otherwise the determinant is
    enclosed with interval elimination, doubling the working precision (and
    tightening the point enclosures to match) from 128 bits up to
    ``precision_cap``.  An enclosure that contains zero is only a failure to
    certify; if a quotient ring whose dimension equals the number of points
    is supplied, invertibility is then decided exactly as linear independence
    of the monomials' normal forms.
    """
    from .linalg import determinant

    sl = vandermonde(points, monos)
    if sl.shape[0] != sl.shape[1]:
        raise ValueError(f"slice is {sl.shape[0]}x{sl.shape[1]}, not square")
    if sl.is_exact:
        d = determinant(sl.exact)
        return DeterminantCertificate("nonsingular" if d else "singular", "exact", value=d)
    prec = DEFAULT_PRECISION
    last = None
    while prec <= max(precision_cap, DEFAULT_PRECISION):
        radius = Fraction(1, 2 ** (prec - 8))
        pts = [p.refined(radius) for p in points]
        ctx = iv_context(prec)
        rows = [[to_iv(ctx, _mono_at(m, p.x, p.y)) for m in sl.monomials] for p in pts]
        det = iv_determinant(ctx, rows)
        if det is not None:
            enc = from_iv(det)
            last = enc
            if not enc.contains_zero():
                return DeterminantCertificate("nonsingular", "interval", prec, enclosure=enc)
        prec *= 2
    if quotient is not None and quotient.dim == len(points):
        dep = quotient.dependency([MultiPoly.monomial(m) for m in sl.monomials])
        return DeterminantCertificate("singular" if dep is not None else "nonsingular", "quotient")
    return DeterminantCertificate("indeterminate", "interval", prec // 2, enclosure=last)


@dataclass(frozen=True)
class WeakConsistencyResult:
    ok: bool | None  # None when certification failed
    basis: tuple[Monomial, ...]
    certificate: DeterminantCertificate

    def to_dict(self) -> dict:
        return {
            "weakly_consistent": self.ok,
            "basis": [label(m) for m in self.basis],
            "determinant": self.certificate.to_dict(),
        }


def check_weak_consistency(
    mm: MomentMatrix,
    variety: Sequence,
    basis: Sequence[Monomial] | None = None,
    precision_cap: int = DEFAULT_PRECISION_CAP,
    quotient=None,
) -> WeakConsistencyResult:
    """Weak consistency in the extremal case, via invertibility of ``W_B``.

    When the number of points equals the rank, every polynomial of degree at
    most ``n`` vanishing on the variety is a column relation exactly when the
    Vandermonde slice on a column basis ``B`` is invertible.
    """
    if len(variety) != mm.rank:
        raise NotExtremal(f"rank {mm.rank} but {len(variety)} variety points")
    B = tuple(basis) if basis is not None else mm.basis
    if not variety:
        return WeakConsistencyResult(True, B, DeterminantCertificate("nonsingular", "exact", value=Fraction(1)))
    cert = certify_nonsingular(variety, B, precision_cap, quotient)
    ok = {"nonsingular": True, "singular": False}.get(cert.status)
    return WeakConsistencyResult(ok, B, cert)


# ---------------------------------------------------------------------------
# consistency battery


@dataclass(frozen=True)
class ConsistencyCheck:
    multiplier: Monomial
    generator: MultiPoly
    value: Fraction

    def to_dict(self) -> dict:
        return {
            "multiplier": format_monomial(self.multiplier),
            "generator": str(self.generator),
            "value": str(self.value),
        }


@dataclass(frozen=True)
class ConsistencyReport:
    checks: tuple[ConsistencyCheck, ...] = field(default_factory=tuple)

    @property
    def violations(self) -> tuple[ConsistencyCheck, ...]:
        return tuple(c for c in self.checks if c.value != 0)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "consistent": self.ok,
            "checked": len(self.checks),
            "violations": [c.to_dict() for c in self.violations],
        }


def check_consistency_generators(
    beta: MomentSequence,
    gens: Sequence[MultiPoly],
    max_multiplier_degree: int | Sequence[int],
) -> ConsistencyReport:
    """Evaluate ``Lambda(x^i y^j * q)`` for each generator ``q`` and small multiplier.

    ``max_multiplier_degree`` is either one bound for all generators or a
    bound per generator.
    """
    if isinstance(max_multiplier_degree, int):
        bounds = [max_multiplier_degree] * len(gens)
    else:
        bounds = list(max_multiplier_degree)
        if len(bounds) != len(gens):
            raise LengthMismatch(f"{len(gens)} generators but {len(bounds)} degree bounds")
    checks = []
    for q, d in zip(gens, bounds):
        if q.is_zero():
            continue
        if q.degree + d > 2 * beta.n:
            raise DegreeOverflow(f"multipliers of degree {d} take {q} past degree {2 * beta.n}")
        for m in monomials_up_to(d):
            checks.append(ConsistencyCheck(m, q, riesz(beta, q.mul_term(m, Fraction(1)))))
    return ConsistencyReport(tuple(checks))
