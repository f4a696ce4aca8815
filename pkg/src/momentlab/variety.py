"""Finite real varieties of bivariate polynomial systems.

The pipeline for a list of relations:

1. eliminate each variable with Sylvester resultants; the gcd of the nonzero
   pairwise resultants lies in the ideal ``I`` of the relations;
2. add the square-free parts of both eliminants, which gives the radical of
   ``I`` (a zero-dimensional ideal containing square-free univariate
   polynomials in every variable is radical);
3. in the finite-dimensional quotient ring pick a separating linear form
   ``u = x + t*y``; its minimal polynomial ``m`` has one simple root per
   complex point, and ``x`` and ``y`` are polynomials in ``u`` there;
4. isolate the real roots of ``m`` with Sturm sequences and map each one to a
   point whose coordinates are enclosed by exact rational interval
   arithmetic.

Every real common zero is found, every returned point is a genuine common
zero, and rational coordinates are recognised and checked exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .intervals import RatInterval
from .linalg import RatMatrix, determinant, kernel_basis, solve_linear
from .poly import GRLEX, MultiPoly, buchberger, normal_form, standard_monomials, is_zero_dimensional


class VarietyError(ValueError):
    pass


class PositiveDimensional(VarietyError):
    pass


class NoRelations(VarietyError):
    pass


class BothConstant(VarietyError):
    pass


DEFAULT_TOL = Fraction(1, 10**12)


# ---------------------------------------------------------------------------
# univariate polynomials


class UnivariatePoly:
    """Dense univariate polynomial, coefficients low degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        c = [Fraction(v) for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __eq__(self, other) -> bool:
        return isinstance(other, UnivariatePoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"UnivariatePoly({[str(c) for c in self.coeffs]})"

    def __call__(self, t):
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * t + c
        return Fraction(0) if acc is None else acc

    def __add__(self, other: "UnivariatePoly") -> "UnivariatePoly":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return UnivariatePoly([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])

    def __neg__(self) -> "UnivariatePoly":
        return UnivariatePoly([-c for c in self.coeffs])

    def __sub__(self, other: "UnivariatePoly") -> "UnivariatePoly":
        return self + (-other)

    def __mul__(self, other) -> "UnivariatePoly":
        if not isinstance(other, UnivariatePoly):
            return UnivariatePoly([c * other for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return UnivariatePoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UnivariatePoly(out)

    __rmul__ = __mul__

    def divmod(self, other: "UnivariatePoly") -> tuple["UnivariatePoly", "UnivariatePoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        d = other.degree
        lc = other.lc
        q = [Fraction(0)] * max(len(r) - d, 1)
        for k in range(len(r) - 1, d - 1, -1):
            c = r[k] / lc
            if c:
                q[k - d] = c
                for i, b in enumerate(other.coeffs):
                    r[k - d + i] -= c * b
        return UnivariatePoly(q), UnivariatePoly(r[:d] if d > 0 else [])

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def monic(self) -> "UnivariatePoly":
        return self * (1 / self.lc) if self.coeffs else self

    def derivative(self) -> "UnivariatePoly":
        return UnivariatePoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def gcd(self, other: "UnivariatePoly") -> "UnivariatePoly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def squarefree(self) -> "UnivariatePoly":
        if self.degree < 1:
            return self.monic()
        return (self // self.gcd(self.derivative())).monic()

    def to_multipoly(self, var: int, nvars: int = 2) -> MultiPoly:
        terms = {}
        for e, c in enumerate(self.coeffs):
            m = [0] * nvars
            m[var] = e
            terms[tuple(m)] = c
        return MultiPoly(terms, nvars)

    def sign_at(self, t: Fraction) -> int:
        v = self(t)
        return (v > 0) - (v < 0)

    def to_str(self, name: str = "x") -> str:
        return self.to_multipoly(0, 1).to_str(names=(name,)) if self.coeffs else "0"


def sturm_sequence(p: UnivariatePoly) -> list[UnivariatePoly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        seq.append(-(seq[-2] % seq[-1]))
    return seq[:-1]


def _sign_changes(seq: Sequence[UnivariatePoly], t: Fraction) -> int:
    signs = [s for s in (q.sign_at(t) for q in seq) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def root_bound(p: UnivariatePoly) -> Fraction:
    """Power of two strictly larger than every root's modulus (Cauchy)."""
    lc = abs(p.lc)
    cb = 1 + max((abs(c) / lc for c in p.coeffs[:-1]), default=Fraction(0))
    return Fraction(2) ** max(0, math.ceil(math.log2(cb)) + 1)


def isolate_real_roots(p: UnivariatePoly) -> list[RatInterval]:
    """Disjoint rational intervals, one per distinct real root, ascending.

    Multiplicities are collapsed by taking the square-free part first.  A root
    that happens to be hit exactly is returned as a degenerate interval;
    every other interval has a strict sign change of the square-free part at
    its endpoints.
    """
    if p.is_zero():
        raise ZeroDivisionError("cannot isolate roots of the zero polynomial")
    q = p.squarefree()
    if q.degree < 1:
        return []
    seq = sturm_sequence(q)
    B = root_bound(q)
    out: list[RatInterval] = []
    stack = [(-B, B, _sign_changes(seq, -B), _sign_changes(seq, B))]
    # counts are of roots in (a, b]
    while stack:
        a, b, va, vb = stack.pop()
        n = va - vb
        if n == 0:
            continue
        if n == 1:
            out.append(_tighten(q, a, b))
            continue
        m = (a + b) / 2
        vm = _sign_changes(seq, m)
        stack.append((m, b, vm, vb))
        stack.append((a, m, va, vm))
    out.sort(key=lambda iv: iv.lo)
    return _separate(q, out)


def _tighten(q: UnivariatePoly, a: Fraction, b: Fraction) -> RatInterval:
    # single root in (a, b]
    if q(b) == 0:
        return RatInterval.point(b)
    # a root at a belongs to the left neighbour; bisect until a is clear of it
    while q.sign_at(a) == 0:
        m = (a + b) / 2
        sm = q.sign_at(m)
        if sm == 0:
            return RatInterval.point(m)
        if sm != q.sign_at(b):
            a = m
        else:
            b = m
    return RatInterval(a, b)


def _separate(q: UnivariatePoly, ivs: list[RatInterval]) -> list[RatInterval]:
    changed = True
    while changed:
        changed = False
        for k in range(len(ivs) - 1):
            if ivs[k].hi >= ivs[k + 1].lo:
                ivs[k] = bisect_root(q, ivs[k])
                ivs[k + 1] = bisect_root(q, ivs[k + 1])
                changed = True
    return ivs


def bisect_root(q: UnivariatePoly, iv: RatInterval) -> RatInterval:
    """One bisection step on an isolating interval of a simple root."""
    if iv.is_point():
        return iv
    m = iv.mid
    sm = q.sign_at(m)
    if sm == 0:
        return RatInterval.point(m)
    if sm == q.sign_at(iv.lo):
        return RatInterval(m, iv.hi)
    return RatInterval(iv.lo, m)


def refine_root(q: UnivariatePoly, iv: RatInterval, width: Fraction) -> RatInterval:
    while iv.width > width:
        iv = bisect_root(q, iv)
    return iv


def rational_denominator_bound(q: UnivariatePoly) -> int:
    """Largest denominator a rational root of ``q`` can have.

    Scaled to a primitive integer polynomial, a root ``a/b`` in lowest terms
    has ``b`` dividing the leading coefficient.
    """
    den = math.lcm(*(c.denominator for c in q.coeffs))
    ints = [int(c * den) for c in q.coeffs]
    return abs(ints[-1]) // math.gcd(*ints)


def rational_root_in(q: UnivariatePoly, iv: RatInterval, bound: int | None = None):
    """The rational root of ``q`` in the isolating interval ``iv``, or None.

    Without ``bound`` the search is complete: it uses the exact denominator
    bound from the leading coefficient.
    """
    if iv.is_point():
        return iv.lo if q(iv.lo) == 0 else None
    bound = bound or rational_denominator_bound(q)
    # two rationals with denominators <= bound are 1/bound^2 apart
    iv = refine_root(q, iv, Fraction(1, 2 * bound * bound))
    if iv.is_point():
        return iv.lo
    cand = iv.mid.limit_denominator(bound)
    if iv.contains(cand) and q(cand) == 0:
        return cand
    return None


# ---------------------------------------------------------------------------
# resultants


def _as_univariate_in(p: MultiPoly, var: int) -> dict[int, UnivariatePoly]:
    """Coefficients of ``p`` as a polynomial in variable ``var``.

    Each coefficient is a univariate polynomial in the other variable.
    """
    other = 1 - var
    buckets: dict[int, dict[int, Fraction]] = {}
    for m, c in p.items():
        buckets.setdefault(m[var], {})[m[other]] = c
    out = {}
    for e, cs in buckets.items():
        top = max(cs)
        out[e] = UnivariatePoly([cs.get(k, 0) for k in range(top + 1)])
    return out


def _interpolate(xs: Sequence[Fraction], ys: Sequence[Fraction]) -> UnivariatePoly:
    # Newton divided differences
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = UnivariatePoly([coef[-1]])
    for i in range(n - 2, -1, -1):
        poly = poly * UnivariatePoly([-xs[i], 1]) + UnivariatePoly([coef[i]])
    return poly


def sylvester_resultant(f: MultiPoly, g: MultiPoly, eliminate: str = "y") -> UnivariatePoly:
    """Resultant of ``f`` and ``g`` with respect to one variable.

    The Sylvester matrix has polynomial entries in the remaining variable;
    its determinant is computed exactly by evaluating at enough integer points
    and interpolating (the degree is at most ``deg f * deg g``).
    """
    if f.is_zero() or g.is_zero():
        raise ValueError("resultant of the zero polynomial")
    var = {"x": 0, "y": 1}[eliminate]
    fc, gc = _as_univariate_in(f, var), _as_univariate_in(g, var)
    m, n = max(fc), max(gc)
    if m == 0 and n == 0:
        raise BothConstant(f"neither polynomial involves {eliminate}")
    size = m + n
    bound = f.degree * g.degree
    xs = [Fraction(k) for k in range(bound + 1)]
    ys = []
    for t in xs:
        fv = [fc[e](t) if e in fc else Fraction(0) for e in range(m, -1, -1)]
        gv = [gc[e](t) if e in gc else Fraction(0) for e in range(n, -1, -1)]
        rows = []
        for i in range(n):
            rows.append([0] * i + fv + [0] * (size - m - 1 - i))
        for i in range(m):
            rows.append([0] * i + gv + [0] * (size - n - 1 - i))
        ys.append(determinant(RatMatrix(rows)))
    return _interpolate(xs, ys)


def eliminant(relations: Sequence[MultiPoly], eliminate: str) -> UnivariatePoly | None:
    """gcd of the nonzero pairwise resultants, or None if all vanish."""
    res = None
    for f, g in combinations(relations, 2):
        try:
            r = sylvester_resultant(f, g, eliminate)
        except BothConstant:
            continue
        if r.is_zero():
            continue
        res = r.monic() if res is None else res.gcd(r)
    return res


# ---------------------------------------------------------------------------
# quotient ring of a zero-dimensional ideal


class Quotient:
    """Normal-form coordinates in ``Q[x, y] / I`` for a Groebner basis of I."""

    def __init__(self, groebner: Sequence[MultiPoly], order=GRLEX):
        self.groebner = list(groebner)
        self.order = order
        self.basis = standard_monomials(self.groebner, order)
        self.dim = len(self.basis)

    def nf(self, p: MultiPoly) -> MultiPoly:
        return normal_form(p, self.groebner, self.order)

    def vector(self, p: MultiPoly) -> tuple[Fraction, ...]:
        return self.nf(p).to_vector(self.basis)

    def express(self, target: MultiPoly, spanning: Sequence[MultiPoly]) -> tuple[Fraction, ...] | None:
        """Coefficients c with ``target == sum c_k spanning_k`` in the quotient.

        Returns None if the spanning set is not a basis of the quotient.
        """
        if len(spanning) != self.dim:
            return None
        cols = [self.vector(s) for s in spanning]
        A = RatMatrix([[cols[k][i] for k in range(self.dim)] for i in range(self.dim)])
        try:
            return solve_linear(A, self.vector(target))
        except Exception:
            return None

    def dependency(self, spanning: Sequence[MultiPoly]) -> tuple[Fraction, ...] | None:
        """A nonzero c with ``sum c_k spanning_k == 0`` in the quotient, if any."""
        if not spanning:
            return None
        cols = [self.vector(s) for s in spanning]
        A = RatMatrix([[cols[k][i] for k in range(len(spanning))] for i in range(self.dim)]) if self.dim else None
        if A is None:
            return tuple(Fraction(int(k == 0)) for k in range(len(spanning)))
        ker = kernel_basis(A)
        return ker[0] if ker else None


@dataclass(frozen=True)
class Parametrization:
    """Points as ``(x(u), y(u))`` over the roots of a square-free ``m(u)``."""

    shear: Fraction  # u = x + shear * y
    minpoly: UnivariatePoly
    x_of_u: UnivariatePoly
    y_of_u: UnivariatePoly


def _find_parametrization(q: Quotient, shears=(0, 1, -1, 2, -2, 3, -3, 5, 7, 11)) -> Parametrization:
    X, Y = MultiPoly.variable(0), MultiPoly.variable(1)
    N = q.dim
    for t in shears:
        u = X + Y * t
        powers = [MultiPoly.constant(1)]
        for _ in range(N):
            powers.append(q.nf(powers[-1] * u))
        coeffs = q.express(powers[N], powers[:N])
        if coeffs is None:
            continue
        minpoly = UnivariatePoly(list(-c for c in coeffs) + [1])
        xs = q.express(X, powers[:N])
        ys = q.express(Y, powers[:N])
        return Parametrization(Fraction(t), minpoly, UnivariatePoly(xs), UnivariatePoly(ys))
    # deterministic, but a pathological configuration could defeat the short list
    raise VarietyError("no separating linear form found")


# ---------------------------------------------------------------------------
# points


@dataclass(frozen=True)
class VarietyPoint:
    """A certified real point: coordinate enclosures plus exact values when rational."""

    x: RatInterval
    y: RatInterval
    exact_x: Fraction | None = None
    exact_y: Fraction | None = None
    residuals: tuple[RatInterval, ...] = ()
    _param: Parametrization | None = field(default=None, compare=False, repr=False)
    _root: RatInterval | None = field(default=None, compare=False, repr=False)

    @classmethod
    def rational(cls, x, y, relations: Sequence[MultiPoly] = ()) -> "VarietyPoint":
        x, y = Fraction(x), Fraction(y)
        res = tuple(RatInterval.point(r.evaluate(x, y)) for r in relations)
        return cls(RatInterval.point(x), RatInterval.point(y), x, y, res)

    @property
    def is_rational(self) -> bool:
        return self.exact_x is not None and self.exact_y is not None

    @property
    def radius(self) -> Fraction:
        return max(self.x.rad, self.y.rad)

    def box(self) -> tuple[RatInterval, RatInterval]:
        return self.x, self.y

    def coords(self) -> tuple:
        """Exact coordinates when rational, else interval enclosures."""
        if self.is_rational:
            return self.exact_x, self.exact_y
        return self.x, self.y

    def approx(self) -> tuple[float, float]:
        return float(self.x.mid), float(self.y.mid)

    def refined(self, radius: Fraction) -> "VarietyPoint":
        """Same point with coordinate radii at most ``radius``."""
        if self.is_rational or self.radius <= radius or self._param is None:
            return self
        return _point_from_root(self._param, self._root, radius, None, ())

    def swapped(self) -> "VarietyPoint":
        param = None
        if self._param is not None:
            p = self._param
            param = Parametrization(p.shear, p.minpoly, p.y_of_u, p.x_of_u)
        return VarietyPoint(self.y, self.x, self.exact_y, self.exact_x, self.residuals, param, self._root)

    def evaluate(self, p: MultiPoly):
        """Exact value at rational points, certified enclosure otherwise."""
        if self.is_rational:
            return p.evaluate(self.exact_x, self.exact_y)
        return p.evaluate(self.x, self.y)

    def vanishes(self, p: MultiPoly) -> bool:
        v = self.evaluate(p)
        return v == 0 if isinstance(v, Fraction) else v.contains_zero()

    def to_dict(self) -> dict:
        def coord(iv: RatInterval, exact):
            d = {"mid": _decimal(iv.mid), "rad": _sci(iv.rad)}
            if exact is not None:
                d["exact"] = str(exact)
            return d

        return {
            "x": coord(self.x, self.exact_x),
            "y": coord(self.y, self.exact_y),
            "residuals": [_interval_str(r) for r in self.residuals],
        }


def _decimal(v: Fraction, digits: int = 20) -> str:
    from mpmath import mp, mpf

    with mp.workdps(digits + 10):
        return mp.nstr(mpf(v.numerator) / v.denominator, digits)


def _sci(v: Fraction) -> str:
    return "0" if v == 0 else f"{float(v):.3e}"


def _interval_str(r: RatInterval) -> str:
    if r.is_point():
        return str(r.lo)
    return f"[{_sci(r.lo)}, {_sci(r.hi)}]"


def _point_from_root(param: Parametrization, root: RatInterval, tol: Fraction, exact_u, relations) -> VarietyPoint:
    if exact_u is not None:
        x, y = param.x_of_u(exact_u), param.y_of_u(exact_u)
        return VarietyPoint.rational(x, y, relations)
    m = param.minpoly
    while True:
        ex = param.x_of_u(root)
        ey = param.y_of_u(root)
        ex = ex if isinstance(ex, RatInterval) else RatInterval.point(ex)
        ey = ey if isinstance(ey, RatInterval) else RatInterval.point(ey)
        if max(ex.rad, ey.rad) <= tol:
            break
        root = refine_root(m, root, root.width / 16)
    res = tuple(_as_iv(r.evaluate(ex, ey)) for r in relations)
    return VarietyPoint(ex, ey, None, None, res, param, root)


def _as_iv(v) -> RatInterval:
    return v if isinstance(v, RatInterval) else RatInterval.point(v)


@dataclass
class VarietyResult:
    relations: list[MultiPoly]
    points: list[VarietyPoint]
    relation_basis: list[MultiPoly]  # Groebner basis of the relation ideal
    radical_basis: list[MultiPoly]  # Groebner basis of its radical
    relation_quotient_dim: int
    radical_quotient_dim: int
    parametrization: Parametrization | None
    x_eliminant: UnivariatePoly | None
    y_eliminant: UnivariatePoly | None

    @property
    def card(self) -> int:
        return len(self.points)

    @property
    def quotient(self) -> Quotient | None:
        if not self.radical_basis or self.radical_quotient_dim == 0:
            return None
        return Quotient(self.radical_basis)

    @property
    def all_points_real(self) -> bool:
        """True when the radical ideal is exactly the vanishing ideal of the points."""
        return self.radical_quotient_dim == len(self.points)


def _univariate_from_quotient(q: Quotient, var: int) -> UnivariatePoly:
    v = MultiPoly.variable(var)
    powers = [MultiPoly.constant(1)]
    for k in range(q.dim + 1):
        dep = q.dependency(powers)
        if dep is not None:
            return UnivariatePoly(dep).monic()
        powers.append(q.nf(powers[-1] * v))
    raise VarietyError("no univariate eliminant found")  # pragma: no cover


def compute_variety(relations: Sequence[MultiPoly], tol: Fraction = DEFAULT_TOL) -> VarietyResult:
    """Solve the system and keep the algebraic by-products the solver needs."""
    rels = [r for r in relations if not r.is_zero()]
    if not rels:
        raise NoRelations("no nonzero relations, the variety is the whole plane")
    tol = Fraction(tol)
    rel_gb = buchberger(rels)
    if rel_gb == [MultiPoly.constant(1)]:
        return VarietyResult(list(rels), [], rel_gb, rel_gb, 0, 0, None, None, None)
    ex = eliminant(rels, "y")
    ey = eliminant(rels, "x")
    if ex is None or ey is None:
        if not is_zero_dimensional(rel_gb):
            raise PositiveDimensional("relations share a curve component (resultants vanish identically)")
        q0 = Quotient(rel_gb)
        ex = ex or _univariate_from_quotient(q0, 0)
        ey = ey or _univariate_from_quotient(q0, 1)
    if not is_zero_dimensional(rel_gb):  # pragma: no cover - eliminants force this
        raise PositiveDimensional("relation ideal is not zero-dimensional")
    rel_dim = len(standard_monomials(rel_gb))
    rad_gb = buchberger(rels + [ex.squarefree().to_multipoly(0), ey.squarefree().to_multipoly(1)])
    if rad_gb == [MultiPoly.constant(1)]:
        return VarietyResult(list(rels), [], rel_gb, rad_gb, rel_dim, 0, None, ex, ey)
    q = Quotient(rad_gb)
    param = _find_parametrization(q)
    points = []
    for root in isolate_real_roots(param.minpoly):
        u = rational_root_in(param.minpoly, root)
        pt = _point_from_root(param, root, tol, u, rels)
        if not pt.is_rational:
            pt = _detect_rational_coordinates(pt, ex, ey, rels)
        points.append(pt)
    points = _separate_boxes(points)
    return VarietyResult(list(rels), points, rel_gb, rad_gb, rel_dim, q.dim, param, ex, ey)


def _detect_rational_coordinates(pt: VarietyPoint, ex: UnivariatePoly, ey: UnivariatePoly, rels) -> VarietyPoint:
    # only one coordinate can be rational here: a rational u was caught already
    found = []
    for k, e in ((0, ex.squarefree()), (1, ey.squarefree())):
        bound = rational_denominator_bound(e)
        fine = pt.refined(Fraction(1, 4 * bound * bound))
        iv = fine.x if k == 0 else fine.y
        cand = iv.mid.limit_denominator(bound)
        ok = iv.contains(cand) and e(cand) == 0 and _count_roots(e, iv) == 1
        found.append(cand if ok else None)
    if found[0] is not None and found[1] is not None:
        return VarietyPoint.rational(found[0], found[1], rels)
    if found == [None, None]:
        return pt
    x = RatInterval.point(found[0]) if found[0] is not None else pt.x
    y = RatInterval.point(found[1]) if found[1] is not None else pt.y
    res = tuple(_as_iv(r.evaluate(x, y)) for r in rels)
    return VarietyPoint(x, y, found[0], found[1], res, pt._param, pt._root)


def _count_roots(p: UnivariatePoly, iv: RatInterval) -> int:
    if p.degree < 1:
        return 0
    seq = sturm_sequence(p)
    lo = iv.lo
    # roots in [lo, hi]
    extra = 1 if p(lo) == 0 else 0
    return _sign_changes(seq, lo) - _sign_changes(seq, iv.hi) + extra


def _boxes_overlap(a: VarietyPoint, b: VarietyPoint) -> bool:
    return a.x.overlaps(b.x) and a.y.overlaps(b.y)


def _separate_boxes(points: list[VarietyPoint]) -> list[VarietyPoint]:
    for _ in range(200):
        clash = {i for i, j in combinations(range(len(points)), 2) if _boxes_overlap(points[i], points[j])}
        if not clash:
            return points
        for i in clash:
            points[i] = points[i].refined(points[i].radius / 4)
    raise VarietyError("could not separate point enclosures")  # pragma: no cover


def solve_system(relations: Sequence[MultiPoly], tol=DEFAULT_TOL) -> list[VarietyPoint]:
    """Real common zeros of bivariate relations, each certified."""
    return compute_variety(relations, Fraction(tol)).points


@dataclass(frozen=True)
class CardinalityReport:
    card: int
    boxes_disjoint: bool
    relation_quotient_dim: int | None
    radical_quotient_dim: int | None
    multiple_points: int  # relation_quotient_dim - radical_quotient_dim
    nonreal_points: int  # radical_quotient_dim - card
    complete: bool

    def to_dict(self) -> dict:
        return {
            "card": self.card,
            "boxes_disjoint": self.boxes_disjoint,
            "relation_quotient_dim": self.relation_quotient_dim,
            "radical_quotient_dim": self.radical_quotient_dim,
            "multiplicity_gap": self.multiple_points,
            "nonreal_points": self.nonreal_points,
            "complete": self.complete,
        }


def verify_cardinality(points: Sequence[VarietyPoint], relations: Sequence[MultiPoly]) -> CardinalityReport:
    """Cross-check a point list against quotient-ring dimensions.

    ``relation_quotient_dim`` counts complex solutions with multiplicity and
    ``radical_quotient_dim`` counts them without.  The point list is complete
    and each point certified when every box is disjoint, every point
    satisfies every relation, and the radical dimension equals the count
    (then there are no non-real solutions that the real list could hide).
    """
    disjoint = not any(_boxes_overlap(a, b) for a, b in combinations(points, 2))
    rels = [r for r in relations if not r.is_zero()]
    gb = buchberger(rels)
    if gb == [MultiPoly.constant(1)]:
        return CardinalityReport(len(points), disjoint, 0, 0, 0, 0, disjoint and not points)
    if not is_zero_dimensional(gb):
        return CardinalityReport(len(points), disjoint, None, None, 0, 0, False)
    rel_dim = len(standard_monomials(gb))
    ex = eliminant(rels, "y") or _univariate_from_quotient(Quotient(gb), 0)
    ey = eliminant(rels, "x") or _univariate_from_quotient(Quotient(gb), 1)
    rad = buchberger(rels + [ex.squarefree().to_multipoly(0), ey.squarefree().to_multipoly(1)])
    rad_dim = 0 if rad == [MultiPoly.constant(1)] else len(standard_monomials(rad))
    satisfied = all(p.vanishes(r) for p in points for r in rels)
    return CardinalityReport(
        len(points), disjoint, rel_dim, rad_dim, rel_dim - rad_dim, rad_dim - len(points),
        disjoint and satisfied and rad_dim == len(points),
    )


def _compose(p: MultiPoly, param: Parametrization) -> UnivariatePoly:
    """``p(x(u), y(u))`` reduced modulo the minimal polynomial of ``u``."""
    m = param.minpoly
    if p.is_zero():
        return UnivariatePoly()
    # powers reduced as we go keep degrees below deg m
    xs = [UnivariatePoly([1])]
    ys = [UnivariatePoly([1])]
    for _ in range(p.degree_in(0)):
        xs.append((xs[-1] * param.x_of_u) % m)
    for _ in range(p.degree_in(1)):
        ys.append((ys[-1] * param.y_of_u) % m)
    acc = UnivariatePoly()
    for (i, j), c in p.items():
        acc = acc + ((xs[i] * ys[j]) % m) * c
    return acc % m


def vanishes_at(p: MultiPoly, point: VarietyPoint) -> bool:
    """Exact test of ``p(point) == 0``, also for irrational points.

    Irrational points carry the root ``u`` of the minimal polynomial they
    came from, so ``p(x(u), y(u))`` can be reduced modulo that polynomial and
    the question becomes whether the isolated root is a common root.
    """
    if point.is_rational:
        return p.evaluate(point.exact_x, point.exact_y) == 0
    if point._param is None or point._root is None:
        raise VarietyError("point carries no algebraic description")
    r = _compose(p, point._param)
    if r.is_zero():
        return True
    g = r.gcd(point._param.minpoly)
    return g.degree >= 1 and _count_roots(g, point._root) >= 1


def vanishes_on(p: MultiPoly, points: Sequence[VarietyPoint]) -> bool:
    return all(vanishes_at(p, pt) for pt in points)


def residuals(p: MultiPoly, points: Sequence[VarietyPoint]) -> tuple[RatInterval, ...]:
    """Certified enclosures of ``p`` over every point box."""
    return tuple(_as_iv(p.evaluate(pt.x, pt.y)) for pt in points)
