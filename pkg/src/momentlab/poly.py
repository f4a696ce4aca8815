"""Sparse multivariate polynomials with exact rational coefficients.

Monomials are exponent tuples; for the bivariate case ``(i, j)`` means
``x**i * y**j``.  Two monomial orders are provided:

* ``GRLEX`` -- total degree first, ties broken by the exponent of the *last*
  variable, so the ascending bivariate enumeration is 1, x, y, x^2, xy, y^2,
  x^3, ... (the row/column order of a moment matrix).
* ``LEX`` -- plain lexicographic with x > y.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Mapping, Sequence

Monomial = tuple[int, ...]

VARIABLES = ("x", "y")


class ZeroDivisor(ZeroDivisionError):
    pass


class PolynomialParseError(ValueError):
    pass


class MonomialOrder(enum.Enum):
    GRLEX = "grlex"
    LEX = "lex"

    def key(self, m: Monomial) -> tuple:
        if self is MonomialOrder.GRLEX:
            return (sum(m),) + tuple(reversed(m))
        return tuple(m)


GRLEX = MonomialOrder.GRLEX
LEX = MonomialOrder.LEX


def compare_monomials(a: Monomial, b: Monomial, order: MonomialOrder = GRLEX) -> int:
    """Return -1, 0 or 1 as ``a`` is smaller than, equal to or larger than ``b``."""
    ka, kb = order.key(a), order.key(b)
    return (ka > kb) - (ka < kb)


def monomials_up_to(degree: int, nvars: int = 2) -> list[Monomial]:
    """All monomials of total degree <= ``degree`` in ascending GRLEX order."""
    if nvars != 2:
        out: list[Monomial] = []

        def rec(prefix, left, k):
            if k == 1:
                out.append(prefix + (left,))
                return
            for e in range(left + 1):
                rec(prefix + (e,), left - e, k - 1)

        for d in range(degree + 1):
            rec((), d, nvars)
        return sorted(out, key=GRLEX.key)
    return [(d - j, j) for d in range(degree + 1) for j in range(d + 1)]


def divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def _mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def format_monomial(m: Monomial, names: Sequence[str] = VARIABLES) -> str:
    parts = []
    for name, e in zip(names, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


class MultiPoly:
    """Immutable polynomial; ``terms`` maps monomials to nonzero Fractions."""

    __slots__ = ("_terms", "nvars", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None, nvars: int = 2):
        clean: dict[Monomial, Fraction] = {}
        for m, c in (terms or {}).items():
            m = tuple(m)
            if len(m) != nvars:
                raise ValueError(f"monomial {m} does not have {nvars} exponents")
            c = c if isinstance(c, Fraction) else Fraction(c)
            if c:
                clean[m] = clean.get(m, 0) + c
                if not clean[m]:
                    del clean[m]
        self._terms = clean
        self.nvars = nvars
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[Monomial, Fraction], nvars: int) -> "MultiPoly":
        p = cls.__new__(cls)
        p._terms = terms
        p.nvars = nvars
        p._hash = None
        return p

    @classmethod
    def constant(cls, c, nvars: int = 2) -> "MultiPoly":
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def monomial(cls, m: Monomial, c=1) -> "MultiPoly":
        return cls({tuple(m): c}, len(m))

    @classmethod
    def variable(cls, k: int, nvars: int = 2) -> "MultiPoly":
        m = [0] * nvars
        m[k] = 1
        return cls({tuple(m): 1}, nvars)

    @classmethod
    def from_vector(cls, coeffs: Sequence, monomials: Sequence[Monomial]) -> "MultiPoly":
        nv = len(monomials[0]) if monomials else 2
        return cls({m: c for m, c in zip(monomials, coeffs)}, nv)

    @classmethod
    def parse(cls, text: str, names: Sequence[str] = VARIABLES) -> "MultiPoly":
        return parse_poly(text, names)

    # -- basic queries -------------------------------------------------
    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def monomials(self) -> list[Monomial]:
        return list(self._terms)

    def coefficient(self, m: Monomial) -> Fraction:
        return self._terms.get(tuple(m), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self._terms), default=-1)

    def degree_in(self, k: int) -> int:
        return max((m[k] for m in self._terms), default=-1)

    def leading_monomial(self, order: MonomialOrder = GRLEX) -> Monomial:
        if not self._terms:
            raise ZeroDivisor("zero polynomial has no leading monomial")
        return max(self._terms, key=order.key)

    def leading_coefficient(self, order: MonomialOrder = GRLEX) -> Fraction:
        return self._terms[self.leading_monomial(order)]

    def sorted_terms(self, order: MonomialOrder = GRLEX, descending: bool = True):
        return sorted(self._terms.items(), key=lambda t: order.key(t[0]), reverse=descending)

    def monic(self, order: MonomialOrder = GRLEX) -> "MultiPoly":
        if not self._terms:
            return self
        lc = self.leading_coefficient(order)
        if lc == 1:
            return self
        return MultiPoly._raw({m: c / lc for m, c in self._terms.items()}, self.nvars)

    # -- arithmetic ------------------------------------------------------
    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            return other
        return MultiPoly.constant(other, self.nvars)

    def __add__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return MultiPoly._raw(out, self.nvars)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw({m: -c for m, c in self._terms.items()}, self.nvars)

    def __sub__(self, other) -> "MultiPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "MultiPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            c = Fraction(other)
            if not c:
                return MultiPoly._raw({}, self.nvars)
            return MultiPoly._raw({m: v * c for m, v in self._terms.items()}, self.nvars)
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return MultiPoly._raw({m: c for m, c in out.items() if c}, self.nvars)

    __rmul__ = __mul__

    def __truediv__(self, c) -> "MultiPoly":
        return self * (1 / Fraction(c))

    def __pow__(self, k: int) -> "MultiPoly":
        if k < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def mul_term(self, m: Monomial, c: Fraction) -> "MultiPoly":
        return MultiPoly._raw({_mono_mul(k, m): v * c for k, v in self._terms.items()}, self.nvars)

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self._terms == other._terms
        try:
            return self._terms == MultiPoly.constant(other, self.nvars)._terms
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def swap_variables(self) -> "MultiPoly":
        """Exchange x and y (bivariate only)."""
        return MultiPoly._raw({(m[1], m[0]): c for m, c in self._terms.items()}, 2)

    def to_vector(self, monomials: Sequence[Monomial]) -> tuple[Fraction, ...]:
        idx = set(monomials)
        extra = [m for m in self._terms if m not in idx]
        if extra:
            raise ValueError(f"monomials {extra} outside the given basis")
        return tuple(self._terms.get(m, Fraction(0)) for m in monomials)

    # -- evaluation ------------------------------------------------------
    def evaluate(self, *point, convert: Callable | None = None):
        """Nested Horner evaluation.

        Works for Fractions (exact), for mpmath interval values (pass
        ``convert`` to lift the rational coefficients into the same type), and
        for anything else supporting ``+`` and ``*``.
        """
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates")
        conv = convert or (lambda c: c)
        if not self._terms:
            return conv(Fraction(0))
        return _horner(list(self._terms.items()), point, 0, conv)

    def __call__(self, *point):
        return self.evaluate(*point)

    # -- text ------------------------------------------------------------
    def to_str(self, order: MonomialOrder = GRLEX, names: Sequence[str] = VARIABLES) -> str:
        if not self._terms:
            return "0"
        out = []
        for k, (m, c) in enumerate(self.sorted_terms(order)):
            sign = "-" if c < 0 else "+"
            a = -c if c < 0 else c
            mono = format_monomial(m, names)
            if mono == "1":
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if k == 0:
                out.append(body if sign == "+" else "-" + body)
            else:
                out.append(f" {sign} {body}")
        return "".join(out)

    def __str__(self) -> str:
        return self.to_str()

    def __repr__(self) -> str:
        return f"MultiPoly({self.to_str()!r})"


def _horner(terms, point, k, conv):
    # group by exponent of variable k, Horner in that variable
    if k == len(point) - 1:
        by = {}
        for m, c in terms:
            by[m[k]] = by.get(m[k], 0) + c
    else:
        groups: dict[int, list] = {}
        for m, c in terms:
            groups.setdefault(m[k], []).append((m, c))
        by = {e: _horner(g, point, k + 1, conv) for e, g in groups.items()}
    top = max(by)
    v = point[k]
    acc = None
    for e in range(top, -1, -1):
        coef = by.get(e)
        if k == len(point) - 1 and coef is not None:
            coef = conv(coef)
        if acc is None:
            acc = coef
        else:
            acc = acc * v
            if coef is not None:
                acc = acc + coef
    return acc


_TERM_RE = re.compile(r"\s*([+-])?\s*([^+-]+)")


def parse_poly(text: str, names: Sequence[str] = VARIABLES) -> MultiPoly:
    """Parse ``"x^4 + 6*x - 11/2*y + 1/2*x*y^2"``-style text."""
    src = text.strip()
    if not src:
        raise PolynomialParseError("empty polynomial")
    # split on top-level signs, keeping exponent notation intact
    nv = len(names)
    terms: dict[Monomial, Fraction] = {}
    pos = 0
    s = src.replace("**", "^")
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if not m or not m.group(2).strip():
            raise PolynomialParseError(f"cannot parse near {s[pos:]!r}")
        sign = -1 if m.group(1) == "-" else 1
        coef = Fraction(sign)
        expo = [0] * nv
        for factor in m.group(2).split("*"):
            factor = factor.strip()
            if not factor:
                raise PolynomialParseError(f"empty factor in {m.group(2)!r}")
            if factor[0].isdigit():
                try:
                    coef *= Fraction(factor)
                except ValueError as exc:
                    raise PolynomialParseError(f"bad coefficient {factor!r}") from exc
                continue
            base, caret, power = factor.partition("^")
            base = base.strip()
            if caret and not power.strip():
                raise PolynomialParseError(f"missing exponent in {factor!r}")
            if base not in names:
                raise PolynomialParseError(f"unknown variable {base!r}")
            try:
                e = int(power) if power else 1
            except ValueError as exc:
                raise PolynomialParseError(f"bad exponent in {factor!r}") from exc
            expo[names.index(base)] += e
        key = tuple(expo)
        terms[key] = terms.get(key, 0) + coef
        pos = m.end()
    return MultiPoly(terms, nv)


# ---------------------------------------------------------------------------
# Division algorithm and Groebner bases


@dataclass(frozen=True)
class DivisionResult:
    quotients: tuple[MultiPoly, ...]
    remainder: MultiPoly


def divide(f: MultiPoly, divisors: Sequence[MultiPoly], order: MonomialOrder = GRLEX) -> DivisionResult:
    """Multivariate division: ``f = sum(q_i * f_i) + r``.

    The current leading term is cancelled by the first divisor (in list order)
    whose leading monomial divides it; otherwise it moves to the remainder.
    """
    if any(d.is_zero() for d in divisors):
        raise ZeroDivisor("division by the zero polynomial")
    nv = f.nvars
    leads = [(d.leading_monomial(order), d.leading_coefficient(order)) for d in divisors]
    key = order.key
    p = dict(f._terms)
    quots: list[dict[Monomial, Fraction]] = [{} for _ in divisors]
    rem: dict[Monomial, Fraction] = {}
    while p:
        lm = max(p, key=key)
        lc = p[lm]
        for i, (dm, dc) in enumerate(leads):
            if divides(dm, lm):
                qm = _mono_div(lm, dm)
                qc = lc / dc
                quots[i][qm] = quots[i].get(qm, 0) + qc
                for m, c in divisors[i]._terms.items():
                    t = _mono_mul(m, qm)
                    v = p.get(t, 0) - qc * c
                    if v:
                        p[t] = v
                    else:
                        p.pop(t, None)
                break
        else:
            rem[lm] = lc
            del p[lm]
    return DivisionResult(
        tuple(MultiPoly(q, nv) for q in quots),
        MultiPoly._raw(rem, nv),
    )


def s_polynomial(f: MultiPoly, g: MultiPoly, order: MonomialOrder = GRLEX) -> MultiPoly:
    if f.is_zero() or g.is_zero():
        raise ZeroDivisor("S-polynomial of the zero polynomial")
    mf, mg = f.leading_monomial(order), g.leading_monomial(order)
    cf, cg = f._terms[mf], g._terms[mg]
    L = mono_lcm(mf, mg)
    return f.mul_term(_mono_div(L, mf), 1 / cf) - g.mul_term(_mono_div(L, mg), 1 / cg)


def reduce_fully(f: MultiPoly, basis: Sequence[MultiPoly], order: MonomialOrder = GRLEX) -> MultiPoly:
    if not basis:
        return f
    return divide(f, basis, order).remainder


def buchberger(gens: Iterable[MultiPoly], order: MonomialOrder = GRLEX) -> list[MultiPoly]:
    """Reduced Groebner basis of the ideal generated by ``gens``.

    Pairs whose leading monomials are coprime are skipped (Buchberger's first
    criterion).  The result is monic, inter-reduced and sorted by leading
    monomial, so it is a canonical description of the ideal.
    """
    G = [g.monic(order) for g in gens if not g.is_zero()]
    if not G:
        raise ValueError("buchberger needs at least one nonzero generator")
    if any(g.degree == 0 for g in G):
        return [MultiPoly.constant(1, G[0].nvars)]
    leads = [g.leading_monomial(order) for g in G]
    pairs = list(combinations(range(len(G)), 2))
    while pairs:
        # normal selection strategy: smallest lcm first
        best = min(range(len(pairs)), key=lambda t: order.key(mono_lcm(leads[pairs[t][0]], leads[pairs[t][1]])))
        i, j = pairs.pop(best)
        li, lj = leads[i], leads[j]
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue
        L = mono_lcm(li, lj)
        # chain criterion: skip if some k has lead dividing L and both (i,k),(j,k) already handled
        if any(
            k not in (i, j) and divides(leads[k], L)
            and _pair(i, k) not in pairs and _pair(j, k) not in pairs
            for k in range(len(G))
        ):
            continue
        r = reduce_fully(s_polynomial(G[i], G[j], order), G, order)
        if r.is_zero():
            continue
        r = r.monic(order)
        if r.degree == 0:
            return [MultiPoly.constant(1, r.nvars)]
        G.append(r)
        leads.append(r.leading_monomial(order))
        n = len(G) - 1
        pairs.extend((k, n) for k in range(n))
    return _reduce_basis(G, order)


def _pair(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


def _reduce_basis(G: list[MultiPoly], order: MonomialOrder) -> list[MultiPoly]:
    leads = [g.leading_monomial(order) for g in G]
    keep = []
    for i, li in enumerate(leads):
        dominated = any(
            j != i and divides(lj, li) and (lj != li or j < i)
            for j, lj in enumerate(leads)
        )
        if not dominated:
            keep.append(G[i])
    out = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1:]
        lm = g.leading_monomial(order)
        tail = MultiPoly._raw({m: c for m, c in g._terms.items() if m != lm}, g.nvars)
        r = reduce_fully(tail, others, order) if others else tail
        out.append(MultiPoly.monomial(lm) + r)
    return sorted((p.monic(order) for p in out), key=lambda p: order.key(p.leading_monomial(order)))


def normal_form(f: MultiPoly, groebner: Sequence[MultiPoly], order: MonomialOrder = GRLEX) -> MultiPoly:
    """Unique remainder of ``f`` modulo a Groebner basis."""
    return reduce_fully(f, groebner, order)


def is_zero_dimensional(groebner: Sequence[MultiPoly], order: MonomialOrder = GRLEX) -> bool:
    if not groebner:
        return False
    nv = groebner[0].nvars
    leads = [g.leading_monomial(order) for g in groebner]
    return all(
        any(m[k] > 0 and sum(m) == m[k] for m in leads)
        for k in range(nv)
    )


def standard_monomials(groebner: Sequence[MultiPoly], order: MonomialOrder = GRLEX) -> list[Monomial]:
    """Monomials outside the leading-term ideal, ascending in ``order``.

    Requires a zero-dimensional ideal (finite quotient ring).
    """
    if not is_zero_dimensional(groebner, order):
        raise ValueError("ideal is not zero-dimensional; quotient ring is infinite")
    nv = groebner[0].nvars
    leads = [g.leading_monomial(order) for g in groebner]
    if any(sum(m) == 0 for m in leads):
        return []
    bounds = [min(m[k] for m in leads if sum(m) == m[k] and m[k] > 0) for k in range(nv)]
    out: list[Monomial] = []

    def rec(prefix):
        if len(prefix) == nv:
            if not any(divides(L, prefix) for L in leads):
                out.append(prefix)
            return
        for e in range(bounds[len(prefix)]):
            rec(prefix + (e,))

    rec(())
    return sorted(out, key=order.key)
