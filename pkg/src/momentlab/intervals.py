"""Certified enclosures.

Two kinds of interval are used.  :class:`RatInterval` has exact Fraction
endpoints and is used for root enclosures and polynomial evaluation, where
the endpoint sizes stay modest.  Determinants need elimination, where exact
endpoints would grow without bound, so those go through mpmath's outward
rounding interval arithmetic at an explicit precision (one private context
per call, so nothing global is mutated).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from mpmath.ctx_iv import MPIntervalContext


@dataclass(frozen=True)
class RatInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, v) -> "RatInterval":
        v = Fraction(v)
        return cls(v, v)

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def rad(self) -> Fraction:
        return (self.hi - self.lo) / 2

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, v) -> bool:
        return self.lo <= v <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def overlaps(self, other: "RatInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def magnitude(self) -> Fraction:
        return max(abs(self.lo), abs(self.hi))

    def _lift(self, other) -> "RatInterval":
        if isinstance(other, RatInterval):
            return other
        return RatInterval.point(other)

    def __add__(self, other) -> "RatInterval":
        o = self._lift(other)
        return RatInterval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self) -> "RatInterval":
        return RatInterval(-self.hi, -self.lo)

    def __sub__(self, other) -> "RatInterval":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "RatInterval":
        return self._lift(other) - self

    def __mul__(self, other) -> "RatInterval":
        o = self._lift(other)
        if o.is_point():
            c = o.lo
            return RatInterval(self.lo * c, self.hi * c) if c >= 0 else RatInterval(self.hi * c, self.lo * c)
        ps = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return RatInterval(min(ps), max(ps))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "RatInterval":
        out = RatInterval.point(1)
        for _ in range(k):
            out = out * self
        return out


def iv_context(prec: int) -> MPIntervalContext:
    ctx = MPIntervalContext()
    ctx.prec = prec
    return ctx


def to_iv(ctx: MPIntervalContext, value):
    """Outward-rounded mpmath interval enclosing a Fraction or RatInterval."""
    if isinstance(value, RatInterval):
        lo = ctx.mpf(value.lo.numerator) / value.lo.denominator
        hi = ctx.mpf(value.hi.numerator) / value.hi.denominator
        return ctx.mpf([lo.a, hi.b])
    value = Fraction(value)
    return ctx.mpf(value.numerator) / value.denominator


def _mpf_tuple_to_fraction(t) -> Fraction:
    sign, man, exp, _ = t
    v = Fraction(int(man)) * (Fraction(2) ** exp)
    return -v if sign else v


def from_iv(x) -> RatInterval:
    """Exact RatInterval with the same endpoints as an mpmath interval."""
    a, b = x._mpi_
    return RatInterval(_mpf_tuple_to_fraction(a), _mpf_tuple_to_fraction(b))


def iv_determinant(ctx: MPIntervalContext, rows: Sequence[Sequence]):
    """Interval enclosure of a determinant by pivoted Gaussian elimination.

    Returns ``None`` when every candidate pivot in some column contains zero;
    the caller should retry with tighter inputs and more precision.
    """
    a = [list(r) for r in rows]
    n = len(a)
    det = ctx.mpf(1)
    for c in range(n):
        cands = [i for i in range(c, n) if not (0 in a[i][c])]
        if not cands:
            return None
        p = max(cands, key=lambda i: abs(a[i][c]).a)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        piv = a[c][c]
        det = det * piv
        for i in range(c + 1, n):
            f = a[i][c] / piv
            a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det
