"""Exact dense linear algebra over the rationals.

Everything here works on :class:`fractions.Fraction` entries and never rounds.
Rank and kernel use fraction-free (Bareiss) elimination on a row-scaled integer
copy of the matrix; the PSD test is a symmetric-pivoted LDL^T that returns a
certificate either way.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence


class LinAlgError(ValueError):
    pass


class NotSymmetric(LinAlgError):
    pass


class DimensionMismatch(LinAlgError):
    pass


class InconsistentSystem(LinAlgError):
    """Raised by :func:`solve_linear` when ``a x = b`` has no solution."""


class UnderdeterminedSystem(LinAlgError):
    """Raised by :func:`solve_linear` when the solution is not unique."""


Vector = tuple[Fraction, ...]


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError("floats are not accepted as exact input; pass a string or Fraction")
    return Fraction(value)


class RatMatrix:
    """Immutable dense matrix of Fractions, row-major."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: Iterable[Iterable]):
        data = tuple(tuple(as_fraction(v) for v in row) for row in rows)
        ncols = len(data[0]) if data else 0
        if any(len(r) != ncols for r in data):
            raise DimensionMismatch("ragged rows")
        self.rows = len(data)
        self.cols = ncols
        self._data = data

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls([[0] * cols for _ in range(rows)])

    def __getitem__(self, idx: tuple[int, int]) -> Fraction:
        i, j = idx
        return self._data[i][j]

    def row(self, i: int) -> Vector:
        return self._data[i]

    def to_lists(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    def __eq__(self, other) -> bool:
        return isinstance(other, RatMatrix) and self._data == other._data

    def __hash__(self) -> int:
        return hash(self._data)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(v) for v in r) for r in self._data)
        return f"RatMatrix({self.rows}x{self.cols}: [{body}])"

    @property
    def T(self) -> "RatMatrix":
        return RatMatrix(zip(*self._data)) if self.rows else RatMatrix.zeros(self.cols, 0)

    def is_symmetric(self) -> bool:
        if self.rows != self.cols:
            return False
        d = self._data
        return all(d[i][j] == d[j][i] for i in range(self.rows) for j in range(i))

    def matvec(self, v: Sequence) -> Vector:
        if len(v) != self.cols:
            raise DimensionMismatch(f"vector of length {len(v)} for {self.cols} columns")
        v = [as_fraction(t) for t in v]
        return tuple(sum((a * b for a, b in zip(r, v) if a and b), Fraction(0)) for r in self._data)

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch("inner dimensions differ")
        oc = list(zip(*other._data))
        return RatMatrix([[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in oc] for r in self._data])

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RatMatrix":
        return RatMatrix([[self._data[i][j] for j in cols] for i in rows])

    def quadratic_form(self, v: Sequence) -> Fraction:
        """``v^T M v`` computed exactly."""
        mv = self.matvec(v)
        return sum((as_fraction(a) * b for a, b in zip(v, mv)), Fraction(0))


def _integer_rows(m: RatMatrix) -> list[list[int]]:
    # Scaling a row by a nonzero constant changes neither rank nor kernel.
    out = []
    for r in m.to_lists():
        d = lcm(*(v.denominator for v in r)) if r else 1
        out.append([int(v * d) for v in r])
    return out


def _bareiss_echelon(a: list[list[int]], ncols: int) -> list[int]:
    """Fraction-free forward elimination in place; returns pivot columns."""
    nrows = len(a)
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        for i in range(r + 1, nrows):
            aic = a[i][c]
            row_i, row_r = a[i], a[r]
            for j in range(c, ncols):
                row_i[j] = (piv * row_i[j] - aic * row_r[j]) // prev
        prev = piv
        pivots.append(c)
        r += 1
    return pivots


def rank(m: RatMatrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    a = _integer_rows(m)
    return len(_bareiss_echelon(a, m.cols))


def _rref(m: RatMatrix) -> tuple[list[list[Fraction]], list[int]]:
    a = _integer_rows(m)
    pivots = _bareiss_echelon(a, m.cols)
    rows = [[Fraction(v) for v in a[i]] for i in range(len(pivots))]
    # back substitution to reduced form
    for k in range(len(pivots) - 1, -1, -1):
        c = pivots[k]
        inv = 1 / rows[k][c]
        rows[k] = [v * inv for v in rows[k]]
        for i in range(k):
            f = rows[i][c]
            if f:
                rows[i] = [vi - f * vk for vi, vk in zip(rows[i], rows[k])]
    return rows, pivots


def kernel_basis(m: RatMatrix) -> list[Vector]:
    """Null space basis, one vector per free column, in reduced echelon form.

    The vector for free column ``f`` has a 1 in position ``f``, zeros in the
    other free positions, and the pivot entries forced by the equations.
    """
    if m.cols == 0:
        return []
    if m.rows == 0:
        return [tuple(Fraction(int(i == j)) for i in range(m.cols)) for j in range(m.cols)]
    rows, pivots = _rref(m)
    free = [c for c in range(m.cols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for k, c in enumerate(pivots):
            v[c] = -rows[k][f]
        basis.append(tuple(v))
    return basis


def independent_columns(m: RatMatrix) -> list[int]:
    """Greedy left-to-right choice of linearly independent columns."""
    if m.rows == 0:
        return []
    a = _integer_rows(m)
    return _bareiss_echelon(a, m.cols)


def solve_linear(a: RatMatrix, b: Sequence) -> Vector:
    """Unique exact solution of ``a x = b``.

    Raises :class:`InconsistentSystem` or :class:`UnderdeterminedSystem` when
    there is no solution or more than one.
    """
    if a.rows != len(b):
        raise DimensionMismatch(f"{a.rows} equations but right-hand side of length {len(b)}")
    aug = RatMatrix([list(r) + [as_fraction(v)] for r, v in zip(a.to_lists(), b)])
    rows, pivots = _rref(aug)
    if a.cols in pivots:
        raise InconsistentSystem("right-hand side is not in the column space")
    if len(pivots) < a.cols:
        raise UnderdeterminedSystem(f"rank {len(pivots)} < {a.cols} unknowns")
    return tuple(rows[k][a.cols] for k in range(a.cols))


def determinant(m: RatMatrix) -> Fraction:
    if m.rows != m.cols:
        raise DimensionMismatch("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return Fraction(1)
    a = [list(r) for r in m.to_lists()]
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        piv = a[c][c]
        det *= piv
        for i in range(c + 1, n):
            f = a[i][c] / piv
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def inverse(m: RatMatrix) -> RatMatrix:
    if m.rows != m.cols:
        raise DimensionMismatch("inverse of a non-square matrix")
    n = m.rows
    aug = RatMatrix([list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(m.to_lists())])
    rows, pivots = _rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise LinAlgError("matrix is singular")
    return RatMatrix([r[n:] for r in rows])


@dataclass(frozen=True)
class PsdCertificate:
    is_psd: bool
    rank: int
    pivots: tuple[tuple[int, Fraction], ...]
    witness: Vector | None = None
    witness_value: Fraction | None = None


def psd_check(m: RatMatrix) -> PsdCertificate:
    """Decide positive semidefiniteness exactly.

    Symmetric-pivoted LDL^T: at each step the largest remaining diagonal entry
    of the Schur complement is the pivot.  A negative pivot, or a zero diagonal
    with a nonzero off-diagonal entry in its row, yields a vector ``v`` with
    ``v^T m v < 0``, which is returned as the failure witness.
    """
    if not m.is_symmetric():
        raise NotSymmetric("psd_check needs an exactly symmetric matrix")
    n = m.rows
    s = m.to_lists()
    perm = list(range(n))
    # L columns for processed pivots, stored against the permuted order
    L = [[Fraction(0)] * n for _ in range(n)]
    pivots: list[tuple[int, Fraction]] = []

    def lift(k: int, w: dict[int, Fraction]) -> Vector:
        # v with v^T m v == w^T S w, S the Schur complement after k pivots
        z = [Fraction(0)] * n
        for pos, val in w.items():
            z[pos] = val
        for i in range(k - 1, -1, -1):
            acc = sum((L[j][i] * z[j] for j in range(i + 1, n) if z[j]), Fraction(0))
            z[i] = -acc
        v = [Fraction(0)] * n
        for pos in range(n):
            v[perm[pos]] = z[pos]
        return tuple(v)

    for k in range(n):
        j = max(range(k, n), key=lambda t: s[t][t])
        d = s[j][j]
        if d < 0:
            return _fail(m, pivots, lift(k, {j: Fraction(1)}))
        if d == 0:
            for a in range(k, n):
                for b in range(k, n):
                    if s[a][b] != 0:
                        t = -(s[b][b] + 1) / (2 * s[a][b])
                        return _fail(m, pivots, lift(k, {a: t, b: Fraction(1)}))
            return PsdCertificate(True, k, tuple(pivots))
        if j != k:
            s[k], s[j] = s[j], s[k]
            for r in s:
                r[k], r[j] = r[j], r[k]
            L[k], L[j] = L[j], L[k]
            perm[k], perm[j] = perm[j], perm[k]
        pivots.append((perm[k], d))
        L[k][k] = Fraction(1)
        for i in range(k + 1, n):
            L[i][k] = s[i][k] / d
        for i in range(k + 1, n):
            lik = L[i][k]
            if lik:
                ri, rk = s[i], s[k]
                for c in range(k + 1, n):
                    ri[c] -= lik * rk[c]
        for i in range(k + 1, n):
            s[i][k] = s[k][i] = Fraction(0)
    return PsdCertificate(True, n, tuple(pivots))


def _fail(m: RatMatrix, pivots, v: Vector) -> PsdCertificate:
    value = m.quadratic_form(v)
    if value >= 0:  # pragma: no cover - would mean the lift is wrong
        raise AssertionError("PSD witness does not certify negativity")
    return PsdCertificate(False, len(pivots), tuple(pivots), v, value)
