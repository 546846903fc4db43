"""Exact integer, rational and mod-2 matrices.

Everything here is pure Python over ``int`` and ``fractions.Fraction``; no
floating point enters any computation.  Matrices are immutable row-major
tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import DegeneracyError, ShapeError

__all__ = [
    "MatrixZ",
    "MatrixQ",
    "MatrixF2",
    "determinant",
    "hnf",
    "rank",
    "solve_integer",
    "identity",
]


@dataclass(frozen=True)
class _Matrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ShapeError("negative matrix shape")
        if len(self.entries) != self.rows * self.cols:
            raise ShapeError(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix"
            )
        object.__setattr__(self, "entries", tuple(self._coerce(x) for x in self.entries))

    @staticmethod
    def _coerce(x):
        return x

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence], cols: Optional[int] = None):
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ShapeError("ragged rows")
        return cls(len(rows), cols, tuple(x for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int):
        return cls(rows, cols, (0,) * (rows * cols))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def tolist(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def T(self):
        return type(self).from_rows(
            [[self[i, j] for i in range(self.rows)] for j in range(self.cols)],
            cols=self.rows,
        )

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __matmul__(self, other):
        if not isinstance(other, _Matrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        out = []
        ocols = [other.entries[j::other.cols] for j in range(other.cols)]
        for i in range(self.rows):
            r = self.row(i)
            out.extend(sum(a * b for a, b in zip(r, c)) for c in ocols)
        return type(self)(self.rows, other.cols, tuple(out))


class MatrixZ(_Matrix):
    """Integer matrix."""

    @staticmethod
    def _coerce(x):
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"non-integer entry {x}")
            return x.numerator
        return int(x)


class MatrixQ(_Matrix):
    """Rational matrix; entries are reduced ``Fraction`` objects."""

    @staticmethod
    def _coerce(x):
        return Fraction(x)


class MatrixF2(_Matrix):
    """Matrix over the two-element field, entries 0 or 1."""

    @staticmethod
    def _coerce(x):
        return int(x) & 1

    def __matmul__(self, other):
        prod = super().__matmul__(other)
        return MatrixF2(prod.rows, prod.cols, prod.entries)


def identity(n: int, cls=MatrixZ):
    return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))


def determinant(m: _Matrix):
    """Exact determinant.

    Integer matrices use Bareiss fraction-free elimination, so every
    intermediate value is itself a minor of ``m``.  Rational matrices go
    through plain Gaussian elimination over ``Fraction``.
    """
    if not m.is_square:
        raise ShapeError(f"determinant of a {m.rows}x{m.cols} matrix")
    n = m.rows
    if n == 0:
        return 1
    a = m.tolist()
    if isinstance(m, MatrixQ):
        return _det_field(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
        prev = pivot
    det = sign * a[n - 1][n - 1]
    if isinstance(m, MatrixF2):
        return det & 1
    return det


def _det_field(a: list[list[Fraction]]) -> Fraction:
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        p = next((i for i in range(k, n) if a[i][k] != 0), None)
        if p is None:
            return Fraction(0)
        if p != k:
            a[k], a[p] = a[p], a[k]
            det = -det
        pivot = a[k][k]
        det *= pivot
        for i in range(k + 1, n):
            f = a[i][k] / pivot
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return det


def hnf(m: MatrixZ, allow_deficient: bool = False) -> tuple[MatrixZ, MatrixZ]:
    """Row-style Hermite normal form.

    Returns ``(h, u)`` with ``h = u @ m`` and ``u`` unimodular.  ``h`` is in
    echelon form with positive pivots and every entry above a pivot reduced
    into ``[0, pivot)``.  Zero rows, if any, come last; they are an error
    unless ``allow_deficient`` is set.
    """
    r, c = m.rows, m.cols
    h = m.tolist()
    u = identity(r).tolist()
    prow = 0
    for col in range(c):
        if prow == r:
            break
        while True:
            nz = [i for i in range(prow, r) if h[i][col] != 0]
            if not nz:
                break
            best = min(nz, key=lambda i: abs(h[i][col]))
            if best != prow:
                h[prow], h[best] = h[best], h[prow]
                u[prow], u[best] = u[best], u[prow]
            done = True
            p = h[prow][col]
            for i in range(prow + 1, r):
                q = h[i][col] // p
                if q:
                    h[i] = [x - q * y for x, y in zip(h[i], h[prow])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[prow])]
                if h[i][col] != 0:
                    done = False
            if done:
                break
        if h[prow][col] == 0:
            continue
        if h[prow][col] < 0:
            h[prow] = [-x for x in h[prow]]
            u[prow] = [-x for x in u[prow]]
        p = h[prow][col]
        for i in range(prow):
            q = h[i][col] // p
            if q:
                h[i] = [x - q * y for x, y in zip(h[i], h[prow])]
                u[i] = [x - q * y for x, y in zip(u[i], u[prow])]
        prow += 1
    if prow < r and not allow_deficient:
        raise DegeneracyError(f"matrix has rank {prow} < {r} rows")
    return MatrixZ.from_rows(h, cols=c), MatrixZ.from_rows(u, cols=r)


def pivot_columns(h: MatrixZ) -> list[int]:
    """Column of the leading nonzero entry of each nonzero row of an echelon matrix."""
    cols = []
    for i in range(h.rows):
        row = h.row(i)
        j = next((j for j, x in enumerate(row) if x != 0), None)
        if j is None:
            break
        cols.append(j)
    return cols


def rank(m: MatrixF2 | MatrixQ | MatrixZ) -> int:
    """Rank over GF(2) for ``MatrixF2``, over the rationals otherwise."""
    if isinstance(m, MatrixF2):
        return rank_f2_rows(
            sum(1 << j for j, x in enumerate(m.row(i)) if x) for i in range(m.rows)
        )
    rows = [list(map(Fraction, m.row(i))) for i in range(m.rows)]
    rk = 0
    for col in range(m.cols):
        p = next((i for i in range(rk, len(rows)) if rows[i][col] != 0), None)
        if p is None:
            continue
        rows[rk], rows[p] = rows[p], rows[rk]
        piv = rows[rk]
        for i in range(rk + 1, len(rows)):
            f = rows[i][col] / piv[col]
            if f:
                rows[i] = [x - f * y for x, y in zip(rows[i], piv)]
        rk += 1
    return rk


def rank_f2_rows(rows: Iterable[int]) -> int:
    """Rank of GF(2) row vectors packed as int bitmasks."""
    basis: dict[int, int] = {}
    for v in rows:
        while v:
            top = v.bit_length() - 1
            b = basis.get(top)
            if b is None:
                basis[top] = v
                break
            v ^= b
    return len(basis)


def solve_integer(m: MatrixZ, v: Sequence[int]) -> Optional[tuple[int, ...]]:
    """Integer ``x`` with ``x @ m == v``, or None when ``v`` is not in the row lattice."""
    if len(v) != m.cols:
        raise ShapeError(f"vector of length {len(v)} against {m.cols} columns")
    h, u = hnf(m)
    y = _solve_echelon(h, v)
    if y is None:
        return None
    return tuple(sum(y[i] * u[i, j] for i in range(h.rows)) for j in range(m.rows))


def _solve_echelon(h: MatrixZ, v: Sequence[int]) -> Optional[list[int]]:
    res = [int(x) for x in v]
    y = []
    for i, col in enumerate(pivot_columns(h)):
        q, rem = divmod(res[col], h[i, col])
        if rem:
            return None
        y.append(q)
        if q:
            row = h.row(i)
            for j in range(col, h.cols):
                res[j] -= q * row[j]
    if any(res):
        return None
    return y
