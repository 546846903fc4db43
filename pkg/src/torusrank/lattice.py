"""Full-rank sublattices of Z^n.

Covers membership and canonical residues, the two quotient lattices used
for the torus constructions (``matrix_A``: coordinate sum divisible by n+1;
``matrix_B``: the 2^(n+1)-1 vertex triangulation), forbidden-vector checks,
and a duplicate-free exhaustive search over sublattices of a given index.
"""

from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass, field
from functools import cached_property
from math import prod
from typing import Iterable, Iterator, Optional, Sequence

from .errors import BudgetExceeded, DomainError, ShapeError
from .exactmath import MatrixZ, determinant, hnf, solve_integer

FAMILIES = {
    "01": (0, 1),
    "012": (0, 1, 2),
    "-101": (-1, 0, 1),
}
"""Coordinate alphabets of the forbidden-vector families, keyed by tag."""

DEFAULT_SEARCH_BUDGET = 10**7


def budget(default: int) -> int:
    """Enumeration cap, overridable through ``TORUSRANK_BUDGET``."""
    env = os.environ.get("TORUSRANK_BUDGET")
    return int(env) if env else default


@dataclass(frozen=True)
class Lattice:
    n: int
    basis: MatrixZ

    def __post_init__(self):
        if self.basis.rows != self.n or self.basis.cols != self.n:
            raise ShapeError(f"basis must be {self.n}x{self.n}")
        if determinant(self.basis) == 0:
            raise DomainError("basis is singular")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "Lattice":
        m = MatrixZ.from_rows(rows)
        return cls(m.rows, m)

    @cached_property
    def hnf_basis(self) -> MatrixZ:
        return hnf(self.basis)[0]

    @cached_property
    def index(self) -> int:
        return abs(determinant(self.basis))

    @cached_property
    def _hnf_rows(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.hnf_basis.row(i) for i in range(self.n))

    def residue(self, v: Sequence[int]) -> tuple[int, ...]:
        """Canonical representative of ``v + L``: coordinate i lies in ``[0, h_ii)``."""
        res = list(v)
        for i, row in enumerate(self._hnf_rows):
            q = res[i] // row[i]
            if q:
                for j in range(i, self.n):
                    res[j] -= q * row[j]
        return tuple(res)

    def coset_reps(self) -> Iterator[tuple[int, ...]]:
        """All canonical residues; there are exactly ``index`` of them."""
        diag = [self._hnf_rows[i][i] for i in range(self.n)]
        return itertools.product(*(range(d) for d in diag))

    def contains(self, v: Sequence[int]) -> bool:
        if len(v) != self.n:
            raise ShapeError(f"vector of length {len(v)} in a rank-{self.n} lattice")
        return solve_integer(self.hnf_basis, v) is not None

    def _contains_fast(self, v: Sequence[int]) -> bool:
        return not any(self.residue(v))

    def to_json(self) -> dict:
        return {"n": self.n, "basis": self.basis.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "Lattice":
        lat = cls.from_rows(obj["basis"])
        if lat.n != obj["n"]:
            raise ShapeError("'n' does not match basis size")
        return lat

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def integer_lattice(n: int) -> Lattice:
    return Lattice.from_rows([[int(i == j) for j in range(n)] for i in range(n)])


def matrix_A(n: int) -> Lattice:
    """Vectors whose coordinate sum is divisible by n+1 (2 on the diagonal, 1 elsewhere)."""
    if n < 1:
        raise DomainError("n must be at least 1")
    return Lattice.from_rows([[2 if i == j else 1 for j in range(n)] for i in range(n)])


def matrix_B(n: int) -> Lattice:
    """Identity block with last column -2, -4, ..., -2^(n-1), 2^(n+1)-1."""
    if n < 2:
        raise DomainError("matrix_B needs n >= 2")
    rows = []
    for i in range(n - 1):
        row = [int(i == j) for j in range(n - 1)] + [-(2 ** (i + 1))]
        rows.append(row)
    rows.append([0] * (n - 1) + [2 ** (n + 1) - 1])
    return Lattice.from_rows(rows)


def family_vectors(family: str, n: int) -> Iterator[tuple[int, ...]]:
    """Nonzero vectors of {0,1}^n, {0,1,2}^n or {-1,0,1}^n, in odometer order."""
    alphabet = FAMILIES[family]
    for v in itertools.product(alphabet, repeat=n):
        if any(v):
            yield v


@dataclass(frozen=True)
class ForbiddenVectorReport:
    family: str
    witnesses: tuple[tuple[int, ...], ...]

    @property
    def holds(self) -> bool:
        return not self.witnesses


def forbidden_vector_check(lat: Lattice, family: str) -> ForbiddenVectorReport:
    if family not in FAMILIES:
        raise DomainError(f"unknown family {family!r}; expected one of {sorted(FAMILIES)}")
    wit = tuple(v for v in family_vectors(family, lat.n) if lat._contains_fast(v))
    return ForbiddenVectorReport(family, wit)


def hnf_diagonals(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """Ordered factorisations of ``k`` into ``n`` positive factors."""
    if n == 1:
        yield (k,)
        return
    for d in range(1, k + 1):
        if k % d == 0:
            for rest in hnf_diagonals(n - 1, k // d):
                yield (d,) + rest


def enumerate_sublattices(n: int, k: int) -> Iterator[Lattice]:
    """One HNF basis per sublattice of Z^n of index ``k``."""
    if k < 1:
        raise DomainError("index must be positive")
    for diag in hnf_diagonals(n, k):
        # free entries: row i, column j > i, ranging over [0, diag[j])
        slots = [(i, j) for j in range(n) for i in range(j)]
        for vals in itertools.product(*(range(diag[j]) for _, j in slots)):
            rows = [[0] * n for _ in range(n)]
            for i in range(n):
                rows[i][i] = diag[i]
            for (i, j), x in zip(slots, vals):
                rows[i][j] = x
            yield Lattice.from_rows(rows)


def count_sublattices(n: int, k: int) -> int:
    """Number of index-``k`` sublattices, from the HNF parametrisation."""
    return sum(prod(d ** j for j, d in enumerate(diag)) for diag in hnf_diagonals(n, k))


@dataclass
class SearchResult:
    n: int
    families: tuple[str, ...]
    smallest: Optional[int]
    census: list[dict] = field(default_factory=list)
    example: Optional[Lattice] = None

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "families": list(self.families),
            "smallest_passing_index": self.smallest,
            "example_basis": self.example.basis.tolist() if self.example else None,
            "census": self.census,
        }


def min_index_search(
    n: int,
    families: Iterable[str],
    max_index: int,
    max_tests: Optional[int] = None,
) -> SearchResult:
    """Smallest index of a sublattice avoiding every nonzero vector of ``families``.

    Scans indices upward and stops at the first passing one.  The census
    records, per index, how many sublattices were examined, how many pass,
    and the witness that rejected the first failing lattice.
    """
    families = tuple(families)
    vecs = [v for f in families for v in family_vectors(f, n)]
    cap = max_tests if max_tests is not None else budget(DEFAULT_SEARCH_BUDGET)
    used = 0
    out = SearchResult(n, families, None)
    for k in range(1, max_index + 1):
        cost = count_sublattices(n, k) * len(vecs)
        if used + cost > cap:
            raise BudgetExceeded(
                f"index {k} needs up to {cost} membership tests; budget {cap} ({used} used)"
            )
        count = passing = 0
        first_witness = None
        for lat in enumerate_sublattices(n, k):
            count += 1
            witness = None
            for v in vecs:
                used += 1
                if lat._contains_fast(v):
                    witness = v
                    break
            if witness is None:
                passing += 1
                if out.example is None:
                    out.example = lat
            elif first_witness is None:
                first_witness = list(witness)
        out.census.append(
            {"index": k, "lattices": count, "passing": passing, "first_witness": first_witness}
        )
        if passing:
            out.smallest = k
            break
    return out
