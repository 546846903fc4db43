"""Simplicial cell complexes (regular semi-simplicial sets).

A k-cell is stored by its ordered facet list: entry i is the (k-1)-cell
obtained by omitting vertex i.  Cells are *not* determined by their vertex
sets, which is the whole point of the structure; vertex tuples are derived
from the facets.

Storage is one integer array per dimension.  ``facets[k]`` has shape
``(f_k, k+1)`` and holds local indices into the ``(k-1)``-cells.  Global
cell ids enumerate dimension 0 first, then dimension 1, and so on.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import DomainError, ShapeError
from .exactmath import MatrixF2, MatrixQ

F2 = "F2"
Q = "Q"
FIELDS = (F2, Q)

SIMPLICIAL_COMPLEX = "SimplicialComplex"
CELL_COMPLEX_ONLY = "SimplicialCellComplexOnly"
INVALID = "Invalid"


@dataclass(frozen=True)
class Cell:
    id: int
    dim: int
    facets: tuple[int, ...]
    vertices: tuple[int, ...]


@dataclass(frozen=True)
class Validation:
    kind: str
    reason: str = ""

    @property
    def valid(self) -> bool:
        return self.kind != INVALID

    def __str__(self):
        return f"{self.kind}({self.reason})" if self.reason else self.kind


def _frozen(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    a.flags.writeable = False
    return a


class SimplicialCellComplex:
    """Immutable simplicial cell complex with per-vertex order labels."""

    def __init__(self, facets: Sequence, order_label: Optional[Sequence[int]] = None):
        if not facets:
            raise ShapeError("a complex needs at least one dimension")
        arrs = []
        for k, f in enumerate(facets):
            a = np.asarray(f, dtype=np.int64)
            if a.size == 0:
                a = a.reshape(0 if k else len(a), k + 1 if k else 0)
            if a.ndim != 2 or a.shape[1] != (k + 1 if k else 0):
                raise ShapeError(f"dimension {k} facet array has shape {a.shape}")
            arrs.append(_frozen(a))
        self.facets: tuple[np.ndarray, ...] = tuple(arrs)
        n0 = len(self.facets[0])
        if order_label is None:
            order_label = range(n0)
        self.order_label = _frozen(list(order_label))
        if self.order_label.shape != (n0,):
            raise ShapeError("one order label per vertex required")

    @classmethod
    def from_facet_lists(cls, n_vertices: int, facet_lists: Sequence[Sequence[Sequence[int]]],
                         order_label: Optional[Sequence[int]] = None):
        """Build from ``n_vertices`` and, for k = 1.., the facet tuples of the k-cells."""
        return cls([np.zeros((n_vertices, 0), dtype=np.int64), *facet_lists], order_label)

    # -- shape ---------------------------------------------------------------

    @property
    def top_dim(self) -> int:
        return len(self.facets) - 1

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(f) for f in self.facets)

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        return tuple(int(x) for x in np.concatenate([[0], np.cumsum(self.f_vector())]))

    def global_id(self, dim: int, local: int) -> int:
        return self.offsets[dim] + int(local)

    def locate(self, gid: int) -> tuple[int, int]:
        for k in range(self.top_dim + 1):
            if gid < self.offsets[k + 1]:
                if gid < 0:
                    break
                return k, gid - self.offsets[k]
        raise KeyError(f"no cell with id {gid}")

    def __len__(self) -> int:
        return self.offsets[-1]

    # -- derived data ----------------------------------------------------------

    @cached_property
    def _vertex_arrays(self) -> tuple[np.ndarray, ...]:
        out = [np.arange(len(self.facets[0]), dtype=np.int64)[:, None]]
        for k in range(1, self.top_dim + 1):
            F = self.facets[k]
            prev = out[-1]
            out.append(np.hstack([prev[F[:, k]], prev[F[:, 0]][:, -1:]]))
        return tuple(_frozen(v) for v in out)

    def vertices(self, k: int) -> np.ndarray:
        """Vertex tuples of all k-cells, shape ``(f_k, k+1)``, derived from facets."""
        return self._vertex_arrays[k]

    def cell(self, gid: int) -> Cell:
        k, i = self.locate(gid)
        fac = tuple(self.global_id(k - 1, j) for j in self.facets[k][i]) if k else ()
        return Cell(gid, k, fac, tuple(int(v) for v in self.vertices(k)[i]))

    def cells(self, k: Optional[int] = None) -> Iterable[Cell]:
        dims = range(self.top_dim + 1) if k is None else [k]
        for d in dims:
            for i in range(len(self.facets[d])):
                yield self.cell(self.global_id(d, i))

    def subface(self, k: int, positions: Sequence[int]) -> np.ndarray:
        """Local index, for each k-cell, of its face spanned by vertex ``positions``.

        Positions index the cell's ordered vertex tuple and must be increasing.
        """
        keep = set(positions)
        idx = np.arange(len(self.facets[k]), dtype=np.int64)
        d = k
        for j in reversed(range(k + 1)):
            if j not in keep:
                idx = self.facets[d][idx, j]
                d -= 1
        return idx

    # -- I/O -------------------------------------------------------------------

    def to_json(self) -> dict:
        cells = []
        for k, F in enumerate(self.facets):
            off_prev = self.offsets[k - 1] if k else 0
            for i, row in enumerate(F.tolist()):
                rec = {"id": self.offsets[k] + i, "dim": k, "facets": [off_prev + j for j in row]}
                if k == 0:
                    rec["order_label"] = int(self.order_label[i])
                cells.append(rec)
        return {"dims": self.top_dim, "cells": cells}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":")) + "\n"

    @classmethod
    def from_json(cls, obj: Mapping) -> "SimplicialCellComplex":
        top = int(obj["dims"])
        by_dim: list[list[dict]] = [[] for _ in range(top + 1)]
        for c in obj["cells"]:
            d = int(c["dim"])
            if not 0 <= d <= top:
                raise ShapeError(f"cell {c.get('id')} has dimension {d} outside 0..{top}")
            by_dim[d].append(c)
        local: dict[int, tuple[int, int]] = {}
        for d, cs in enumerate(by_dim):
            cs.sort(key=lambda c: int(c["id"]))
            for i, c in enumerate(cs):
                gid = int(c["id"])
                if gid in local:
                    raise ShapeError(f"duplicate cell id {gid}")
                local[gid] = (d, i)
        facets = [np.zeros((len(by_dim[0]), 0), dtype=np.int64)]
        for d in range(1, top + 1):
            rows = []
            for c in by_dim[d]:
                if len(c["facets"]) != d + 1:
                    raise ShapeError(f"cell {c['id']} of dimension {d} lists {len(c['facets'])} facets")
                row = []
                for f in c["facets"]:
                    fd, fi = local.get(int(f), (None, None))
                    if fd != d - 1:
                        raise ShapeError(f"cell {c['id']}: facet {f} is not a {d - 1}-cell")
                    row.append(fi)
                rows.append(row)
            facets.append(np.array(rows, dtype=np.int64).reshape(len(rows), d + 1))
        labels = [int(c.get("order_label", i)) for i, c in enumerate(by_dim[0])]
        return cls(facets, labels)

    @classmethod
    def loads(cls, text: str) -> "SimplicialCellComplex":
        return cls.from_json(json.loads(text))


def validate(X: SimplicialCellComplex) -> Validation:
    """Classify ``X`` as a simplicial complex, a cell complex only, or invalid."""
    fv = X.f_vector()
    for k in range(1, X.top_dim + 1):
        F = X.facets[k]
        if F.size and (F.min() < 0 or F.max() >= fv[k - 1]):
            return Validation(INVALID, f"facet index out of range in dimension {k}")
    for k in range(2, X.top_dim + 1):
        F, G = X.facets[k], X.facets[k - 1]
        for j in range(1, k + 1):
            for i in range(j):
                bad = np.nonzero(G[F[:, j], i] != G[F[:, i], j - 1])[0]
                if bad.size:
                    return Validation(
                        INVALID,
                        f"face identity d{i}d{j} = d{j - 1}d{i} fails on cell "
                        f"{X.global_id(k, bad[0])}",
                    )
    for k in range(1, X.top_dim + 1):
        V, F, Vp = X.vertices(k), X.facets[k], X.vertices(k - 1)
        for i in range(k + 1):
            bad = np.nonzero((Vp[F[:, i]] != np.delete(V, i, axis=1)).any(axis=1))[0]
            if bad.size:
                return Validation(INVALID, f"facet {i} of cell {X.global_id(k, bad[0])} has inconsistent vertices")
        S = np.sort(V, axis=1)
        bad = np.nonzero((S[:, 1:] == S[:, :-1]).any(axis=1))[0]
        if bad.size:
            return Validation(INVALID, f"regularity: cell {X.global_id(k, bad[0])} repeats a vertex")
        L = X.order_label[V]
        bad = np.nonzero((L[:, 1:] <= L[:, :-1]).any(axis=1))[0]
        if bad.size:
            return Validation(INVALID, f"order labels not increasing on cell {X.global_id(k, bad[0])}")
    # Regular cells ordered by a label that is total on each cell: equal
    # vertex sets mean equal vertex tuples.
    for k in range(1, X.top_dim + 1):
        V = X.vertices(k)
        if len(np.unique(V, axis=0)) != len(V):
            return Validation(CELL_COMPLEX_ONLY, f"two {k}-cells share a vertex set")
    return Validation(SIMPLICIAL_COMPLEX)


def f_vector(X: SimplicialCellComplex) -> tuple[int, ...]:
    return X.f_vector()


def euler_characteristic(X: SimplicialCellComplex) -> int:
    return sum((-1) ** k * f for k, f in enumerate(X.f_vector()))


def boundary_operator(X: SimplicialCellComplex, k: int, signed: bool = True) -> sp.csr_matrix:
    """Sparse integer boundary map from k-chains to (k-1)-chains.

    With ``signed`` the entry for facet i is (-1)^i; without, entries count
    incidences (reduce mod 2 for GF(2)).
    """
    if not 1 <= k <= X.top_dim:
        raise DomainError(f"boundary in dimension {k} outside 1..{X.top_dim}")
    F = X.facets[k]
    m = len(F)
    cols = np.repeat(np.arange(m), k + 1)
    rows = F.reshape(-1)
    signs = np.tile([(-1) ** i if signed else 1 for i in range(k + 1)], m)
    return sp.csr_matrix((signs, (rows, cols)), shape=(len(X.facets[k - 1]), m), dtype=np.int64)


def boundary_matrix(X: SimplicialCellComplex, k: int, field: str):
    """Dense exact boundary matrix: rows are (k-1)-cells, columns k-cells."""
    if field not in FIELDS:
        raise DomainError(f"unknown field {field!r}")
    B = boundary_operator(X, k, signed=(field == Q)).toarray()
    if field == F2:
        return MatrixF2.from_rows((B % 2).tolist(), cols=B.shape[1])
    return MatrixQ.from_rows(B.tolist(), cols=B.shape[1])


# -- chains and cochains --------------------------------------------------------


def _coerce_value(field: str, x):
    if field == F2:
        return int(x) & 1
    return Fraction(x)


@dataclass(frozen=True)
class _Vector:
    dim: int
    field: str
    values: Mapping[int, object] = field(default_factory=dict)

    def __post_init__(self):
        if self.field not in FIELDS:
            raise DomainError(f"unknown field {self.field!r}")
        vals = {}
        for k, v in self.values.items():
            v = _coerce_value(self.field, v)
            if v:
                vals[int(k)] = v
        object.__setattr__(self, "values", dict(sorted(vals.items())))

    def __getitem__(self, gid: int):
        return self.values.get(gid, 0 if self.field == F2 else Fraction(0))

    def check(self, X: SimplicialCellComplex) -> None:
        lo, hi = X.offsets[self.dim], X.offsets[self.dim + 1]
        for gid in self.values:
            if not lo <= gid < hi:
                raise DomainError(f"cell {gid} is not a {self.dim}-cell")

    def dense(self, X: SimplicialCellComplex) -> np.ndarray:
        """Values on all ``dim``-cells by local index (int array for GF(2), object array for Q)."""
        n = X.f_vector()[self.dim]
        off = X.offsets[self.dim]
        if self.field == F2:
            out = np.zeros(n, dtype=np.int64)
        else:
            out = np.empty(n, dtype=object)
            out[:] = Fraction(0)
        for gid, v in self.values.items():
            out[gid - off] = v
        return out

    @classmethod
    def from_dense(cls, X: SimplicialCellComplex, dim: int, field: str, arr):
        off = X.offsets[dim]
        return cls(dim, field, {off + i: v for i, v in enumerate(arr) if v})

    def __add__(self, other):
        if (self.dim, self.field) != (other.dim, other.field):
            raise DomainError("adding vectors of different dimension or field")
        vals = dict(self.values)
        for k, v in other.values.items():
            vals[k] = vals.get(k, 0) + v
        return type(self)(self.dim, self.field, vals)

    def scale(self, c):
        return type(self)(self.dim, self.field, {k: c * v for k, v in self.values.items()})

    def to_json(self) -> dict:
        def enc(v):
            return int(v) if self.field == F2 else f"{v.numerator}/{v.denominator}"

        return {"dim": self.dim, "field": self.field,
                "values": {str(k): enc(v) for k, v in self.values.items()}}

    @classmethod
    def from_json(cls, obj: Mapping):
        field_ = obj["field"]
        vals = {int(k): (int(v) if field_ == F2 else Fraction(v)) for k, v in obj["values"].items()}
        return cls(int(obj["dim"]), field_, vals)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":")) + "\n"


class Chain(_Vector):
    """Formal combination of cells of one dimension."""


class Cochain(_Vector):
    """Function on the cells of one dimension; absent ids are zero."""


def boundary(X: SimplicialCellComplex, c: Chain) -> Chain:
    if c.dim == 0:
        return Chain(0, c.field)
    vals = c.dense(X)
    F = X.facets[c.dim]
    out = [0 if c.field == F2 else Fraction(0)] * X.f_vector()[c.dim - 1]
    for i, row in enumerate(F.tolist()):
        v = vals[i]
        if not v:
            continue
        for j, f in enumerate(row):
            out[f] += v if (c.field == F2 or j % 2 == 0) else -v
    return Chain.from_dense(X, c.dim - 1, c.field, out)


def evaluate(a: Cochain, z: Chain):
    """Pairing of a cochain with a chain of the same dimension."""
    if (a.dim, a.field) != (z.dim, z.field):
        raise DomainError("cochain and chain differ in dimension or field")
    total = sum((a[g] * v for g, v in z.values.items()), 0 if a.field == F2 else Fraction(0))
    return total % 2 if a.field == F2 else total
