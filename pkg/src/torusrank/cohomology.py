"""Cochains, cup products and mod-2 cohomology on simplicial cell complexes.

The cup product of cochains a_1, ..., a_k of dimensions d_1, ..., d_k is
evaluated on a cell with vertices v_0 < ... < v_D (order labels) as the
product of a_1 on the front face [v_0..v_{d_1}], a_2 on the next segment
[v_{d_1}..v_{d_1+d_2}], and so on.  Faces are reached through facet maps,
never through vertex sets, since in a cell complex several faces may share
vertices.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Optional, Sequence

import numpy as np

from .cellcomplex import F2, Q, Chain, Cochain, SimplicialCellComplex, evaluate
from .errors import BudgetExceeded, DomainError, NoValidOrder
from .exactmath import rank_f2_rows
from .lattice import budget
from .periodic import QuotientComplex

DEFAULT_TUPLE_CAP = 2**24


def coboundary(X: SimplicialCellComplex, a: Cochain) -> Cochain:
    """(da)(s) = sum_i (-1)^i a(d_i s); signs drop out over GF(2)."""
    k = a.dim
    if k >= X.top_dim:
        raise DomainError(f"no coboundary out of dimension {k} (top is {X.top_dim})")
    vals = a.dense(X)
    F = X.facets[k + 1]
    out = vals[F[:, 0]]
    for i in range(1, k + 2):
        if a.field == F2:
            out = out ^ vals[F[:, i]]
        elif i % 2:
            out = out - vals[F[:, i]]
        else:
            out = out + vals[F[:, i]]
    return Cochain.from_dense(X, k + 1, a.field, out)


def _check_order(X: SimplicialCellComplex, D: int) -> None:
    L = X.order_label[X.vertices(D)]
    bad = np.nonzero((L[:, 1:] <= L[:, :-1]).any(axis=1))[0]
    if bad.size:
        raise NoValidOrder(f"order labels are not increasing on cell {X.global_id(D, bad[0])}")


def segments(dims: Sequence[int]) -> list[tuple[int, ...]]:
    """Vertex positions of each factor's segment in the cup-product formula."""
    out, s = [], 0
    for d in dims:
        out.append(tuple(range(s, s + d + 1)))
        s += d
    return out


def cup(X: SimplicialCellComplex, cochains: Sequence[Cochain], field: Optional[str] = None) -> Cochain:
    """Cochain-level cup product a_1 ⌣ ... ⌣ a_k with respect to the order labels."""
    if not cochains:
        raise DomainError("cup of no cochains")
    field = field or cochains[0].field
    if any(a.field != field for a in cochains):
        raise DomainError("cochains over different fields")
    dims = [a.dim for a in cochains]
    D = sum(dims)
    if D > X.top_dim:
        raise DomainError(f"cup product lands in dimension {D} > {X.top_dim}")
    _check_order(X, D)
    out = None
    for a, pos in zip(cochains, segments(dims)):
        v = a.dense(X)[X.subface(D, pos)]
        out = v if out is None else (out & v if field == F2 else out * v)
    return Cochain.from_dense(X, D, field, out)


def dx_cocycles(Qc: QuotientComplex) -> list[Cochain]:
    """Coordinate 1-cocycles: dx_i(e) is the i-th coordinate of the lifted edge vector."""
    X = Qc.complex
    n = Qc.source.n
    off = X.offsets[1]
    out = []
    for j in range(n):
        vals = {off + i: Fraction(p1[j] - p0[j]) for i, (p0, p1) in enumerate(Qc.lifts[1])}
        out.append(Cochain(1, Q, vals))
    return out


def to_f2(a: Cochain) -> Cochain:
    """Reduce an integer-valued rational cochain mod 2."""
    if a.field == F2:
        return a
    vals = {}
    for k, v in a.values.items():
        if v.denominator != 1:
            raise DomainError(f"value {v} on cell {k} is not an integer")
        vals[k] = v.numerator % 2
    return Cochain(a.dim, F2, vals)


# -- GF(2) linear algebra on bitmask vectors ----------------------------------


def _coboundary_masks(X: SimplicialCellComplex, k: int) -> list[int]:
    """For each k-cell c, the bitmask over (k+1)-cells of d(indicator of c)."""
    masks = [0] * X.f_vector()[k]
    if k < X.top_dim:
        for s, row in enumerate(X.facets[k + 1].tolist()):
            bit = 1 << s
            for f in row:
                masks[f] ^= bit
    return masks


def betti_f2(X: SimplicialCellComplex, k: int) -> int:
    """dim ker d_k - dim im d_{k-1} over GF(2)."""
    f = X.f_vector()
    r_out = rank_f2_rows(_coboundary_masks(X, k)) if k < X.top_dim else 0
    r_in = rank_f2_rows(_coboundary_masks(X, k - 1)) if k > 0 else 0
    return f[k] - r_out - r_in


class _Echelon:
    """Incremental GF(2) row echelon basis keyed by leading bit."""

    def __init__(self):
        self.rows: dict[int, tuple[int, int]] = {}

    def reduce(self, v: int, tag: int = 0) -> tuple[int, int]:
        while v:
            top = v.bit_length() - 1
            row = self.rows.get(top)
            if row is None:
                break
            v ^= row[0]
            tag ^= row[1]
        return v, tag

    def add(self, v: int, tag: int = 0) -> bool:
        v, tag = self.reduce(v, tag)
        if v:
            self.rows[v.bit_length() - 1] = (v, tag)
            return True
        return False


def cohomology_basis_f2(X: SimplicialCellComplex, k: int) -> list[Cochain]:
    """Cocycle representatives of a basis of H^k(X; GF(2)).

    Kernel vectors of d_k are produced in order of the lowest cell id that
    introduces them and kept when independent of the image of d_{k-1}.
    """
    cob = _coboundary_masks(X, k)
    kernel = []
    ech = _Echelon()
    for c, m in enumerate(cob):
        v, tag = ech.reduce(m, 1 << c)
        if v:
            ech.rows[v.bit_length() - 1] = (v, tag)
        else:
            kernel.append(tag)
    image = _Echelon()
    if k > 0:
        for m in _coboundary_masks(X, k - 1):
            image.add(m)
    basis = []
    for z in kernel:
        if image.add(z):
            basis.append(z)
    off = X.offsets[k]
    return [Cochain(k, F2, {off + i: 1 for i in range(z.bit_length()) if z >> i & 1}) for z in basis]


def default_cocycles_f2(X: SimplicialCellComplex) -> list[Cochain]:
    """Degree-one classes whose product reaches the top dimension.

    A basis of H^1 is used when it has exactly ``top_dim`` elements (tori);
    otherwise a one-dimensional H^1 generator is repeated ``top_dim`` times
    (projective spaces).
    """
    basis = cohomology_basis_f2(X, 1)
    n = X.top_dim
    if len(basis) == n:
        return basis
    if len(basis) == 1:
        return basis * n
    raise DomainError(f"H^1 has dimension {len(basis)}; pass cocycles explicitly")


def all_ones(X: SimplicialCellComplex, k: int) -> Chain:
    off = X.offsets[k]
    return Chain(k, F2, {off + i: 1 for i in range(X.f_vector()[k])})


# -- derandomized coboundary perturbation ---------------------------------------


@dataclass
class PerturbationReport:
    mode: str
    n_factors: int
    dims: list[int]
    total_tuples: int
    union_size: int
    min_witnesses: int
    cells_in_degree: int
    class_nonzero: Optional[bool]
    seed: Optional[int] = None
    histogram: dict[int, int] = field(default_factory=dict)

    @property
    def bound(self) -> int:
        return 2 ** self.n_factors

    @property
    def passed(self) -> bool:
        return self.min_witnesses >= 1 and self.cells_in_degree >= self.bound

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "seed": self.seed,
            "n_factors": self.n_factors,
            "dims": self.dims,
            "total_tuples": self.total_tuples,
            "min_witnesses": self.min_witnesses,
            "union_size": self.union_size,
            "cells_in_degree": self.cells_in_degree,
            "bound": self.bound,
            "class_nonzero": self.class_nonzero,
            "passed": self.passed,
            "witness_histogram": {str(k): v for k, v in sorted(self.histogram.items())},
        }


def _perturbed_masks(X: SimplicialCellComplex, a: Cochain, D: int, pos: tuple[int, ...]):
    """Affine map S -> bitmask over D-cells of (a + d(indicator S)) on each D-cell's segment.

    Returned as (value for S = empty, one generator per (d-1)-cell).
    """
    seg = X.subface(D, pos).tolist()
    d = a.dim

    def spread(vals) -> int:
        return sum(1 << s for s, e in enumerate(seg) if vals[e])

    base = spread(a.dense(X))
    if d == 0:
        return base, []
    gens = []
    F = X.facets[d]
    touched: list[list[int]] = [[] for _ in range(X.f_vector()[d - 1])]
    for e, row in enumerate(F.tolist()):
        for f in row:
            touched[f].append(e)
    for cells in touched:
        v = np.zeros(X.f_vector()[d], dtype=np.int64)
        for e in cells:
            v[e] ^= 1
        gens.append(spread(v))
    return base, gens


def _span_table(base: int, gens: list[int]) -> list[int]:
    table = [base]
    for g in gens:
        table += [t ^ g for t in table]
    return table


def _affine(base: int, gens: list[int], S: int) -> int:
    v = base
    i = 0
    while S:
        if S & 1:
            v ^= gens[i]
        S >>= 1
        i += 1
    return v


def theorem1_witness_check(
    X: SimplicialCellComplex,
    cocycles: Sequence[Cochain],
    mode: str = "exhaustive",
    samples: int = 1000,
    seed: int = 0,
    cap: Optional[int] = None,
) -> PerturbationReport:
    """Sweep coboundary perturbations b_i = d(indicator of S_i) of mod-2 cocycles.

    For each tuple (S_1, ..., S_n) of sets of (d_i - 1)-cells the cup product
    (a_1 + b_1) ⌣ ... ⌣ (a_n + b_n) is evaluated on every cell of dimension
    sum(d_i); the cells where it is 1 are the witnesses.  Exhaustive mode
    covers all tuples; sampled mode draws ``samples`` tuples from a seeded RNG.
    """
    if any(a.field != F2 for a in cocycles):
        raise DomainError("perturbation check runs over GF(2)")
    dims = [a.dim for a in cocycles]
    D = sum(dims)
    if D > X.top_dim:
        raise DomainError(f"degree {D} exceeds top dimension {X.top_dim}")
    _check_order(X, D)
    f = X.f_vector()
    free = [f[d - 1] if d > 0 else 0 for d in dims]
    affines = [_perturbed_masks(X, a, D, pos) for a, pos in zip(cocycles, segments(dims))]

    class_nonzero = None
    if D == X.top_dim:
        class_nonzero = bool(evaluate(cup(X, cocycles), all_ones(X, D)))

    hist: dict[int, int] = {}
    union = 0
    if mode == "exhaustive":
        total = prod(2**k for k in free)
        limit = cap if cap is not None else budget(DEFAULT_TUPLE_CAP)
        if total > limit:
            raise BudgetExceeded(f"{total} perturbation tuples exceed the cap {limit}; use sampled mode")
        tables = [_span_table(b, g) for b, g in affines]
        full = (1 << f[D]) - 1

        def sweep(i: int, acc: int):
            nonlocal union
            if i == len(tables) - 1:
                for m in tables[i]:
                    w = acc & m
                    c = w.bit_count()
                    hist[c] = hist.get(c, 0) + 1
                    union |= w
                return
            for m in tables[i]:
                sweep(i + 1, acc & m)

        sweep(0, full)
    elif mode == "sampled":
        rng = random.Random(seed)
        total = samples
        full = (1 << f[D]) - 1
        for _ in range(samples):
            w = full
            for (b, g), k in zip(affines, free):
                w &= _affine(b, g, rng.getrandbits(k) if k else 0)
            c = w.bit_count()
            hist[c] = hist.get(c, 0) + 1
            union |= w
    else:
        raise DomainError(f"unknown mode {mode!r}")

    return PerturbationReport(
        mode=mode,
        n_factors=len(cocycles),
        dims=dims,
        total_tuples=total,
        union_size=union.bit_count(),
        min_witnesses=min(hist) if hist else 0,
        cells_in_degree=f[D],
        class_nonzero=class_nonzero,
        seed=seed if mode == "sampled" else None,
        histogram=hist,
    )


def witness_cells(X: SimplicialCellComplex, cocycles: Sequence[Cochain], subsets: Sequence[Sequence[int]]) -> Cochain:
    """Direct evaluation of one perturbation tuple through ``coboundary`` and ``cup``.

    ``subsets[i]`` lists global ids of (d_i - 1)-cells.  Slow; used to
    cross-check the bitmask sweep.
    """
    perturbed = []
    for a, S in zip(cocycles, subsets):
        if a.dim == 0:
            perturbed.append(a)
            continue
        ind = Cochain(a.dim - 1, F2, {g: 1 for g in S})
        perturbed.append(a + coboundary(X, ind))
    return cup(X, perturbed)
