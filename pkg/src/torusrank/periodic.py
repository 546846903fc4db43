"""Z^n-periodic triangulations of R^n and their quotients by sublattices.

A periodic triangulation is stored by orbit representatives.  Vertex
representatives are rational points of ``[0, 1)^n``; a vertex of the
tiling is a pair ``(rep index, integer offset)`` meaning ``rep + offset``.
Each simplex representative lists its n+1 vertices that way.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Optional, Sequence

from .cellcomplex import F2, Q, Chain, SimplicialCellComplex
from .errors import (
    DegenerateSimplexError,
    DomainError,
    InvalidTriangulation,
    NoValidOrder,
    NotACellComplex,
)
from .exactmath import MatrixQ, determinant
from .lattice import Lattice, forbidden_vector_check, integer_lattice, matrix_A, matrix_B

Vertex = tuple[int, tuple[int, ...]]


def _num(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


def _fmt(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class PeriodicTriangulation:
    n: int
    vertices: tuple[tuple, ...]
    simplices: tuple[tuple[Vertex, ...], ...]
    labels: Optional[tuple[int, ...]] = None
    tags: Optional[tuple] = None

    def __post_init__(self):
        verts = tuple(tuple(_num(x) for x in v) for v in self.vertices)
        simps = tuple(tuple((int(i), tuple(int(o) for o in off)) for i, off in s) for s in self.simplices)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "simplices", simps)
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(int(x) for x in self.labels))

    def point(self, v: Vertex) -> tuple:
        idx, off = v
        return tuple(a + b for a, b in zip(self.vertices[idx], off))

    @property
    def is_integral(self) -> bool:
        return all(isinstance(x, int) for v in self.vertices for x in v)

    def simplex_points(self, s: int) -> list[tuple]:
        return [self.point(v) for v in self.simplices[s]]

    # -- I/O -------------------------------------------------------------------

    def to_json(self) -> dict:
        obj = {
            "n": self.n,
            "vertices": [[_fmt(x) for x in v] for v in self.vertices],
            "simplices": [[[i, list(off)] for i, off in s] for s in self.simplices],
        }
        if self.labels is not None:
            obj["labels"] = list(self.labels)
        return obj

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":")) + "\n"

    @classmethod
    def from_json(cls, obj: Mapping) -> "PeriodicTriangulation":
        return cls(
            int(obj["n"]),
            tuple(tuple(Fraction(x) for x in v) for v in obj["vertices"]),
            tuple(tuple((i, tuple(off)) for i, off in s) for s in obj["simplices"]),
            labels=obj.get("labels"),
        )

    @classmethod
    def loads(cls, text: str) -> "PeriodicTriangulation":
        return cls.from_json(json.loads(text))


def _orbit_key(T: PeriodicTriangulation, verts: Sequence[Vertex]) -> tuple:
    """Z^n-orbit invariant of a vertex set: sorted, translated so the first offset is 0."""
    vs = sorted(verts, key=T.point)
    base = vs[0][1]
    return tuple((i, tuple(a - b for a, b in zip(off, base))) for i, off in vs)


def check_periodic(T: PeriodicTriangulation) -> None:
    """Combinatorial checks for an imported periodic triangulation.

    Vertex representatives must lie in ``[0, 1)^n`` and be distinct, simplex
    representatives must be pairwise distinct orbits with n+1 distinct
    vertices, and every codimension-one face orbit must bound exactly two
    simplices.
    """
    n = T.n
    for v in T.vertices:
        if len(v) != n or not all(0 <= x < 1 for x in v):
            raise InvalidTriangulation(f"vertex representative {v} is not a residue in [0,1)^{n}")
    if len(set(T.vertices)) != len(T.vertices):
        raise InvalidTriangulation("repeated vertex representative")
    seen = set()
    faces: Counter = Counter()
    for s, simp in enumerate(T.simplices):
        if len(simp) != n + 1:
            raise InvalidTriangulation(f"simplex {s} has {len(simp)} vertices")
        for i, off in simp:
            if not 0 <= i < len(T.vertices) or len(off) != n:
                raise InvalidTriangulation(f"simplex {s} has a malformed vertex")
        if len({T.point(v) for v in simp}) != n + 1:
            raise InvalidTriangulation(f"simplex {s} repeats a vertex")
        key = _orbit_key(T, simp)
        if key in seen:
            raise InvalidTriangulation(f"simplex {s} duplicates an earlier orbit")
        seen.add(key)
        for j in range(n + 1):
            faces[_orbit_key(T, simp[:j] + simp[j + 1:])] += 1
    bad = [f for f, c in faces.items() if c != 2]
    if bad:
        raise InvalidTriangulation(f"face orbit {bad[0]} bounds {faces[bad[0]]} simplices, not 2")


def staircase(n: int) -> PeriodicTriangulation:
    """Unit cubes cut into n! simplices along monotone lattice paths."""
    if n < 1:
        raise DomainError("n must be at least 1")
    simps = []
    for perm in itertools.permutations(range(n)):
        cur = [0] * n
        verts = [(0, tuple(cur))]
        for p in perm:
            cur[p] += 1
            verts.append((0, tuple(cur)))
        simps.append(tuple(verts))
    return PeriodicTriangulation(n, ((0,) * n,), tuple(simps), tags=tuple(itertools.permutations(range(n))))


def _neighbours(T: PeriodicTriangulation) -> list[set]:
    nb: list[set] = [set() for _ in T.vertices]
    for simp in T.simplices:
        for (i, oi), (j, oj) in itertools.permutations(simp, 2):
            nb[i].add((j, tuple(a - b for a, b in zip(oj, oi))))
    return nb


def classify_distance(T: PeriodicTriangulation, L: Lattice) -> int:
    """Edge distance between distinct vertices of one L-orbit: 1, 2, or 3 meaning at least 3."""
    nb = _neighbours(T)
    for a, near in enumerate(nb):
        if any(b == a and L._contains_fast(d) for b, d in near):
            return 1
    for a, near in enumerate(nb):
        for b, d1 in near:
            for c, d2 in nb[b]:
                if c == a:
                    d = tuple(x + y for x, y in zip(d1, d2))
                    if any(d) and L._contains_fast(d):
                        return 2
    return 3


def staircase_distance_by_lattice(L: Lattice) -> int:
    """Distance class for the staircase read off the forbidden-vector families.

    Staircase edges are exactly the nonzero {0,1} vectors up to sign, and
    two-step differences are the {0,1,2} and {-1,0,1} vectors.
    """
    if not forbidden_vector_check(L, "01").holds:
        return 1
    if not (forbidden_vector_check(L, "012").holds and forbidden_vector_check(L, "-101").holds):
        return 2
    return 3


@dataclass(frozen=True)
class QuotientComplex:
    complex: SimplicialCellComplex
    lifts: tuple[tuple[tuple, ...], ...]
    lattice: Lattice
    source: PeriodicTriangulation
    top_source: tuple[tuple[int, tuple[int, ...]], ...]

    def lift(self, gid: int) -> tuple:
        """Lifted vertex coordinates of a cell, in the cell's vertex order."""
        k, i = self.complex.locate(gid)
        return self.lifts[k][i]

    def edge_matrix(self, i: int) -> list[list]:
        """Consecutive edge vectors of the lift of top cell ``i``."""
        pts = self.lifts[-1][i]
        return [[a - b for a, b in zip(pts[j], pts[j - 1])] for j in range(1, len(pts))]


def _vertex_orbits(T, L, order):
    reps = T.vertices
    pts = []
    for r, rc in enumerate(reps):
        for c in L.coset_reps():
            pts.append((tuple(a + b for a, b in zip(rc, c)), r))
    if order is not None:
        keys = [order(p) for p, _ in pts]
    elif T.labels is not None:
        keys = [T.labels[r] for _, r in pts]
    else:
        keys = [p for p, _ in pts]
    rank = {k: i for i, k in enumerate(sorted(set(keys)))}
    ordered = sorted(zip((rank[k] for k in keys), (p for p, _ in pts)))
    labels = [lab for lab, _ in ordered]
    vid = {p: i for i, (_, p) in enumerate(ordered)}
    return vid, labels


def quotient(
    T: PeriodicTriangulation,
    L: Lattice,
    order: Optional[Callable[[tuple], object]] = None,
) -> QuotientComplex:
    """The cell complex T/L.

    Vertex order labels come from ``order`` (a key on canonical vertex
    points) if given, else from ``T.labels``, else from the lexicographic
    rank of canonical residues.  For the staircase modulo ``matrix_A`` that
    rank equals the coordinate sum mod n+1.
    """
    n = T.n
    if L.n != n:
        raise DomainError("lattice and triangulation dimensions differ")
    vid, labels = _vertex_orbits(T, L, order)
    tables: list[dict] = [dict() for _ in range(n + 1)]
    lifts: list[list] = [[] for _ in range(n + 1)]
    facet_rows: list[list] = [[] for _ in range(n + 1)]
    for p, i in sorted(vid.items(), key=lambda kv: kv[1]):
        tables[0][(p,)] = i
        lifts[0].append((p,))
    positions = [tuple(b for b in range(n + 1) if m >> b & 1) for m in range(1 << (n + 1))]
    top_source = []
    for s, simp in enumerate(T.simplices):
        if len(simp) != n + 1:
            raise InvalidTriangulation(f"simplex {s} has {len(simp)} vertices")
        for c in L.coset_reps():
            pts = []
            for r, off in simp:
                o = tuple(a + b for a, b in zip(off, c))
                res = L.residue(o)
                rep = T.vertices[r]
                v = vid[tuple(a + b for a, b in zip(rep, res))]
                pts.append((labels[v], v, tuple(a - b for a, b in zip(o, res)),
                            tuple(a + b for a, b in zip(rep, o))))
            seen = {}
            for p in pts:
                if p[1] in seen:
                    raise NotACellComplex(
                        f"edge {seen[p[1]]} -- {p[3]} joins two vertices of one lattice orbit"
                    )
                seen[p[1]] = p[3]
            pts.sort()
            if any(pts[j][0] == pts[j - 1][0] for j in range(1, n + 1)):
                raise NoValidOrder(f"simplex {s} + {c} has two vertices with equal order label")
            q = [[tuple(x - y for x, y in zip(pb[3], pa[2])) for pb in pts] for pa in pts]
            local = [0] * (1 << (n + 1))
            for mask in range(1, 1 << (n + 1)):
                pos = positions[mask]
                qa = q[pos[0]]
                key = tuple(qa[b] for b in pos)
                k = len(pos) - 1
                table = tables[k]
                gid = table.get(key)
                if gid is None:
                    gid = len(table)
                    table[key] = gid
                    lifts[k].append(key)
                    facet_rows[k].append([local[mask & ~(1 << b)] for b in pos])
                elif k == n:
                    raise InvalidTriangulation(f"simplex {s} + {c} repeats a top cell orbit")
                local[mask] = gid
            top_source.append((s, tuple(c)))
    X = SimplicialCellComplex([[[] for _ in lifts[0]]] + facet_rows[1:], labels)
    return QuotientComplex(X, tuple(tuple(l) for l in lifts), L, T, tuple(top_source))


def cross_polytope_rp(n: int) -> SimplicialCellComplex:
    """Boundary of the (n+1)-dimensional cross-polytope modulo x -> -x.

    Vertex i is the class of the pair of coordinate vertices ±e_i and has
    order label i.  A k-cell is a set of k+1 coordinate indices with a sign
    pattern taken up to global negation.
    """
    if n < 1:
        raise DomainError("n must be at least 1")
    index: list[dict] = []
    facets: list[list] = []
    for k in range(n + 1):
        table: dict = {}
        rows = []
        for S in itertools.combinations(range(n + 1), k + 1):
            for tail in itertools.product((1, -1), repeat=k):
                signs = (1,) + tail
                table[(S, signs)] = len(table)
                if k:
                    row = []
                    for j in range(k + 1):
                        fs = S[:j] + S[j + 1:]
                        fg = signs[:j] + signs[j + 1:]
                        if fg[0] < 0:
                            fg = tuple(-x for x in fg)
                        row.append(index[k - 1][(fs, fg)])
                    rows.append(row)
                else:
                    rows.append([])
        index.append(table)
        facets.append(rows)
    return SimplicialCellComplex(facets, list(range(n + 1)))


def crystal_torus(n: int) -> QuotientComplex:
    """Staircase modulo ``matrix_A(n)``: n+1 vertices."""
    return quotient(staircase(n), matrix_A(n))


def tri_torus(n: int) -> QuotientComplex:
    """Staircase modulo ``matrix_B(n)``: a triangulation with 2^(n+1)-1 vertices."""
    return quotient(staircase(n), matrix_B(n))


def fundamental_cycle(Qc: QuotientComplex, field: str) -> Chain:
    """Top chain of an n-torus quotient.

    Over GF(2) every top cell has coefficient 1.  Over Q the coefficient is
    the orientation sign of the lifted cell divided by the lattice index, so
    that the cup product of the coordinate cocycles evaluates to 1.
    """
    X = Qc.complex
    n = X.top_dim
    off = X.offsets[n]
    if field == F2:
        return Chain(n, F2, {off + i: 1 for i in range(X.f_vector()[n])})
    if field != Q:
        raise DomainError(f"unknown field {field!r}")
    idx = Qc.lattice.index
    vals = {}
    for i in range(X.f_vector()[n]):
        det = determinant(MatrixQ.from_rows(Qc.edge_matrix(i), cols=n))
        if det == 0:
            raise DegenerateSimplexError(f"top cell {off + i} has a degenerate lift")
        vals[off + i] = Fraction(1 if det > 0 else -1, idx)
    return Chain(n, Q, vals)


def per_unit_face_counts(T: PeriodicTriangulation) -> tuple[int, ...]:
    """Number of Z^n-orbits of faces of T in each dimension."""
    seen: list[set] = [set() for _ in range(T.n + 1)]
    for simp in T.simplices:
        for k in range(T.n + 1):
            for sub in itertools.combinations(simp, k + 1):
                seen[k].add(_orbit_key(T, sub))
    return tuple(len(s) for s in seen)


__all__ = [
    "PeriodicTriangulation",
    "QuotientComplex",
    "check_periodic",
    "classify_distance",
    "cross_polytope_rp",
    "crystal_torus",
    "fundamental_cycle",
    "integer_lattice",
    "per_unit_face_counts",
    "quotient",
    "staircase",
    "staircase_distance_by_lattice",
    "tri_torus",
]
