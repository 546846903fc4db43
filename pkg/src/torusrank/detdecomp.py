"""Rank-one decompositions of the determinant tensor from periodic triangulations.

Every top cell of a torus quotient contributes one decomposable tensor
``z_s * e_1(s) ⊗ ... ⊗ e_n(s)``, where ``e_i(s)`` is the i-th consecutive
edge vector of the cell (read as a covector in the dx basis) and ``z_s`` its
coefficient in the rational fundamental cycle.  The sum is exactly the
Levi-Civita tensor, so the number of top cells bounds the tensor rank of
det_n from above.

For a Z^n-periodic triangulation whose quotient is not a cell complex the
same identity holds with one term per simplex orbit, edges taken between
lexicographically consecutive vertices.  ``barycentric_subdivide_eps`` and
``eps_term_bound`` rebuild that limit from an honest cell complex.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, factorial, lcm
from typing import Mapping, Optional, Sequence

import numpy as np

from .cellcomplex import Q
from .errors import DegenerateSimplexError, DomainError, InvalidTriangulation
from .exactmath import MatrixQ, determinant
from .lattice import integer_lattice
from .periodic import (
    PeriodicTriangulation,
    QuotientComplex,
    _fmt,
    _orbit_key,
    fundamental_cycle,
    quotient,
)

DEFAULT_VERIFY_CAP = 7


@dataclass(frozen=True)
class Rank1Term:
    coeff: Fraction
    factors: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        object.__setattr__(self, "factors", tuple(tuple(Fraction(x) for x in f) for f in self.factors))
        n = len(self.factors)
        if any(len(f) != n for f in self.factors):
            raise DomainError("a rank-one term needs n factors of length n")

    def entry(self, idx: Sequence[int]) -> Fraction:
        out = self.coeff
        for f, j in zip(self.factors, idx):
            out *= f[j]
        return out

    def sup_norm(self) -> Fraction:
        return abs(self.coeff) * _prod(max(abs(x) for x in f) for f in self.factors)

    def factor_det(self) -> Fraction:
        n = len(self.factors)
        return determinant(MatrixQ.from_rows(self.factors, cols=n))


def _prod(xs):
    out = Fraction(1)
    for x in xs:
        out *= x
    return out


@dataclass
class DetDecomposition:
    n: int
    terms: list[Rank1Term]
    provenance: str = ""
    verified: bool = field(default=False)

    def __len__(self) -> int:
        return len(self.terms)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "terms": [
                {"coeff": _fmt(t.coeff), "factors": [[_fmt(x) for x in f] for f in t.factors]}
                for t in self.terms
            ],
            "provenance": self.provenance,
            "verified": self.verified,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":")) + "\n"

    @classmethod
    def from_json(cls, obj: Mapping) -> "DetDecomposition":
        # the verified flag is not trusted from disk
        terms = [Rank1Term(Fraction(t["coeff"]), tuple(tuple(Fraction(x) for x in f) for f in t["factors"]))
                 for t in obj["terms"]]
        return cls(int(obj["n"]), terms, obj.get("provenance", ""))


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def leibniz_decomposition(n: int) -> DetDecomposition:
    """det_n as the signed sum over permutations, factor i = e_{pi(i)}."""
    terms = []
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        factors = tuple(tuple(int(j == p) for j in range(n)) for p in perm)
        terms.append(Rank1Term(Fraction((-1) ** inv), factors))
    return DetDecomposition(n, terms, f"leibniz:{n}")


def decompose_from_quotient(Qc: QuotientComplex, provenance: str = "") -> DetDecomposition:
    """One term per top cell: fundamental-cycle coefficient times consecutive lifted edges."""
    X = Qc.complex
    n = X.top_dim
    z = fundamental_cycle(Qc, Q)
    off = X.offsets[n]
    terms = []
    for i in range(X.f_vector()[n]):
        M = Qc.edge_matrix(i)
        if any(not any(row) for row in M):
            raise DegenerateSimplexError(f"top cell {off + i} has a zero edge vector")
        terms.append(Rank1Term(z[off + i], tuple(tuple(r) for r in M)))
    return DetDecomposition(n, terms, provenance or f"quotient:index={Qc.lattice.index}")


def decompose_periodic_lex(T: PeriodicTriangulation) -> DetDecomposition:
    """One term per simplex orbit, edges between lexicographically consecutive vertices."""
    n = T.n
    terms = []
    for s in range(len(T.simplices)):
        pts = sorted(T.simplex_points(s))
        if any(pts[j] == pts[j - 1] for j in range(1, len(pts))):
            raise InvalidTriangulation(f"simplex {s} has coincident vertices")
        M = [tuple(a - b for a, b in zip(pts[j], pts[j - 1])) for j in range(1, n + 1)]
        det = determinant(MatrixQ.from_rows(M, cols=n))
        if det == 0:
            raise DegenerateSimplexError(f"simplex {s} is degenerate")
        terms.append(Rank1Term(Fraction(_sign(det)), tuple(M)))
    return DetDecomposition(n, terms, "periodic-lex")


# -- Levi-Civita verification ---------------------------------------------------


def levi_civita(n: int) -> np.ndarray:
    """Coordinate array of det_n: permutation sign on permutations, 0 elsewhere."""
    out = np.zeros((n,) * n, dtype=np.int64)
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        out[perm] = (-1) ** inv
    return out


@dataclass(frozen=True)
class VerifyResult:
    equal: bool
    index: Optional[tuple[int, ...]] = None
    got: Optional[Fraction] = None
    expected: Optional[int] = None

    def to_json(self) -> dict:
        if self.equal:
            return {"result": "exact-equal"}
        return {"result": "mismatch", "index": list(self.index), "got": _fmt(self.got),
                "expected": self.expected}


def _integer_terms(terms: Sequence[Rank1Term]) -> tuple[list[int], list[list[list[int]]], int]:
    """Rewrite terms with integer factors and integer weights over a common denominator."""
    weights, factors = [], []
    for t in terms:
        coeff = t.coeff
        ints = []
        for f in t.factors:
            d = lcm(*(x.denominator for x in f))
            ints.append([int(x * d) for x in f])
            coeff /= d
        weights.append(coeff)
        factors.append(ints)
    G = lcm(*(w.denominator for w in weights)) if weights else 1
    return [int(w * G) for w in weights], factors, G


def assemble(D: DetDecomposition) -> tuple[np.ndarray, int]:
    """Integer tensor S and denominator G with sum of terms = S / G, exactly."""
    n = D.n
    weights, factors, G = _integer_terms(D.terms)
    acc = np.zeros((n,) * n, dtype=object)
    acc[...] = 0
    for w, fs in zip(weights, factors):
        if not w:
            continue
        t = np.array([w * x for x in fs[0]], dtype=object)
        for f in fs[1:]:
            t = np.multiply.outer(t, np.array(f, dtype=object))
        acc = acc + t
    return acc, G


def verify_levi_civita(D: DetDecomposition, cap: int = DEFAULT_VERIFY_CAP) -> VerifyResult:
    """Compare the assembled tensor with det_n on every multi-index; sets ``D.verified``."""
    if D.n > cap:
        raise DomainError(f"n = {D.n} exceeds the verification cap {cap}")
    acc, G = assemble(D)
    eps = levi_civita(D.n)
    diff = np.nonzero(acc != eps.astype(object) * G)
    if len(diff[0]):
        idx = tuple(int(a[0]) for a in diff)
        D.verified = False
        return VerifyResult(False, idx, Fraction(acc[idx], G), int(eps[idx]))
    D.verified = True
    return VerifyResult(True)


# -- rank bounds ------------------------------------------------------------------


@dataclass(frozen=True)
class RankBoundReport:
    n: int
    lower: Fraction
    leibniz: int
    length: Optional[int] = None

    @property
    def ceiling(self) -> int:
        return ceil(self.lower)

    @property
    def consistent(self) -> Optional[bool]:
        return None if self.length is None else self.length >= self.ceiling

    def to_json(self) -> dict:
        return {"n": self.n, "lower": _fmt(self.lower), "ceiling": self.ceiling,
                "leibniz": self.leibniz, "length": self.length, "consistent": self.consistent}


def rank_bound_report(n: int, decomposition: Optional[DetDecomposition] = None) -> RankBoundReport:
    """n^(n-1)/(n-1)! lower bound on the tensor rank of det_n, next to n! and a decomposition length."""
    if n < 1:
        raise DomainError("n must be at least 1")
    lower = Fraction(n ** (n - 1), factorial(n - 1))
    return RankBoundReport(n, lower, factorial(n), None if decomposition is None else len(decomposition))


# -- epsilon-barycentric subdivision ------------------------------------------------


def _lexmax_barycenter(pts: Sequence[tuple], eps: Fraction) -> tuple:
    top = max(pts)
    k = len(pts)
    return tuple((1 - eps) * t + eps * Fraction(sum(c), k) for t, c in zip(top, zip(*pts)))


def barycentric_subdivide_eps(T: PeriodicTriangulation, eps) -> PeriodicTriangulation:
    """Barycentric subdivision with each face's barycentre pulled toward its lex-largest vertex.

    The barycentre of a face F is ``(1 - eps) * lexmax(F) + eps * centroid(F)``.
    The simplices of the subdivision of a simplex v_0 < ... < v_n (lex) are
    indexed by permutations pi: vertex k of simplex pi is the barycentre of
    {v_pi(0), ..., v_pi(k)}.  Vertex order labels are face dimensions and
    simplex tags are ``(parent simplex, pi)``.
    """
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise DomainError(f"eps = {eps} outside (0, 1)")
    if not T.is_integral:
        raise DomainError("subdivision expects integer vertex coordinates")
    n = T.n
    face_rep: dict[tuple, int] = {}
    reps: list[tuple] = []
    labels: list[int] = []
    simplices = []
    tags = []
    for s, simp in enumerate(T.simplices):
        verts = sorted(simp, key=T.point)
        for perm in itertools.permutations(range(n + 1)):
            flag = []
            for k in range(n + 1):
                face = [verts[perm[j]] for j in range(k + 1)]
                key = _orbit_key(T, face)
                b = _lexmax_barycenter([T.point(v) for v in face], eps)
                floor = tuple(x.numerator // x.denominator for x in b)
                r = face_rep.get(key)
                if r is None:
                    r = face_rep[key] = len(reps)
                    reps.append(tuple(x - f for x, f in zip(b, floor)))
                    labels.append(k)
                flag.append((r, floor))
            simplices.append(tuple(flag))
            tags.append((s, perm))
    if len(set(reps)) != len(reps):
        raise InvalidTriangulation("two face orbits received the same barycentre residue")
    return PeriodicTriangulation(n, tuple(reps), tuple(simplices), labels=tuple(labels), tags=tuple(tags))


def _coordinate_diameter(T: PeriodicTriangulation) -> Fraction:
    best = Fraction(0)
    for s in range(len(T.simplices)):
        pts = T.simplex_points(s)
        for j in range(T.n):
            col = [p[j] for p in pts]
            best = max(best, Fraction(max(col) - min(col)))
    return best


def _tensor_diff_sup(a: Rank1Term, b: Rank1Term) -> Fraction:
    n = len(a.factors)
    return max(abs(a.entry(idx) - b.entry(idx)) for idx in itertools.product(range(n), repeat=n))


@dataclass
class EpsReport:
    n: int
    eps: Fraction
    constant: Fraction
    terms: int
    max_non_identity: Fraction
    max_identity_deviation: Fraction
    max_parent_sum_deviation: Fraction
    rounding_ok: bool
    violations: list[dict] = field(default_factory=list)

    @property
    def bound(self) -> Fraction:
        return self.constant * self.eps

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "eps": _fmt(self.eps),
            "C": _fmt(self.constant),
            "bound": _fmt(self.bound),
            "terms": self.terms,
            "max_non_identity": _fmt(self.max_non_identity),
            "max_identity_deviation": _fmt(self.max_identity_deviation),
            "max_parent_sum_deviation": _fmt(self.max_parent_sum_deviation),
            "identity_factors_round_to_lex": self.rounding_ok,
            "violations": self.violations,
            "passed": self.passed,
        }


def eps_term_bound(T: PeriodicTriangulation, eps) -> EpsReport:
    """Check that only the identity flag of each simplex survives as eps -> 0.

    The subdivision is taken modulo Z^n with the dimensional vertex order and
    decomposed through its fundamental cycle.  With D the largest coordinate
    spread of a simplex of T and C = 2 n D^n:

    * every term with pi != id has sup-norm at most C * eps (one of its edges
      joins two barycentres attached to the same vertex, so it is eps-short);
    * every identity term is within C * eps of the matching lexicographic term,
      entrywise;
    * the sum over all flags of one parent stays within (n+1)! C eps of the
      lexicographic term.
    """
    eps = Fraction(eps)
    n = T.n
    Tp = barycentric_subdivide_eps(T, eps)
    Qp = quotient(Tp, integer_lattice(n))
    dec = decompose_from_quotient(Qp, provenance=f"eps-subdivision:{eps}")
    lex = decompose_periodic_lex(T)
    # lexicographic term of T's simplex s sits at index s
    D = _coordinate_diameter(T)
    C = 2 * n * D**n
    bound = C * eps
    ident = tuple(range(n + 1))
    max_off = max_id = max_sum = Fraction(0)
    rounding_ok = True
    violations = []
    sums: dict[int, np.ndarray] = {}
    for term, (s, _coset) in zip(dec.terms, Qp.top_source):
        parent, perm = Tp.tags[s]
        t_arr = _term_array(term)
        sums[parent] = sums.get(parent, 0) + t_arr
        if perm != ident:
            sup = term.sup_norm()
            max_off = max(max_off, sup)
            if sup > bound:
                violations.append({"parent": parent, "perm": list(perm), "sup": _fmt(sup), "bound": _fmt(bound)})
        else:
            dev = _tensor_diff_sup(term, lex.terms[parent])
            max_id = max(max_id, dev)
            if dev > bound:
                violations.append({"parent": parent, "perm": list(perm), "deviation": _fmt(dev), "bound": _fmt(bound)})
            rounded = [[round(x) for x in f] for f in term.factors]
            if rounded != [[int(x) for x in f] for f in lex.terms[parent].factors]:
                rounding_ok = False
    sum_bound = factorial(n + 1) * bound
    for parent, arr in sums.items():
        dev = max(abs(x) for x in (arr - _term_array(lex.terms[parent])).reshape(-1))
        max_sum = max(max_sum, dev)
        if dev > sum_bound:
            violations.append({"parent": parent, "parent_sum_deviation": _fmt(dev), "bound": _fmt(sum_bound)})
    return EpsReport(n, eps, C, len(dec), max_off, max_id, max_sum, rounding_ok, violations)


def _term_array(t: Rank1Term) -> np.ndarray:
    arr = np.array([t.coeff * x for x in t.factors[0]], dtype=object)
    for f in t.factors[1:]:
        arr = np.multiply.outer(arr, np.array(f, dtype=object))
    return arr
