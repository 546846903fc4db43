import itertools
from fractions import Fraction

import pytest

from conftest import crystal, tri
from torusrank.cellcomplex import CELL_COMPLEX_ONLY, F2, Q, SIMPLICIAL_COMPLEX, boundary, validate
from torusrank.errors import DomainError, InvalidTriangulation, NoValidOrder, NotACellComplex
from torusrank.lattice import Lattice, enumerate_sublattices, integer_lattice, matrix_A, matrix_B
from torusrank.periodic import (
    PeriodicTriangulation,
    check_periodic,
    classify_distance,
    fundamental_cycle,
    per_unit_face_counts,
    quotient,
    staircase,
    staircase_distance_by_lattice,
)


def test_staircase_examples():
    T = staircase(2)
    pts = sorted(tuple(T.simplex_points(s)) for s in range(2))
    assert pts == [((0, 0), (0, 1), (1, 1)), ((0, 0), (1, 0), (1, 1))]
    assert len(staircase(3).simplices) == 6
    assert staircase(1).simplices == (((0, (0,)), (0, (1,))),)
    with pytest.raises(DomainError):
        staircase(0)


@pytest.mark.parametrize("n", range(1, 5))
def test_staircase_edges_are_01_vectors(n):
    T = staircase(n)
    check_periodic(T)
    for s in range(len(T.simplices)):
        P = T.simplex_points(s)
        for a, b in itertools.combinations(P, 2):
            d = [y - x for x, y in zip(a, b)]
            assert set(d) <= {0, 1} and any(d)


def test_per_unit_counts():
    assert per_unit_face_counts(staircase(2)) == (1, 3, 2)
    assert per_unit_face_counts(staircase(3)) == (1, 7, 12, 6)


def test_classify_distance_examples():
    assert classify_distance(staircase(2), integer_lattice(2)) == 1
    for n in range(2, 5):
        assert classify_distance(staircase(n), matrix_A(n)) == 2
        assert classify_distance(staircase(n), matrix_B(n)) == 3


@pytest.mark.parametrize("n, max_k", [(2, 9), (3, 7)])
def test_classify_distance_matches_lattice_criteria(n, max_k):
    T = staircase(n)
    for k in range(1, max_k + 1):
        for L in enumerate_sublattices(n, k):
            assert classify_distance(T, L) == staircase_distance_by_lattice(L), L.basis


def test_quotient_examples():
    X = crystal(2).complex
    assert X.f_vector() == (3, 9, 6)
    assert tri(2).complex.f_vector() == (7, 21, 14)
    for n in (2, 3, 4):
        assert crystal(n).complex.f_vector()[-1] == (n + 1) * len(list(itertools.permutations(range(n))))


@pytest.mark.parametrize("which, n", [("ct", 2), ("ct", 3), ("ct", 4), ("tt", 2), ("tt", 3)])
def test_quotient_counts_scale_with_index(which, n):
    Qc = crystal(n) if which == "ct" else tri(n)
    unit = per_unit_face_counts(staircase(n))
    assert Qc.complex.f_vector() == tuple(Qc.lattice.index * u for u in unit)


@pytest.mark.parametrize("which, n", [("ct", 2), ("ct", 3), ("tt", 2), ("tt", 3)])
def test_lift_invariants(which, n):
    Qc = crystal(n) if which == "ct" else tri(n)
    X, L = Qc.complex, Qc.lattice
    canon = {Qc.lifts[0][v][0]: v for v in range(X.f_vector()[0])}
    for k in range(1, n + 1):
        V = X.vertices(k)
        for i, pts in enumerate(Qc.lifts[k]):
            # lifted vertices project to the cell's vertices
            assert [canon[L.residue(p)] for p in pts] == V[i].tolist()
            # each facet's lift is a lattice translate of the omitted-vertex face
            for j, f in enumerate(X.facets[k][i]):
                face = pts[:j] + pts[j + 1:]
                flift = Qc.lifts[k - 1][f]
                shift = tuple(a - b for a, b in zip(face[0], flift[0]))
                assert L.contains(shift)
                assert all(tuple(a - b for a, b in zip(p, q)) == shift for p, q in zip(face, flift))


def test_quotient_classification_tracks_distance():
    assert validate(crystal(3).complex).kind == CELL_COMPLEX_ONLY
    assert validate(tri(3).complex).kind == SIMPLICIAL_COMPLEX


def test_quotient_by_integers_fails():
    with pytest.raises(NotACellComplex, match="edge"):
        quotient(staircase(2), integer_lattice(2))


def test_quotient_equal_labels():
    with pytest.raises(NoValidOrder):
        quotient(staircase(2), matrix_A(2), order=lambda p: 0)


def test_quotient_custom_order_still_valid():
    Qc = quotient(staircase(2), matrix_B(2), order=lambda p: tuple(-x for x in p))
    assert validate(Qc.complex).kind == SIMPLICIAL_COMPLEX


def test_crystal_labels_are_coordinate_sums():
    for n in (2, 3, 4):
        X = crystal(n).complex
        Qc = crystal(n)
        for v in range(n + 1):
            assert X.order_label[v] == sum(Qc.lifts[0][v][0]) % (n + 1)


def test_fundamental_cycle():
    Qc = crystal(2)
    z = fundamental_cycle(Qc, Q)
    assert len(z.values) == 6
    assert {abs(v) for v in z.values.values()} == {Fraction(1, 3)}
    assert boundary(Qc.complex, z).values == {}
    z2 = fundamental_cycle(Qc, F2)
    assert boundary(Qc.complex, z2).values == {}
    with pytest.raises(DomainError):
        fundamental_cycle(Qc, "Z")


def test_check_periodic_rejects_bad_input():
    T = staircase(2)
    with pytest.raises(InvalidTriangulation, match="bounds"):
        check_periodic(PeriodicTriangulation(2, T.vertices, T.simplices[:1]))
    with pytest.raises(InvalidTriangulation):
        check_periodic(PeriodicTriangulation(2, T.vertices, T.simplices + T.simplices[:1]))
    with pytest.raises(InvalidTriangulation):
        check_periodic(PeriodicTriangulation(2, ((1, 0),), T.simplices))


def test_periodic_json_roundtrip():
    T = staircase(3)
    again = PeriodicTriangulation.loads(T.dumps())
    assert again.dumps() == T.dumps()
    assert again.vertices == T.vertices and again.simplices == T.simplices


def test_rational_vertices_roundtrip():
    T = PeriodicTriangulation(1, ((0,), (Fraction(1, 2),)),
                              (((0, (0,)), (1, (0,))), ((1, (0,)), (0, (1,)))))
    check_periodic(T)
    again = PeriodicTriangulation.loads(T.dumps())
    assert again.vertices == T.vertices
    assert not T.is_integral
    Qc = quotient(T, Lattice.from_rows([[1]]))
    assert Qc.complex.f_vector() == (2, 2)
    assert validate(Qc.complex).kind == CELL_COMPLEX_ONLY
