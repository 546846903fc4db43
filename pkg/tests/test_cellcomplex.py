import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import crystal, rp, tri
from torusrank.cellcomplex import (
    CELL_COMPLEX_ONLY,
    F2,
    INVALID,
    Q,
    SIMPLICIAL_COMPLEX,
    Chain,
    Cochain,
    SimplicialCellComplex,
    boundary,
    boundary_matrix,
    boundary_operator,
    euler_characteristic,
    evaluate,
    validate,
)
from torusrank.errors import DomainError, ShapeError
from torusrank.exactmath import rank


def two_simplex():
    # edges: 01, 02, 12; facet i omits vertex i
    return SimplicialCellComplex.from_facet_lists(3, [[[1, 0], [2, 0], [2, 1]], [[2, 1, 0]]])


def two_arc_circle():
    return SimplicialCellComplex.from_facet_lists(2, [[[1, 0], [1, 0]]])


def loop_circle():
    return SimplicialCellComplex.from_facet_lists(1, [[[0, 0]]])


def test_validate_examples():
    assert validate(two_simplex()).kind == SIMPLICIAL_COMPLEX
    assert validate(two_arc_circle()).kind == CELL_COMPLEX_ONLY
    v = validate(loop_circle())
    assert v.kind == INVALID and "regularity" in v.reason


def test_vertices_are_derived():
    X = two_simplex()
    assert X.vertices(2).tolist() == [[0, 1, 2]]
    assert X.vertices(1).tolist() == [[0, 1], [0, 2], [1, 2]]
    c = X.cell(6)
    assert c.dim == 2 and c.vertices == (0, 1, 2) and c.facets == (5, 4, 3)


def test_subface_follows_facets():
    X = two_simplex()
    assert X.subface(2, [0, 1]).tolist() == [0]
    assert X.subface(2, [1, 2]).tolist() == [2]
    assert X.subface(2, [0, 2]).tolist() == [1]
    assert X.subface(2, [1]).tolist() == [1]


def test_face_identity_violation():
    # the triangle's faces do not glue: edge 01 replaced by a second copy of 02
    X = SimplicialCellComplex.from_facet_lists(3, [[[1, 0], [2, 0], [2, 1]], [[2, 1, 1]]])
    v = validate(X)
    assert v.kind == INVALID


def test_facet_out_of_range():
    X = SimplicialCellComplex.from_facet_lists(2, [[[1, 5]]])
    assert validate(X).kind == INVALID


def test_order_labels_must_increase():
    X = SimplicialCellComplex.from_facet_lists(2, [[[1, 0]]], order_label=[1, 0])
    v = validate(X)
    assert v.kind == INVALID and "order" in v.reason
    X = SimplicialCellComplex.from_facet_lists(2, [[[1, 0]]], order_label=[3, 3])
    assert validate(X).kind == INVALID


def test_shape_errors():
    with pytest.raises(ShapeError):
        SimplicialCellComplex.from_facet_lists(2, [[[1, 0, 0]]])
    with pytest.raises(ShapeError):
        SimplicialCellComplex.from_facet_lists(2, [[[1, 0]]], order_label=[0])


def test_fvector_examples():
    assert rp(2).f_vector() == (3, 6, 4)
    assert crystal(2).complex.f_vector() == (3, 9, 6)
    assert SimplicialCellComplex([np.zeros((1, 0))]).f_vector() == (1,)


def test_euler_characteristics():
    assert euler_characteristic(rp(2)) == 1
    assert euler_characteristic(rp(3)) == 0
    for n in (2, 3, 4):
        assert euler_characteristic(crystal(n).complex) == 0
    for n in (2, 3):
        assert euler_characteristic(tri(n).complex) == 0


def all_complexes():
    yield "simplex", two_simplex()
    yield "circle", two_arc_circle()
    for n in (1, 2, 3, 4):
        yield f"rp{n}", rp(n)
    for n in (2, 3, 4):
        yield f"ct{n}", crystal(n).complex
    for n in (2, 3):
        yield f"tt{n}", tri(n).complex


@pytest.mark.parametrize("name, X", list(all_complexes()))
def test_boundary_squared_is_zero(name, X):
    for k in range(2, X.top_dim + 1):
        dd = boundary_operator(X, k - 1) @ boundary_operator(X, k)
        assert dd.count_nonzero() == 0
        dd2 = boundary_operator(X, k - 1, signed=False) @ boundary_operator(X, k, signed=False)
        assert not (dd2.toarray() % 2).any()


def test_boundary_ranks():
    X = rp(2)
    assert rank(boundary_matrix(X, 1, F2)) == 2
    assert rank(boundary_matrix(X, 2, F2)) == 3
    Y = tri(2).complex
    assert rank(boundary_matrix(Y, 1, Q)) == 6
    assert rank(boundary_matrix(Y, 2, Q)) == 13


def test_boundary_out_of_range():
    with pytest.raises(DomainError):
        boundary_operator(two_simplex(), 3)
    with pytest.raises(DomainError):
        boundary_operator(two_simplex(), 0)


def test_chain_boundary_and_evaluate():
    X = two_simplex()
    c = Chain(2, Q, {6: 1})
    assert boundary(X, c).values == {5: 1, 4: -1, 3: 1}
    assert boundary(X, boundary(X, c)).values == {}
    a = Cochain(1, Q, {3: 2, 4: 5})
    assert evaluate(a, boundary(X, c)) == 2 - 5
    with pytest.raises(DomainError):
        evaluate(Cochain(2, Q), boundary(X, c))


def test_vector_normalisation():
    c = Chain(1, F2, {3: 3, 4: 2})
    assert c.values == {3: 1}
    assert (c + c).values == {}
    with pytest.raises(DomainError):
        Chain(1, "Z")
    with pytest.raises(DomainError):
        Cochain(1, F2, {0: 1}).check(two_simplex())


@pytest.mark.parametrize("name, X", list(all_complexes()))
def test_json_roundtrip_byte_exact(name, X):
    text = X.dumps()
    Y = SimplicialCellComplex.loads(text)
    assert Y.dumps() == text
    assert Y.f_vector() == X.f_vector()
    assert all((a == b).all() for a, b in zip(X.facets, Y.facets))
    assert (X.order_label == Y.order_label).all()


def test_json_rejects_bad_facets():
    obj = json.loads(two_simplex().dumps())
    obj["cells"][-1]["facets"] = [0, 1, 2]  # vertices, not edges
    with pytest.raises(ShapeError):
        SimplicialCellComplex.from_json(obj)


@given(st.integers(0, 10), st.sampled_from([F2, Q]))
def test_cochain_json_roundtrip(seed, fld):
    import random

    r = random.Random(seed)
    vals = {i: r.randint(-3, 3) for i in range(5)}
    a = Cochain(1, fld, vals)
    assert Cochain.from_json(json.loads(a.dumps())) == a
