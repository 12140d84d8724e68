import pytest

from matroidlab.cochain import (
    CellComplex2,
    cohomology_dims,
    cube_surface,
    d0,
    d0_matrix,
    d1,
    d1_matrix,
    from_polygons,
    subdivide_edges,
    torus_grid,
    triangulated_torus,
)
from matroidlab.errors import BadParams, InvalidComplex, SizeMismatch
from matroidlab.exactlin import GF, QQ, ExactMatrix

FIELDS = [QQ, GF(2), GF(5)]


def complexes():
    out = [torus_grid(k) for k in range(2, 5)]
    out += [cube_surface(), triangulated_torus(), subdivide_edges(torus_grid(2)), subdivide_edges(cube_surface())]
    return out


def test_d0_examples(rng):
    X = torus_grid(3)
    assert all(x == 0 for x in d0(X, [7] * 9))
    v = 4
    out = d0(X, [int(i == v) for i in range(9)])
    for (t, h), val in zip(X.edges, out):
        assert val == (1 if h == v else 0) - (1 if t == v else 0)
    seg = CellComplex2(2, ((0, 1),), (), closed=False)
    assert d0(seg, [0, 1]) == (1,)
    with pytest.raises(SizeMismatch):
        d0(X, [1, 2])


def test_d1_examples():
    square = CellComplex2(4, ((0, 1), (1, 2), (2, 3), (3, 0)), (((0, 1), (1, 1), (2, 1), (3, 1)),), closed=False)
    assert d1(square, [1, 1, 1, 1]) == (4,)
    assert d1(square, [0, 0, 0, 0]) == (0,)
    X = torus_grid(3)
    for field in FIELDS:
        f1 = d0(X, [field.coerce(i * i - 3) for i in range(9)], field)
        assert all(x == 0 for x in d1(X, f1, field))
    with pytest.raises(SizeMismatch):
        d1(X, [1])


@pytest.mark.parametrize("field", FIELDS, ids=lambda f: str(f.to_json()))
@pytest.mark.parametrize("X", complexes(), ids=lambda X: f"V{X.V}E{X.E}F{X.F}")
def test_d_squared_and_euler(X, field):
    D0, D1 = d0_matrix(X, field), d1_matrix(X, field)
    assert D1 @ D0 == ExactMatrix.zeros(field, X.F, X.V)
    h = cohomology_dims(X, field)
    assert h[0] - h[1] + h[2] == X.V - X.E + X.F
    assert h == h[::-1]


def test_cohomology_examples():
    for field in FIELDS:
        assert cohomology_dims(torus_grid(3), field) == (1, 2, 1)
        assert cohomology_dims(triangulated_torus(), field) == (1, 2, 1)
    X = cube_surface()
    assert (X.V, X.E, X.F) == (8, 12, 6)
    assert cohomology_dims(X) == (1, 0, 1)


@pytest.mark.parametrize("k", [2, 3])
def test_refinement_invariance(k):
    for field in FIELDS:
        assert cohomology_dims(subdivide_edges(torus_grid(k)), field) == cohomology_dims(torus_grid(k), field)


def test_torus_grid_shape():
    X = torus_grid(2)
    assert (X.V, X.E, X.F, X.euler_characteristic) == (4, 8, 4, 0)
    assert torus_grid(3).euler_characteristic == 0
    with pytest.raises(BadParams):
        torus_grid(1)


def test_invalid_complexes():
    with pytest.raises(InvalidComplex):
        CellComplex2(2, ((0, 2),), ())
    with pytest.raises(InvalidComplex):
        CellComplex2(3, ((0, 1), (1, 2)), (((0, 1), (1, 1)),), closed=False)
    with pytest.raises(InvalidComplex):
        from_polygons(3, [(0, 1, 2)])  # a lone triangle is not closed
    with pytest.raises(InvalidComplex):
        CellComplex2(2, ((0, 1),), (((0, 2),),), closed=False)


def test_json_round_trip():
    X = torus_grid(2)
    assert CellComplex2.from_json(X.to_json()) == X
