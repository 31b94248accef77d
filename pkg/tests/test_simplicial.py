from math import comb

import pytest

from dendro.category import codiscrete, linear_order
from dendro.simplicial import (
    CategoryNerve,
    Product,
    Simplex,
    boundary,
    face_map,
    degeneracy_map,
    horn,
    injective_monotone,
    monotone_maps,
    simplicial_kan_report,
)


@pytest.mark.parametrize("n,m", [(n, m) for n in range(4) for m in range(4)])
def test_monotone_counts(n, m):
    assert len(monotone_maps(n, m)) == comb(n + m + 1, n + 1)
    assert len(injective_monotone(n, m)) == comb(m + 1, n + 1)


def test_face_and_degeneracy_maps():
    assert face_map(1, 2) == (0, 2)
    assert degeneracy_map(0, 1) == (0, 0, 1)


def test_simplicial_identities():
    x = Simplex(3, top=3)
    for s in x.simplices(3):
        for i in range(4):
            for j in range(i + 1, 4):
                # d_i d_j = d_{j-1} d_i
                assert x.face(i, x.face(j, s, 3), 2) == x.face(j - 1, x.face(i, s, 3), 2)


def test_horn_and_boundary_sizes():
    assert len(horn(2, 1).simplices(1)) == 2 + 3  # two edges plus degenerate vertices
    assert len(boundary(2).simplices(2)) == len(Simplex(2).simplices(2)) - 1


@pytest.mark.parametrize(
    "x,expected",
    [
        (Simplex(2, top=3), True),
        (horn(2, 1, top=3), False),
        (boundary(2, top=3), False),
        (Product(Simplex(1, top=3), Simplex(1, top=3)), True),
        (CategoryNerve(codiscrete("ab"), 3), True),
    ],
    ids=lambda v: getattr(v, "name", str(v)),
)
def test_inner_kan_fixtures(x, expected):
    assert simplicial_kan_report(x, 3)["inner_kan"] is expected


def test_nerves_fill_uniquely():
    rep = simplicial_kan_report(CategoryNerve(linear_order(2), 3), 3)
    assert rep["strict"]


def test_category_nerve_levels():
    n = CategoryNerve(linear_order(2), 3)
    for k in range(4):
        assert len(n.simplices(k)) == len(monotone_maps(k, 2))
