import itertools

import pytest

from dendro.category import linear_order
from dendro.dset import (
    InternalHom,
    Representable,
    TensorDSet,
    check_dendmap,
    check_functoriality,
    codes_by_size,
    diagonal_map,
    i_shriek,
    linear_code,
    nerve,
)
from dendro.operad import a_operad, j_shriek
from dendro.simplicial import Product, Simplex
from dendro.tree import canonical_tree, eta, linear_tree, parse_tree
from dendro.wcat import HCNerve, w_tree_maps_bruteforce, z2_comm


def _sizes(x, bound):
    return {c: len(x.carrier(c)) for c in codes_by_size(bound)}


def test_tensor_unit():
    y = nerve(a_operad("xy", 3), 3)
    t = TensorDSet(Representable(eta(), 3), y, bound=3)
    assert _sizes(t, 3) == _sizes(y, 3)


@pytest.mark.parametrize("a,b", [("a(b,c)", "x(y)"), ("x(y)", "u(v(w))"), ("a()", "x(y)")])
def test_tensor_symmetry_sizes(a, b):
    s, t = parse_tree(a), parse_tree(b)
    left = TensorDSet(Representable(s, 3), Representable(t, 3), bound=3)
    right = TensorDSet(Representable(t, 3), Representable(s, 3), bound=3)
    assert _sizes(left, 3) == _sizes(right, 3)


def test_tensor_is_functorial():
    x = i_shriek(Simplex(1, top=3), 4)
    t = TensorDSet(x, x, bound=3)
    assert check_functoriality(t, 3, pairs=False) == []


def test_diagonal_map_point_times_interval():
    x, y = Simplex(0, top=3), Simplex(1, top=3)
    t = TensorDSet(i_shriek(x, 4), i_shriek(y, 4), bound=3)
    p = i_shriek(Product(x, y), 3)
    f = diagonal_map(x, y, t)
    assert check_dendmap(f, p, t, 3) == []
    for code in codes_by_size(3):
        assert len({f(code, z) for z in p.carrier(code)}) == len(t.carrier(code))


def test_provisional_lists_top_level():
    t = TensorDSet(Representable(linear_tree(1), 3), Representable(linear_tree(1), 3), bound=2)
    assert all(len(canonical_tree(c)) == 2 for c in t.provisional)


# -- internal hom -----------------------------------------------------------------------------


def test_internal_hom_unit():
    y = nerve(a_operad("xy", 4), 4)
    h = InternalHom(Representable(eta(), 3), y, 3)
    assert _sizes(h, 3) == _sizes(y, 3)


def _upsets(n):
    """Monotone maps [n] x [1] -> [1], by brute force over all 0/1 labellings."""
    pts = list(itertools.product(range(n + 1), range(2)))
    count = 0
    for vals in itertools.product((0, 1), repeat=len(pts)):
        lab = dict(zip(pts, vals))
        if all(lab[p] <= lab[q] for p in pts for q in pts if p[0] <= q[0] and p[1] <= q[1]):
            count += 1
    return count


def test_internal_hom_restricts_to_the_simplicial_exponential():
    d = nerve(j_shriek(linear_order(1)), 6)
    h = InternalHom(i_shriek(Simplex(1, top=3), 4), d, 3)
    for n in range(3):
        assert len(h.carrier(linear_code(n))) == _upsets(n)


@pytest.mark.parametrize("code", ["(*)", "(**)", "((*)*)", "((*))"])
def test_vertices_of_hom_into_hc_nerve(code):
    """Vertices of Hom(Omega[T], hcN(Q)) are Cat-operad maps W(T) -> Q."""
    t = canonical_tree(code)
    q = z2_comm(4)
    h = InternalHom(Representable(t, len(t)), HCNerve(q, 6), 1, tensor_bound=len(t))
    assert len(h.carrier("*")) == w_tree_maps_bruteforce(t, q)


def test_internal_hom_is_functorial():
    d = nerve(j_shriek(linear_order(1)), 6)
    h = InternalHom(i_shriek(Simplex(1, top=3), 4), d, 2)
    assert check_functoriality(h, 2, pairs=False) == []
