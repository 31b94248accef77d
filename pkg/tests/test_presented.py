import pytest
from hypothesis import given, settings, strategies as st

from dendro.operad import Comm, find_isomorphism, free_tree_operad, validate
from dendro.presented import bv_tensor
from dendro.tree import canonical_tree, enumerate_trees, linear_tree

SMALL = enumerate_trees(3)
FOUR = enumerate_trees(4)


def _signatures(p):
    out: dict = {}
    for c in p.colours:
        for n in range(p.cap + 1):
            for o in p.ops_out(c, n):
                s = p.signature(o)
                out[(tuple(s[0]), s[1])] = out.get((tuple(s[0]), s[1]), 0) + 1
    return out


def _check_thin_exact(a, b):
    p = bv_tensor(free_tree_operad(canonical_tree(a)), free_tree_operad(canonical_tree(b)))
    sigs = _signatures(p)
    assert p.exact
    assert max(sigs.values()) == 1
    return p, sigs


@pytest.mark.parametrize("a", SMALL)
def test_thin_exact_small(a):
    for b in SMALL:
        _check_thin_exact(a, b)


@given(st.sampled_from(FOUR), st.sampled_from(FOUR))
@settings(max_examples=12, deadline=None)
def test_thin_exact_sample_four_edges(a, b):
    _check_thin_exact(a, b)


@given(st.sampled_from(enumerate_trees(3)), st.sampled_from(enumerate_trees(3)))
@settings(max_examples=25, deadline=None)
def test_bv_symmetry(a, b):
    _, left = _check_thin_exact(a, b)
    _, right = _check_thin_exact(b, a)

    def swap(c):
        return (c[1], c[0])

    moved = {(tuple(swap(c) for c in ins), swap(out)): k for (ins, out), k in left.items()}
    assert moved == right


def test_square():
    one = free_tree_operad(linear_tree(1))
    p = bv_tensor(one, one)
    assert p.exact and len(p.colours) == 4
    # 4 units, 4 sides of the square and one diagonal
    assert sum(_signatures(p).values()) == 9
    assert validate(p) == {}


def test_unit_tensor():
    eta = free_tree_operad(canonical_tree("*"))
    t = free_tree_operad(canonical_tree("((*)*)"))
    p = bv_tensor(eta, t)
    assert find_isomorphism(p, t, p.cap) is not None


def test_non_free_operands_are_flagged():
    p = bv_tensor(Comm(2), Comm(2), max_arity=2)
    assert not p.exact


@pytest.mark.parametrize("a,b", [("(**)", "(*)"), ("(()*)", "(*)"), ("((*))", "(**)")])
def test_bv_is_lawful(a, b):
    p, _ = _check_thin_exact(a, b)
    assert validate(p) == {}
