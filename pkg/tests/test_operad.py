import itertools
import json

import pytest
from hypothesis import given, strategies as st

from conftest import RUNNING
from dendro.category import codiscrete, linear_order, terminal_category
from dendro.operad import (
    Comm,
    HomOperad,
    TableOperad,
    a_operad,
    b_operad,
    check_operad_map,
    find_isomorphism,
    free_tree_operad,
    j_shriek,
    j_star,
    operad_from_json,
    operad_maps,
    operad_to_json,
    perm_compose,
    pullback_operad,
    sigma_is_free,
    sigma_perm,
    symmetrize,
    unit_operad,
    validate,
)
from dendro.tree import canonical_tree, enumerate_trees, eta, parse_tree


def test_running_example_operations():
    p = free_tree_operad(parse_tree(RUNNING))
    assert sorted(p.generators()) == sorted([(("e", "f"), "b"), ((), "d"), (("b", "c", "d"), "a")])
    sigs = {p.signature(o) for o in p.all_ops()}
    # non-unit operations up to permuting inputs
    shapes = {(frozenset(i), o) for i, o in sigs if (tuple(i), o) != ((o,), o)}
    assert shapes == {
        (frozenset("ef"), "b"),
        (frozenset(), "d"),
        (frozenset("bcd"), "a"),
        (frozenset("efcd"), "a"),
        (frozenset("bc"), "a"),
        (frozenset("efc"), "a"),
    }
    assert len(list(p.all_ops())) == 6 + 2 + 1 + 6 + 24 + 2 + 6


def test_eta_operad_is_the_unit():
    p = free_tree_operad(eta("x"))
    assert tuple(p.colours) == ("x",)
    assert list(p.all_ops()) == [p.unit("x")]


@pytest.mark.parametrize("code", enumerate_trees(4))
def test_free_tree_operads_are_lawful(code):
    assert validate(free_tree_operad(canonical_tree(code))) == {}


@pytest.mark.parametrize("p", [Comm(3), a_operad("xy", 3), symmetrize(b_operad("s", 3))], ids=lambda p: p.name)
def test_fixtures_are_lawful(p):
    assert validate(p, 3) == {}


def test_corrupted_table_is_caught():
    data = operad_to_json(Comm(3), 3)
    q = operad_from_json(data)
    assert validate(q) == {}
    # break one partial composition whose result is pinned by the table
    for entry in data["compose"]:
        if entry["p"] == 2 and entry["q"] == 2:
            entry["result"] = 3 if entry["result"] != 3 else 2
    bad = operad_from_json(data)
    report = validate(bad)
    assert report and ("associativity" in report or "composition" in report)


def test_symmetrize_binary():
    from dendro.operad import BOperad

    planar = b_operad("s", 2)
    sym = symmetrize(planar)
    c = planar.colours[0]
    assert len(planar.ops((c, c), c)) == 1 or planar.ops((c, c), c) == ()
    assert len(sym.ops((c, c), c)) == 2 * len(planar.ops((c, c), c))
    assert isinstance(planar, BOperad)


def test_b_operad_chain_condition():
    b = b_operad("s", 3)
    assert b.ops((("s", "s"),), ("s", "s")) == (b.unit(("s", "s")),)
    b2 = b_operad(["1", "2", "3", "4"], 3)
    assert b2.ops((("1", "2"), ("3", "4")), ("1", "4")) == ()


@pytest.mark.parametrize("n", [1, 2, 3])
def test_symmetrized_action_is_free(n):
    assert sigma_is_free(a_operad("xy", 3), n)


def test_pullback_identity_and_constant():
    a = a_operad("xy", 3)
    same = pullback_operad(a, {c: c for c in a.colours})
    assert find_isomorphism(same, a, 2) is not None
    comm = Comm(3)
    pb = pullback_operad(comm, {c: comm.colours[0] for c in "uv"})
    for n in range(4):
        for ins in itertools.product("uv", repeat=n):
            assert len(pb.ops(ins, "u")) == 1


def test_maps_from_unit_operad():
    a = a_operad("xy", 3)
    assert len(operad_maps(unit_operad(), a)) == len(a.colours)


def test_j_shriek_j_star():
    assert len(j_shriek(terminal_category()).colours) == 1
    for c in (linear_order(2), codiscrete("ab")):
        back = j_star(j_shriek(c))
        assert sorted(map(repr, back.objects)) == sorted(map(repr, c.objects))
        assert len(back.arrows) == len(c.arrows)


def test_j_star_of_a_s():
    cat = j_star(a_operad("xy", 3))
    assert len(cat.objects) == 4 and len(cat.arrows) == 4


def test_json_round_trip():
    a = a_operad("xy", 3)
    data = operad_to_json(a, 3)
    back = operad_from_json(data)
    assert isinstance(back, TableOperad)
    def sigs(d):
        return sorted(json.dumps([o["inputs"], o["output"]]) for o in d["ops"])

    assert sigs(operad_to_json(back, 3)) == sigs(data)
    assert find_isomorphism(back, a, 3) is not None


def test_hom_operad_unary_part_is_natural_transformations():
    """Unary operations of Hom(j_! [1], j_! [1]) are natural transformations f => g."""
    c = linear_order(1)
    h = HomOperad(j_shriek(c), j_shriek(c), cap=1)
    funcs = [tuple(m.colour(o) for o in c.objects) for m in h.maps]
    assert sorted(funcs) == [(0, 0), (0, 1), (1, 1)]
    for a, f in enumerate(funcs):
        for b, g in enumerate(funcs):
            expected = 1 if all(x <= y for x, y in zip(f, g)) else 0
            assert len(h.ops((a,), b)) == expected


# -- sigma_{n,m} -----------------------------------------------------------------------------


def test_sigma_example():
    assert sigma_perm(2, 3) == (0, 3, 1, 4, 2, 5)


@pytest.mark.parametrize("m", range(1, 6))
def test_sigma_one(m):
    assert sigma_perm(1, m) == tuple(range(m))


@given(st.integers(1, 5), st.integers(1, 5))
def test_sigma_formula_and_inverse(n, m):
    s = sigma_perm(n, m)
    for k in range(m):
        for j in range(n):
            assert s[k * n + j] == j * m + k
    t = sigma_perm(m, n)
    assert tuple(t[s[x]] for x in range(n * m)) == tuple(range(n * m))
    assert perm_compose(t, s) == tuple(range(n * m)) or perm_compose(s, t) == tuple(range(n * m))


def test_check_operad_map_on_identity():
    a = a_operad("xy", 3)
    assert check_operad_map(a, a, {c: c for c in a.colours}, lambda o: o, 3, bijective=True) == []
