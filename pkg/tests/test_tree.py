import itertools

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from conftest import RUNNING
from dendro.tree import (
    Tree,
    TreeError,
    TreeSyntaxError,
    canonical_code,
    canonical_tree,
    corolla,
    degeneracy,
    enumerate_trees,
    eta,
    inner_face,
    isomorphism,
    linear_tree,
    outer_clusters,
    outer_face,
    parse_tree,
    render_tree,
    tree_from_json,
    tree_to_json,
)

CODES = enumerate_trees(5)


@st.composite
def trees(draw, max_edges=5):
    """A canonical tree with its edges renamed at random."""
    code = draw(st.sampled_from(enumerate_trees(max_edges)))
    t = canonical_tree(code)
    names = draw(st.permutations([f"e{i}" for i in range(len(t.edges))]))
    return t.rename(dict(zip(t.edges, names)))


def test_parse_eta():
    t = parse_tree("e")
    assert t.edges == ("e",) and t.vertices == ()
    assert t.code == "*"


def test_parse_running_example():
    t = parse_tree(RUNNING)
    assert set(t.edges) == set("abcdef")
    assert sorted(t.valence(v) for v in t.vertices) == [0, 2, 3]
    assert t.valence("b") == 2 and t.valence("d") == 0 and t.valence("a") == 3
    assert set(t.inner_edges) == {"b", "d"}
    assert set(t.leaves) == {"c", "e", "f"}


def test_parse_linear():
    t = parse_tree("x(y)")
    assert t.is_linear and len(t) == 2
    assert t.code == linear_tree(1).code


@pytest.mark.parametrize("bad", ["", "a(", "a(b,)", "a(b)c", "a(a)", "a(b,b)", "(x)"])
def test_parse_rejects(bad):
    with pytest.raises(TreeSyntaxError):
        parse_tree(bad)


def test_tree_rejects_two_roots_and_cycles():
    with pytest.raises(TreeError):
        Tree("a", {"a": ["b"], "b": ["a"]})
    with pytest.raises(TreeError):
        Tree("a", {"a": ["b"], "c": ["d"]})


def test_render_term_eta():
    assert render_tree(eta("e"), "term") == "e"


def test_render_dot_counts():
    dot = render_tree(parse_tree(RUNNING), "dot")
    assert dot.startswith("digraph")
    assert dot.count("shape=plaintext") + dot.count("shape=point") >= 6
    for e in "abcdef":
        assert f'"{e}"' in dot or f"{e} " in dot or f"{e};" in dot


@given(trees())
def test_render_round_trip(t):
    back = parse_tree(render_tree(t, "term"))
    assert back.code == t.code
    assert isomorphism(t, back) is not None


@given(trees())
def test_json_round_trip(t):
    assert tree_from_json(tree_to_json(t)) == t


def test_planar_drawings_have_equal_codes():
    assert parse_tree("r(v(a,b),d)").code == parse_tree("r(d,v(b,a))").code


def test_small_codes():
    assert eta().code == "*"
    assert corolla(2).code == "(**)"
    assert canonical_code(corolla(0)) == "()"


@given(trees())
def test_code_is_isomorphism_invariant(t):
    c = canonical_tree(t.code)
    m = isomorphism(c, t)
    assert m is not None
    assert all(c.vertex_inputs(v) is not None for v in c.vertices)
    assert canonical_tree(c.code) == c


def test_isomorphism_examples():
    assert isomorphism(eta("x"), eta("y")) == {"x": "y"}
    assert isomorphism(corolla(2), corolla(2)) in ({"0": "0", "1": "1", "2": "2"}, {"0": "1", "1": "0", "2": "2"})
    assert isomorphism(linear_tree(2), corolla(2)) is None


def test_linear_and_corolla_constructors():
    assert linear_tree(0).code == "*"
    l2 = linear_tree(2)
    assert len(l2) == 3 and len(l2.vertices) == 2 and all(l2.valence(v) == 1 for v in l2.vertices)
    c0 = corolla(0)
    assert len(c0) == 1 and len(c0.vertices) == 1


def test_inner_face_examples():
    t = parse_tree(RUNNING)
    fb = inner_face(t, "b")
    assert fb.code == parse_tree("a(e,f,c,d())").code
    fd = inner_face(t, "d")
    assert fd.code == parse_tree("a(b(e,f),c)").code
    assert fd.vertex_inputs("a") and set(fd.vertex_inputs("a")) == {"b", "c"}
    assert inner_face(linear_tree(2), "1").code == linear_tree(1).code
    with pytest.raises(TreeError):
        inner_face(t, "c")


def test_outer_face_examples():
    t = parse_tree(RUNNING)
    assert outer_face(t, "b").code == parse_tree("a(b,c,d())").code
    od = outer_face(t, "d")
    assert od.code == parse_tree("a(b(e,f),c,d)").code and od.is_leaf("d")
    assert outer_face(corolla(2), "2", keep="1").code == "*"


def test_outer_clusters_of_running_example():
    vs = {v for v, _ in outer_clusters(parse_tree(RUNNING))}
    assert {"b", "d"} <= vs


def test_degeneracy_examples():
    assert degeneracy(linear_tree(1), "1").code == "*"
    assert degeneracy(linear_tree(2), "1").code == linear_tree(1).code
    with pytest.raises(TreeError):
        degeneracy(parse_tree(RUNNING), "a")


def test_enumerate_small():
    assert enumerate_trees(1) == sorted(["*", "()"])
    two = set(enumerate_trees(2)) - set(enumerate_trees(1))
    assert two == {linear_tree(1).code, "(())"}


def _as_graph(t):
    """Edges and vertices as nodes of a directed graph; the root is marked."""
    g = nx.DiGraph()
    for e in t.edges:
        g.add_node(("e", e), kind="root" if e == t.root else "edge")
    for v in t.vertices:
        g.add_node(("v", v), kind="vertex")
        g.add_edge(("v", v), ("e", v))
        for x in t.vertex_inputs(v):
            g.add_edge(("e", x), ("v", v))
    return g


def _all_labelled(n):
    """Every tree on the edge set 0..n-1, by choosing each edge's parent edge or none."""
    edges = [str(i) for i in range(n)]
    out = []
    for root in edges:
        rest = [e for e in edges if e != root]
        for parents in itertools.product(edges, repeat=len(rest)):
            for stumps in itertools.product((False, True), repeat=n):
                inputs = {}
                for e, p in zip(rest, parents):
                    inputs.setdefault(p, []).append(e)
                for e, s in zip(edges, stumps):
                    if s:
                        if e in inputs:
                            break
                        inputs[e] = []
                else:
                    try:
                        out.append(Tree(root, inputs))
                    except TreeError:
                        pass
    return out


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_enumerate_matches_graph_isomorphism_oracle(n):
    classes = []
    match = lambda a, b: a["kind"] == b["kind"]
    for t in _all_labelled(n):
        g = _as_graph(t)
        if not any(nx.is_isomorphic(g, h, node_match=match) for h in classes):
            classes.append(g)
    ours = [c for c in enumerate_trees(n) if len(canonical_tree(c)) == n]
    assert len(ours) == len(classes)
