"""Finite rooted non-planar trees: the objects of the tree category.

A tree is stored as a root edge plus a map from edges to the (ordered) list of
input edges of the vertex sitting on top of them.  An edge without an entry is
an outer leaf; an entry with an empty list is a nullary vertex (a "stump").
Vertices are named by their output edge.

The stored input order only exists because text is planar.  Everything
observable (codes, isomorphisms, faces up to isomorphism) ignores it.
"""

from __future__ import annotations

import itertools
import json
import re
from functools import cached_property
from typing import Iterable, Mapping

__all__ = [
    "Tree",
    "TreeError",
    "TreeSyntaxError",
    "parse_tree",
    "render_tree",
    "canonical_code",
    "canonical_tree",
    "isomorphism",
    "linear_tree",
    "corolla",
    "eta",
    "inner_face",
    "outer_face",
    "degeneracy",
    "enumerate_trees",
    "tree_from_json",
    "tree_to_json",
]


class TreeError(ValueError):
    pass


class TreeSyntaxError(TreeError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class Tree:
    """An immutable rooted tree with named edges."""

    __slots__ = ("root", "_inputs", "__dict__")

    def __init__(self, root: str, inputs: Mapping[str, Iterable[str]] | None = None):
        self.root = str(root)
        self._inputs = {str(k): tuple(str(x) for x in v) for k, v in (inputs or {}).items()}
        self._check()

    def _check(self) -> None:
        seen = {self.root}
        stack = [self.root]
        while stack:
            e = stack.pop()
            for c in self._inputs.get(e, ()):
                if c in seen:
                    raise TreeError(f"edge {c!r} occurs twice")
                seen.add(c)
                stack.append(c)
        stray = set(self._inputs) - seen
        if stray:
            raise TreeError(f"vertices not connected to the root: {sorted(stray)}")

    # -- basic structure -------------------------------------------------

    @property
    def inputs(self) -> Mapping[str, tuple[str, ...]]:
        return self._inputs

    def vertex_inputs(self, e: str) -> tuple[str, ...]:
        return self._inputs[e]

    def has_vertex(self, e: str) -> bool:
        return e in self._inputs

    @cached_property
    def edges(self) -> tuple[str, ...]:
        """Edges in postorder (inputs before outputs, stored order)."""
        out: list[str] = []

        def walk(e: str) -> None:
            for c in self._inputs.get(e, ()):
                walk(c)
            out.append(e)

        walk(self.root)
        return tuple(out)

    @cached_property
    def position(self) -> dict[str, int]:
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def edge_set(self) -> frozenset[str]:
        return frozenset(self.edges)

    @cached_property
    def vertices(self) -> tuple[str, ...]:
        return tuple(e for e in self.edges if e in self._inputs)

    @cached_property
    def below(self) -> dict[str, str]:
        """Map from a non-root edge to the output edge of the vertex it feeds."""
        return {c: e for e, cs in self._inputs.items() for c in cs}

    @cached_property
    def leaves(self) -> tuple[str, ...]:
        return tuple(e for e in self.edges if e not in self._inputs)

    @cached_property
    def inner_edges(self) -> tuple[str, ...]:
        return tuple(e for e in self.edges if e != self.root and e in self._inputs)

    def is_leaf(self, e: str) -> bool:
        return e not in self._inputs

    def is_inner(self, e: str) -> bool:
        return e != self.root and e in self._inputs

    def is_outer(self, e: str) -> bool:
        return not self.is_inner(e)

    def valence(self, v: str) -> int:
        return len(self._inputs[v])

    @cached_property
    def height(self) -> dict[str, int]:
        h = {self.root: 0}
        for e in reversed(self.edges):
            for c in self._inputs.get(e, ()):
                h[c] = h[e] + 1
        return h

    def path_down(self, e: str) -> list[str]:
        """Edges from ``e`` down to the root, inclusive."""
        out = [e]
        while out[-1] != self.root:
            out.append(self.below[out[-1]])
        return out

    def is_above(self, x: str, y: str) -> bool:
        """True iff ``x`` lies weakly above ``y``."""
        hx, hy = self.height[x], self.height[y]
        while hx > hy:
            x = self.below[x]
            hx -= 1
        return x == y

    def subtree_edges(self, e: str) -> list[str]:
        out = []
        stack = [e]
        while stack:
            x = stack.pop()
            out.append(x)
            stack.extend(self._inputs.get(x, ()))
        return out

    @property
    def is_linear(self) -> bool:
        return all(len(v) == 1 for v in self._inputs.values())

    def __len__(self) -> int:
        return len(self.edges)

    @cached_property
    def _key(self):
        return (self.root, tuple(sorted(self._inputs.items())))

    def __eq__(self, other) -> bool:
        return isinstance(other, Tree) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"Tree({render_tree(self)!r})"

    def rename(self, mapping: Mapping[str, str]) -> "Tree":
        return Tree(
            mapping[self.root],
            {mapping[k]: [mapping[c] for c in v] for k, v in self._inputs.items()},
        )

    @cached_property
    def code(self) -> str:
        return canonical_code(self)


# -- concrete syntax ---------------------------------------------------------

_NAME = re.compile(r"[A-Za-z0-9_]+")


def parse_tree(text: str) -> Tree:
    """Parse ``edge := NAME [ "(" [tree ("," tree)*] ")" ]``."""
    pos = 0
    inputs: dict[str, list[str]] = {}
    seen: set[str] = set()

    def skip() -> None:
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def edge() -> str:
        nonlocal pos
        skip()
        m = _NAME.match(text, pos)
        if not m:
            raise TreeSyntaxError("expected an edge name", pos)
        name = m.group(0)
        if name in seen:
            raise TreeSyntaxError(f"duplicate edge name {name!r}", pos)
        seen.add(name)
        pos = m.end()
        skip()
        if pos < len(text) and text[pos] == "(":
            pos += 1
            kids: list[str] = []
            skip()
            if pos < len(text) and text[pos] == ")":
                pos += 1
            else:
                while True:
                    kids.append(edge())
                    skip()
                    if pos < len(text) and text[pos] == ",":
                        pos += 1
                        continue
                    if pos < len(text) and text[pos] == ")":
                        pos += 1
                        break
                    raise TreeSyntaxError("expected ',' or ')'", pos)
            inputs[name] = kids
        return name

    root = edge()
    skip()
    if pos != len(text):
        raise TreeSyntaxError("trailing input", pos)
    return Tree(root, inputs)


def _term(t: Tree, e: str) -> str:
    if t.is_leaf(e):
        return e
    return e + "(" + ",".join(_term(t, c) for c in t.vertex_inputs(e)) + ")"


def render_tree(t: Tree, fmt: str = "term") -> str:
    if fmt == "term":
        return _term(t, t.root)
    if fmt == "dot":
        lines = [
            "digraph tree {",
            "  // edges are drawn as nodes; arrows point towards the root (root at bottom)",
            "  rankdir=BT;",
        ]
        for e in t.edges:
            lines.append(f'  "e_{e}" [label="{e}", shape=plaintext];')
        for v in t.vertices:
            lines.append(f'  "v_{v}" [label="", shape=point, width=0.12];')
        for v in t.vertices:
            for c in t.vertex_inputs(v):
                lines.append(f'  "e_{c}" -> "v_{v}";')
            lines.append(f'  "v_{v}" -> "e_{v}";')
        lines.append("}")
        return "\n".join(lines) + "\n"
    if fmt == "json":
        return json.dumps(tree_to_json(t), sort_keys=True)
    raise ValueError(f"unknown format {fmt!r}")


def tree_to_json(t: Tree) -> dict:
    return {"root": t.root, "vertices": {k: list(v) for k, v in sorted(t.inputs.items())}}


def tree_from_json(data) -> Tree:
    if isinstance(data, str):
        return parse_tree(data)
    return Tree(data["root"], data.get("vertices", {}))


# -- canonical form and isomorphism -----------------------------------------


def _codes(t: Tree) -> dict[str, str]:
    codes: dict[str, str] = {}
    for e in t.edges:
        if t.is_leaf(e):
            codes[e] = "*"
        else:
            codes[e] = "(" + "".join(sorted(codes[c] for c in t.vertex_inputs(e))) + ")"
    return codes


def canonical_code(t: Tree) -> str:
    return _codes(t)[t.root]


def _sorted_children(t: Tree, codes: dict[str, str], e: str) -> list[str]:
    kids = t.vertex_inputs(e)
    order = sorted(range(len(kids)), key=lambda i: (codes[kids[i]], i))
    return [kids[i] for i in order]


def isomorphism(s: Tree, t: Tree) -> dict[str, str] | None:
    """A root and incidence preserving edge bijection s -> t, or None."""
    cs, ct = _codes(s), _codes(t)
    if cs[s.root] != ct[t.root]:
        return None
    out: dict[str, str] = {}
    stack = [(s.root, t.root)]
    while stack:
        a, b = stack.pop()
        out[a] = b
        if s.has_vertex(a):
            stack.extend(zip(_sorted_children(s, cs, a), _sorted_children(t, ct, b)))
    return out


_CANON_CACHE: dict[str, Tree] = {}


def _split_code(code: str) -> list[str]:
    # children of "(...)" at depth one
    parts, depth, start = [], 0, 1
    for i in range(1, len(code) - 1):
        ch = code[i]
        if ch == "(":
            if depth == 0:
                start = i
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0:
                parts.append(code[start : i + 1])
        elif depth == 0:
            parts.append(ch)
    return parts


def canonical_tree(code: str) -> Tree:
    """The representative of an isomorphism class: edges named "0".."n-1" in postorder,
    children sorted by code."""
    hit = _CANON_CACHE.get(code)
    if hit is not None:
        return hit
    counter = itertools.count()
    inputs: dict[str, list[str]] = {}

    def build(c: str) -> str:
        if c == "*":
            return str(next(counter))
        kids = [build(k) for k in _split_code(c)]
        name = str(next(counter))
        inputs[name] = kids
        return name

    root = build(code)
    t = Tree(root, inputs)
    _CANON_CACHE[code] = t
    return t


# -- standard trees ------------------------------------------------------------


def eta(name: str = "0") -> Tree:
    return Tree(name, {})


def linear_tree(n: int) -> Tree:
    """The linear tree [n]: edges 0 (top leaf) .. n (root), n unary vertices."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return Tree(str(n), {str(k): [str(k - 1)] for k in range(1, n + 1)})


def corolla(n: int) -> Tree:
    """One vertex of valence n: leaves 0..n-1, root n."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return Tree(str(n), {str(n): [str(k) for k in range(n)]})


# -- faces and degeneracies ----------------------------------------------------


def inner_face(t: Tree, e: str) -> Tree:
    """Contract the inner edge ``e``."""
    if e not in t.edge_set:
        raise TreeError(f"{e!r} is not an edge")
    if not t.is_inner(e):
        raise TreeError(f"{e!r} is not an inner edge")
    below = t.below[e]
    inputs = dict(t.inputs)
    top = inputs.pop(e)
    kids = list(inputs[below])
    i = kids.index(e)
    inputs[below] = kids[:i] + list(top) + kids[i + 1 :]
    return Tree(t.root, inputs)


def outer_face(t: Tree, v: str, keep: str | None = None) -> Tree:
    """Remove the outer cluster ``v`` and its outer incident edges."""
    if not t.has_vertex(v):
        raise TreeError(f"{v!r} is not a vertex")
    incident = [v, *t.vertex_inputs(v)]
    inner = [x for x in incident if t.is_inner(x)]
    if not inner:
        # t is a corolla
        if keep is None:
            raise TreeError("outer face of a corolla needs the surviving edge")
        if keep not in incident:
            raise TreeError(f"{keep!r} is not incident to {v!r}")
        return Tree(keep, {})
    if keep is not None:
        raise TreeError("'keep' only applies to corollas")
    if len(inner) > 1:
        raise TreeError(f"{v!r} is not an outer cluster")
    inputs = dict(t.inputs)
    if v == t.root:
        (b,) = inner
        del inputs[v]
        return Tree(b, inputs)
    del inputs[v]
    return Tree(t.root, inputs)


def outer_clusters(t: Tree) -> list[tuple[str, str | None]]:
    """All (vertex, keep) pairs naming an outer face of ``t``."""
    if len(t.vertices) == 1 and t.root in t.inputs:
        v = t.root
        return [(v, x) for x in (*t.vertex_inputs(v), v)]
    out = []
    for v in t.vertices:
        incident = [v, *t.vertex_inputs(v)]
        if sum(1 for x in incident if t.is_inner(x)) == 1:
            out.append((v, None))
    return out


def degeneracy(t: Tree, v: str) -> Tree:
    """Delete the unary vertex ``v``; its input edge merges into ``v``."""
    if not t.has_vertex(v) or t.valence(v) != 1:
        raise TreeError(f"{v!r} is not a unary vertex")
    (u,) = t.vertex_inputs(v)
    inputs = dict(t.inputs)
    del inputs[v]
    if u in inputs:
        inputs[v] = inputs.pop(u)
    return Tree(t.root, inputs)


# -- enumeration ----------------------------------------------------------------


def _codes_by_size(n: int) -> list[list[str]]:
    by = [[] for _ in range(n + 1)]
    if n >= 1:
        by[1] = ["*"]
    for m in range(1, n + 1):
        found = set(by[m])
        # vertex on top of an edge: children use m-1 edges in total
        for kids in _multisets(by, m - 1):
            found.add("(" + "".join(sorted(kids)) + ")")
        by[m] = sorted(found)
    return by


def _multisets(by: list[list[str]], total: int):
    pool = [(size, c) for size in range(1, total + 1) for c in by[size]]

    def rec(start: int, remaining: int, acc: list[str]):
        if remaining == 0:
            yield list(acc)
            return
        for i in range(start, len(pool)):
            size, c = pool[i]
            if size <= remaining:
                acc.append(c)
                yield from rec(i, remaining - size, acc)
                acc.pop()

    yield from rec(0, total, [])


def enumerate_trees(max_edges: int) -> list[str]:
    """Codes of all isomorphism classes with at most ``max_edges`` edges, sorted."""
    if max_edges < 1:
        raise ValueError("max_edges must be >= 1")
    by = _codes_by_size(max_edges)
    return sorted(c for level in by for c in level)
