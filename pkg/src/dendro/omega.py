"""The category Omega: morphisms between trees as constrained edge maps.

The operad generated by a tree is thin, so a morphism S -> T is nothing but an
edge map sending every vertex of S to a signature that is inhabited in the
free operad of T.  Everything below (hom-sets, composition, the
degeneracy/iso/face factorization) works on edge maps directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Mapping, Sequence

from .tree import (
    Tree,
    TreeError,
    canonical_tree,
    degeneracy,
    inner_face,
    isomorphism,
    outer_clusters,
    outer_face,
)


class MorphismError(ValueError):
    pass


class Mor:
    """A morphism src -> dst of Omega."""

    __slots__ = ("src", "dst", "map", "_key")

    def __init__(self, src: Tree, dst: Tree, edge_map: Mapping[str, str], check: bool = False):
        self.src = src
        self.dst = dst
        self.map = dict(edge_map)
        self._key = (src, dst, tuple(self.map[e] for e in src.edges))
        if check:
            bad = first_violation(src, dst, self.map)
            if bad is not None:
                raise MorphismError(f"vertex {bad!r} has no image operation")

    def __call__(self, e: str) -> str:
        return self.map[e]

    @property
    def images(self) -> tuple[str, ...]:
        return self._key[2]

    def __eq__(self, other) -> bool:
        return isinstance(other, Mor) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        arrows = ", ".join(f"{e}->{self.map[e]}" for e in self.src.edges)
        return f"Mor({self.src.code} -> {self.dst.code}: {arrows})"

    @property
    def is_injective(self) -> bool:
        return len(set(self.images)) == len(self.images)

    @property
    def is_iso(self) -> bool:
        return self.is_injective and len(self.src) == len(self.dst)

    def inverse(self) -> "Mor":
        if not self.is_iso:
            raise MorphismError("not an isomorphism")
        return Mor(self.dst, self.src, {v: k for k, v in self.map.items()})

    def to_json(self) -> dict:
        from .tree import render_tree

        return {
            "src": render_tree(self.src),
            "dst": render_tree(self.dst),
            "map": {e: self.map[e] for e in self.src.edges},
        }


# -- operations of the free tree operad ---------------------------------------


def op_exists(t: Tree, inputs: Sequence[str], output: str) -> bool:
    """Is Omega(t)(inputs; output) non-empty?"""
    for e in (*inputs, output):
        if e not in t.edge_set:
            raise TreeError(f"unknown edge {e!r}")
    if len(set(inputs)) != len(inputs):
        return False
    if not all(t.is_above(x, output) for x in inputs):
        return False
    for i, x in enumerate(inputs):
        for y in inputs[i + 1 :]:
            if t.is_above(x, y) or t.is_above(y, x):
                return False
    for leaf in t.leaves:
        if t.is_above(leaf, output) and not any(t.is_above(leaf, x) for x in inputs):
            return False
    return True


def op_exists_bfs(t: Tree, inputs: Sequence[str], output: str) -> bool:
    """Oracle: expand {output} vertex by vertex and look for the input set."""
    for e in (*inputs, output):
        if e not in t.edge_set:
            raise TreeError(f"unknown edge {e!r}")
    if len(set(inputs)) != len(inputs):
        return False
    goal = frozenset(inputs)
    start = frozenset([output])
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for state in frontier:
            if state == goal:
                return True
            for e in state:
                if t.has_vertex(e):
                    new = (state - {e}) | frozenset(t.vertex_inputs(e))
                    if new not in seen:
                        seen.add(new)
                        nxt.append(new)
        frontier = nxt
    return False


def first_violation(src: Tree, dst: Tree, edge_map: Mapping[str, str]) -> str | None:
    for v in src.vertices:
        if not op_exists(dst, [edge_map[c] for c in src.vertex_inputs(v)], edge_map[v]):
            return v
    return None


# -- hom-sets ------------------------------------------------------------------


def _plan(s: Tree) -> tuple[list[str], list[list[str]]]:
    # assign parents before children; check each vertex once all its edges are known
    order = list(reversed(s.edges))
    pos = {e: i for i, e in enumerate(order)}
    checks: list[list[str]] = [[] for _ in order]
    for v in s.vertices:
        last = max([pos[v]] + [pos[c] for c in s.vertex_inputs(v)])
        checks[last].append(v)
    return order, checks


def iter_hom(s: Tree, t: Tree, injective: bool = False) -> Iterator[Mor]:
    order, checks = _plan(s)
    f: dict[str, str] = {}
    used: set[str] = set()
    targets = t.edges

    def rec(i: int):
        if i == len(order):
            yield Mor(s, t, f)
            return
        e = order[i]
        lower = f.get(s.below.get(e, ""), None) if e != s.root else None
        for x in targets:
            if injective and x in used:
                continue
            if lower is not None and not t.is_above(x, lower):
                continue
            f[e] = x
            ok = all(
                op_exists(t, [f[c] for c in s.vertex_inputs(v)], f[v]) for v in checks[i]
            )
            if ok:
                used.add(x)
                yield from rec(i + 1)
                used.discard(x)
            del f[e]

    yield from rec(0)


def hom(s: Tree, t: Tree) -> list[Mor]:
    return list(iter_hom(s, t))


def hom_bruteforce(s: Tree, t: Tree) -> list[Mor]:
    """Oracle: test every one of the |E_t|^|E_s| edge maps."""
    import itertools

    out = []
    for images in itertools.product(t.edges, repeat=len(s)):
        m = dict(zip(s.edges, images))
        if first_violation(s, t, m) is None:
            out.append(Mor(s, t, m))
    return out


def identity(t: Tree) -> Mor:
    return Mor(t, t, {e: e for e in t.edges})


def compose(g: Mor, f: Mor) -> Mor:
    """g after f."""
    if f.dst != g.src:
        raise MorphismError("boundary mismatch")
    return Mor(f.src, g.dst, {e: g.map[f.map[e]] for e in f.src.edges})


def compose_all(*ms: Mor) -> Mor:
    """compose_all(a, b, c) = a after b after c."""
    out = ms[-1]
    for m in reversed(ms[:-1]):
        out = compose(m, out)
    return out


def automorphisms(t: Tree) -> list[Mor]:
    return [m for m in iter_hom(t, t, injective=True)]


# -- elementary morphisms ------------------------------------------------------


def inner_face_map(t: Tree, e: str) -> Mor:
    s = inner_face(t, e)
    return Mor(s, t, {x: x for x in s.edges})


def outer_face_map(t: Tree, v: str, keep: str | None = None) -> Mor:
    s = outer_face(t, v, keep)
    return Mor(s, t, {x: x for x in s.edges})


def degeneracy_map(t: Tree, v: str) -> Mor:
    s = degeneracy(t, v)
    (u,) = t.vertex_inputs(v)
    return Mor(t, s, {x: (v if x == u else x) for x in t.edges})


def faces(t: Tree) -> list[tuple[str, str, str | None, Mor]]:
    """All elementary faces of ``t`` as (kind, edge-or-vertex, keep, map)."""
    out = [("inner", e, None, inner_face_map(t, e)) for e in t.inner_edges]
    for v, keep in outer_clusters(t):
        out.append(("outer", v, keep, outer_face_map(t, v, keep)))
    return out


# -- factorization -------------------------------------------------------------


@dataclass
class Factorization:
    """f = faces[0] o ... o faces[-1] o iso o degeneracies[-1] o ... o degeneracies[0]."""

    degeneracies: list[Mor] = field(default_factory=list)
    iso: Mor | None = None
    faces: list[Mor] = field(default_factory=list)

    def recompose(self) -> Mor:
        out = self.iso
        for d in reversed(self.degeneracies):
            out = compose(out, d)
        for fc in reversed(self.faces):
            out = compose(fc, out)
        return out


def _region(cur: Tree, t: Tree, m: Mapping[str, str]) -> tuple[set[str], set[str]]:
    image = {m[e] for e in cur.edges}
    region = set(image)
    for v in cur.vertices:
        out = m[v]
        ins = [m[c] for c in cur.vertex_inputs(v)]
        for x in t.subtree_edges(out):
            if not any(t.is_above(x, i) and x != i for i in ins):
                region.add(x)
    image_leaves = {m[e] for e in cur.leaves}
    region_vertices = {x for x in region if t.has_vertex(x) and x not in image_leaves}
    return region, region_vertices


def factorize(f: Mor) -> Factorization:
    cur = f.src
    m = dict(f.map)
    degs: list[Mor] = []
    progress = True
    while progress:
        progress = False
        for v in cur.vertices:
            ins = cur.vertex_inputs(v)
            if len(ins) == 1 and m[ins[0]] == m[v]:
                d = degeneracy_map(cur, v)
                degs.append(d)
                del m[ins[0]]
                cur = d.dst
                progress = True
                break

    t = f.dst
    image = {m[e] for e in cur.edges}
    region, region_vertices = _region(cur, t, m)
    c = t
    chain: list[Mor] = []
    while c.edge_set != image or len(c.vertices) != len(cur.vertices):
        step = None
        for e in c.inner_edges:
            if e in region and e not in image:
                step = inner_face_map(c, e)
                break
        if step is None:
            for v, keep in outer_clusters(c):
                if v in region_vertices:
                    continue
                cand = outer_face_map(c, v, keep)
                if not (c.edge_set - cand.src.edge_set) & image:
                    step = cand
                    break
        if step is None:
            raise MorphismError(f"cannot factor {f!r}")
        chain.append(step)
        c = step.src
    return Factorization(degs, Mor(cur, c, m), chain)


# -- canonical representatives -------------------------------------------------


def canonical(t: Tree) -> tuple[Tree, Mor]:
    """(canonical tree C, isomorphism C -> t)."""
    c = canonical_tree(t.code)
    return c, Mor(c, t, isomorphism(c, t))


def canonicalize(alpha: Mor) -> Mor:
    """Transport alpha to the canonical representatives of its boundary trees."""
    cs, ios = canonical(alpha.src)
    ct, iot = canonical(alpha.dst)
    back = {v: k for k, v in iot.map.items()}
    return Mor(cs, ct, {e: back[alpha.map[ios.map[e]]] for e in cs.edges})


@lru_cache(maxsize=None)
def canonical_hom(src_code: str, dst_code: str) -> tuple[Mor, ...]:
    return tuple(iter_hom(canonical_tree(src_code), canonical_tree(dst_code)))


@lru_cache(maxsize=None)
def canonical_automorphisms(code: str) -> tuple[Mor, ...]:
    return tuple(automorphisms(canonical_tree(code)))


@lru_cache(maxsize=None)
def canonical_faces(code: str) -> tuple[tuple[str, str, str | None, Mor], ...]:
    """Elementary faces into the canonical tree, with canonical sources."""
    t = canonical_tree(code)
    out = []
    for kind, x, keep, m in faces(t):
        _, io = canonical(m.src)
        out.append((kind, x, keep, compose(m, io)))
    return tuple(out)


@lru_cache(maxsize=None)
def canonical_degeneracies(code: str) -> tuple[tuple[str, Mor], ...]:
    """Elementary degeneracies out of the canonical tree, with canonical targets."""
    t = canonical_tree(code)
    out = []
    for v in t.vertices:
        if t.valence(v) == 1:
            d = degeneracy_map(t, v)
            _, io = canonical(d.dst)
            out.append((v, compose(io.inverse(), d)))
    return tuple(out)


def is_linear_code(code: str) -> bool:
    return canonical_tree(code).is_linear


def monotone_to_mor(theta: Sequence[int], m: int) -> Mor:
    """The morphism [n] -> [m] of linear trees given by a monotone map."""
    from .tree import linear_tree

    n = len(theta) - 1
    return Mor(linear_tree(n), linear_tree(m), {str(i): str(theta[i]) for i in range(n + 1)})


def mor_to_monotone(alpha: Mor) -> tuple[int, ...]:
    return tuple(int(alpha.map[str(i)]) for i in range(len(alpha.src)))


# -- words in the generators ---------------------------------------------------


def _split_face(cm: Mor) -> tuple[Mor, Mor]:
    """cm = F o a with F a canonical elementary face and a an automorphism."""
    for _, _, _, fc in canonical_faces(cm.dst.code):
        if fc.src.code != cm.src.code:
            continue
        back = {v: k for k, v in fc.map.items()}
        if all(cm.map[e] in back for e in cm.src.edges):
            a = Mor(cm.src, cm.src, {e: back[cm.map[e]] for e in cm.src.edges})
            if first_violation(a.src, a.dst, a.map) is None:
                return fc, a
    raise MorphismError(f"{cm!r} is not an elementary face")


def _split_degeneracy(cm: Mor) -> tuple[Mor, Mor]:
    """cm = a o D with D a canonical elementary degeneracy and a an automorphism."""
    for _, d in canonical_degeneracies(cm.src.code):
        if d.dst.code != cm.dst.code:
            continue
        amap: dict[str, str] = {}
        ok = True
        for e in cm.src.edges:
            x = d.map[e]
            if amap.setdefault(x, cm.map[e]) != cm.map[e]:
                ok = False
                break
        if ok and len(set(amap.values())) == len(amap):
            a = Mor(d.dst, d.dst, amap)
            if first_violation(a.src, a.dst, a.map) is None:
                return a, d
    raise MorphismError(f"{cm!r} is not an elementary degeneracy")


def _is_identity(m: Mor) -> bool:
    return m.src == m.dst and all(m.map[e] == e for e in m.src.edges)


@lru_cache(maxsize=200_000)
def generator_word(alpha: Mor) -> tuple[Mor, ...]:
    """Canonical generators w with alpha = w[0] o w[1] o ... o w[-1].

    ``alpha`` must run between canonical trees.  Every letter is a canonical
    elementary face, a canonical elementary degeneracy, or an automorphism of
    a canonical tree.
    """
    fz = factorize(alpha)
    word: list[Mor] = []
    for step in fz.faces:
        fc, a = _split_face(canonicalize(step))
        word.append(fc)
        if not _is_identity(a):
            word.append(a)
    iso = canonicalize(fz.iso)
    if not _is_identity(iso):
        word.append(iso)
    for step in reversed(fz.degeneracies):
        a, d = _split_degeneracy(canonicalize(step))
        if not _is_identity(a):
            word.append(a)
        word.append(d)
    # merge adjacent automorphisms
    merged: list[Mor] = []
    for m in word:
        if merged and m.src == m.dst and merged[-1].src == merged[-1].dst and m.src == merged[-1].src:
            c = compose(merged[-1], m)
            merged.pop()
            if not _is_identity(c):
                merged.append(c)
        else:
            merged.append(m)
    return tuple(merged)
