"""Inner horns, horn maps, fillers and the inner Kan condition.

A horn map Lambda^e[T] -> X is stored as one dendrex per kept face of T.
Two face dendrices have to agree on every injective map into T that factors
through both faces; this is the compatibility used while backtracking.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from .dset import (
    DSet,
    Nerve,
    SubRepresentable,
    codes_by_size,
    corolla_code,
    dendmaps,
    horn as _horn_dset,
    monos_into,
    tau_d,
)
from .omega import Mor, canonical_faces
from .operad import Operad
from .tree import Tree, canonical_tree, linear_tree


class NotInnerEdge(ValueError):
    pass


class NotStrict(ValueError):
    pass


@dataclass
class Horn:
    """Lambda^e[T]: the tree, the missing inner edge and the kept faces."""

    shape: Tree
    missing: str
    faces: tuple[Mor, ...]
    bound: int

    @property
    def code(self) -> str:
        return self.shape.code

    def as_dset(self) -> SubRepresentable:
        return _horn_dset(self.shape, self.missing, self.bound)


def horn(t: Tree, e: str, bound: int | None = None) -> Horn:
    """The inner horn of the canonical form of t at its inner edge e."""
    c = canonical_tree(t.code)
    if t != c:
        raise ValueError("horns are taken on canonical trees; pass canonical_tree(code)")
    if e not in c.inner_edges:
        raise NotInnerEdge(f"{e!r} is not an inner edge of {c.code}")
    kept = tuple(m for kind, x, _, m in canonical_faces(c.code) if not (kind == "inner" and x == e))
    return Horn(c, e, kept, len(c) if bound is None else bound)


def _lift(m: Mor, face: Mor) -> Mor | None:
    """The unique k with face o k = m, if m factors through the face."""
    inv = {v: k for k, v in face.map.items()}
    if not all(m.map[e] in inv for e in m.src.edges):
        return None
    try:
        k = Mor(m.src, face.src, {e: inv[m.map[e]] for e in m.src.edges}, check=True)
    except ValueError:
        return None
    return k


@lru_cache(maxsize=None)
def _overlaps(code: str, faces: tuple[Mor, ...]) -> dict:
    """For face indices i < j: lifts (k_i, k_j) of every mono into T through both faces."""
    lifts = []
    for m in monos_into(code):
        row = {i: _lift(m, f) for i, f in enumerate(faces)}
        lifts.append({i: k for i, k in row.items() if k is not None})
    out: dict = {}
    for row in lifts:
        idx = sorted(row)
        for a in range(len(idx)):
            for b in range(a + 1, len(idx)):
                out.setdefault((idx[a], idx[b]), []).append((row[idx[a]], row[idx[b]]))
    return out


def horn_maps(h: Horn, x: DSet) -> list[tuple]:
    """All compatible families (x_face for each kept face), by backtracking."""
    faces = h.faces
    over = _overlaps(h.code, faces)
    fam: list = [None] * len(faces)
    out: list[tuple] = []

    def rec(i: int):
        if i == len(faces):
            out.append(tuple(fam))
            return
        for cand in x.carrier(faces[i].src.code):
            ok = True
            for j in range(i):
                for kj, ki in over.get((j, i), ()):
                    if x.act(kj, fam[j]) != x.act(ki, cand):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                fam[i] = cand
                rec(i + 1)
        fam[i] = None

    rec(0)
    return out


def horn_maps_oracle(h: Horn, x: DSet) -> list[tuple]:
    """Horn maps read off from all natural maps of the horn into x."""
    hd = h.as_dset()
    fams = set()
    for f in dendmaps(hd, x, len(h.shape)):
        fams.add(tuple(f[(face.src.code, face)] for face in h.faces))
    return sorted(fams, key=repr)


def fillers(h: Horn, hm: tuple, x: DSet) -> list:
    """Dendrices over T whose kept faces reproduce the horn map."""
    return [z for z in x.carrier(h.code) if all(x.act(f, z) == w for f, w in zip(h.faces, hm))]


def _boundary_index(h: Horn, x: DSet) -> dict:
    idx: dict = {}
    for z in x.carrier(h.code):
        idx.setdefault(tuple(x.act(f, z) for f in h.faces), []).append(z)
    return idx


@dataclass
class KanReport:
    """Filler counts per (tree, inner edge, horn map) and the resulting verdict."""

    counts: dict = field(default_factory=dict)
    shapes: list = field(default_factory=list)

    @property
    def inner_kan(self) -> bool:
        return all(n >= 1 for n in self.counts.values())

    @property
    def strict(self) -> bool:
        return all(n == 1 for n in self.counts.values())

    @property
    def verdict(self) -> str:
        if self.strict:
            return "strict inner-Kan"
        if self.inner_kan:
            return "inner-Kan"
        return "counterexample"

    def counterexamples(self) -> list:
        return [k for k, n in self.counts.items() if n == 0]

    def records(self) -> list[dict]:
        return [
            {"tree": code, "edge": e, "horn_map": repr(hm), "fillers": n}
            for (code, e, hm), n in self.counts.items()
        ]


def check_inner_kan(x: DSet, size_bound: int = 3, linear_only: bool = False) -> KanReport:
    """Exhaustive filler counts over all inner horns of trees with at most size_bound edges."""
    if size_bound > x.bound:
        raise ValueError(f"size bound {size_bound} above the bound {x.bound} of {x.name}")
    rep = KanReport()
    if linear_only:
        codes = [linear_tree(n).code for n in range(size_bound)]
    else:
        codes = codes_by_size(size_bound)
    for code in codes:
        t = canonical_tree(code)
        for e in t.inner_edges:
            h = horn(t, e)
            rep.shapes.append((code, e))
            idx = _boundary_index(h, x)
            for hm in horn_maps(h, x):
                rep.counts[(code, e, hm)] = len(idx.get(hm, ()))
    return rep


def is_inner_kan(x: DSet, size_bound: int = 3) -> bool:
    return check_inner_kan(x, size_bound).inner_kan


def nerve_comparison(x: DSet, tau: Operad, bound: int):
    """The unit x -> N_d(tau_d x) on dendrices, as a levelwise function.

    A dendrex goes to its edge restrictions and its vertex corolla restrictions.
    """

    def f(code: str, z):
        t = canonical_tree(code)
        cols = tuple(x.act(Mor(canonical_tree("*"), t, {"0": e}), z) for e in t.edges)
        ops = []
        for v in t.vertices:
            ins = t.vertex_inputs(v)
            n = len(ins)
            m = Mor(canonical_tree(corolla_code(n)), t, {**{str(j): ins[j] for j in range(n)}, str(n): v})
            ops.append((n, x.act(m, z)))
        return (cols, tuple(ops))

    return f


def strict_kan_to_operad(x: DSet, size_bound: int = 3, cap: int | None = None):
    """The operad whose nerve is x, after checking strict fillers up to size_bound."""
    rep = check_inner_kan(x, size_bound)
    if not rep.strict:
        bad = [k for k, n in rep.counts.items() if n != 1][0]
        raise NotStrict(f"horn {bad[0]} at {bad[1]} has {rep.counts[bad]} fillers")
    p = tau_d(x, cap)
    if not getattr(p, "exact", False):
        raise NotStrict("two-vertex horns do not have unique fillers")
    top = min(x.bound, p.cap + 1)
    n = Nerve(p, top)
    f = nerve_comparison(x, p, top)
    for code in codes_by_size(top):
        image = {f(code, z) for z in x.carrier(code)}
        if len(image) != len(x.carrier(code)) or image != set(n.carrier(code)):
            raise NotStrict(f"the nerve of the generated operad differs from x over {code}")
    return p
