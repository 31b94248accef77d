"""Finite categories given by explicit composition tables."""

from __future__ import annotations

import itertools
from typing import Hashable, Iterable, Mapping


class FinCat:
    """objects, arrows (id -> (src, tgt)), identities, and compose[(g, f)] = g o f."""

    def __init__(
        self,
        objects: Iterable[Hashable],
        arrows: Mapping[Hashable, tuple[Hashable, Hashable]],
        identities: Mapping[Hashable, Hashable],
        compose: Mapping[tuple[Hashable, Hashable], Hashable],
        name: str = "",
    ):
        self.objects = tuple(objects)
        self.arrows = dict(arrows)
        self.identities = dict(identities)
        self.table = dict(compose)
        self.name = name
        self._hom: dict[tuple, list] = {}
        for a, (s, t) in self.arrows.items():
            self._hom.setdefault((s, t), []).append(a)

    def src(self, f):
        return self.arrows[f][0]

    def tgt(self, f):
        return self.arrows[f][1]

    def hom(self, a, b) -> list:
        return self._hom.get((a, b), [])

    def id(self, a):
        return self.identities[a]

    def compose(self, g, f):
        """g after f."""
        if self.tgt(f) != self.src(g):
            raise ValueError(f"cannot compose {g!r} after {f!r}")
        return self.table[(g, f)]

    def inverse(self, f):
        for g in self.hom(self.tgt(f), self.src(f)):
            if self.compose(g, f) == self.id(self.src(f)) and self.compose(f, g) == self.id(
                self.tgt(f)
            ):
                return g
        return None

    def is_iso(self, f) -> bool:
        return self.inverse(f) is not None

    def check_laws(self) -> list[str]:
        problems = []
        for f, (s, t) in self.arrows.items():
            if self.compose(f, self.id(s)) != f or self.compose(self.id(t), f) != f:
                problems.append(f"unit law fails at {f!r}")
        for f in self.arrows:
            for g in self.arrows:
                if self.src(g) != self.tgt(f):
                    continue
                for h in self.arrows:
                    if self.src(h) != self.tgt(g):
                        continue
                    if self.compose(h, self.compose(g, f)) != self.compose(self.compose(h, g), f):
                        problems.append(f"associativity fails at {(h, g, f)!r}")
        return problems

    def __repr__(self) -> str:
        return f"FinCat({self.name or len(self.objects)} objects, {len(self.arrows)} arrows)"

    def to_json(self) -> dict:
        return {
            "objects": [list(o) if isinstance(o, tuple) else o for o in self.objects],
            "arrows": [
                {"id": _js(a), "src": _js(s), "tgt": _js(t)} for a, (s, t) in self.arrows.items()
            ],
            "identities": [{"object": _js(o), "id": _js(a)} for o, a in self.identities.items()],
            "compose": [{"g": _js(g), "f": _js(f), "result": _js(h)} for (g, f), h in self.table.items()],
        }


def _js(x):
    if isinstance(x, tuple):
        return [_js(y) for y in x]
    return x


def _tup(x):
    if isinstance(x, list):
        return tuple(_tup(y) for y in x)
    return x


def fincat_from_json(data: Mapping) -> FinCat:
    return FinCat(
        [_tup(o) for o in data["objects"]],
        {_tup(a["id"]): (_tup(a["src"]), _tup(a["tgt"])) for a in data["arrows"]},
        {_tup(i["object"]): _tup(i["id"]) for i in data["identities"]},
        {(_tup(c["g"]), _tup(c["f"])): _tup(c["result"]) for c in data["compose"]},
    )


def poset(elements: Iterable[Hashable], leq) -> FinCat:
    """A preorder as a thin category; the arrow a -> b is named (a, b)."""
    els = tuple(elements)
    arrows = {(a, b): (a, b) for a in els for b in els if leq(a, b)}
    table = {}
    for (a, b) in arrows:
        for (b2, c) in arrows:
            if b2 == b:
                table[((b, c), (a, b))] = (a, c)
    return FinCat(els, arrows, {a: (a, a) for a in els}, table)


def linear_order(n: int) -> FinCat:
    """The ordinal [n] = {0 < 1 < ... < n}."""
    return poset(range(n + 1), lambda a, b: a <= b)


def terminal_category() -> FinCat:
    return poset(["*"], lambda a, b: True)


def codiscrete(objects: Iterable[Hashable]) -> FinCat:
    """Exactly one arrow between any two objects (a contractible groupoid)."""
    return poset(objects, lambda a, b: True)


def discrete(objects: Iterable[Hashable]) -> FinCat:
    return poset(objects, lambda a, b: a == b)


def one_object_group(elements: Iterable[Hashable], mult, unit) -> FinCat:
    els = tuple(elements)
    arrows = {g: ("*", "*") for g in els}
    table = {(g, f): mult(g, f) for g in els for f in els}
    return FinCat(["*"], arrows, {"*": unit}, table)


def product(c: FinCat, d: FinCat) -> FinCat:
    objects = list(itertools.product(c.objects, d.objects))
    arrows = {
        (f, g): ((c.src(f), d.src(g)), (c.tgt(f), d.tgt(g))) for f in c.arrows for g in d.arrows
    }
    ids = {(a, b): (c.id(a), d.id(b)) for a, b in objects}
    table = {}
    for (f1, g1) in arrows:
        for (f2, g2) in arrows:
            if c.src(f2) == c.tgt(f1) and d.src(g2) == d.tgt(g1):
                table[((f2, g2), (f1, g1))] = (c.compose(f2, f1), d.compose(g2, g1))
    return FinCat(objects, arrows, ids, table)


def nerve_simplices(c: FinCat, n: int) -> list[tuple]:
    """Composable strings (f_1, ..., f_n) in diagrammatic order; level 0 lists objects."""
    if n == 0:
        return [(o,) for o in c.objects]
    out: list[tuple] = []

    def rec(acc):
        if len(acc) == n:
            out.append(tuple(acc))
            return
        start = c.tgt(acc[-1]) if acc else None
        for f in c.arrows:
            if start is None or c.src(f) == start:
                acc.append(f)
                rec(acc)
                acc.pop()

    rec([])
    return out
