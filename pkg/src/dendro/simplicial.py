"""Small simplicial sets, truncated at a top dimension.

A simplicial set answers ``simplices(n)`` and ``act(theta, x)`` where theta is
a monotone map [k] -> [n] written as a tuple of length k + 1 and x is an
n-simplex; the result is the k-simplex theta*(x).
"""

from __future__ import annotations

import itertools
from typing import Callable, Hashable, Mapping, Sequence

from .category import FinCat, nerve_simplices


def monotone_maps(k: int, n: int) -> list[tuple[int, ...]]:
    return [t for t in itertools.combinations_with_replacement(range(n + 1), k + 1)]


def injective_monotone(k: int, n: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations(range(n + 1), k + 1))


def face_map(i: int, n: int) -> tuple[int, ...]:
    """d^i : [n-1] -> [n], skipping i."""
    return tuple(j if j < i else j + 1 for j in range(n))


def degeneracy_map(i: int, n: int) -> tuple[int, ...]:
    """s^i : [n+1] -> [n], hitting i twice."""
    return tuple(j if j <= i else j - 1 for j in range(n + 2))


class SSet:
    top: int = 3
    name: str = "sset"

    def simplices(self, n: int) -> tuple:
        raise NotImplementedError

    def act(self, theta: Sequence[int], x):
        raise NotImplementedError

    def face(self, i: int, x, n: int):
        return self.act(face_map(i, n), x)

    def degenerate(self, n: int) -> set:
        if n == 0:
            return set()
        return {self.act(degeneracy_map(i, n - 1), y) for y in self.simplices(n - 1) for i in range(n)}

    def __repr__(self) -> str:
        return f"<SSet {self.name} top={self.top}>"


class Simplex(SSet):
    """Delta[m]: n-simplices are monotone maps [n] -> [m]."""

    def __init__(self, m: int, top: int = 3):
        self.m = m
        self.top = top
        self.name = f"Delta[{m}]"

    def simplices(self, n):
        return tuple(monotone_maps(n, self.m))

    def act(self, theta, x):
        return tuple(x[t] for t in theta)


class SubSimplex(SSet):
    """A simplicial subset of Delta[m] cut out by a predicate on vertex sets."""

    def __init__(self, m: int, keep: Callable[[frozenset], bool], top: int = 3, name: str = "sub"):
        self.m = m
        self.keep = keep
        self.top = top
        self.name = name

    def simplices(self, n):
        return tuple(x for x in monotone_maps(n, self.m) if self.keep(frozenset(x)))

    def act(self, theta, x):
        return tuple(x[t] for t in theta)


def horn(m: int, k: int, top: int = 3) -> SubSimplex:
    """Lambda^k[m]: simplices missing some vertex other than k."""
    full = frozenset(range(m + 1))
    return SubSimplex(m, lambda vs: (vs | {k}) != full, top, name=f"Lambda^{k}[{m}]")


def boundary(m: int, top: int = 3) -> SubSimplex:
    full = frozenset(range(m + 1))
    return SubSimplex(m, lambda vs: vs != full, top, name=f"dDelta[{m}]")


class Product(SSet):
    def __init__(self, x: SSet, y: SSet):
        self.x, self.y = x, y
        self.top = min(x.top, y.top)
        self.name = f"{x.name}x{y.name}"

    def simplices(self, n):
        return tuple(itertools.product(self.x.simplices(n), self.y.simplices(n)))

    def act(self, theta, p):
        return (self.x.act(theta, p[0]), self.y.act(theta, p[1]))


class CategoryNerve(SSet):
    """N(C): an n-simplex is (objects c_0..c_n, arrows f_1..f_n), f_i : c_{i-1} -> c_i."""

    def __init__(self, c: FinCat, top: int = 3):
        self.c = c
        self.top = top
        self.name = f"N({c.name or 'C'})"

    def simplices(self, n):
        if n == 0:
            return tuple(((o,), ()) for o in self.c.objects)
        out = []
        for fs in nerve_simplices(self.c, n):
            objs = (self.c.src(fs[0]),) + tuple(self.c.tgt(f) for f in fs)
            out.append((objs, tuple(fs)))
        return tuple(out)

    def _between(self, x, a: int, b: int):
        objs, fs = x
        g = self.c.id(objs[a])
        for i in range(a, b):
            g = self.c.compose(fs[i], g)
        return g

    def act(self, theta, x):
        objs, _ = x
        return (
            tuple(objs[t] for t in theta),
            tuple(self._between(x, theta[j - 1], theta[j]) for j in range(1, len(theta))),
        )


def sset_levels(x: SSet, top: int | None = None) -> dict[int, tuple]:
    top = x.top if top is None else top
    return {n: x.simplices(n) for n in range(top + 1)}


# -- inner Kan condition, checked directly on simplices ---------------------------


def inner_horns(x: SSet, n: int, k: int) -> list[dict]:
    """Compatible families {i: x_i} of (n-1)-simplices, i != k."""
    idx = [i for i in range(n + 1) if i != k]
    level = x.simplices(n - 1)
    out: list[dict] = []
    fam: dict = {}

    def rec(p: int):
        if p == len(idx):
            out.append(dict(fam))
            return
        j = idx[p]
        for s in level:
            ok = True
            for i in idx[:p]:
                # d_i x_j = d_{j-1} x_i for i < j
                if x.face(i, s, n - 1) != x.face(j - 1, fam[i], n - 1):
                    ok = False
                    break
            if ok:
                fam[j] = s
                rec(p + 1)
                del fam[j]

    rec(0)
    return out


def simplicial_kan_report(x: SSet, top: int = 3) -> dict:
    """For 2 <= n <= top and 0 < k < n: number of horns and the filler counts seen."""
    report = {"inner_kan": True, "strict": True, "failures": []}
    for n in range(2, top + 1):
        tops = x.simplices(n)
        bound = {}
        for y in tops:
            bound.setdefault(tuple(x.face(i, y, n) for i in range(n + 1)), []).append(y)
        for k in range(1, n):
            for fam in inner_horns(x, n, k):
                count = 0
                for key, ys in bound.items():
                    if all(key[i] == s for i, s in fam.items()):
                        count += len(ys)
                if count == 0:
                    report["inner_kan"] = False
                    report["strict"] = False
                    report["failures"].append((n, k, fam))
                elif count > 1:
                    report["strict"] = False
    return report


def is_inner_kan(x: SSet, top: int = 3) -> bool:
    return simplicial_kan_report(x, top)["inner_kan"]


# -- total simplicial set of a diagram -----------------------------------------------


class Diagram:
    """A contravariant functor S^op -> (simplicial sets or categories).

    ``values[s]`` is the value at s; ``restrict[(f, x)]`` is computed by the
    callable ``pull(f, x)`` sending x in X(tgt f) to X(src f).
    """

    def __init__(self, base: FinCat, values: Mapping, pull: Callable):
        self.base = base
        self.values = dict(values)
        self.pull = pull


class SimplicialTotal(SSet):
    """The total simplicial set of a diagram of simplicial sets.

    An n-simplex is (s, x) with s a string in N(S) and x assigning to every
    injective monotone u : [k] -> [n] a k-simplex of X(s_{u(0)}); the
    degenerate u are forced.  The condition is
    alpha_{w,u}^*(x_w) = v^*(x_u) for w = u v.
    """

    def __init__(self, diagram: Diagram, top: int = 2):
        self.d = diagram
        self.top = top
        self.nerve = CategoryNerve(diagram.base, top)
        self.name = "total"

    def _alpha(self, s, a: int, b: int):
        return self.nerve._between(s, a, b)

    def simplices(self, n):
        out = []
        monos = [u for k in range(n, -1, -1) for u in injective_monotone(k, n)]
        for s in self.nerve.simplices(n):
            objs = s[0]
            fam: dict = {}

            def rec(p: int):
                if p == len(monos):
                    out.append((s, tuple(fam[u] for u in monos)))
                    return
                u = monos[p]
                k = len(u) - 1
                for cand in self.d.values[objs[u[0]]].simplices(k):
                    fam[u] = cand
                    if self._check(s, u, fam):
                        rec(p + 1)
                    del fam[u]

            rec(0)
        return tuple(out)

    def _check(self, s, w, fam) -> bool:
        # w has just been assigned; check against every u with w = u v already assigned
        for u in fam:
            if u == w or not set(w) <= set(u):
                continue
            v = tuple(u.index(j) for j in w)
            xu = fam[u]
            x_s = self.d.values[s[0][u[0]]]
            lhs = self.d.pull(self._alpha(s, u[0], w[0]), fam[w])
            if lhs != x_s.act(v, xu):
                return False
        return True

    def value(self, simplex, theta: Sequence[int]):
        """x_theta for an arbitrary monotone theta."""
        s, data = simplex
        n = len(s[0]) - 1
        monos = [u for k in range(n, -1, -1) for u in injective_monotone(k, n)]
        fam = dict(zip(monos, data))
        image = tuple(sorted(set(theta)))
        base = fam[image]
        v = tuple(image.index(t) for t in theta)
        return self.d.values[s[0][image[0]]].act(v, base)

    def act(self, theta, p):
        s, _ = p
        new_s = self.nerve.act(theta, s)
        k = len(theta) - 1
        monos = [u for j in range(k, -1, -1) for u in injective_monotone(j, k)]
        return (new_s, tuple(self.value(p, tuple(theta[i] for i in u)) for u in monos))


def grothendieck_category(base: FinCat, values: Mapping[Hashable, FinCat], functor) -> FinCat:
    """The category of elements of a contravariant diagram of categories.

    ``functor(f)`` returns (object map, arrow map) for C(tgt f) -> C(src f).
    Objects are (s, c); an arrow (s, c) -> (s', c') is (f, g) with f : s -> s'
    and g : c -> f^*(c') in C(s).
    """
    objects = [(s, c) for s in base.objects for c in values[s].objects]
    arrows = {}
    for f, (s, s2) in base.arrows.items():
        omap, _ = functor(f)
        for c in values[s].objects:
            for c2 in values[s2].objects:
                for g in values[s].hom(c, omap[c2]):
                    arrows[(f, g, c2)] = ((s, c), (s2, c2))
    ids = {(s, c): (base.id(s), values[s].id(c), c) for s, c in objects}
    table = {}
    for (f2, g2, c3), (a2, b2) in arrows.items():
        for (f1, g1, c2), (a1, b1) in arrows.items():
            if b1 != a2:
                continue
            _, amap = functor(f1)
            s = a1[0]
            g = values[s].compose(amap[g2], g1)
            table[((f2, g2, c3), (f1, g1, c2))] = (base.compose(f2, f1), g, c3)
    return FinCat(objects, arrows, ids, table, name="int")
