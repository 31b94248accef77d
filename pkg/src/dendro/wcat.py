"""The W-construction over Cat with the isomorphism interval, and the
homotopy coherent dendroidal nerve of small Cat-enriched operads.

H is the groupoid with objects 0, 1 and a single isomorphism between them.
Over a tree T the operad W_H(T) has, at every signature of Omega(T), the
groupoid H^k with k the number of inner edges of the subtree carrying that
operation.  Since H^k is codiscrete, a functor out of it is fixed by its
values on objects and on the arrows out of the all-ones corner.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Sequence

from .category import FinCat, codiscrete, discrete, terminal_category
from .dset import DSet, Nerve
from .operad import Comm, FreeTreeOperad, Operad, _cuts, permute
from .tree import Tree, canonical_tree


# -- the interval --------------------------------------------------------------------


class IntervalGroupoid:
    """0 <-> 1 with its structure maps: the points, the counit and the max operation."""

    def __init__(self):
        self.cat = codiscrete((0, 1))
        self.zero, self.one = 0, 1

    def epsilon(self, obj) -> str:
        return "*"

    def vee(self, a, b):
        """On objects max; on arrows (a, a') v (b, b') = (a v b, a' v b')."""
        if isinstance(a, tuple):
            return (max(a[0], b[0]), max(a[1], b[1]))
        return max(a, b)

    def check_laws(self) -> list[str]:
        c = self.cat
        bad: list[str] = []
        if len(c.arrows) != 4:
            bad.append("expected four arrows")
        if not all(c.is_iso(f) for f in c.arrows):
            bad.append("some arrow is not invertible")
        for p in (self.zero, self.one):
            if self.epsilon(p) != terminal_category().objects[0]:
                bad.append("epsilon does not retract a point")
        things = list(c.objects) + list(c.arrows)
        for x in things:
            z = (0, 0) if isinstance(x, tuple) else 0
            o = (1, 1) if isinstance(x, tuple) else 1
            if self.vee(z, x) != x or self.vee(x, z) != x:
                bad.append(f"0 is not a unit at {x!r}")
            if self.vee(o, x) != o or self.vee(x, o) != o:
                bad.append(f"1 is not absorbing at {x!r}")
        for kind in (list(c.objects), list(c.arrows)):
            for x, y, w in itertools.product(kind, repeat=3):
                if self.vee(self.vee(x, y), w) != self.vee(x, self.vee(y, w)):
                    bad.append(f"vee is not associative at {(x, y, w)!r}")
        # vee is a functor H x H -> H
        for (f, g) in itertools.product(c.arrows, repeat=2):
            for (f2, g2) in itertools.product(c.arrows, repeat=2):
                if c.src(f2) == c.tgt(f) and c.src(g2) == c.tgt(g):
                    lhs = self.vee(c.compose(f2, f), c.compose(g2, g))
                    rhs = c.compose(self.vee(f2, g2), self.vee(f, g))
                    if lhs != rhs:
                        bad.append("vee does not respect composition")
        return bad


H = IntervalGroupoid()


@lru_cache(maxsize=None)
def cube(k: int) -> FinCat:
    """H^k: bit vectors of length k, one arrow between any two."""
    return codiscrete(tuple(itertools.product((0, 1), repeat=k)))


# -- W over the linear trees ----------------------------------------------------------------


class WLinear:
    """W_H[n]: objects 0..n, hom(i, j) = H^(j-i-1) for i < j."""

    def __init__(self, n: int):
        self.n = n
        self.objects = tuple(range(n + 1))

    def hom(self, i: int, j: int) -> FinCat:
        if i > j:
            return FinCat([], {}, {}, {})
        if i == j:
            return terminal_category()
        return cube(j - i - 1)

    def compose(self, s, t, j: int):
        """s : j -> k after t : i -> j, on objects or on arrows."""
        if s == "*" or t == "*":
            raise ValueError("identities are not composed here")
        if isinstance(s, tuple) and s and isinstance(s[0], tuple):
            return (t[0] + (1,) + s[0], t[1] + (1,) + s[1])
        return t + (1,) + s

    def compose_at(self, i: int, j: int, k: int, s, t):
        """Composition hom(j,k) x hom(i,j) -> hom(i,k), objects or arrows."""
        if i == j:
            return s
        if j == k:
            return t
        return self.compose(s, t, j)


def w_linear(n: int) -> WLinear:
    return WLinear(n)


# -- Cat-enriched operads ---------------------------------------------------------------------


class CatOperad(Operad):
    """An operad in Cat.

    The objects of the hom-categories form an ordinary operad (the methods
    inherited from :class:`Operad`); arrows are composed vertically inside
    ``homcat(inputs, output)`` and horizontally by ``compose2``.
    """

    def homcat(self, inputs: Sequence, output) -> FinCat:
        raise NotImplementedError

    def compose2(self, a, i: int, b):
        raise NotImplementedError

    def act2(self, a, sigma: Sequence[int]):
        raise NotImplementedError

    def identity2(self, op):
        ins, out = self.signature(op)
        return self.homcat(ins, out).id(op)

    # every shipped kind names a 2-cell by a pair whose first entry is an object
    # with the right signature

    def _cat_of(self, a) -> FinCat:
        return self.homcat(*self.signature(a[0]))

    def src2(self, a):
        return self._cat_of(a).src(a)

    def tgt2(self, a):
        return self._cat_of(a).tgt(a)

    def vert(self, g, f):
        """g after f inside a hom-category."""
        return self._cat_of(f).compose(g, f)


class DiscreteCatOperad(CatOperad):
    """A Set-operad with only identity 2-cells."""

    def __init__(self, p: Operad):
        self.base = p
        self.colours = p.colours
        self.cap = p.cap
        self.name = f"disc({p.name})"
        self.exhaustive_above_cap = getattr(p, "exhaustive_above_cap", isinstance(p, FreeTreeOperad))

    def ops(self, inputs, output):
        return self.base.ops(inputs, output)

    def ops_out(self, output, arity):
        return self.base.ops_out(output, arity)

    def signature(self, op):
        return self.base.signature(op)

    def compose(self, p, i, q):
        return self.base.compose(p, i, q)

    def act(self, p, sigma):
        return self.base.act(p, sigma)

    def unit(self, c):
        return self.base.unit(c)

    def homcat(self, inputs, output):
        return discrete(self.base.ops(inputs, output))

    def compose2(self, a, i, b):
        r = self.base.compose(a[0], i, b[0])
        return (r, r)

    def act2(self, a, sigma):
        r = self.base.act(a[0], sigma)
        return (r, r)


class GradedCatOperad(CatOperad):
    """Every hom-category is a one-object-per-operation copy of Z/m.

    Arrows are (op, g) with g in Z/m, vertical composition adds g, and
    horizontal composition adds the degrees.  With m = 2 over Comm this is a
    one-colour operad with a single operation per arity and a nontrivial
    invertible 2-cell on each.
    """

    def __init__(self, p: Operad, m: int = 2, name: str | None = None):
        self.base = p
        self.m = m
        self.colours = p.colours
        self.cap = p.cap
        self.name = name or f"Z{m}({p.name})"

    def ops(self, inputs, output):
        return self.base.ops(inputs, output)

    def ops_out(self, output, arity):
        return self.base.ops_out(output, arity)

    def signature(self, op):
        return self.base.signature(op)

    def compose(self, p, i, q):
        return self.base.compose(p, i, q)

    def act(self, p, sigma):
        return self.base.act(p, sigma)

    def unit(self, c):
        return self.base.unit(c)

    def homcat(self, inputs, output):
        return _graded_homcat(self, tuple(inputs), output)

    def compose2(self, a, i, b):
        return (self.base.compose(a[0], i, b[0]), (a[1] + b[1]) % self.m)

    def act2(self, a, sigma):
        return (self.base.act(a[0], sigma), a[1])


def _graded_homcat(p: GradedCatOperad, inputs: tuple, output) -> FinCat:
    key = (inputs, output)
    cache = p.__dict__.setdefault("_homcats", {})
    if key not in cache:
        obs = p.base.ops(inputs, output)
        arrows = {(o, g): (o, o) for o in obs for g in range(p.m)}
        table = {((o, g), (o, h)): (o, (g + h) % p.m) for o in obs for g in range(p.m) for h in range(p.m)}
        cache[key] = FinCat(obs, arrows, {o: (o, 0) for o in obs}, table)
    return cache[key]


def z2_comm(cap: int = 4) -> GradedCatOperad:
    return GradedCatOperad(Comm(cap), 2, name="Z2Comm")


def check_cat_operad(p: CatOperad, max_arity: int = 3) -> list[str]:
    """Unit, equivariance and interchange laws on 2-cells, within the arity bound."""
    bad: list[str] = []
    arrows = []
    for o in p.all_ops(max_arity):
        c = p.homcat(*p.signature(o))
        arrows.extend(f for f in c.arrows if c.src(f) == o)
    by_src: dict = {}
    for a in arrows:
        by_src.setdefault(p.src2(a), []).append(a)
    for a in arrows:
        ins, out = p.signature(p.src2(a))
        for i, c in enumerate(ins):
            if p.compose2(a, i, p.identity2(p.unit(c))) != a:
                bad.append(f"right unit fails for {a!r}")
        if p.compose2(p.identity2(p.unit(out)), 0, a) != a:
            bad.append(f"left unit fails for {a!r}")
        for sigma in itertools.permutations(range(len(ins))):
            if p.act2(p.act2(a, sigma), _inv(sigma)) != a:
                bad.append(f"action is not invertible at {a!r}")
    for a in arrows:
        ins, _ = p.signature(p.src2(a))
        for i, c in enumerate(ins):
            for b in arrows:
                bins, bout = p.signature(p.src2(b))
                if bout != c or len(ins) - 1 + len(bins) > max_arity:
                    continue
                for a2 in by_src.get(p.tgt2(a), ()):
                    for b2 in by_src.get(p.tgt2(b), ()):
                        lhs = p.compose2(p.vert(a2, a), i, p.vert(b2, b))
                        rhs = p.vert(p.compose2(a2, i, b2), p.compose2(a, i, b))
                        if lhs != rhs:
                            bad.append(f"interchange fails at {(a, b, a2, b2)!r}")
                            return bad
    return bad


def _inv(sigma):
    out = [0] * len(sigma)
    for i, s in enumerate(sigma):
        out[s] = i
    return tuple(out)


# -- W_H(T) ---------------------------------------------------------------------------------


def region_inner_edges(t: Tree, inputs: Sequence[str], output: str) -> tuple[str, ...]:
    """Inner edges of the subtree that carries the operation (inputs; output)."""
    ins = set(inputs)
    out = []
    for x in t.subtree_edges(output):
        if x == output or x in ins:
            continue
        if any(t.is_above(x, i) for i in ins):
            continue
        out.append(x)
    return tuple(sorted(out, key=t.edges.index))


class WTreeOperad(CatOperad):
    """W_H(Omega(T)): an object is (inputs, output, labels), labels a bit per inner edge."""

    def __init__(self, t: Tree):
        self.tree = t
        self.free = FreeTreeOperad(t)
        self.colours = t.edges
        self.cap = self.free.cap
        self.name = f"W({t.code})"
        self.exhaustive_above_cap = True

    def inner(self, inputs, output) -> tuple[str, ...]:
        return region_inner_edges(self.tree, inputs, output)

    def ops(self, inputs, output):
        if not self.free.ops(inputs, output):
            return ()
        inner = self.inner(inputs, output)
        return tuple((tuple(inputs), output, tuple(zip(inner, bits))) for bits in itertools.product((0, 1), repeat=len(inner)))

    def ops_out(self, output, arity):
        for ins, out in self.free.ops_out(output, arity):
            yield from self.ops(ins, out)

    def signature(self, op):
        return op[0], op[1]

    def compose(self, p, i, q):
        ins, out, lab = p
        qins, qout, qlab = q
        if ins[i] != qout:
            raise ValueError("colour mismatch")
        new = dict(lab)
        new.update(qlab)
        if qins != (qout,) and ins != (out,):
            new[qout] = 1
        ins2 = ins[:i] + qins + ins[i + 1 :]
        inner = self.inner(ins2, out)
        return (ins2, out, tuple((e, new[e]) for e in inner))

    def act(self, p, sigma):
        return (permute(p[0], sigma), p[1], p[2])

    def unit(self, c):
        return ((c,), c, ())

    def homcat(self, inputs, output):
        return codiscrete(self.ops(inputs, output))

    def compose2(self, a, i, b):
        return (self.compose(a[0], i, b[0]), self.compose(a[1], i, b[1]))

    def act2(self, a, sigma):
        return (self.act(a[0], sigma), self.act(a[1], sigma))

    def hom_size(self, inputs, output) -> int:
        return len(self.ops(inputs, output))


def w_tree(t: Tree) -> WTreeOperad:
    return WTreeOperad(t)


# -- the homotopy coherent nerve ----------------------------------------------------------------


@lru_cache(maxsize=None)
def _regions(code: str) -> tuple[tuple[tuple[str, ...], str, tuple[str, ...]], ...]:
    """(inputs in planar order, output, inner edges) for every operation of Omega(T) with inner edges."""
    t = canonical_tree(code)
    out = []
    for e in t.edges:
        for cut in _cuts(t, e):
            inner = region_inner_edges(t, cut, e)
            if inner:
                out.append((cut, e, inner))
    return tuple(out)


def _planar(t: Tree, inputs, output) -> tuple[str, ...]:
    for cut in _cuts(t, output):
        if set(cut) == set(inputs) and len(cut) == len(inputs):
            return cut
    raise ValueError(f"no operation {inputs!r} -> {output!r}")


class HCNerve(DSet):
    """hcN_d(P) for a Cat-operad P.

    A dendrex over T is (colours, vertex operations, data) where data holds,
    for every operation O of Omega(T) with k >= 1 inner edges, the value at
    the all-zeros corner of H^k together with the isomorphism to it from the
    full composite (the all-ones corner).  Every other corner splits along
    its 1-edges into smaller operations, so this fixes the whole functor.
    """

    def __init__(self, p: CatOperad, bound: int = 3, drop: Sequence[str] = ()):
        self.operad = p
        self.bound = bound
        self.name = f"hcN({p.name})"
        self.objects = Nerve(p, bound)
        self.drop = set(drop)
        self._cache: dict = {}

    # evaluation of the functor at a corner

    def evaluate(self, t: Tree, z, inputs: Sequence[str], output: str, bits: dict):
        """(F(O, b), phi) with phi : F(O, all ones) -> F(O, b), inputs in planar order."""
        p = self.operad
        cols = dict(zip(t.edges, z[0]))
        vops = dict(zip(t.vertices, z[1]))
        data = dict(zip(_regions(t.code), z[2]))
        ins = tuple(inputs)
        if ins == (output,):
            u = p.unit(cols[output])
            return u, p.identity2(u)
        inner = region_inner_edges(t, ins, output)
        if not inner:
            o = vops[output]
            return o, p.identity2(o)
        cut = next((x for x in inner if bits.get(x, 0) == 1), None)
        if cut is None:
            return data[(ins, output, inner)]
        lower = tuple(x for x in ins if not t.is_above(x, cut))
        lower_ins = _planar(t, lower + (cut,), output)
        upper_ins = tuple(x for x in ins if t.is_above(x, cut))
        f1, a1 = self.evaluate(t, z, lower_ins, output, bits)
        f2, a2 = self.evaluate(t, z, upper_ins, cut, bits)
        i = lower_ins.index(cut)
        return p.compose(f1, i, f2), p.compose2(a1, i, a2)

    def carrier(self, code):
        if code in self._cache:
            return self._cache[code]
        if code in self.drop:
            self._cache[code] = ()
            return ()
        t = canonical_tree(code)
        p = self.operad
        regions = _regions(code)
        out = []
        for cols, vops in self.objects.carrier(code):
            colour = dict(zip(t.edges, cols))
            choices = []
            for ins, e, inner in regions:
                full = self.evaluate(t, (cols, vops, ()), ins, e, {x: 1 for x in inner})[0]
                hc = p.homcat(tuple(colour[x] for x in ins), colour[e])
                opts = [(hc.tgt(f), f) for f in hc.arrows if hc.src(f) == full and hc.is_iso(f)]
                choices.append(opts)
            for pick in itertools.product(*choices):
                out.append((cols, vops, tuple(pick)))
        self._cache[code] = tuple(out)
        return self._cache[code]

    def act(self, alpha, z):
        p = self.operad
        s, t = alpha.src, alpha.dst
        cols = dict(zip(t.edges, z[0]))
        new_cols = tuple(cols[alpha.map[e]] for e in s.edges)

        def image(ins, out, ones: bool):
            tins = tuple(alpha.map[x] for x in ins)
            tout = alpha.map[out]
            if tins == (tout,):
                return tins, tout, {}, tuple(range(len(tins)))
            planar = _planar(t, tins, tout)
            sigma = tuple(planar.index(x) for x in tins)
            bits = {}
            if ones:
                pre = set(alpha.map[x] for x in region_inner_edges(s, ins, out))
                bits = {x: 1 for x in region_inner_edges(t, planar, tout) if x in pre}
            return planar, tout, bits, sigma

        new_vops = []
        for v in s.vertices:
            planar, tout, bits, sigma = image(s.vertex_inputs(v), v, False)
            f, _ = self.evaluate(t, z, planar, tout, {})
            if sigma != tuple(range(len(sigma))):
                f = p.act(f, sigma)
            new_vops.append(f)
        new_data = []
        for ins, out, inner in _regions(s.code):
            planar, tout, bits, sigma = image(ins, out, True)
            f0, phi0 = self.evaluate(t, z, planar, tout, {})
            f1, phi1 = self.evaluate(t, z, planar, tout, bits)
            hc = p.homcat(*p.signature(f0))
            arrow = hc.compose(phi0, hc.inverse(phi1))
            ident = tuple(range(len(sigma)))
            if sigma != ident:
                f0, arrow = p.act(f0, sigma), p.act2(arrow, sigma)
            new_data.append((f0, arrow))
        return (new_cols, tuple(new_vops), tuple(new_data))


def hc_nerve(p: CatOperad, bound: int = 3) -> HCNerve:
    return HCNerve(p, bound)


def discrete_comparison(h: HCNerve):
    """hcN_d(disc P) -> N_d(P): forget the (necessarily trivial) 2-cell data."""

    def f(code: str, z):
        return (z[0], z[1])

    return f


def check_prop72(p: CatOperad, size_bound: int = 3, bound: int | None = None):
    """check_inner_kan on the homotopy coherent nerve of p."""
    from .kan import check_inner_kan

    h = HCNerve(p, size_bound if bound is None else bound)
    return check_inner_kan(h, size_bound)


# -- brute force oracle for maps W_H(T) -> P ------------------------------------------------------


def w_tree_maps_bruteforce(t: Tree, p: CatOperad) -> int:
    """Count Cat-operad maps W_H(T) -> P by choosing a functor H^k -> P at every operation.

    Operations with inputs in planar order are enough (the Sigma-action then
    fixes the rest).  A choice at an operation is an object per corner and an
    arrow from the all-ones corner to every corner; the arrow at the all-ones
    corner is the identity.  Choices must commute with grafting, which sets the
    new edge to 1.
    """
    sigs = []
    for e in t.edges:
        for cut in _cuts(t, e):
            sigs.append((cut, e))
    base = Nerve(p, len(t))
    total = 0
    for cols, _ in base.carrier(t.code):
        colour = dict(zip(t.edges, cols))
        per_sig = []
        for ins, out in sigs:
            inner = region_inner_edges(t, ins, out)
            hc = p.homcat(tuple(colour[x] for x in ins), colour[out])
            corners = list(itertools.product((0, 1), repeat=len(inner)))
            options = []
            for objs in itertools.product(hc.objects, repeat=len(corners)):
                assign = dict(zip(corners, objs))
                top = assign[tuple(1 for _ in inner)]
                arrow_opts = []
                for c in corners:
                    if all(b == 1 for b in c):
                        arrow_opts.append([hc.id(top)])
                    else:
                        arrow_opts.append([f for f in hc.hom(top, assign[c]) if hc.is_iso(f)])
                for arrows in itertools.product(*arrow_opts):
                    options.append((dict(zip(corners, objs)), dict(zip(corners, arrows))))
            per_sig.append((ins, out, inner, options))
        index = {(ins, out): k for k, (ins, out, _, _) in enumerate(per_sig)}

        def value(choice, ins, out, bits):
            k = index[(ins, out)]
            inner = per_sig[k][2]
            c = tuple(bits.get(x, 0) for x in inner)
            objs, arrows = per_sig[k][3][choice[k]]
            return objs[c], arrows[c]

        def ok(choice) -> bool:
            for ins, out in sigs:
                if ins == (out,):
                    u = p.unit(colour[out])
                    if value(choice, ins, out, {})[0] != u:
                        return False
            for ins, out, inner, _ in per_sig:
                for x in inner:
                    lower = _planar(t, tuple(y for y in ins if not t.is_above(y, x)) + (x,), out)
                    upper = tuple(y for y in ins if t.is_above(y, x))
                    i = lower.index(x)
                    inner1 = region_inner_edges(t, lower, out)
                    inner2 = region_inner_edges(t, upper, x)
                    for b1 in itertools.product((0, 1), repeat=len(inner1)):
                        for b2 in itertools.product((0, 1), repeat=len(inner2)):
                            bits = {**dict(zip(inner1, b1)), **dict(zip(inner2, b2)), x: 1}
                            o, a = value(choice, ins, out, bits)
                            o1, a1 = value(choice, lower, out, dict(zip(inner1, b1)))
                            o2, a2 = value(choice, upper, x, dict(zip(inner2, b2)))
                            if o != p.compose(o1, i, o2) or a != p.compose2(a1, i, a2):
                                return False
            return True

        for choice in itertools.product(*[range(len(opt)) for *_, opt in per_sig]):
            if ok(choice):
                total += 1
    return total
