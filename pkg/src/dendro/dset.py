"""Finite dendroidal sets, truncated at a bound on the number of edges.

A dendroidal set is stored as a presheaf on canonical trees: ``carrier(code)``
lists the dendrices over the canonical tree with that code, and
``act(alpha, x)`` pulls a dendrex back along a morphism between canonical
trees.  Morphisms between arbitrary trees are first transported to canonical
ones with :func:`dendro.omega.canonicalize`.

Concrete classes compute ``act`` directly when there is a formula
(representables, nerves, i_!).  :class:`TableDSet` stores only the action of
the generators (elementary faces, elementary degeneracies and automorphisms)
and evaluates everything else through the factorization of morphisms.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .omega import (
    Mor,
    canonical_automorphisms,
    canonical_degeneracies,
    canonical_faces,
    canonical_hom,
    canonicalize,
    canonical,
    compose,
    factorize,
    first_violation,
    generator_word,
    identity,
    monotone_to_mor,
    mor_to_monotone,
)
from .category import FinCat
from .operad import CapExceeded, FreeTreeOperad, MeetOperad, Operad
from .simplicial import SSet
from .tree import Tree, canonical_tree, corolla, enumerate_trees, eta, linear_tree

ETA = eta().code


def linear_code(n: int) -> str:
    return linear_tree(n).code


def corolla_code(n: int) -> str:
    return corolla(n).code


def codes_by_size(bound: int) -> list[str]:
    """Canonical codes ordered so that every proper face precedes its tree."""

    def key(c: str):
        t = canonical_tree(c)
        return (len(t), len(t.vertices), c)

    return sorted(enumerate_trees(bound), key=key)


class DSet:
    """Base class; subclasses provide ``carrier`` and ``act``."""

    bound: int
    name: str = "X"

    def carrier(self, code: str) -> tuple:
        raise NotImplementedError

    def act(self, alpha: Mor, x):
        """alpha^*(x) for alpha between canonical trees."""
        raise NotImplementedError

    # generic helpers

    def pull(self, alpha: Mor, x):
        """alpha^*(x) for alpha between arbitrary trees (x over the canonical target)."""
        return self.act(canonicalize(alpha), x)

    def act_by_generators(self, alpha: Mor, x):
        for g in generator_word(alpha):
            x = self.act(g, x)
        return x

    def codes(self) -> list[str]:
        return enumerate_trees(self.bound)

    def level(self, t: Tree) -> tuple:
        return self.carrier(t.code)

    def sizes(self, max_edges: int | None = None) -> dict[str, int]:
        top = self.bound if max_edges is None else max_edges
        return {c: len(self.carrier(c)) for c in enumerate_trees(top)}

    def colours(self) -> tuple:
        return self.carrier(ETA)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name} bound={self.bound}>"


# -- representables and their subobjects -----------------------------------------


class Representable(DSet):
    """Omega[T]: dendrices over S are morphisms S -> T."""

    def __init__(self, t: Tree, bound: int | None = None):
        self.tree = canonical_tree(t.code)
        self.bound = len(t) if bound is None else bound
        self.name = f"Omega[{t.code}]"

    def carrier(self, code):
        return canonical_hom(code, self.tree.code)

    def act(self, alpha, x):
        return compose(x, alpha)

    def identity(self) -> Mor:
        return identity(self.tree)


def representable(t: Tree, bound: int | None = None) -> Representable:
    return Representable(t, bound)


class SubRepresentable(Representable):
    """A subpresheaf of Omega[T] given by a membership predicate on morphisms."""

    def __init__(self, t: Tree, member: Callable[[Mor], bool], bound: int | None = None, name="sub"):
        super().__init__(t, bound)
        self.member = member
        self.name = name
        self._cache: dict = {}

    def carrier(self, code):
        if code not in self._cache:
            self._cache[code] = tuple(m for m in canonical_hom(code, self.tree.code) if self.member(m))
        return self._cache[code]


def face_edge_sets(t: Tree) -> list[tuple[str, str, str | None, frozenset]]:
    """(kind, edge-or-vertex, keep, edge set) for every elementary face of t."""
    return [(k, x, keep, m.src.edge_set) for k, x, keep, m in canonical_faces(t.code)]


def horn(t: Tree, e: str, bound: int | None = None) -> SubRepresentable:
    """The sub-presheaf of Omega[T] generated by all faces but the inner face at e."""
    c = canonical_tree(t.code)
    if t is not c and t != c:
        raise ValueError("horns are built on canonical trees")
    if e not in c.inner_edges:
        raise ValueError(f"{e!r} is not an inner edge")
    kept = [m for kind, x, _, m in canonical_faces(c.code) if not (kind == "inner" and x == e)]
    return SubRepresentable(c, lambda m: any(factors_through(m, f) for f in kept), bound, name=f"Lambda^{e}[{c.code}]")


def factors_through(alpha: Mor, face: Mor) -> bool:
    """Does alpha : S -> T factor through the injective face : F -> T?

    Containment of images is not enough: with stumps around, an operation of
    T between edges of F need not be an operation of F.
    """
    back = {v: k for k, v in face.map.items()}
    if not all(y in back for y in alpha.images):
        return False
    lift = {e: back[alpha.map[e]] for e in alpha.src.edges}
    return first_violation(alpha.src, face.src, lift) is None




# -- nerves of operads ----------------------------------------------------------------


class Nerve(DSet):
    """N_d(P): a dendrex over T is an edge colouring plus a P-operation per vertex.

    Dendrices are pairs (colours, ops) indexed like ``T.edges`` and
    ``T.vertices``; the operation at a vertex has the colours of the vertex
    inputs, in stored order, as its inputs.
    """

    def __init__(self, p: Operad, bound: int = 4):
        self.operad = p
        self.bound = bound
        self.name = f"N({p.name})"
        self._cache: dict = {}
        self._exhaustive = isinstance(p, FreeTreeOperad) or getattr(p, "exhaustive_above_cap", False)

    def carrier(self, code):
        if code in self._cache:
            return self._cache[code]
        t = canonical_tree(code)
        p = self.operad
        for v in t.vertices:
            if t.valence(v) > p.cap and not self._exhaustive:
                raise CapExceeded(f"vertex of valence {t.valence(v)} above the arity cap {p.cap}")
        order = list(reversed(t.vertices))  # parents before children
        out = []
        col: dict = {}
        ops: dict = {}

        def rec(k: int):
            if k == len(order):
                out.append((tuple(col[e] for e in t.edges), tuple(ops[v] for v in t.vertices)))
                return
            v = order[k]
            ins = t.vertex_inputs(v)
            if t.valence(v) > p.cap:
                return
            for o in p.ops_out(col[v], len(ins)):
                sig_in, _ = p.signature(o)
                for e, c in zip(ins, sig_in):
                    col[e] = c
                ops[v] = o
                rec(k + 1)
            for e in ins:
                col.pop(e, None)

        for c in p.colours:
            col.clear()
            ops.clear()
            col[t.root] = c
            rec(0)
        self._cache[code] = tuple(out)
        return self._cache[code]

    def evaluate(self, t: Tree, x, ins: Sequence[str], output: str):
        """The P-operation that x assigns to the operation (ins; output) of Omega(t)."""
        p = self.operad
        cols = dict(zip(t.edges, x[0]))
        vops = dict(zip(t.vertices, x[1]))

        def ev(ins: tuple, out: str):
            if ins == (out,):
                return p.unit(cols[out]), (out,)
            kids = t.vertex_inputs(out)
            parts, flat = [], []
            for c in kids:
                sub = tuple(y for y in ins if t.is_above(y, c))
                o, order = ev(sub, c)
                parts.append(o)
                flat.extend(order)
            return p.multi_compose(vops[out], parts), tuple(flat)

        ins = tuple(ins)
        r, flat = ev(ins, output)
        sigma = tuple(flat.index(y) for y in ins)
        if sigma != tuple(range(len(sigma))):
            r = p.act(r, sigma)
        return r

    def act(self, alpha, x):
        s, t = alpha.src, alpha.dst
        cols = dict(zip(t.edges, x[0]))
        new_cols = tuple(cols[alpha.map[e]] for e in s.edges)
        new_ops = tuple(
            self.evaluate(t, x, [alpha.map[u] for u in s.vertex_inputs(v)], alpha.map[v])
            for v in s.vertices
        )
        return (new_cols, new_ops)


def nerve(p: Operad, bound: int = 4) -> Nerve:
    return Nerve(p, bound)


# -- simplicial sets ------------------------------------------------------------------


class IShriek(DSet):
    """Extension by zero of a simplicial set along the linear trees."""

    def __init__(self, x: SSet, bound: int | None = None):
        self.sset = x
        self.bound = (x.top + 1) if bound is None else bound
        self.name = f"i!({x.name})"
        self._linear = {linear_code(n): n for n in range(self.bound)}

    def carrier(self, code):
        n = self._linear.get(code)
        if n is None:
            return ()
        return tuple(self.sset.simplices(n))

    def act(self, alpha, x):
        return self.sset.act(mor_to_monotone(alpha), x)


def i_shriek(x: SSet, bound: int | None = None) -> IShriek:
    return IShriek(x, bound)


class IStar(SSet):
    """Restriction of a dendroidal set to the linear trees."""

    def __init__(self, x: DSet, top: int | None = None):
        self.dset = x
        self.top = (x.bound - 1) if top is None else top
        self.name = f"i*({x.name})"

    def simplices(self, n):
        return tuple(self.dset.carrier(linear_code(n)))

    def act(self, theta, x):
        return self.dset.act(monotone_to_mor(theta, _dim_of(theta, x, self)), x)


def _dim_of(theta, x, s: IStar) -> int:
    # the target dimension is not recorded in theta; find the level holding x
    for n in range(max(theta) if theta else 0, s.top + 1):
        if x in s.dset.carrier(linear_code(n)):
            return n
    raise KeyError(x)


def i_star(x: DSet, top: int | None = None) -> IStar:
    return IStar(x, top)


class SimplicialMapNerve(SSet):
    """Helper: a simplicial set whose n-simplices come from a callable."""

    def __init__(self, levels: Callable[[int], Iterable], act: Callable, top: int, name="s"):
        self._levels = levels
        self._act = act
        self.top = top
        self.name = name

    def simplices(self, n):
        return tuple(self._levels(n))

    def act(self, theta, x):
        return self._act(theta, x)


# -- explicit tables ------------------------------------------------------------------


class TableDSet(DSet):
    """Dendrices listed per level; actions stored for generators only."""

    def __init__(self, bound: int, carrier: Mapping[str, Iterable], gen_action: Mapping, name="table"):
        self.bound = bound
        self._carrier = {c: tuple(v) for c, v in carrier.items()}
        self.gen_action = dict(gen_action)  # (generator Mor, x) -> y
        self.name = name

    def carrier(self, code):
        return self._carrier.get(code, ())

    def act(self, alpha, x):
        if alpha.src == alpha.dst and all(alpha.map[e] == e for e in alpha.src.edges):
            return x
        key = (alpha, x)
        if key in self.gen_action:
            return self.gen_action[key]
        for g in generator_word(alpha):
            x = self.gen_action[(g, x)]
        return x


def generators_into(code: str) -> list[Mor]:
    """Faces and automorphisms into, and degeneracies out of, a canonical tree."""
    out = [m for _, _, _, m in canonical_faces(code)]
    out.extend(a for a in canonical_automorphisms(code) if any(a.map[e] != e for e in a.src.edges))
    return out


def all_generators(bound: int) -> Iterator[Mor]:
    for code in enumerate_trees(bound):
        yield from generators_into(code)
        for _, d in canonical_degeneracies(code):
            if len(d.dst) <= bound:
                yield d


def tabulate(x: DSet, bound: int | None = None) -> TableDSet:
    """Materialize x up to the bound as a generator table."""
    b = x.bound if bound is None else bound
    carrier = {c: x.carrier(c) for c in enumerate_trees(b)}
    gen: dict = {}
    for g in all_generators(b):
        for y in carrier.get(g.dst.code, ()):
            gen[(g, y)] = x.act(g, y)
    return TableDSet(b, carrier, gen, name=x.name)


def dset_to_json(x: DSet, bound: int | None = None) -> dict:
    """{"bound", "carrier": {code: [ids]}, "action": [...]} with ids local to each level."""
    b = x.bound if bound is None else bound
    codes = enumerate_trees(b)
    ids = {c: {y: f"{i}" for i, y in enumerate(x.carrier(c))} for c in codes}
    actions = []
    for code in codes:
        for idx, (kind, where, keep, m) in enumerate(canonical_faces(code)):
            actions.append(
                {
                    "kind": f"{kind}_face",
                    "src": m.src.code,
                    "dst": code,
                    "data": idx,
                    "map": {ids[code][y]: ids[m.src.code][x.act(m, y)] for y in x.carrier(code)},
                }
            )
        for a in canonical_automorphisms(code):
            if all(a.map[e] == e for e in a.src.edges):
                continue
            actions.append(
                {
                    "kind": "auto",
                    "src": code,
                    "dst": code,
                    "data": list(a.images),
                    "map": {ids[code][y]: ids[code][x.act(a, y)] for y in x.carrier(code)},
                }
            )
        for idx, (_, d) in enumerate(canonical_degeneracies(code)):
            if d.dst.code not in ids:
                continue
            actions.append(
                {
                    "kind": "degeneracy",
                    "src": code,
                    "dst": d.dst.code,
                    "data": idx,
                    "map": {ids[d.dst.code][y]: ids[code][x.act(d, y)] for y in x.carrier(d.dst.code)},
                }
            )
    return {
        "name": x.name,
        "bound": b,
        "carrier": {c: [ids[c][y] for y in x.carrier(c)] for c in codes},
        "action": actions,
    }


def dset_from_json(data: Mapping) -> TableDSet:
    b = int(data["bound"])
    carrier = {c: tuple(v) for c, v in data["carrier"].items()}
    gen: dict = {}
    for entry in data["action"]:
        kind = entry["kind"]
        if kind in ("inner_face", "outer_face"):
            m = canonical_faces(entry["dst"])[int(entry["data"])][3]
        elif kind == "auto":
            t = canonical_tree(entry["src"])
            m = Mor(t, t, dict(zip(t.edges, entry["data"])), check=True)
        elif kind == "degeneracy":
            m = canonical_degeneracies(entry["src"])[int(entry["data"])][1]
        else:
            raise ValueError(f"unknown action kind {kind!r}")
        for y, z in entry["map"].items():
            gen[(m, y)] = z
    return TableDSet(b, carrier, gen, name=data.get("name", "table"))


# -- law checks ---------------------------------------------------------------------


def check_functoriality(x: DSet, test_bound: int | None = None, pairs: bool = True) -> list[str]:
    """Compare direct actions with generator words, and (ab)^* with b^* a^*."""
    b = x.bound if test_bound is None else test_bound
    codes = enumerate_trees(b)
    problems: list[str] = []
    for src in codes:
        for dst in codes:
            for alpha in canonical_hom(src, dst):
                for y in x.carrier(dst):
                    direct = x.act(alpha, y)
                    if direct not in x.carrier(src):
                        problems.append(f"{alpha!r} sends {y!r} outside X_{src}")
                        return problems
                    if x.act_by_generators(alpha, y) != direct:
                        problems.append(f"generator word disagrees for {alpha!r} at {y!r}")
                        return problems
    if pairs:
        for r in codes:
            for s in codes:
                for beta in canonical_hom(r, s):
                    for t in codes:
                        for alpha in canonical_hom(s, t):
                            ab = compose(alpha, beta)
                            for y in x.carrier(t):
                                if x.act(ab, y) != x.act(beta, x.act(alpha, y)):
                                    problems.append(f"(ab)^* != b^* a^* for a={alpha!r}, b={beta!r}")
                                    return problems
    return problems


def check_dendmap(f: Callable, x: DSet, y: DSet, bound: int) -> list[str]:
    """Naturality of a levelwise map f(code, dendrex) against all generators."""
    problems = []
    for g in all_generators(bound):
        for z in x.carrier(g.dst.code):
            if f(g.src.code, x.act(g, z)) != y.act(g, f(g.dst.code, z)):
                problems.append(f"not natural at {g!r}, {z!r}")
                return problems
    return problems


# -- degeneracy and normality -----------------------------------------------------------


def degenerate(x: DSet, code: str) -> set:
    out = set()
    for _, d in canonical_degeneracies(code):
        for y in x.carrier(d.dst.code):
            out.add(x.act(d, y))
    return out


def nondegenerate(x: DSet, code: str) -> tuple:
    deg = degenerate(x, code)
    return tuple(y for y in x.carrier(code) if y not in deg)


def normality_witness(x: DSet, bound: int | None = None):
    """(code, dendrex, automorphism) violating normality, or None."""
    b = x.bound if bound is None else bound
    for code in codes_by_size(b):
        autos = [a for a in canonical_automorphisms(code) if any(a.map[e] != e for e in a.src.edges)]
        if not autos:
            continue
        for y in nondegenerate(x, code):
            for a in autos:
                if x.act(a, y) == y:
                    return code, y, a
    return None


def is_normal(x: DSet, bound: int | None = None) -> tuple[bool, object]:
    w = normality_witness(x, bound)
    return w is None, w


# -- maps of dendroidal sets ----------------------------------------------------------------


def dendmaps(x: DSet, y: DSet, bound: int | None = None, limit: int | None = None) -> list[dict]:
    """All natural maps x -> y on levels up to the bound.

    Levels are filled in order of size.  A dendrex that is a degeneracy of an
    already mapped one is forced; otherwise its image must have the images of
    its faces as faces, which is looked up through a boundary index of y.
    Automorphism orbits are assigned together.
    """
    b = min(x.bound, y.bound) if bound is None else bound
    codes = codes_by_size(b)
    items: list[tuple[str, object]] = []
    for code in codes:
        for z in x.carrier(code):
            items.append((code, z))
    faces = {code: [m for _, _, _, m in canonical_faces(code)] for code in codes}
    autos = {code: [a for a in canonical_automorphisms(code)] for code in codes}
    degs = {
        code: [d for _, d in canonical_degeneracies(code) if d.dst.code in faces] for code in codes
    }
    # boundary index of y
    yindex: dict = {}
    for code in codes:
        idx: dict = {}
        if not x.carrier(code):
            yindex[code] = idx
            continue
        for w in y.carrier(code):
            key = tuple(y.act(m, w) for m in faces[code])
            idx.setdefault(key, []).append(w)
        yindex[code] = idx
    # degeneracy sources in x
    deg_sources: dict = {}
    for code in codes:
        for d in degs[code]:
            for z in x.carrier(d.dst.code):
                deg_sources.setdefault((code, x.act(d, z)), []).append((d, z))

    results: list[dict] = []
    f: dict = {}
    memo: dict = {}

    def yact(m, w):
        k = (m, w)
        if k not in memo:
            memo[k] = y.act(m, w)
        return memo[k]

    def assign(code, z, w, trail) -> bool:
        key = (code, z)
        if key in f:
            return f[key] == w
        f[key] = w
        trail.append(key)
        for a in autos[code]:
            z2 = x.act(a, z)
            w2 = yact(a, w)
            k2 = (code, z2)
            if k2 in f:
                if f[k2] != w2:
                    return False
            else:
                f[k2] = w2
                trail.append(k2)
        return True

    def fits(code, z, w) -> bool:
        return all(f.get((m.src.code, x.act(m, z))) == yact(m, w) for m in faces[code]) and all(
            yact(d, f[(d.dst.code, z0)]) == w for d, z0 in deg_sources.get((code, z), ())
        )

    def rec(i: int):
        if limit is not None and len(results) >= limit:
            return
        trail: list = []
        # forced steps run in a loop so that recursion only happens at real choices
        while i < len(items):
            code, z = items[i]
            if (code, z) in f:
                if not fits(code, z, f[(code, z)]):
                    break
                i += 1
                continue
            srcs = deg_sources.get((code, z))
            if not srcs:
                break
            d, z0 = srcs[0]
            w = yact(d, f[(d.dst.code, z0)])
            if not (fits(code, z, w) and assign(code, z, w, trail)):
                break
            i += 1
        else:
            results.append(dict(f))
            for k in trail:
                del f[k]
            return
        code, z = items[i]
        if (code, z) not in f and not deg_sources.get((code, z)):
            key = tuple(f[(m.src.code, x.act(m, z))] for m in faces[code])
            for w in yindex[code].get(key, []):
                if not fits(code, z, w):
                    continue
                inner: list = []
                if assign(code, z, w, inner):
                    rec(i + 1)
                for k in inner:
                    del f[k]
        for k in trail:
            del f[k]

    rec(0)
    return results


def yoneda_count(t: Tree, x: DSet) -> tuple[int, int]:
    """(|maps Omega[T] -> X|, |X_T|)."""
    rep = Representable(t, len(t))
    return len(dendmaps(rep, x, len(t))), len(x.carrier(canonical_tree(t.code).code))


# -- the operad generated by a dendroidal set -----------------------------------------------


def _leaf_map(n: int, j: int) -> Mor:
    return Mor(eta(), canonical_tree(corolla_code(n)), {"0": str(j)})


def _two_vertex(n: int, i: int, k: int) -> tuple[Mor, Mor, Mor]:
    """beta : C_n -> R, gamma : C_k -> R, delta : C_{n+k-1} -> R, all canonicalized.

    R grafts a k-corolla onto leaf i of an n-corolla.
    """
    bottom = [f"l{j}" for j in range(n)]
    bottom[i] = "e"
    r = Tree("r", {"r": bottom, "e": [f"m{j}" for j in range(k)]})
    cn, ck, cd = (canonical_tree(corolla_code(a)) for a in (n, k, n + k - 1))
    beta = Mor(cn, r, {**{str(j): bottom[j] for j in range(n)}, str(n): "r"})
    gamma = Mor(ck, r, {**{str(j): f"m{j}" for j in range(k)}, str(k): "e"})
    flat = bottom[:i] + [f"m{j}" for j in range(k)] + bottom[i + 1 :]
    delta = Mor(cd, r, {**{str(j): flat[j] for j in range(n + k - 1)}, str(n + k - 1): "r"})
    return canonicalize(beta), canonicalize(gamma), canonicalize(delta)


def _sigma_auto(n: int, sigma: Sequence[int]) -> Mor:
    c = canonical_tree(corolla_code(n))
    return Mor(c, c, {**{str(k): str(sigma[k]) for k in range(n)}, str(n): str(n)})


class TauOperad(Operad):
    """tau_d(X) when two-vertex inner horns have unique fillers.

    Operations of arity n are the dendrices over the n-corolla, the
    Sigma_n-action is the action of corolla automorphisms, and o_i is read off
    the unique dendrex over the two-vertex tree with the given outer faces.
    """

    def __init__(self, x: DSet, cap: int):
        self.x = x
        self.cap = cap
        self.colours = tuple(x.carrier(ETA))
        self.name = f"tau({x.name})"
        self._sig: dict = {}
        self._by_sig: dict = {}
        for n in range(cap + 1):
            code = corolla_code(n)
            leaves = [_leaf_map(n, j) for j in range(n)]
            root = _leaf_map(n, n)
            for z in x.carrier(code):
                sig = (tuple(x.act(m, z) for m in leaves), x.act(root, z))
                self._sig[(n, z)] = sig
                self._by_sig.setdefault(sig, []).append((n, z))
        self._tables: dict = {}
        one = canonical_tree(corolla_code(1))
        self._degen = Mor(one, eta(), {"0": "0", "1": "0"})

    def table(self, n: int, i: int, k: int) -> dict:
        key = (n, i, k)
        if key not in self._tables:
            beta, gamma, delta = _two_vertex(n, i, k)
            tab: dict = {}
            for w in self.x.carrier(beta.dst.code):
                tab.setdefault((self.x.act(beta, w), self.x.act(gamma, w)), set()).add(self.x.act(delta, w))
            self._tables[key] = tab
        return self._tables[key]

    def ops(self, inputs, output):
        return tuple(self._by_sig.get((tuple(inputs), output), ()))

    def ops_out(self, output, arity):
        for (n, z), (ins, out) in self._sig.items():
            if n == arity and out == output:
                yield (n, z)

    def signature(self, op):
        return self._sig[op]

    def unit(self, c):
        return (1, self.x.act(self._degen, c))

    def act(self, p, sigma):
        n, z = p
        return (n, self.x.act(_sigma_auto(n, sigma), z))

    def compose(self, p, i, q):
        (n, z), (k, y) = p, q
        if n + k - 1 > self.cap:
            raise CapExceeded(f"composite of arity {n + k - 1} above cap {self.cap}")
        found = self.table(n, i, k).get((z, y), set())
        if len(found) != 1:
            raise ValueError(f"{len(found)} fillers for {p!r} o_{i} {q!r}")
        (w,) = found
        return (n + k - 1, w)

    def horn_report(self) -> tuple[bool, str]:
        """Check unique two-vertex fillers for every composable pair within the cap."""
        for n in range(1, self.cap + 1):
            for k in range(0, self.cap + 2 - n):
                for i in range(n):
                    tab = self.table(n, i, k)
                    for p in self.ops_out_arity(n):
                        c = self._sig[p][0][i]
                        for q in self.ops_out_arity(k):
                            if self._sig[q][1] != c:
                                continue
                            found = tab.get((p[1], q[1]), ())
                            if len(found) != 1:
                                return False, f"{len(found)} fillers for {p!r} o_{i} {q!r}"
        return True, ""

    def ops_out_arity(self, n: int):
        return [op for op in self._sig if op[0] == n]


def tau_d(x: DSet, cap: int | None = None, max_nodes: int = 3) -> Operad:
    """The operad generated by x, with an ``exact`` flag.

    With unique fillers for two-vertex inner horns the answer is read off the
    corolla dendrices (exact).  Otherwise corolla dendrices become generators
    of a presented operad with unit, Sigma and composition relations, and the
    quotient is computed by congruence closure up to ``max_nodes`` nodes.
    """
    if cap is None:
        cap = max(1, min(4, x.bound - 2))
    if x.bound < cap + 2:
        raise CapExceeded(f"bound {x.bound} too small to read off compositions of arity {cap}")
    t = TauOperad(x, cap)
    ok, why = t.horn_report()
    if ok:
        t.exact = True
        return t
    return _tau_presented(x, t, cap, max_nodes, why)


def _tau_presented(x: DSet, t: TauOperad, cap: int, max_nodes: int, why: str) -> Operad:
    from .presented import PresentedOperad, node

    gens = dict(t._sig)
    units = {t.unit(c) for c in t.colours}

    def unit_rw(term):
        if term[0] == "g" and term[1] in units:
            yield term[2][0]

    def sigma_rw(term):
        if term[0] != "g":
            return
        n, z = term[1]
        for sigma in itertools.permutations(range(n)):
            if sigma != tuple(range(n)):
                yield node(t.act((n, z), sigma), [term[2][s] for s in sigma])

    def comp_rw(term):
        if term[0] != "g":
            return
        n, z = term[1]
        kids = term[2]
        for i, kid in enumerate(kids):
            if kid[0] != "g":
                continue
            k, y = kid[1]
            if n + k - 1 > cap:
                continue
            for w in t.table(n, i, k).get((z, y), ()):
                yield node((n + k - 1, w), kids[:i] + kid[2] + kids[i + 1 :])

    out = PresentedOperad(t.colours, gens, [unit_rw, sigma_rw, comp_rw], cap, max_nodes, name=f"tau({x.name})")
    out.exact = False
    out.reason = why
    return out


def tau_counit_map(p: Operad, t: TauOperad):
    """Colour and operation maps P -> tau_d(N_d P)."""

    def op_map(o):
        ins, out = p.signature(o)
        return (len(ins), (tuple(ins) + (out,), (o,)))

    return {c: ((c,), ()) for c in p.colours}, op_map


def tau_representable_map(t: Tree, tau: TauOperad):
    """Colour and operation maps Omega(T) -> tau_d(Omega[T])."""
    c = canonical_tree(t.code)

    def op_map(o):
        ins, out = o
        n = len(ins)
        return (n, Mor(canonical_tree(corolla_code(n)), c, {**{str(j): ins[j] for j in range(n)}, str(n): out}))

    return {e: Mor(eta(), c, {"0": e}) for e in c.edges}, op_map


def tau_simplicial(x: SSet, max_len: int = 3):
    """The category generated by a simplicial set, as a unary presented operad."""
    from .presented import PresentedOperad, node

    objs = x.simplices(0)
    gens = {}
    for f in x.simplices(1):
        gens[f] = ((x.act((0,), f),), x.act((1,), f))
    units = {x.act((0, 0), c) for c in objs}

    def unit_rw(term):
        if term[0] == "g" and term[1] in units:
            yield term[2][0]

    comp = {}
    for s in x.simplices(2):
        comp.setdefault((x.act((1, 2), s), x.act((0, 1), s)), set()).add(x.act((0, 2), s))

    def comp_rw(term):
        if term[0] == "g" and term[2][0][0] == "g":
            for h in comp.get((term[1], term[2][0][1]), ()):
                yield node(h, term[2][0][2])

    out = PresentedOperad(objs, gens, [unit_rw, comp_rw], 1, max_len, name=f"tau({x.name})")
    return out


def unary_hom_counts(p: Operad) -> dict:
    """|P(a; b)| for all colours a, b."""
    return {(a, b): len(p.ops((a,), b)) for a in p.colours for b in p.colours}


# -- tensor product --------------------------------------------------------------------------


def _max_nondegenerate(x: DSet) -> int:
    top = 1
    for code in codes_by_size(x.bound):
        if nondegenerate(x, code):
            top = max(top, len(canonical_tree(code)))
    return top


@lru_cache(maxsize=None)
def _tree_tensor(s_code: str, t_code: str):
    from .presented import bv_tensor

    q = bv_tensor(FreeTreeOperad(canonical_tree(s_code)), FreeTreeOperad(canonical_tree(t_code)))
    assert q.exact, "tensor of tree operads is expected to be thin and exact"
    return q


@lru_cache(maxsize=None)
def _tensor_colourings(s_code: str, t_code: str, r_code: str) -> tuple:
    """Edge colourings of R that are dendrices of N(Omega(S) (x) Omega(T))."""
    q = _tree_tensor(s_code, t_code)
    return tuple(sorted({cols for cols, _ in Nerve(q, len(canonical_tree(r_code))).carrier(r_code)}))


class TensorDSet(DSet):
    """x (x) y as a colimit of nerves of tensors of tree operads.

    A dendrex over R is a class of triples (x, y, c) with x over S, y over T
    and c a colouring of R that is a dendrex of N(Omega(S) (x) Omega(T)).
    Generators alpha : S' -> S identify (alpha^* x, y, c) with
    (x, y, (alpha x 1) c), and likewise on the right.  Only x and y over trees
    with at most ``x_levels`` and ``y_levels`` edges take part; by default
    these are the largest nondegenerate levels plus ``slack``.  Levels close
    to the bound are listed in ``provisional``.
    """

    def __init__(self, x: DSet, y: DSet, bound: int = 3, slack: int = 0,
                 x_levels: int | None = None, y_levels: int | None = None):
        self.x, self.y = x, y
        self.bound = bound
        self.name = f"{x.name}(x){y.name}"
        self.x_levels = min(x.bound, _max_nondegenerate(x) + slack) if x_levels is None else x_levels
        self.y_levels = min(y.bound, _max_nondegenerate(y) + slack) if y_levels is None else y_levels
        self.provisional = [c for c in enumerate_trees(bound) if len(canonical_tree(c)) == bound]
        self._parent: list[int] = []
        self._keys: list = []
        self._id: dict = {}
        self._carrier: dict = {}
        self._build()

    def _find(self, k):
        """The leader key of the class of k."""
        p = self._parent
        i = root = self._id[k]
        while p[root] != root:
            root = p[root]
        while p[i] != root:
            p[i], i = root, p[i]
        return self._keys[root]

    def _union(self, a, b):
        p = self._parent
        ra, rb = self._id[self._find(a)], self._id[self._find(b)]
        if ra != rb:
            p[max(ra, rb)] = min(ra, rb)

    def _build(self):
        x, y = self.x, self.y
        xs = [(c, z) for c in enumerate_trees(self.x_levels) for z in x.carrier(c)]
        ys = [(c, w) for c in enumerate_trees(self.y_levels) for w in y.carrier(c)]
        rs = enumerate_trees(self.bound)
        for s, a in xs:
            for t, b in ys:
                for r in rs:
                    for col in _tensor_colourings(s, t, r):
                        k = (r, s, a, t, b, col)
                        self._id[k] = len(self._keys)
                        self._parent.append(len(self._keys))
                        self._keys.append(k)
        for g, s2, a2, s, a in self._moves(x, self.x_levels):
            for t, b in ys:
                for r in rs:
                    for col in _tensor_colourings(s2, t, r):
                        pushed = tuple((g.map[e], f) for e, f in col)
                        self._union((r, s2, a2, t, b, col), (r, s, a, t, b, pushed))
        for g, t2, b2, t, b in self._moves(y, self.y_levels):
            for s, a in xs:
                for r in rs:
                    for col in _tensor_colourings(s, t2, r):
                        pushed = tuple((e, g.map[f]) for e, f in col)
                        self._union((r, s, a, t2, b2, col), (r, s, a, t, b, pushed))
        seen: dict = {}
        for k in self._keys:
            lead = self._find(k)
            if lead not in seen:
                seen[lead] = None
                self._carrier.setdefault(k[0], []).append(lead)
        self._carrier = {c: tuple(v) for c, v in self._carrier.items()}

    @staticmethod
    def _moves(x: DSet, levels: int):
        """(g, g.src, g^* a, g.dst, a) for faces, automorphisms and degeneracies."""
        for s in enumerate_trees(levels):
            gens = list(generators_into(s))
            gens.extend(d for _, d in canonical_degeneracies(s))
            for g in gens:
                for a in x.carrier(g.dst.code):
                    yield g, g.src.code, x.act(g, a), g.dst.code, a

    def carrier(self, code):
        return self._carrier.get(code, ())

    def act(self, alpha, z):
        r, s, a, t, b, col = z
        new = tuple(col[alpha.dst.edges.index(alpha.map[e])] for e in alpha.src.edges)
        return self._find((alpha.src.code, s, a, t, b, new))

    def element(self, r: str, s: str, a, t: str, b, col):
        """The class of (a, b, col), first pushing degenerate a or b down to the stored levels."""
        while len(canonical_tree(s)) > self.x_levels:
            s, a, col = self._lower(self.x, s, a, col, 0)
        while len(canonical_tree(t)) > self.y_levels:
            t, b, col = self._lower(self.y, t, b, col, 1)
        return self._find((r, s, a, t, b, col))

    @staticmethod
    def _lower(x: DSet, s: str, a, col, side: int):
        for _, d in canonical_degeneracies(s):
            for a0 in x.carrier(d.dst.code):
                if x.act(d, a0) == a:
                    pushed = tuple(
                        (d.map[e], f) if side == 0 else (e, d.map[f]) for e, f in col
                    )
                    return d.dst.code, a0, pushed
        raise CapExceeded(f"nondegenerate dendrex over {s} above the tensor levels")


def tensor(x: DSet, y: DSet, bound: int = 3, slack: int = 0) -> TensorDSet:
    return TensorDSet(x, y, bound, slack)


def diagonal_map(x: SSet, y: SSet, t: TensorDSet):
    """The levelwise map i_!(X x Y) -> i_!X (x) i_!Y on linear trees.

    An n-simplex (a, b) goes to the triple (a, b, c) over [n] (x) [n] with c
    the diagonal colouring k -> (k, k).
    """

    def f(code: str, ab):
        n = len(canonical_tree(code)) - 1
        sq = linear_code(n)
        col = tuple((str(k), str(k)) for k in range(n + 1))
        return t.element(code, sq, ab[0], sq, ab[1], col)

    return f


# -- internal hom --------------------------------------------------------------------------


class InternalHom(DSet):
    """Hom(x, y): dendrices over T are the maps Omega[T] (x) x -> y.

    A map is stored as the tuple of images of the dendrices of the tensor in
    their listed order.  The tensors are computed up to ``bound * L`` edges,
    with L the largest nondegenerate level of x (enough for every shuffle),
    unless ``tensor_bound`` lowers it; ``provisional`` then lists the trees
    concerned.
    """

    def __init__(self, x: DSet, y: DSet, bound: int = 3, tensor_bound: int | None = None):
        self.x, self.y = x, y
        self.bound = bound
        self.name = f"Hom({x.name},{y.name})"
        self.tensor_bound = tensor_bound
        self.provisional: list[str] = []
        self._lx = _max_nondegenerate(x)
        self._tensors: dict = {}
        self._cache: dict = {}

    def tensor_at(self, code: str) -> TensorDSet:
        if code not in self._tensors:
            # one bound for every T, so that restriction along degeneracies stays inside
            need = self.bound * self._lx
            b = need if self.tensor_bound is None else min(need, self.tensor_bound)
            if b < need:
                self.provisional.append(code)
            if b > self.y.bound:
                raise CapExceeded(f"target bound {self.y.bound} below the tensor bound {b} needed at {code}")
            rep = Representable(canonical_tree(code), len(canonical_tree(code)))
            self._tensors[code] = TensorDSet(rep, self.x, bound=b)
        return self._tensors[code]

    def _elements(self, code: str) -> list:
        t = self.tensor_at(code)
        return [(c, z) for c in codes_by_size(t.bound) for z in t.carrier(c)]

    def carrier(self, code):
        if code not in self._cache:
            t = self.tensor_at(code)
            els = self._elements(code)
            maps = dendmaps(t, self.y, t.bound)
            self._cache[code] = tuple(tuple(f[k] for k in els) for f in maps)
        return self._cache[code]

    def act(self, alpha, f):
        src, dst = alpha.src.code, alpha.dst.code
        big = self.tensor_at(dst)
        lookup = dict(zip(self._elements(dst), f))
        out = []
        for c, z in self._elements(src):
            r, s, a, t, b, col = z
            image = big.element(r, s, compose(alpha, a), t, b, col)
            out.append(lookup[(c, image)])
        return tuple(out)


def internal_hom(x: DSet, y: DSet, bound: int = 3, tensor_bound: int | None = None) -> InternalHom:
    return InternalHom(x, y, bound, tensor_bound)


# -- total dendroidal set of a diagram ---------------------------------------------------------


def _is_mono(m: Mor) -> bool:
    return len(set(m.map.values())) == len(m.src.edges)


@lru_cache(maxsize=None)
def monos_into(code: str) -> tuple[Mor, ...]:
    """Injective morphisms from canonical trees into the canonical tree ``code``, small first."""
    t = canonical_tree(code)
    out = []
    for c in codes_by_size(len(t)):
        out.extend(m for m in canonical_hom(c, code) if _is_mono(m))
    return tuple(out)


def epi_mono(alpha: Mor) -> tuple[Mor, Mor]:
    """(d, m) with alpha = m o d, d a composite of degeneracies, m injective, both canonical."""
    fac = factorize(alpha)
    down = identity(alpha.src)
    for d in fac.degeneracies:
        down = compose(d, down)
    c, iso = canonical(down.dst)
    back = Mor(down.dst, c, {v: k for k, v in iso.map.items()})
    d = compose(back, down)
    m = compose(alpha_mono(fac), iso)
    return d, m


def alpha_mono(fac) -> Mor:
    out = fac.iso
    for f in reversed(fac.faces):
        out = compose(f, out)
    return out


class Grothendieck(DSet):
    """The total dendroidal set of a diagram of dendroidal sets over a meet poset.

    ``values[s]`` is a dendroidal set for each object s and ``pull(a, b, x)``
    restricts x in values[b] to values[a] along a <= b.  A dendrex over T is
    (t, family): t a dendrex of the nerve of the meet operad and family an
    entry x_u in values[in(tu)] over S for every injective u : S -> T, where
    in(tu) is the meet of the colours of the leaves.  Entries satisfy
    pull(in(tu), in(tuv), x_uv) = v^*(x_u).  Entries at degenerate u are
    forced, so only injective u are stored.
    """

    def __init__(self, base: FinCat, values: Mapping, pull: Callable, bound: int = 3, name: str = "int"):
        self.operad = MeetOperad(base, cap=bound)
        self.values = dict(values)
        self.pull_value = pull
        self.bound = bound
        self.name = name
        self.base_nerve = Nerve(self.operad, bound)
        self._cache: dict = {}

    def inputs_of(self, t, u: Mor):
        """in(tu): the meet of the colours that t gives to the leaves of u."""
        cols = dict(zip(u.dst.edges, t[0]))
        return self.operad.meet([cols[u.map[l]] for l in u.src.leaves])

    def carrier(self, code):
        if code in self._cache:
            return self._cache[code]
        monos = monos_into(code)
        index = {m: k for k, m in enumerate(monos)}
        faces = {c: [f for _, _, _, f in canonical_faces(c)] for c in {m.src.code for m in monos}}
        autos = {c: canonical_automorphisms(c) for c in faces}
        out = []
        for t in self.base_nerve.carrier(code):
            ins = [self.inputs_of(t, u) for u in monos]
            fam: list = [None] * len(monos)

            def rec(k: int):
                while k < len(monos) and fam[k] is not None:
                    k += 1
                if k == len(monos):
                    out.append((t, tuple(fam)))
                    return
                u = monos[k]
                x = self.values[ins[k]]
                for cand in x.carrier(u.src.code):
                    ok = True
                    for v in faces[u.src.code]:
                        j = index[compose(u, v)]
                        if self.pull_value(ins[k], ins[j], fam[j]) != x.act(v, cand):
                            ok = False
                            break
                    if not ok:
                        continue
                    placed = []
                    for a in autos[u.src.code]:
                        j = index[compose(u, a)]
                        if fam[j] is None:
                            fam[j] = x.act(a, cand)
                            placed.append(j)
                    rec(k + 1)
                    for j in placed:
                        fam[j] = None

            rec(0)
        self._cache[code] = tuple(out)
        return self._cache[code]

    def value(self, z, alpha: Mor):
        """x_alpha for any alpha into the tree of z."""
        t, fam = z
        d, m = epi_mono(alpha)
        x = self.values[self.inputs_of(t, m)]
        return x.act(d, fam[monos_into(m.dst.code).index(m)])

    def act(self, beta, z):
        t, _ = z
        t2 = self.base_nerve.act(beta, t)
        return (t2, tuple(self.value(z, compose(beta, w)) for w in monos_into(beta.src.code)))


def grothendieck(base: FinCat, values: Mapping, pull: Callable, bound: int = 3) -> Grothendieck:
    return Grothendieck(base, values, pull, bound)


def nerve_map(colour_map: Mapping, op_map: Callable):
    """The levelwise map N_d(P) -> N_d(Q) induced by an operad map."""

    def g(x):
        cols, ops = x
        return (tuple(colour_map[c] for c in cols), tuple(op_map(o) for o in ops))

    return g
