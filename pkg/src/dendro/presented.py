"""Operads presented by generators and relations, quotiented by congruence closure.

Elements of the free symmetric operad on a set of generators are planar terms
together with a labelling of their leaves by input positions.  Relations are
given as rewriters acting on subterms; every rewrite is linear (each leaf of
the redex survives exactly once), so it induces a bijection between the leaf
positions of the two terms.

The quotient is computed with a union-find whose edges carry those leaf
bijections.  A class root additionally carries its stabilizer: the group of
leaf permutations under which the root term is identified with itself.  An
operation of the quotient is then (root term, leaf labelling modulo
stabilizer), and nothing ever enumerates all n! labellings of a term.

Terms are tuples: ("x", colour) is a leaf, ("g", gen, children) a node.
During rewriting leaves carry a third component, a tag recording their
original position.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .operad import CapExceeded, Operad

Perm = tuple[int, ...]
Term = tuple

Rewriter = Callable[[Term], Iterable[Term]]


def perm_compose(f: Perm, g: Perm) -> Perm:
    """f after g."""
    return tuple(f[x] for x in g)


def perm_inverse(f: Perm) -> Perm:
    out = [0] * len(f)
    for i, x in enumerate(f):
        out[x] = i
    return tuple(out)


def _close(gens: Iterable[Perm], n: int) -> frozenset[Perm]:
    ident = tuple(range(n))
    group = {ident}
    frontier = [ident]
    gens = [g for g in gens if g != ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = perm_compose(g, a)
                if b not in group:
                    group.add(b)
                    nxt.append(b)
        frontier = nxt
    return frozenset(group)


def leaf(colour) -> Term:
    return ("x", colour)


def node(gen, children: Sequence[Term]) -> Term:
    return ("g", gen, tuple(children))


def is_leaf(t: Term) -> bool:
    return t[0] == "x"


def leaves(t: Term) -> list[Term]:
    if t[0] == "x":
        return [t]
    out = []
    for c in t[2]:
        out.extend(leaves(c))
    return out


def size(t: Term) -> int:
    if t[0] == "x":
        return 0
    return 1 + sum(size(c) for c in t[2])


def _tag(t: Term, counter) -> Term:
    if t[0] == "x":
        return ("x", t[1], next(counter))
    return ("g", t[1], tuple(_tag(c, counter) for c in t[2]))


def _strip(t: Term) -> Term:
    if t[0] == "x":
        return ("x", t[1])
    return ("g", t[1], tuple(_strip(c) for c in t[2]))


def _split(t: Term, tags: list) -> Term:
    if t[0] == "x":
        tags.append(t[2])
        return ("x", t[1])
    return ("g", t[1], tuple(_split(c, tags) for c in t[2]))


def _rewrites_everywhere(t: Term, rewriters: Sequence[Rewriter]):
    """Yield every term obtained by one rewrite at one position of ``t``."""
    for rw in rewriters:
        yield from rw(t)
    if t[0] == "g":
        kids = t[2]
        for i, c in enumerate(kids):
            for new in _rewrites_everywhere(c, rewriters):
                yield ("g", t[1], kids[:i] + (new,) + kids[i + 1 :])


class PresentedOperad(Operad):
    """The quotient of the free operad on ``generators`` by the rewriters."""

    def __init__(
        self,
        colours: Iterable[Hashable],
        generators: Mapping[Hashable, tuple[tuple, Hashable]],
        rewriters: Sequence[Rewriter],
        max_arity: int,
        max_nodes: int,
        name: str = "presented",
    ):
        self.colours = tuple(colours)
        self.generators = dict(generators)
        self.cap = max_arity
        self.max_nodes = max_nodes
        self.name = name
        self.truncated = False
        self._by_output: dict = defaultdict(list)
        for g, (ins, out) in self.generators.items():
            self._by_output[out].append(g)
        self._enumerate()
        self._close(rewriters)

    # -- term enumeration -------------------------------------------------

    def _enumerate(self) -> None:
        memo: dict = {}

        def terms(c, budget: int) -> list[tuple[Term, int, int]]:
            key = (c, budget)
            if key in memo:
                return memo[key]
            out = [(leaf(c), 0, 1)]
            if budget > 0:
                for g in self._by_output.get(c, ()):
                    ins = self.generators[g][0]

                    def rec(j, used, nleaves, acc):
                        if j == len(ins):
                            out.append((node(g, acc), used + 1, nleaves))
                            return
                        for sub, sn, sl in terms(ins[j], budget - 1 - used):
                            if used + sn + 1 > budget:
                                continue
                            if nleaves + sl + (len(ins) - j - 1) > self.cap:
                                continue
                            rec(j + 1, used + sn, nleaves + sl, acc + [sub])

                    rec(0, 0, 0, [])
            memo[key] = out
            return out

        self.terms: dict[Term, int] = {}
        for c in self.colours:
            for t, _, nl in terms(c, self.max_nodes):
                if nl <= self.cap:
                    self.terms.setdefault(t, len(self.terms))
        self._leaf_colours = {t: tuple(x[1] for x in leaves(t)) for t in self.terms}

    # -- union-find with leaf bijections ----------------------------------

    def _find(self, t: int) -> tuple[int, Perm | None]:
        """(root id, map pos(t) -> pos(root)); None stands for the identity."""
        parent = self._parent
        if parent[t] == t:
            return t, None
        path = []
        x = t
        while parent[x] != x:
            path.append(x)
            x = parent[x]
        root = x
        rel = self._rel
        acc = None
        for y in reversed(path):
            acc = rel[y] if acc is None else perm_compose(acc, rel[y])
            parent[y] = root
            rel[y] = acc
        return root, rel[t]

    def _union(self, a: int, b: int, pi: Perm) -> None:
        ra, rho_a = self._find(a)
        rb, rho_b = self._find(b)
        mu = pi if rho_a is None else perm_compose(pi, perm_inverse(rho_a))
        if rho_b is not None:
            mu = perm_compose(rho_b, mu)
        n = len(mu)
        if ra == rb:
            if mu not in self._group[ra]:
                self._group[ra] = _close(list(self._group[ra]) + [mu], n)
            return
        mu_inv = perm_inverse(mu)
        conj = [perm_compose(mu, perm_compose(g, mu_inv)) for g in self._group[ra]]
        self._parent[ra] = rb
        self._rel[ra] = mu
        if len(conj) > 1:
            self._group[rb] = _close(list(self._group[rb]) + conj, n)
        del self._group[ra]

    def _close(self, rewriters: Sequence[Rewriter]) -> None:
        terms = list(self.terms)
        ident = {}
        self._ids = self.terms  # term -> id
        self._term_of = terms
        self._parent = list(range(len(terms)))
        self._rel: list = [None] * len(terms)
        self._group = {}
        for k, t in enumerate(terms):
            n = len(self._leaf_colours[t])
            if n not in ident:
                ident[n] = frozenset([tuple(range(n))])
            self._group[k] = ident[n]
        for k, t in enumerate(terms):
            tagged = _tag(t, itertools.count())
            for new in _rewrites_everywhere(tagged, rewriters):
                tags: list[int] = []
                plain = _split(new, tags)
                target = self.terms.get(plain)
                if target is None:
                    self.truncated = True
                    continue
                pi = [0] * len(tags)
                for k_new, k_old in enumerate(tags):
                    pi[k_old] = k_new
                self._union(k, target, tuple(pi))
        self._roots_by_sig: dict = defaultdict(list)
        for k, t in enumerate(terms):
            if self._parent[k] == k:
                key = (self.term_output(t), tuple(sorted(map(repr, self._leaf_colours[t]))))
                self._roots_by_sig[key].append(k)

    # -- operations ---------------------------------------------------------

    def _canon(self, root: int, labels: Perm) -> tuple:
        group = self._group[root]
        if len(group) == 1:
            return (root, tuple(labels))
        best = min(perm_compose(labels, perm_inverse(g)) for g in group)
        return (root, best)

    def _op_from_term(self, t: Term, labels: Perm) -> tuple:
        k = self.terms.get(t)
        if k is None:
            raise CapExceeded(f"term with {size(t)} nodes lies outside the enumeration caps")
        root, rho = self._find(k)
        if rho is not None:
            labels = perm_compose(labels, perm_inverse(rho))
        return self._canon(root, labels)

    def term(self, op) -> Term:
        """A representative term of an operation."""
        return self._term_of[op[0]]

    def term_output(self, t: Term):
        return t[1] if t[0] == "x" else self.generators[t[1]][1]

    def signature(self, op) -> tuple[tuple, Hashable]:
        root, labels = op
        t = self._term_of[root]
        cols = self._leaf_colours[t]
        ins = [None] * len(cols)
        for k, lab in enumerate(labels):
            ins[lab] = cols[k]
        return tuple(ins), self.term_output(t)

    def ops(self, inputs: Sequence, output) -> tuple:
        inputs = tuple(inputs)
        if len(inputs) > self.cap:
            raise CapExceeded(f"arity {len(inputs)} above cap {self.cap}")
        key = (output, tuple(sorted(map(repr, inputs))))
        out = []
        seen = set()
        for root in self._roots_by_sig.get(key, ()):
            cols = self._leaf_colours[self._term_of[root]]
            for labels in _labellings(cols, inputs):
                op = self._canon(root, labels)
                if op not in seen:
                    seen.add(op)
                    out.append(op)
        return tuple(out)

    def ops_out(self, output, arity: int):
        if arity > self.cap:
            raise CapExceeded(f"arity {arity} above cap {self.cap}")
        seen = set()
        for (out, _), roots in self._roots_by_sig.items():
            if out != output:
                continue
            for root in roots:
                n = len(self._leaf_colours[self._term_of[root]])
                if n != arity:
                    continue
                for labels in itertools.permutations(range(n)):
                    op = self._canon(root, labels)
                    if op not in seen:
                        seen.add(op)
                        yield op

    def all_ops(self, max_arity: int | None = None):
        for c in self.colours:
            for n in range(0, (self.cap if max_arity is None else min(max_arity, self.cap)) + 1):
                yield from self.ops_out(c, n)

    def unit(self, c):
        return self._canon(self.terms[leaf(c)], (0,))

    def compose(self, p, i: int, q):
        r1, l1 = p
        r2, l2 = q
        t1, t2 = self._term_of[r1], self._term_of[r2]
        n2 = len(l2)
        k1 = l1.index(i)
        cols = self._leaf_colours[t1]
        if cols[k1] != self.term_output(t2):
            raise ValueError("colour mismatch in composition")
        counter = itertools.count()

        def graft(t):
            if t[0] == "x":
                return t2 if next(counter) == k1 else t
            return ("g", t[1], tuple(graft(c) for c in t[2]))

        w = graft(t1)
        labels = []
        for k, lab in enumerate(l1):
            if k == k1:
                labels.extend(i + x for x in l2)
            else:
                labels.append(lab + n2 - 1 if lab > i else lab)
        return self._op_from_term(w, tuple(labels))

    def act(self, p, sigma: Sequence[int]):
        root, labels = p
        inv = perm_inverse(tuple(sigma))
        return self._canon(root, tuple(inv[x] for x in labels))

    def classes(self) -> int:
        return len(self._group)


def _labellings(cols: Sequence, inputs: Sequence):
    """Bijections position -> input index respecting colours."""
    n = len(cols)
    if n != len(inputs):
        return
    used = [False] * n
    acc = [0] * n

    def rec(k):
        if k == n:
            yield tuple(acc)
            return
        for j in range(n):
            if not used[j] and inputs[j] == cols[k]:
                used[j] = True
                acc[k] = j
                yield from rec(k + 1)
                used[j] = False

    yield from rec(0)


# -- the Boardman-Vogt tensor product --------------------------------------------


def _generators_of(p: Operad) -> list:
    from .operad import FreeTreeOperad

    if isinstance(p, FreeTreeOperad):
        return p.generators()
    units = {p.unit(c) for c in p.colours}
    return [o for o in p.all_ops() if o not in units]


def bv_tensor(
    p: Operad, q: Operad, max_arity: int | None = None, max_nodes: int | None = None
) -> PresentedOperad:
    """P (x) Q as a presented operad.

    Generators are p (x) d and c (x) q.  For free tree operands these are the
    vertices only and the interchange relation is the whole presentation; the
    result then carries ``exact = True``.  For other operands the factor
    compositions and Sigma-actions are added as relations and the result is a
    truncation at the caps (``exact = False``).
    """
    from .operad import FreeTreeOperad

    free = isinstance(p, FreeTreeOperad) and isinstance(q, FreeTreeOperad)
    n_col = len(p.colours) * len(q.colours)
    if max_arity is None:
        max_arity = n_col if free else min(p.cap * q.cap, 4)
    if max_nodes is None:
        max_nodes = n_col if free else 4
    colours = [(c, d) for c in p.colours for d in q.colours]
    pg = _generators_of(p)
    qg = _generators_of(q)
    gens: dict = {}
    for a in pg:
        ins, out = p.signature(a)
        for d in q.colours:
            gens[("L", a, d)] = (tuple((c, d) for c in ins), (out, d))
    for b in qg:
        ins, out = q.signature(b)
        for c in p.colours:
            gens[("R", c, b)] = (tuple((c, d) for d in ins), (c, out))
    q_by_out: dict = defaultdict(list)
    for b in qg:
        q_by_out[q.signature(b)[1]].append(b)

    def interchange(t: Term):
        if t[0] != "g" or t[1][0] != "L":
            return
        _, a, d = t[1]
        ins, c = p.signature(a)
        kids = t[2]
        if not ins:
            for b in q_by_out.get(d, ()):
                dins = q.signature(b)[0]
                yield node(("R", c, b), [node(("L", a, dj), ()) for dj in dins])
            return
        first = kids[0]
        if first[0] != "g" or first[1][0] != "R":
            return
        b = first[1][2]
        for i, k in enumerate(kids):
            if k[0] != "g" or k[1] != ("R", ins[i], b):
                return
        dins = q.signature(b)[0]
        yield node(
            ("R", c, b),
            [node(("L", a, dj), [kids[i][2][j] for i in range(len(ins))]) for j, dj in enumerate(dins)],
        )

    rewriters: list = [interchange]
    if not free:
        rewriters.extend(_factor_rewriters(p, q))
    out = PresentedOperad(colours, gens, rewriters, max_arity, max_nodes, name=f"{p.name}(x){q.name}")
    out.exact = free and not out.truncated
    # exact means nothing was cut off, so arities above the cap are empty
    out.exhaustive_above_cap = out.exact
    out.left, out.right = p, q
    return out


def _factor_rewriters(p: Operad, q: Operad) -> list:
    """Composition and Sigma-relations inside each factor."""

    def merge(side: str, operad: Operad):
        def rw(t: Term):
            if t[0] != "g" or t[1][0] != side:
                return
            a = t[1][1] if side == "L" else t[1][2]
            kids = t[2]
            for i, k in enumerate(kids):
                if k[0] != "g" or k[1][0] != side:
                    continue
                if side == "L" and k[1][2] != t[1][2]:
                    continue
                if side == "R" and k[1][1] != t[1][1]:
                    continue
                b = k[1][1] if side == "L" else k[1][2]
                try:
                    r = operad.compose(a, i, b)
                except CapExceeded:
                    continue
                new_kids = kids[:i] + k[2] + kids[i + 1 :]
                sig = operad.signature(r)
                if r == operad.unit(sig[1]):
                    yield new_kids[0]
                    continue
                gen = ("L", r, t[1][2]) if side == "L" else ("R", t[1][1], r)
                yield node(gen, new_kids)

        return rw

    def equivariance(side: str, operad: Operad):
        def rw(t: Term):
            if t[0] != "g" or t[1][0] != side:
                return
            a = t[1][1] if side == "L" else t[1][2]
            n = len(t[2])
            if n > 4:
                return
            for sigma in itertools.permutations(range(n)):
                if sigma == tuple(range(n)):
                    continue
                b = operad.act(a, sigma)
                gen = ("L", b, t[1][2]) if side == "L" else ("R", t[1][1], b)
                yield node(gen, [t[2][s] for s in sigma])

        return rw

    out = [merge("L", p), merge("R", q)]
    if not p.planar:
        out.append(equivariance("L", p))
    if not q.planar:
        out.append(equivariance("R", q))
    return out
