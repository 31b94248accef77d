"""Finite coloured operads in Set.

An operad here is an object answering a handful of questions: which colours
exist, which operations live at a given signature, and how operations compose
and get permuted.  Operation identifiers are opaque hashables; two operations
are equal exactly when their identifiers are.

Conventions used throughout:

* ``compose(p, i, q)`` is p o_i q with ``i`` counted from 0.
* ``act(p, sigma)`` is the right action sigma*: the new input list is
  ``[old[sigma[k]] for k in range(n)]``.  With permutations composed as
  functions this gives (sigma tau)* = tau* sigma*.
* Every operad declares an arity ``cap``.  Enumerations never go above it.
"""

from __future__ import annotations

import itertools
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

from .category import FinCat
from .tree import Tree

Perm = tuple[int, ...]


class CapExceeded(RuntimeError):
    """A computation needed operations above the declared arity cap."""


class Operad:
    """Interface shared by all concrete operads."""

    colours: tuple
    cap: int
    planar: bool = False
    name: str = "operad"

    def ops(self, inputs: Sequence, output) -> tuple:
        raise NotImplementedError

    def signature(self, op) -> tuple[tuple, Hashable]:
        raise NotImplementedError

    def compose(self, p, i: int, q):
        raise NotImplementedError

    def act(self, p, sigma: Sequence[int]):
        raise NotImplementedError

    def unit(self, c):
        raise NotImplementedError

    # derived helpers

    def arity(self, op) -> int:
        return len(self.signature(op)[0])

    def ops_out(self, output, arity: int) -> Iterator:
        for ins in itertools.product(self.colours, repeat=arity):
            yield from self.ops(ins, output)

    def all_ops(self, max_arity: int | None = None) -> Iterator:
        top = self.cap if max_arity is None else min(max_arity, self.cap)
        for n in range(top + 1):
            for c in self.colours:
                yield from self.ops_out(c, n)

    def multi_compose(self, p, qs: Sequence):
        """p(q_0, ..., q_{n-1}); grafting from the last input keeps indices stable."""
        out = p
        for i in reversed(range(len(qs))):
            out = self.compose(out, i, qs[i])
        return out

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name} colours={len(self.colours)} cap={self.cap}>"


# -- permutations ----------------------------------------------------------------


def perm_compose(f: Sequence[int], g: Sequence[int]) -> Perm:
    """f after g."""
    return tuple(f[x] for x in g)


def perm_inverse(f: Sequence[int]) -> Perm:
    out = [0] * len(f)
    for i, x in enumerate(f):
        out[x] = i
    return tuple(out)


def permute(seq: Sequence, sigma: Sequence[int]) -> tuple:
    return tuple(seq[s] for s in sigma)


def sigma_perm(n: int, m: int) -> Perm:
    """The block transpose k*n + j -> j*m + k on {0, ..., nm-1}."""
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    out = [0] * (n * m)
    for k in range(m):
        for j in range(n):
            out[k * n + j] = j * m + k
    return tuple(out)


def block_left(sigma: Sequence[int], i: int, m: int) -> Perm:
    """pi with (sigma* p) o_i q == pi* (p o_{sigma(i)} q), q of arity m."""
    si = sigma[i]

    def start(j: int) -> int:
        return j if j <= si else j + m - 1

    out: list[int] = []
    for k in range(len(sigma)):
        if k == i:
            out.extend(start(si) + t for t in range(m))
        else:
            out.append(start(sigma[k]))
    return tuple(out)


def block_right(n: int, i: int, tau: Sequence[int]) -> Perm:
    """rho with p o_i (tau* q) == rho* (p o_i q), p of arity n."""
    m = len(tau)
    out = list(range(i)) + [i + t for t in tau] + list(range(i + m, n + m - 1))
    return tuple(out)


# -- concrete operads ------------------------------------------------------------


class FreeTreeOperad(Operad):
    """The operad freely generated by the vertices of a tree.

    It is thin, so an operation is just its signature ``(inputs, output)``.
    """

    def __init__(self, t: Tree):
        from .omega import op_exists

        self.tree = t
        self.colours = t.edges
        self._exists = op_exists
        self.name = f"Omega({t.code})"
        # the widest operation is a cut through the tree, which can exceed the
        # leaf count once stumps are present
        self.cap = max(1, max(len(c) for c in _cuts(t, t.root)))
        self._cache: dict = {}

    def ops(self, inputs, output) -> tuple:
        inputs = tuple(inputs)
        key = (inputs, output)
        if key not in self._cache:
            ok = output in self.tree.edge_set and all(x in self.tree.edge_set for x in inputs)
            self._cache[key] = (key,) if ok and self._exists(self.tree, inputs, output) else ()
        return self._cache[key]

    def ops_out(self, output, arity: int):
        for cut in _cuts(self.tree, output):
            if len(cut) == arity:
                for perm in itertools.permutations(cut):
                    yield (tuple(perm), output)

    def signature(self, op):
        return op

    def compose(self, p, i, q):
        ins, out = p
        ins2, out2 = q
        if ins[i] != out2:
            raise ValueError("colour mismatch in composition")
        return (ins[:i] + ins2 + ins[i + 1 :], out)

    def act(self, p, sigma):
        return (permute(p[0], sigma), p[1])

    def unit(self, c):
        return ((c,), c)

    def generators(self) -> list:
        return [(self.tree.vertex_inputs(v), v) for v in self.tree.vertices]


def _cuts(t: Tree, e: str) -> list[tuple[str, ...]]:
    """Input sets of the operations with output e (as sorted tuples)."""
    out = [(e,)]
    if t.has_vertex(e):
        parts = [_cuts(t, c) for c in t.vertex_inputs(e)]
        for combo in itertools.product(*parts):
            out.append(tuple(x for part in combo for x in part))
    return out


def free_tree_operad(t: Tree) -> FreeTreeOperad:
    return FreeTreeOperad(t)


class Comm(Operad):
    """One colour and exactly one operation in each arity (the operation is n)."""

    def __init__(self, cap: int = 4):
        self.colours = ("*",)
        self.cap = cap
        self.name = "Comm"

    def ops(self, inputs, output):
        n = len(inputs)
        if n > self.cap:
            raise CapExceeded(f"arity {n} above cap {self.cap}")
        return (n,) if output == "*" and all(x == "*" for x in inputs) else ()

    def ops_out(self, output, arity):
        if output == "*" and arity <= self.cap:
            yield arity

    def signature(self, op):
        return ("*",) * op, "*"

    def compose(self, p, i, q):
        if not 0 <= i < p:
            raise ValueError("input index out of range")
        return p + q - 1

    def act(self, p, sigma):
        return p

    def unit(self, c):
        return 1


class MeetOperad(Operad):
    """A finite meet-semilattice poset with a top, seen as a cartesian operad.

    There is one operation s_1, ..., s_n -> s exactly when the meet of the
    s_i lies below s; the empty meet is the top.  Operations are their
    signatures.
    """

    def __init__(self, c: FinCat, cap: int = 4, name: str = "S"):
        self.category = c
        self.colours = tuple(c.objects)
        self.cap = cap
        self.name = name
        self._leq = {(a, b) for a, b in (c.arrows[f] for f in c.arrows)}
        tops = [t for t in self.colours if all((a, t) in self._leq for a in self.colours)]
        if not tops:
            raise ValueError("no terminal object")
        self.top = tops[0]
        for a in self.colours:
            for b in self.colours:
                self.meet([a, b])
        self.exhaustive_above_cap = True

    def leq(self, a, b) -> bool:
        return (a, b) in self._leq

    def meet(self, objs: Sequence):
        """The product of a list of objects; raises when it does not exist."""
        lower = [m for m in self.colours if all(self.leq(m, a) for a in objs)]
        best = [m for m in lower if all(self.leq(k, m) for k in lower)]
        if not best:
            raise ValueError(f"no product of {list(objs)!r}")
        return best[0]

    def ops(self, inputs, output):
        ins = tuple(inputs)
        return ((ins, output),) if self.leq(self.meet(ins), output) else ()

    def ops_out(self, output, arity):
        for ins in itertools.product(self.colours, repeat=arity):
            if self.leq(self.meet(ins), output):
                yield (ins, output)

    def signature(self, op):
        return op

    def compose(self, p, i, q):
        (ins, out), (qins, qout) = p, q
        if ins[i] != qout:
            raise ValueError("colour mismatch")
        return (ins[:i] + qins + ins[i + 1 :], out)

    def act(self, p, sigma):
        return (permute(p[0], sigma), p[1])

    def unit(self, c):
        return ((c,), c)


class BOperad(Operad):
    """The planar operad whose algebras are categories with object set S.

    Colours are pairs (s, t).  There is one operation for each chain
    s_0, ..., s_n, with inputs (s_0, s_1), ..., (s_{n-1}, s_n) and output
    (s_0, s_n); the operation is the chain itself.
    """

    planar = True

    def __init__(self, s: Iterable[Hashable], cap: int = 4):
        self.objects = tuple(s)
        if not self.objects:
            raise ValueError("S must be nonempty")
        self.colours = tuple(itertools.product(self.objects, repeat=2))
        self.cap = cap
        self.name = f"B_{len(self.objects)}"

    def ops(self, inputs, output):
        inputs = tuple(inputs)
        if len(inputs) > self.cap:
            raise CapExceeded(f"arity {len(inputs)} above cap {self.cap}")
        if not inputs:
            return ((output[0],),) if output[0] == output[1] else ()
        chain = [inputs[0][0]]
        for a, b in inputs:
            if a != chain[-1]:
                return ()
            chain.append(b)
        if (chain[0], chain[-1]) != tuple(output):
            return ()
        return (tuple(chain),)

    def ops_out(self, output, arity):
        if arity > self.cap:
            raise CapExceeded(f"arity {arity} above cap {self.cap}")
        s, t = output
        if arity == 0:
            if s == t:
                yield (s,)
            return
        for mid in itertools.product(self.objects, repeat=arity - 1):
            yield (s, *mid, t)

    def signature(self, op):
        return tuple(zip(op[:-1], op[1:])), (op[0], op[-1])

    def compose(self, p, i, q):
        if (p[i], p[i + 1]) != (q[0], q[-1]):
            raise ValueError("colour mismatch in composition")
        return p[:i] + q + p[i + 2 :]

    def unit(self, c):
        return tuple(c)


def b_operad(s: Iterable[Hashable], cap: int = 4) -> BOperad:
    return BOperad(s, cap)


class SymmetrizedOperad(Operad):
    """Free symmetric operad on a planar one.

    An operation is (q, sigma) standing for sigma* q; its inputs are the inputs
    of the planar operation q read through sigma.
    """

    def __init__(self, p: Operad):
        self.base = p
        self.colours = p.colours
        self.cap = p.cap
        self.name = f"Symm({p.name})"

    def ops(self, inputs, output):
        inputs = tuple(inputs)
        n = len(inputs)
        out = []
        for sigma in itertools.permutations(range(n)):
            inv = perm_inverse(sigma)
            # planar inputs: base[sigma[k]] = inputs[k]
            base_ins = tuple(inputs[inv[j]] for j in range(n))
            for q in self.base.ops(base_ins, output):
                out.append((q, tuple(sigma)))
        return tuple(out)

    def ops_out(self, output, arity):
        for q in self.base.ops_out(output, arity):
            for sigma in itertools.permutations(range(arity)):
                yield (q, tuple(sigma))

    def signature(self, op):
        q, sigma = op
        ins, out = self.base.signature(q)
        return permute(ins, sigma), out

    def compose(self, p, i, q):
        (a, sigma), (b, tau) = p, q
        m = len(tau)
        pi = block_left(sigma, i, m)
        rho = block_right(len(sigma), i, tau)
        r = self.base.compose(a, sigma[i], b)
        return (r, perm_compose(pi, rho))

    def act(self, p, sigma):
        q, s = p
        return (q, perm_compose(s, sigma))

    def unit(self, c):
        return (self.base.unit(c), (0,))


def symmetrize(p: Operad) -> SymmetrizedOperad:
    return SymmetrizedOperad(p)


def a_operad(s: Iterable[Hashable], cap: int = 4) -> SymmetrizedOperad:
    op = symmetrize(b_operad(s, cap))
    op.name = f"A_{len(op.base.objects)}"
    return op


class PullbackOperad(Operad):
    """f*(P): colours D, operations P(f d_1, ..., f d_n; f d)."""

    def __init__(self, p: Operad, f: Mapping[Hashable, Hashable]):
        self.base = p
        self.f = dict(f)
        for d, c in self.f.items():
            if c not in p.colours:
                raise ValueError(f"{d!r} maps to {c!r}, which is not a colour")
        self.colours = tuple(self.f)
        self.cap = p.cap
        self.planar = p.planar
        self.name = f"pullback({p.name})"

    def ops(self, inputs, output):
        inputs = tuple(inputs)
        base = self.base.ops(tuple(self.f[x] for x in inputs), self.f[output])
        return tuple((o, inputs, output) for o in base)

    def signature(self, op):
        return op[1], op[2]

    def compose(self, p, i, q):
        (a, ins, out), (b, ins2, out2) = p, q
        if ins[i] != out2:
            raise ValueError("colour mismatch in composition")
        return (self.base.compose(a, i, b), ins[:i] + ins2 + ins[i + 1 :], out)

    def act(self, p, sigma):
        a, ins, out = p
        return (self.base.act(a, sigma), permute(ins, sigma), out)

    def unit(self, d):
        return (self.base.unit(self.f[d]), (d,), d)


def pullback_operad(p: Operad, f: Mapping[Hashable, Hashable]) -> PullbackOperad:
    return PullbackOperad(p, f)


class CategoryOperad(Operad):
    """A category viewed as an operad with unary operations only."""

    def __init__(self, c: FinCat):
        self.category = c
        self.colours = c.objects
        self.cap = 1
        self.name = f"j!({c.name or 'C'})"
        self.exhaustive_above_cap = True

    def ops(self, inputs, output):
        if len(inputs) != 1:
            return ()
        return tuple(self.category.hom(inputs[0], output))

    def ops_out(self, output, arity):
        if arity == 1:
            for f, (s, t) in self.category.arrows.items():
                if t == output:
                    yield f

    def signature(self, op):
        s, t = self.category.arrows[op]
        return (s,), t

    def compose(self, p, i, q):
        if i != 0:
            raise ValueError("input index out of range")
        return self.category.compose(p, q)

    def act(self, p, sigma):
        return p

    def unit(self, c):
        return self.category.id(c)


def j_shriek(c: FinCat) -> CategoryOperad:
    return CategoryOperad(c)


def j_star(p: Operad) -> FinCat:
    """Colours and unary operations of p."""
    arrows: dict = {}
    raw = []
    for c in p.colours:
        for o in p.ops_out(c, 1):
            (s,), t = p.signature(o)
            raw.append((o, s, t))
    unique = len({o for o, _, _ in raw}) == len(raw)
    name = (lambda o, s, t: o) if unique else (lambda o, s, t: (s, t, o))
    back = {}
    for o, s, t in raw:
        arrows[name(o, s, t)] = (s, t)
        back[name(o, s, t)] = o
    fwd = {o: name(o, s, t) for o, s, t in raw}
    ids = {c: fwd[p.unit(c)] for c in p.colours}
    table = {}
    for g, (b, c) in arrows.items():
        for f, (a, b2) in arrows.items():
            if b2 == b:
                table[(g, f)] = fwd[p.compose(back[g], 0, back[f])]
    return FinCat(p.colours, arrows, ids, table, name=f"j*({p.name})")


class TableOperad(Operad):
    """An operad given by explicit tables, usually loaded from JSON.

    Composition entries may be omitted whenever the target signature carries
    exactly one operation; the value is then forced.
    """

    def __init__(
        self,
        colours: Iterable[Hashable],
        ops: Mapping[Hashable, tuple[tuple, Hashable]],
        compose: Mapping[tuple, Hashable] | None = None,
        sigma: Mapping[tuple, Hashable] | None = None,
        units: Mapping[Hashable, Hashable] | None = None,
        cap: int | None = None,
        name: str = "table",
    ):
        self.colours = tuple(colours)
        self._sig = {k: (tuple(v[0]), v[1]) for k, v in ops.items()}
        self._by_sig: dict = {}
        for k, s in self._sig.items():
            self._by_sig.setdefault(s, []).append(k)
        self._compose = dict(compose or {})
        self._sigma = dict(sigma or {})
        self.cap = cap if cap is not None else max((len(s[0]) for s in self._sig.values()), default=1)
        self.name = name
        self._units = dict(units or {})
        for c in self.colours:
            if c not in self._units:
                cands = self._by_sig.get(((c,), c), [])
                if len(cands) != 1:
                    raise ValueError(f"no unique unit candidate for colour {c!r}")
                self._units[c] = cands[0]

    def ops(self, inputs, output):
        return tuple(self._by_sig.get((tuple(inputs), output), ()))

    def ops_out(self, output, arity):
        for (ins, out), ks in self._by_sig.items():
            if out == output and len(ins) == arity:
                yield from ks

    def signature(self, op):
        return self._sig[op]

    def _forced(self, sig):
        cands = self._by_sig.get(sig, [])
        if len(cands) != 1:
            raise KeyError(f"no table entry and {len(cands)} candidates at {sig!r}")
        return cands[0]

    def compose(self, p, i, q):
        if (p, i, q) in self._compose:
            return self._compose[(p, i, q)]
        ins, out = self._sig[p]
        ins2, out2 = self._sig[q]
        if not 0 <= i < len(ins):
            raise ValueError(f"no input {i} on an operation of arity {len(ins)}")
        if ins[i] != out2:
            raise ValueError("colour mismatch in composition")
        if q == self._units.get(out2):
            return p
        if p == self._units.get(out):
            return q
        return self._forced((ins[:i] + ins2 + ins[i + 1 :], out))

    def act(self, p, sigma):
        sigma = tuple(sigma)
        if sigma == tuple(range(len(sigma))):
            return p
        if (p, sigma) in self._sigma:
            return self._sigma[(p, sigma)]
        ins, out = self._sig[p]
        return self._forced((permute(ins, sigma), out))

    def unit(self, c):
        return self._units[c]

    def to_json(self) -> dict:
        return operad_to_json(self)


def _tup(x):
    if isinstance(x, list):
        return tuple(_tup(y) for y in x)
    return x


def _js(x):
    if isinstance(x, tuple):
        return [_js(y) for y in x]
    return x


def operad_from_json(data: Mapping) -> TableOperad:
    """Load {"colours", "ops", "compose", "sigma", "units", "cap"}."""
    colours = [_tup(c) for c in data["colours"]]
    ops = {_tup(o["id"]): (tuple(_tup(x) for x in o["inputs"]), _tup(o["output"])) for o in data["ops"]}
    compose = {
        (_tup(e["p"]), int(e["i"]), _tup(e["q"])): _tup(e["result"]) for e in data.get("compose", [])
    }
    sigma = {(_tup(e["op"]), tuple(e["perm"])): _tup(e["result"]) for e in data.get("sigma", [])}
    units = {_tup(u["colour"]): _tup(u["op"]) for u in data.get("units", [])}
    return TableOperad(colours, ops, compose, sigma, units, data.get("cap"), data.get("name", "table"))


def operad_to_json(p: Operad, max_arity: int | None = None) -> dict:
    """Tabulate p within its cap; every composite and permutation is listed."""
    ops = list(p.all_ops(max_arity))
    ids = {o: i for i, o in enumerate(ops)}

    def ident(o):
        return ids[o] if not isinstance(p, TableOperad) else _js(o)

    entries = []
    for o in ops:
        ins, out = p.signature(o)
        entries.append({"id": ident(o), "inputs": [_js(x) for x in ins], "output": _js(out)})
    comp = []
    top = p.cap if max_arity is None else max_arity
    for a in ops:
        ins, _ = p.signature(a)
        for i, c in enumerate(ins):
            for b in ops:
                if p.signature(b)[1] != c or len(ins) + p.arity(b) - 1 > top:
                    continue
                r = p.compose(a, i, b)
                comp.append({"p": ident(a), "i": i, "q": ident(b), "result": ident(r)})
    sig = []
    if not p.planar:
        for a in ops:
            n = p.arity(a)
            for s in itertools.permutations(range(n)):
                if list(s) != list(range(n)):
                    sig.append({"op": ident(a), "perm": list(s), "result": ident(p.act(a, s))})
    return {
        "name": p.name,
        "colours": [_js(c) for c in p.colours],
        "ops": entries,
        "compose": comp,
        "sigma": sig,
        "units": [{"colour": _js(c), "op": ident(p.unit(c))} for c in p.colours],
        "cap": top,
    }


# -- law checking ------------------------------------------------------------------


def validate(p: Operad, max_arity: int | None = None, max_checks: int = 200_000) -> dict[str, str]:
    """First violating instance per law within the arity bound; empty when lawful."""
    top = p.cap if max_arity is None else min(max_arity, p.cap)
    ops = list(p.all_ops(top))
    by_out: dict = {}
    for o in ops:
        by_out.setdefault(p.signature(o)[1], []).append(o)
    report: dict[str, str] = {}

    def fail(law: str, msg: str) -> None:
        report.setdefault(law, msg)

    def safe(fn, *args):
        try:
            return fn(*args)
        except (KeyError, ValueError, IndexError, CapExceeded) as exc:
            return exc

    for o in ops:
        ins, out = p.signature(o)
        u = p.unit(out)
        r = safe(p.compose, u, 0, o)
        if r != o:
            fail("unit", f"1_{out!r} o_0 {o!r} = {r!r}")
        for i, c in enumerate(ins):
            r = safe(p.compose, o, i, p.unit(c))
            if r != o:
                fail("unit", f"{o!r} o_{i} 1_{c!r} = {r!r}")

    budget = [max_checks]
    for a in ops:
        ins_a, _ = p.signature(a)
        n = len(ins_a)
        for i, c in enumerate(ins_a):
            for b in by_out.get(c, []):
                ins_b, _ = p.signature(b)
                m = len(ins_b)
                if n + m - 1 > top:
                    continue
                ab = safe(p.compose, a, i, b)
                if isinstance(ab, Exception):
                    fail("composition", f"{a!r} o_{i} {b!r} undefined: {ab}")
                    continue
                if tuple(p.signature(ab)[0]) != ins_a[:i] + tuple(ins_b) + ins_a[i + 1 :]:
                    fail("composition", f"{a!r} o_{i} {b!r} has the wrong signature")
                # sequential: (a o_i b) o_{i+j} c == a o_i (b o_j c)
                for j, d in enumerate(ins_b):
                    for c3 in by_out.get(d, []):
                        k = p.arity(c3)
                        if n + m + k - 2 > top or budget[0] <= 0:
                            continue
                        budget[0] -= 1
                        lhs = safe(p.compose, ab, i + j, c3)
                        bc = safe(p.compose, b, j, c3)
                        rhs = bc if isinstance(bc, Exception) else safe(p.compose, a, i, bc)
                        if lhs != rhs or isinstance(lhs, Exception):
                            fail("associativity", f"({a!r} o_{i} {b!r}) o_{i + j} {c3!r}: {lhs!r} != {rhs!r}")
                # parallel: (a o_i b) o_{j+m-1} c == (a o_j c) o_i b for i < j
                for j in range(i + 1, n):
                    for c3 in by_out.get(ins_a[j], []):
                        k = p.arity(c3)
                        if max(n + m + k - 2, n + k - 1) > top or budget[0] <= 0:
                            continue
                        budget[0] -= 1
                        lhs = safe(p.compose, ab, j + m - 1, c3)
                        ac = safe(p.compose, a, j, c3)
                        rhs = ac if isinstance(ac, Exception) else safe(p.compose, ac, i, b)
                        if lhs != rhs or isinstance(lhs, Exception):
                            fail("associativity", f"({a!r} o_{i} {b!r}) o_{j + m - 1} {c3!r}: {lhs!r} != {rhs!r}")
                if p.planar:
                    continue
                # equivariance on both sides
                for sigma in itertools.permutations(range(n)):
                    lhs = safe(p.compose, p.act(a, sigma), i, b) if ins_a[sigma[i]] == c else None
                    if lhs is None:
                        continue
                    base = safe(p.compose, a, sigma[i], b)
                    rhs = base if isinstance(base, Exception) else safe(p.act, base, block_left(sigma, i, m))
                    if lhs != rhs:
                        fail("equivariance", f"sigma={sigma} on {a!r} o_{i} {b!r}: {lhs!r} != {rhs!r}")
                for tau in itertools.permutations(range(m)):
                    lhs = safe(p.compose, a, i, p.act(b, tau))
                    rhs = safe(p.act, ab, block_right(n, i, tau))
                    if lhs != rhs:
                        fail("equivariance", f"tau={tau} on {a!r} o_{i} {b!r}: {lhs!r} != {rhs!r}")

    if not p.planar:
        for a in ops:
            n = p.arity(a)
            perms = list(itertools.permutations(range(n)))
            ident = tuple(range(n))
            if p.act(a, ident) != a:
                fail("action", f"identity does not fix {a!r}")
            if n > 3:
                continue
            for s in perms:
                sa = p.act(a, s)
                if p.signature(sa)[0] != permute(p.signature(a)[0], s):
                    fail("action", f"{s} moves {a!r} to the wrong signature")
                for t in perms:
                    if p.act(sa, t) != p.act(a, perm_compose(s, t)):
                        fail("action", f"(st)* != t* s* at {a!r}, s={s}, t={t}")
    return report


def sigma_is_free(p: Operad, max_arity: int = 3) -> bool:
    for a in p.all_ops(max_arity):
        n = p.arity(a)
        for s in itertools.permutations(range(n)):
            if s != tuple(range(n)) and p.act(a, s) == a:
                return False
    return True


# -- maps of operads ---------------------------------------------------------------


class OperadMap:
    """A colour map together with the images of all operations within the cap."""

    def __init__(self, colour_map: Mapping, op_map: Mapping):
        self.colour_map = dict(colour_map)
        self.op_map = dict(op_map)
        self._key = (tuple(sorted(self.colour_map.items(), key=repr)), tuple(sorted(self.op_map.items(), key=repr)))

    def __call__(self, op):
        return self.op_map[op]

    def colour(self, c):
        return self.colour_map[c]

    def __eq__(self, other):
        return isinstance(other, OperadMap) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"OperadMap({self.colour_map!r})"


def _relations(p: Operad, ops: list, top: int):
    """Index the composition and Sigma-relations among ``ops``.

    Returns, for every op position k, the relations in which that op takes
    part: tuples ("c", a, i, b, r) meaning a o_i b = r and ("s", a, sigma, r)
    meaning sigma* a = r.
    """
    index = {o: k for k, o in enumerate(ops)}
    by_out: dict = {}
    for o in ops:
        by_out.setdefault(p.signature(o)[1], []).append(o)
    involving: list[list] = [[] for _ in ops]
    for a in ops:
        ins, _ = p.signature(a)
        for i, c in enumerate(ins):
            for b in by_out.get(c, ()):
                if len(ins) + p.arity(b) - 1 > top:
                    continue
                r = p.compose(a, i, b)
                if r in index:
                    rel = ("c", a, i, b, r)
                    for x in {a, b, r}:
                        involving[index[x]].append(rel)
        if not p.planar and len(ins) <= 4:
            for s in itertools.permutations(range(len(ins))):
                r = p.act(a, s)
                if r in index and r != a:
                    rel = ("s", a, s, r)
                    for x in {a, r}:
                        involving[index[x]].append(rel)
    return involving


def operad_maps(p: Operad, q: Operad, max_arity: int | None = None) -> list[OperadMap]:
    """Every map p -> q, with operations tracked up to the arity bound."""
    top = p.cap if max_arity is None else min(max_arity, p.cap)
    if isinstance(p, FreeTreeOperad):
        return _free_tree_maps(p, q, top)
    ops = sorted(p.all_ops(top), key=lambda o: (p.arity(o), repr(o)))
    involving = _relations(p, ops, top)
    units = {p.unit(c): c for c in p.colours}
    results: list[OperadMap] = []
    colours = list(p.colours)

    for images in itertools.product(q.colours, repeat=len(colours)):
        f = dict(zip(colours, images))
        g: dict = {}

        def rec(k: int):
            if k == len(ops):
                results.append(OperadMap(f, g))
                return
            o = ops[k]
            ins, out = p.signature(o)
            if o in units:
                cands = [q.unit(f[out])]
            else:
                cands = q.ops(tuple(f[x] for x in ins), f[out])
            for cand in cands:
                g[o] = cand
                if _consistent(q, involving[k], g):
                    rec(k + 1)
                del g[o]

        rec(0)
    return results


def _consistent(q: Operad, rels, g) -> bool:
    for rel in rels:
        if rel[0] == "c":
            _, a, i, b, r = rel
            if a in g and b in g and r in g and q.compose(g[a], i, g[b]) != g[r]:
                return False
        else:
            _, a, s, r = rel
            if a in g and r in g and q.act(g[a], s) != g[r]:
                return False
    return True


def _free_tree_maps(p: FreeTreeOperad, q: Operad, top: int) -> list[OperadMap]:
    """Maps out of a free tree operad: a colouring plus one op per vertex."""
    t = p.tree
    gens = p.generators()
    results = []
    for images in itertools.product(q.colours, repeat=len(t.edges)):
        f = dict(zip(t.edges, images))
        choices = [q.ops(tuple(f[x] for x in ins), f[out]) for ins, out in gens]
        for pick in itertools.product(*choices):
            vmap = dict(zip(gens, pick))
            results.append(OperadMap(f, _extend_free(p, q, f, vmap, top)))
    return results


def _extend_free(p: FreeTreeOperad, q: Operad, f, vmap, top: int) -> dict:
    t = p.tree
    out: dict = {}

    def evaluate(ins: tuple, output: str):
        # image of the unique operation (ins; output), built from the vertex images
        if ins == (output,):
            return q.unit(f[output])
        v = output
        kids = t.vertex_inputs(v)
        parts = []
        flat: list[str] = []
        for c in kids:
            sub = tuple(x for x in ins if t.is_above(x, c))
            parts.append(evaluate(_order_cut(t, sub), c))
            flat.extend(_order_cut(t, sub))
        r = q.multi_compose(vmap[(kids, v)], parts)
        # r has inputs in the order ``flat``; permute to ``ins``
        sigma = tuple(flat.index(x) for x in ins)
        return q.act(r, sigma) if sigma != tuple(range(len(sigma))) else r

    for o in p.all_ops(top):
        out[o] = evaluate(*o)
    return out


def _order_cut(t: Tree, cut) -> tuple:
    pos = t.position
    return tuple(sorted(cut, key=lambda e: pos[e]))


def free_tree_map_value(p: FreeTreeOperad, q: Operad, colouring, vertex_ops) -> dict:
    """Extend a colouring and vertex images to every operation of p."""
    return _extend_free(p, q, colouring, vertex_ops, p.cap)


# -- the Hom operad -------------------------------------------------------------------


class HomOperad(Operad):
    """Colours are maps p -> q; operations are natural families of q-operations."""

    def __init__(self, p: Operad, q: Operad, cap: int = 2, max_arity_p: int | None = None):
        self.p = p
        self.q = q
        self.cap = cap
        self.top_p = p.cap if max_arity_p is None else max_arity_p
        self.maps = operad_maps(p, q, self.top_p)
        self.colours = tuple(range(len(self.maps)))
        self.name = f"Hom({p.name},{q.name})"
        self._p_ops = [o for o in p.all_ops(self.top_p)]
        self._cache: dict = {}

    def ops(self, inputs, output):
        inputs = tuple(inputs)
        if len(inputs) > self.cap:
            raise CapExceeded(f"arity {len(inputs)} above cap {self.cap}")
        key = (inputs, output)
        if key in self._cache:
            return self._cache[key]
        alphas = [self.maps[a] for a in inputs]
        beta = self.maps[output]
        cols = list(self.p.colours)
        choices = [
            self.q.ops(tuple(al.colour(c) for al in alphas), beta.colour(c)) for c in cols
        ]
        found = []
        for pick in itertools.product(*choices):
            fam = dict(zip(cols, pick))
            if self._natural(alphas, beta, fam):
                found.append(tuple(pick))
        self._cache[key] = tuple((inputs, output, fam) for fam in found)
        return self._cache[key]

    def _natural(self, alphas, beta, fam) -> bool:
        q = self.q
        n = len(alphas)
        for x in self._p_ops:
            ins, out = self.p.signature(x)
            k = len(ins)
            if k * n > self.q.cap and not isinstance(self.q, FreeTreeOperad):
                continue
            try:
                lhs = q.multi_compose(beta(x), [fam[c] for c in ins])
                rhs = q.multi_compose(fam[out], [al(x) for al in alphas])
            except CapExceeded:
                continue
            if k == 0 or n == 0:
                if lhs != rhs:
                    return False
                continue
            if lhs != q.act(rhs, sigma_perm(n, k)):
                return False
        return True

    def signature(self, op):
        return op[0], op[1]

    def _fam(self, op) -> dict:
        return dict(zip(self.p.colours, op[2]))

    def compose(self, a, i, b):
        ins, out, fa = a
        ins2, out2, fb = b
        if ins[i] != out2:
            raise ValueError("colour mismatch in composition")
        fam = tuple(self.q.compose(x, i, y) for x, y in zip(fa, fb))
        return (ins[:i] + ins2 + ins[i + 1 :], out, fam)

    def act(self, a, sigma):
        ins, out, fa = a
        return (permute(ins, sigma), out, tuple(self.q.act(x, sigma) for x in fa))

    def unit(self, c):
        al = self.maps[c]
        return ((c,), c, tuple(self.q.unit(al.colour(x)) for x in self.p.colours))


def hom_operad(p: Operad, q: Operad, cap: int = 2) -> HomOperad:
    return HomOperad(p, q, cap)


def unit_operad() -> FreeTreeOperad:
    from .tree import eta

    return FreeTreeOperad(eta())


def operads_isomorphic(p: Operad, q: Operad, max_arity: int | None = None) -> bool:
    """Search for a colour bijection matching op counts per signature, then
    confirm by finding an operad isomorphism among the maps."""
    top = min(p.cap, q.cap) if max_arity is None else max_arity
    return find_isomorphism(p, q, top) is not None


def find_isomorphism(p: Operad, q: Operad, top: int):
    if len(p.colours) != len(q.colours):
        return None
    pcol, qcol = list(p.colours), list(q.colours)
    pops = list(p.all_ops(top))
    qcount: dict = {}
    for o in q.all_ops(top):
        qcount[q.signature(o)] = qcount.get(q.signature(o), 0) + 1
    pcount: dict = {}
    for o in pops:
        pcount[p.signature(o)] = pcount.get(p.signature(o), 0) + 1
    if sum(pcount.values()) != sum(qcount.values()):
        return None
    for perm in itertools.permutations(qcol):
        f = dict(zip(pcol, perm))
        if all(qcount.get((tuple(f[x] for x in s[0]), f[s[1]]), 0) == k for s, k in pcount.items()):
            m = _op_bijection(p, q, f, pops, top)
            if m is not None:
                return m
    return None


def _op_bijection(p, q, f, pops, top):
    """Backtrack for a structure-preserving bijection over the given colour map."""
    pops = sorted(pops, key=lambda o: (p.arity(o), repr(o)))
    involving = _relations(p, pops, top)
    units = {p.unit(c): c for c in p.colours}
    g: dict = {}
    used: set = set()

    def rec(k):
        if k == len(pops):
            return OperadMap(f, dict(g))
        o = pops[k]
        ins, out = p.signature(o)
        cands = [q.unit(f[out])] if o in units else q.ops(tuple(f[x] for x in ins), f[out])
        for c in cands:
            if c in used:
                continue
            g[o] = c
            used.add(c)
            if _consistent(q, involving[k], g):
                r = rec(k + 1)
                if r is not None:
                    return r
            used.discard(c)
            del g[o]
        return None

    return rec(0)


def check_operad_map(
    p: Operad, q: Operad, colour_map: Mapping, op_map, max_arity: int, bijective: bool = False
) -> list[str]:
    """Problems with a proposed map (op_map is a callable) within the arity bound."""
    problems: list[str] = []
    ops = list(p.all_ops(max_arity))
    by_out: dict = {}
    for o in ops:
        by_out.setdefault(p.signature(o)[1], []).append(o)
    for c in p.colours:
        if op_map(p.unit(c)) != q.unit(colour_map[c]):
            problems.append(f"unit of {c!r} not preserved")
    for o in ops:
        ins, out = p.signature(o)
        want = (tuple(colour_map[x] for x in ins), colour_map[out])
        if tuple(q.signature(op_map(o))[0]) != want[0] or q.signature(op_map(o))[1] != want[1]:
            problems.append(f"{o!r} sent to the wrong signature")
    for a in ops:
        ins, _ = p.signature(a)
        for i, c in enumerate(ins):
            for b in by_out.get(c, ()):
                if len(ins) + p.arity(b) - 1 > max_arity:
                    continue
                if op_map(p.compose(a, i, b)) != q.compose(op_map(a), i, op_map(b)):
                    problems.append(f"composition {a!r} o_{i} {b!r} not preserved")
        if not p.planar and len(ins) <= 4:
            for s in itertools.permutations(range(len(ins))):
                if op_map(p.act(a, s)) != q.act(op_map(a), s):
                    problems.append(f"action of {s} on {a!r} not preserved")
    if bijective:
        if len(set(colour_map.values())) != len(q.colours) or len(colour_map) != len(p.colours):
            problems.append("colour map is not a bijection")
        images = {op_map(o) for o in ops}
        qops = set(q.all_ops(max_arity))
        if len(images) != len(ops) or images != qops:
            problems.append(f"op map is not a bijection ({len(ops)} ops, {len(images)} images, {len(qops)} targets)")
    return problems


def bv_tensor(p: Operad, q: Operad, max_arity: int | None = None, max_nodes: int | None = None):
    """Boardman-Vogt tensor by congruence closure; see :mod:`dendro.presented`."""
    from .presented import bv_tensor as _bv

    return _bv(p, q, max_arity, max_nodes)
