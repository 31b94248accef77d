"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Heavier criteria also assert their wall clock budget.
"""

import itertools
import json
import math
import time

import pytest

from conftest import ROOT, RUNNING
from dendro.category import linear_order
from dendro.dset import (
    Grothendieck,
    InternalHom,
    Representable,
    TensorDSet,
    check_dendmap,
    codes_by_size,
    diagonal_map,
    i_shriek,
    i_star,
    is_normal,
    linear_code,
    nerve,
    nerve_map,
    nondegenerate,
    tau_counit_map,
    tau_d,
)
from dendro.kan import check_inner_kan
from dendro.omega import (
    canonical_hom,
    compose,
    factorize,
    hom,
    identity,
    is_linear_code,
    mor_to_monotone,
    op_exists,
    op_exists_bfs,
)
from dendro.operad import (
    Comm,
    FreeTreeOperad,
    a_operad,
    check_operad_map,
    find_isomorphism,
    free_tree_operad,
    j_shriek,
    operad_from_json,
    perm_compose,
    sigma_perm,
)
from dendro.presented import bv_tensor
from dendro.simplicial import (
    CategoryNerve,
    Diagram,
    Product,
    Simplex,
    SimplicialTotal,
    boundary,
    grothendieck_category,
)
from dendro.simplicial import horn as simplicial_horn
from dendro.simplicial import is_inner_kan as simplicial_inner_kan
from dendro.tree import canonical_tree, enumerate_trees, linear_tree, parse_tree
from dendro.wcat import (
    H,
    DiscreteCatOperad,
    GradedCatOperad,
    HCNerve,
    check_prop72,
    discrete_comparison,
    w_linear,
    z2_comm,
)


@pytest.fixture
def verdict(capsys, request):
    """Print one PASS/FAIL line for the criterion, then assert."""

    def _report(ok: bool, detail: str = ""):
        line = f"[{'PASS' if ok else 'FAIL'}] {request.node.name}" + (f": {detail}" if detail else "")
        with capsys.disabled():
            print("\n" + line)
        assert ok, line

    return _report


def _nerve_fixtures(bound):
    return [
        nerve(a_operad("xy", bound), bound),
        nerve(Comm(bound), bound),
        nerve(free_tree_operad(parse_tree(RUNNING)), bound),
    ]


# 1 ------------------------------------------------------------------------------------------


def test_c01_omega_category_laws(verdict):
    t0 = time.time()
    codes = enumerate_trees(4)
    ms = [m for s in codes for t in codes for m in canonical_hom(s, t)]
    by_src: dict = {}
    for m in ms:
        by_src.setdefault(m.src.code, []).append(m)
    bad = triples = 0
    for f in ms:
        if compose(identity(f.dst), f) != f or compose(f, identity(f.src)) != f:
            bad += 1
        for g in by_src[f.dst.code]:
            gf = compose(g, f)
            for h in by_src[g.dst.code]:
                triples += 1
                if compose(h, gf) != compose(compose(h, g), f):
                    bad += 1
    dt = time.time() - t0
    verdict(bad == 0 and dt < 60, f"{len(ms)} morphisms, {triples} triples, {bad} violations, {dt:.1f}s")


# 2 ------------------------------------------------------------------------------------------


def test_c02_op_exists_matches_bfs(verdict):
    checks = bad = 0
    for code in enumerate_trees(6):
        t = canonical_tree(code)
        for r in range(len(t.edges) + 1):
            for ins in itertools.combinations(t.edges, r):
                for out in t.edges:
                    checks += 1
                    bad += op_exists(t, ins, out) != op_exists_bfs(t, ins, out)
    verdict(bad == 0, f"{checks} checks, {bad} disagreements")


# 3 ------------------------------------------------------------------------------------------


def test_c03_factorize_recomposes(verdict):
    codes = enumerate_trees(5)
    total = bad = 0
    for s in codes:
        for t in codes:
            for m in canonical_hom(s, t):
                total += 1
                fac = factorize(m)
                ok = fac.recompose() == m
                # elementary pieces: a degeneracy drops one unary vertex, a face adds one vertex
                ok = ok and all(len(d.dst) == len(d.src) - 1 for d in fac.degeneracies)
                ok = ok and all(
                    len(set(f.map.values())) == len(f.src) and len(f.dst.vertices) == len(f.src.vertices) + 1
                    for f in fac.faces
                )
                bad += not ok
    verdict(total > 0 and bad == 0, f"{total} morphisms, {bad} failures")


# 4 ------------------------------------------------------------------------------------------


def test_c04_linear_embedding_and_sieve(verdict):
    counts_ok = True
    for n in range(4):
        for m in range(4):
            hs = hom(linear_tree(n), linear_tree(m))
            # monotone maps [n] -> [m] are multisets of size n+1 from m+1 values
            counts_ok &= len(hs) == math.comb(n + m + 1, n + 1)
            counts_ok &= len({mor_to_monotone(f) for f in hs}) == len(hs)
    sample = len(hom(linear_tree(1), linear_tree(2)))
    sieve_ok = True
    linear = [linear_code(m) for m in range(5)]
    for code in enumerate_trees(5):
        for lc in linear:
            if canonical_hom(code, lc) and not is_linear_code(code):
                sieve_ok = False
    verdict(counts_ok and sample == 6 and sieve_ok, f"hom([1],[2]) = {sample}, sieve {sieve_ok}")


# 5 ------------------------------------------------------------------------------------------


def test_c05_nerves_strict_inner_kan(verdict):
    t0 = time.time()
    results = []
    for n in _nerve_fixtures(4):
        rep = check_inner_kan(n, 4)
        results.append((n.name, rep.verdict, len(rep.counts)))
    dt = time.time() - t0
    ok = all(v == "strict inner-Kan" and k > 0 for _, v, k in results) and dt < 300
    verdict(ok, f"{results}, {dt:.1f}s")


# 6 ------------------------------------------------------------------------------------------


def test_c06_tau_of_nerve(verdict):
    out = []
    ok = True
    for p in [a_operad("xy", 6), Comm(6), free_tree_operad(parse_tree(RUNNING))]:
        t = tau_d(nerve(p, 6), 4)
        cm, om = tau_counit_map(p, t)
        problems = check_operad_map(p, t, cm, om, 4, bijective=True)
        ok &= bool(t.exact) and not problems
        out.append((p.name, bool(t.exact), len(problems)))
    verdict(ok, str(out))


# 7 ------------------------------------------------------------------------------------------


def test_c07_diagonal_bijective_and_natural(verdict):
    t0 = time.time()
    ok = True
    notes = []
    for m1, m2 in [(1, 1), (2, 1)]:
        x, y = Simplex(m1, top=3), Simplex(m2, top=3)
        ten = TensorDSet(i_shriek(x, 5), i_shriek(y, 5), bound=4)
        prod = i_shriek(Product(x, y), 4)
        f = diagonal_map(x, y, ten)
        for code in codes_by_size(4):
            src, dst = prod.carrier(code), ten.carrier(code)
            image = {f(code, z) for z in src}
            ok &= len(image) == len(src) == len(dst) and image == set(dst)
        natural = check_dendmap(f, prod, ten, 4) == []
        ok &= natural
        notes.append((m1, m2, natural))
    dt = time.time() - t0
    verdict(ok and dt < 300, f"{notes}, {dt:.1f}s")


# 8 ------------------------------------------------------------------------------------------


def test_c08_tau_of_tensor_is_bv(verdict):
    rep = Representable(linear_tree(1), 4)
    tau = tau_d(TensorDSet(rep, rep, bound=4), 2)
    bv = bv_tensor(FreeTreeOperad(linear_tree(1)), FreeTreeOperad(linear_tree(1)))
    iso = find_isomorphism(tau, bv, 2)
    ok = bool(tau.exact) and bool(bv.exact) and iso is not None
    verdict(ok, f"colours {len(tau.colours)}/{len(bv.colours)}, exact {tau.exact}/{bv.exact}")


# 9 ------------------------------------------------------------------------------------------


def test_c09_sigma(verdict):
    ok = True
    for n in range(1, 6):
        for m in range(1, 6):
            s, t = sigma_perm(n, m), sigma_perm(m, n)
            ok &= all(s[k * n + j] == j * m + k for k in range(m) for j in range(n))
            ok &= all(t[s[x]] == x for x in range(n * m))
            ok &= tuple(range(n * m)) in (perm_compose(t, s), perm_compose(s, t))
    verdict(ok, "n, m <= 5")


# 10 -----------------------------------------------------------------------------------------


def test_c10_normality(verdict):
    a = is_normal(i_shriek(Simplex(2, top=3), 3))[0]
    b = is_normal(nerve(a_operad("xy", 3), 3))[0]
    comm = nerve(Comm(3), 3)
    c, w = is_normal(comm)
    swap = (
        w is not None
        and w[0] == "(**)"
        and w[2].map["0"] == "1"
        and w[2].map["1"] == "0"
        and w[1] in nondegenerate(comm, "(**)")
    )
    verdict(a and b and not c and swap, f"i_!D[2] {a}, N(A_S) {b}, N(Comm) {c}, witness {w and w[0]}")


# 11 -----------------------------------------------------------------------------------------


def test_c11_simplicial_vs_dendroidal_kan(verdict):
    fixtures = [
        Simplex(2, 3),
        simplicial_horn(2, 1, 3),
        boundary(2, 3),
        Product(Simplex(1, 3), Simplex(1, 3)),
    ]
    rows = []
    for s in fixtures:
        left = simplicial_inner_kan(s, 3)
        right = check_inner_kan(i_shriek(s, 4), 4, linear_only=True).inner_kan
        rows.append((s.name, left, right))
    agree = all(a == b for _, a, b in rows)
    mixed = any(a for _, a, _ in rows) and not all(a for _, a, _ in rows)
    dend = _nerve_fixtures(4) + [HCNerve(z2_comm(4), 4)]
    restricted = []
    for x in dend:
        if check_inner_kan(x, 3).inner_kan:
            restricted.append((x.name, simplicial_inner_kan(i_star(x, 3), 3)))
    back = len(restricted) == len(dend) and all(v for _, v in restricted)
    verdict(agree and mixed and back, f"{rows}; i* {restricted}")


# 12 -----------------------------------------------------------------------------------------


def test_c12_internal_hom_inner_kan(verdict):
    t0 = time.time()
    x = i_shriek(Simplex(1, top=3), 4)
    y = nerve(a_operad("xy", 6), 6)
    rep = check_inner_kan(InternalHom(x, y, 3), 3)
    dt = time.time() - t0
    verdict(rep.inner_kan and len(rep.counts) > 0 and dt < 600, f"{rep.verdict}, {len(rep.counts)} horn maps, {dt:.1f}s")


# 13 -----------------------------------------------------------------------------------------


def test_c13_grothendieck(verdict):
    # two-level diagram over the meet poset 0 <= 1
    x0, x1 = nerve(a_operad("xy", 4), 4), nerve(a_operad("x", 4), 4)
    values_kan = check_inner_kan(x0, 3).inner_kan and check_inner_kan(x1, 3).inner_kan
    g = nerve_map({c: c for c in a_operad("x", 4).colours}, lambda o: o)
    total = Grothendieck(linear_order(1), {0: x0, 1: x1}, lambda a, b, z: z if a == b else g(z), bound=3)
    kan = check_inner_kan(total, 3).inner_kan

    # integral of nerves of categories against the nerve of the category of elements
    c0, c1 = linear_order(2), linear_order(1)
    om = {0: 0, 1: 2}

    def amap(f):
        return (om[f[0]], om[f[1]])

    def functor(f):
        a, b = f
        if a == b:
            c = c0 if a == 0 else c1
            return ({o: o for o in c.objects}, {h: h for h in c.arrows})
        return (om, {h: amap(h) for h in c1.arrows})

    elements = grothendieck_category(linear_order(1), {0: c0, 1: c1}, functor)
    gn = nerve_map(om, amap)
    lhs = Grothendieck(
        linear_order(1),
        {0: nerve(j_shriek(c0), 3), 1: nerve(j_shriek(c1), 3)},
        lambda a, b, z: z if a == b else gn(z),
        bound=3,
    )
    rhs = CategoryNerve(elements, 3)
    linear = [linear_code(n) for n in range(3)]
    nerve_ok = all(len(lhs.carrier(c)) == len(rhs.simplices(n)) for n, c in enumerate(linear))
    nerve_ok &= all(not lhs.carrier(c) for c in codes_by_size(3) if c not in linear)

    # i_! commutes with the integral
    s0, s1 = Simplex(1, 3), Simplex(0, 3)

    def spull(f, z):
        a, b = f
        return z if a == b else tuple(1 for _ in z)

    st = SimplicialTotal(Diagram(linear_order(1), {0: s0, 1: s1}, spull), top=2)
    gi = Grothendieck(
        linear_order(1), {0: i_shriek(s0, 3), 1: i_shriek(s1, 3)}, lambda a, b, z: spull((a, b), z), bound=3
    )
    shriek_ok = all(len(gi.carrier(c)) == len(st.simplices(n)) for n, c in enumerate(linear))
    shriek_ok &= all(not gi.carrier(c) for c in codes_by_size(3) if c not in linear)

    verdict(values_kan and kan and nerve_ok and shriek_ok, f"kan {kan}, nerve {nerve_ok}, i_! {shriek_ok}")


# 14 -----------------------------------------------------------------------------------------


def _shipped_cat_operads():
    out = []
    for name in ("cat_discrete_AS.json", "cat_graded_comm.json"):
        data = json.loads((ROOT / "fixtures" / name).read_text())
        base = operad_from_json(data["operad"])
        if data["kind"] == "discrete":
            out.append(DiscreteCatOperad(base))
        else:
            out.append(GradedCatOperad(base, int(data["m"])))
    return out


def test_c14_w_and_hc_layer(verdict):
    laws = H.check_laws() == []
    cube = len(w_linear(3).hom(0, 3).objects)
    p = a_operad("xy", 4)
    hc, nv = HCNerve(DiscreteCatOperad(p), 3), nerve(p, 3)
    f = discrete_comparison(hc)
    bij = all(
        len({f(c, z) for z in hc.carrier(c)}) == len(hc.carrier(c)) == len(nv.carrier(c))
        and {f(c, z) for z in hc.carrier(c)} == set(nv.carrier(c))
        for c in codes_by_size(3)
    )
    natural = check_dendmap(f, hc, nv, 3) == []
    prop = [(q.name, check_prop72(q, 3).inner_kan) for q in _shipped_cat_operads() + [z2_comm(4)]]
    ok = laws and cube == 4 and bij and natural and all(v for _, v in prop)
    verdict(ok, f"laws {laws}, |Ob W[3](0,3)| = {cube}, hcN(disc) iso {bij and natural}, prop {prop}")
