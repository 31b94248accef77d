
from dendro.category import linear_order, terminal_category
from dendro.dset import (
    Grothendieck,
    check_functoriality,
    codes_by_size,
    i_shriek,
    linear_code,
    nerve,
    nerve_map,
)
from dendro.kan import check_inner_kan
from dendro.operad import MeetOperad, a_operad, j_shriek, validate
from dendro.simplicial import CategoryNerve, Diagram, Simplex, SimplicialTotal, grothendieck_category

LINEAR = [linear_code(n) for n in range(3)]


def _two_level():
    p0, p1 = a_operad("xy", 4), a_operad("x", 4)
    x0, x1 = nerve(p0, 4), nerve(p1, 4)
    g = nerve_map({c: c for c in p1.colours}, lambda o: o)
    return Grothendieck(linear_order(1), {0: x0, 1: x1}, lambda a, b, x: x if a == b else g(x), bound=3)


def test_meet_operad_is_lawful():
    assert validate(MeetOperad(linear_order(2), cap=3)) == {}


def test_terminal_base():
    x = nerve(a_operad("xy", 4), 4)
    g = Grothendieck(terminal_category(), {"*": x}, lambda a, b, z: z, bound=3)
    for c in codes_by_size(3):
        assert len(g.carrier(c)) == len(x.carrier(c))


def test_two_level_is_functorial_and_kan():
    g = _two_level()
    assert check_functoriality(g, 3, pairs=False) == []
    assert check_inner_kan(g, 3).strict


def test_nerve_commutes_with_grothendieck():
    c1, c0 = linear_order(1), linear_order(2)
    om = {0: 0, 1: 2}

    def amap(f):
        return (om[f[0]], om[f[1]])

    def functor(f):
        a, b = f
        if a == b:
            c = c0 if a == 0 else c1
            return ({o: o for o in c.objects}, {h: h for h in c.arrows})
        return (om, {h: amap(h) for h in c1.arrows})

    total = grothendieck_category(linear_order(1), {0: c0, 1: c1}, functor)
    assert total.check_laws() == []
    values = {0: nerve(j_shriek(c0), 3), 1: nerve(j_shriek(c1), 3)}
    g = nerve_map(om, amap)
    gd = Grothendieck(linear_order(1), values, lambda a, b, x: x if a == b else g(x), bound=3)
    nc = CategoryNerve(total, 3)
    for n, code in enumerate(LINEAR):
        assert len(gd.carrier(code)) == len(nc.simplices(n))
    assert all(not gd.carrier(c) for c in codes_by_size(3) if c not in LINEAR)


def test_i_shriek_commutes_with_grothendieck():
    base = linear_order(1)
    x0, x1 = Simplex(1, 3), Simplex(0, 3)

    def spull(f, x):
        a, b = f
        return x if a == b else tuple(1 for _ in x)

    st = SimplicialTotal(Diagram(base, {0: x0, 1: x1}, spull), top=2)
    gi = Grothendieck(base, {0: i_shriek(x0, 3), 1: i_shriek(x1, 3)}, lambda a, b, x: spull((a, b), x), bound=3)
    for n, code in enumerate(LINEAR):
        assert len(gi.carrier(code)) == len(st.simplices(n))
    assert all(not gi.carrier(c) for c in codes_by_size(3) if c not in LINEAR)
