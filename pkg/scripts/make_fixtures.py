"""Regenerate the JSON fixtures under fixtures/."""

import json
from pathlib import Path

from dendro.dset import dset_to_json, i_shriek, nerve
from dendro.operad import Comm, a_operad, free_tree_operad, operad_to_json
from dendro.simplicial import Product, Simplex
from dendro.tree import parse_tree

OUT = Path(__file__).resolve().parent.parent / "fixtures"


def dump(name, data):
    (OUT / name).write_text(json.dumps(data, sort_keys=True, indent=1) + "\n")


def main():
    OUT.mkdir(exist_ok=True)
    a_s = a_operad(["x", "y"], cap=4)
    dump("A_S.json", operad_to_json(a_s, 3))
    dump("comm.json", operad_to_json(Comm(cap=3), 3))
    c1 = operad_to_json(free_tree_operad(parse_tree("a(b)")), 2)
    c1["tree"] = "a(b)"
    dump("omega_c1.json", c1)
    dump("nerve_AS.json", dset_to_json(nerve(a_s, 4), 4))
    dump("nerve_comm.json", dset_to_json(nerve(Comm(cap=4), 3), 3))
    d1 = Simplex(1, top=3)
    dump("sq_left.json", dset_to_json(i_shriek(d1, 3), 3))
    dump("sq_right.json", dset_to_json(i_shriek(d1, 3), 3))
    dump("sq_product.json", dset_to_json(i_shriek(Product(d1, d1), 3), 3))
    dump("cat_discrete_AS.json", {"kind": "discrete", "operad": operad_to_json(a_s, 3)})
    dump("cat_graded_comm.json", {"kind": "graded", "m": 2, "operad": operad_to_json(Comm(cap=2), 2)})
    # X0 = N(A_xy) over the bottom, X1 = N(A_x) over the top, restricted by inclusion
    big = dset_to_json(nerve(a_s, 3), 3)
    small_nerve = nerve(a_operad(["x"], cap=4), 3)
    small = dset_to_json(small_nerve, 3)
    big_ids = {c: {y: i for i, y in enumerate(nerve(a_s, 3).carrier(c))} for c in big["carrier"]}
    incl = {
        c: {str(i): str(big_ids[c][y]) for i, y in enumerate(small_nerve.carrier(c))}
        for c in small["carrier"]
    }
    dump("grothendieck_meet.json", {
        "base": {"elements": ["0", "1"], "leq": [["0", "1"]]},
        "values": {"0": big, "1": small},
        "maps": [{"arrow": ["0", "1"], "map": incl}],
    })
    dump("morphism.json", {"src": "a(b)", "dst": "x(y(z))", "map": {"a": "x", "b": "z"}})


if __name__ == "__main__":
    main()
