"""Command line front end: ``dendro <subcommand> ...``.

Exit codes: 0 success or property holds, 1 counterexample or violation,
2 bound insufficient, 64 usage error or malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from .category import poset
from .dset import (
    DSet,
    Grothendieck,
    InternalHom,
    TensorDSet,
    dset_from_json,
    dset_to_json,
    is_normal,
    nerve,
    tau_d,
)
from .omega import Mor, factorize, hom
from .operad import CapExceeded, free_tree_operad, operad_from_json, operad_to_json, validate
from .tree import TreeError, parse_tree, render_tree, tree_from_json, tree_to_json

OK, VIOLATION, BOUND, USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE)


def _load(path: str) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def _tree(text: str):
    if text.lstrip().startswith("{"):
        return tree_from_json(json.loads(text))
    return parse_tree(text)


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("caps and bounds must be >= 1")
    return n


def emit_report(results: Any) -> str:
    """Deterministic JSON text."""
    return json.dumps(results, sort_keys=True, indent=2, default=_default)


def _default(x):
    if isinstance(x, (set, frozenset)):
        return sorted(x, key=repr)
    if isinstance(x, Mor):
        return _mor_json(x)
    return repr(x)


def _mor_json(m: Mor) -> dict:
    return {"src": m.src.code, "dst": m.dst.code, "map": {e: m.map[e] for e in m.src.edges}}


def _operad(data):
    """An operad from JSON; a "tree" field marks the free operad of that tree."""
    if "tree" in data:
        return free_tree_operad(tree_from_json(data["tree"]))
    return operad_from_json(data)


def _cat_operad(data):
    from .wcat import DiscreteCatOperad, GradedCatOperad

    kind = data.get("kind")
    base = _operad(data["operad"])
    if kind == "discrete":
        return DiscreteCatOperad(base)
    if kind == "graded":
        return GradedCatOperad(base, int(data.get("m", 2)))
    raise UsageError(f"unknown CatOperad kind {kind!r}")


# -- subcommands ---------------------------------------------------------------------------


def cmd_parse(a) -> tuple[int, Any]:
    t = _tree(a.tree)
    return OK, {"tree": tree_to_json(t), "code": t.code, "edges": list(t.edges)}


def cmd_render(a):
    t = _tree(a.tree)
    if a.format == "json":
        return OK, tree_to_json(t)
    return OK, render_tree(t, a.format)


def cmd_hom(a):
    s, t = _tree(a.src), _tree(a.dst)
    maps = [{e: m.map[e] for e in s.edges} for m in hom(s, t)]
    return OK, sorted(maps, key=lambda d: json.dumps(d, sort_keys=True))


def cmd_factorize(a):
    data = _load(a.morphism)
    m = Mor(tree_from_json(data["src"]), tree_from_json(data["dst"]), data["map"], check=True)
    fac = factorize(m)
    return OK, {
        "degeneracies": [_mor_json(d) for d in fac.degeneracies],
        "iso": _mor_json(fac.iso),
        "faces": [_mor_json(f) for f in fac.faces],
        "recomposes": fac.recompose() == m,
    }


def cmd_nerve(a):
    p = _operad(_load(a.operad))
    return OK, dset_to_json(nerve(p, a.bound), a.bound)


def cmd_tau(a):
    x = dset_from_json(_load(a.dset))
    p = tau_d(x, a.cap)
    out = operad_to_json(p, a.cap)
    out["exact"] = bool(getattr(p, "exact", False))
    return OK, out


def cmd_tensor(a):
    from .presented import bv_tensor

    p = _operad(_load(a.left))
    q = _operad(_load(a.right))
    r = bv_tensor(p, q, max_arity=a.cap)
    out = operad_to_json(r, a.cap)
    out["exact"] = bool(r.exact)
    return OK, out


def cmd_tensor_dset(a):
    x = dset_from_json(_load(a.left))
    y = dset_from_json(_load(a.right))
    t = TensorDSet(x, y, a.bound)
    out = dset_to_json(t, a.bound)
    out["provisional"] = t.provisional
    return OK, out


def cmd_hom_dset(a):
    x = dset_from_json(_load(a.left))
    y = dset_from_json(_load(a.right))
    h = InternalHom(x, y, a.bound)
    out = dset_to_json(h, a.bound)
    out["provisional"] = h.provisional
    return OK, out


def cmd_normal(a):
    x = dset_from_json(_load(a.dset))
    ok, w = is_normal(x)
    witness = None if w is None else {"tree": w[0], "dendrex": repr(w[1]), "automorphism": _mor_json(w[2])}
    return (OK if ok else VIOLATION), {"normal": ok, "witness": witness}


def cmd_kan_check(a):
    from .kan import check_inner_kan

    x = dset_from_json(_load(a.dset))
    if a.size > x.bound:
        return BOUND, {"error": f"size {a.size} above the bound {x.bound} of the input"}
    rep = check_inner_kan(x, a.size)
    good = rep.strict if a.strict else rep.inner_kan
    return (OK if good else VIOLATION), {"verdict": rep.verdict, "records": rep.records()}


class _Tagged(DSet):
    """Dendrices of a table tagged with their tree code, so ids are global."""

    def __init__(self, inner: DSet):
        self.inner = inner
        self.bound = inner.bound
        self.name = inner.name

    def carrier(self, code):
        return tuple((code, y) for y in self.inner.carrier(code))

    def act(self, alpha, x):
        return (alpha.src.code, self.inner.act(alpha, x[1]))


def cmd_grothendieck(a):
    data = _load(a.diagram)
    elements = data["base"]["elements"]
    order = {tuple(p) for p in data["base"]["leq"]}
    base = poset(elements, lambda x, y: x == y or (x, y) in order)
    values = {k: _Tagged(dset_from_json(v)) for k, v in data["values"].items()}
    maps = {(m["arrow"][0], m["arrow"][1]): m["map"] for m in data.get("maps", [])}
    for x, y in order:
        if x != y and (x, y) not in maps:
            raise UsageError(f"{a.diagram}: no restriction map given for {x} <= {y}")

    def pull(x, y, z):
        return z if x == y else (z[0], maps[(x, y)][z[0]][z[1]])

    g = Grothendieck(base, values, pull, a.bound)
    return OK, dset_to_json(g, a.bound)


def cmd_hcnerve(a):
    from .wcat import HCNerve

    p = _cat_operad(_load(a.operad))
    return OK, dset_to_json(HCNerve(p, a.bound), a.bound)


def cmd_wcube(a):
    from .wcat import w_linear

    c = w_linear(a.n).hom(a.i, a.j)
    return OK, {
        "objects": [list(o) if isinstance(o, tuple) else o for o in c.objects],
        "arrows": len(c.arrows),
    }


def cmd_validate(a):
    p = _operad(_load(a.operad))
    problems = validate(p, a.cap)
    return (OK if not problems else VIOLATION), problems


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="dendro", description="Dendroidal sets and coloured operads at desk scale.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(fn=fn)
        return p

    p = add("parse", cmd_parse, "parse a tree term")
    p.add_argument("tree")
    p = add("render", cmd_render, "render a tree")
    p.add_argument("tree")
    p.add_argument("--format", choices=["term", "dot", "json"], default="dot")
    p = add("hom", cmd_hom, "list the morphisms S -> T")
    p.add_argument("src")
    p.add_argument("dst")
    p = add("factorize", cmd_factorize, "factor a morphism into degeneracies, an iso and faces")
    p.add_argument("morphism")
    p = add("nerve", cmd_nerve, "dendroidal nerve of an operad")
    p.add_argument("operad")
    p.add_argument("--bound", type=_positive, default=3)
    p = add("tau", cmd_tau, "operad generated by a dendroidal set")
    p.add_argument("dset")
    p.add_argument("--cap", type=_positive, default=2)
    p = add("tensor", cmd_tensor, "Boardman-Vogt tensor of two operads")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--cap", type=_positive, default=3)
    for name, fn, text in (
        ("tensor-dset", cmd_tensor_dset, "tensor of two dendroidal sets"),
        ("hom-dset", cmd_hom_dset, "internal hom of two dendroidal sets"),
    ):
        p = add(name, fn, text)
        p.add_argument("left")
        p.add_argument("right")
        p.add_argument("--bound", type=_positive, default=3)
    p = add("normal", cmd_normal, "normality with a witness")
    p.add_argument("dset")
    p = add("kan-check", cmd_kan_check, "inner Kan condition up to a size")
    p.add_argument("dset")
    p.add_argument("--size", type=_positive, default=3)
    p.add_argument("--strict", action="store_true")
    p = add("grothendieck", cmd_grothendieck, "total dendroidal set of a diagram over a meet poset")
    p.add_argument("diagram")
    p.add_argument("--bound", type=_positive, default=3)
    p = add("hcnerve", cmd_hcnerve, "homotopy coherent nerve of a Cat-operad")
    p.add_argument("operad")
    p.add_argument("--bound", type=_positive, default=3)
    p = add("wcube", cmd_wcube, "the hom-groupoid W[n](i, j)")
    p.add_argument("n", type=int)
    p.add_argument("i", type=int)
    p.add_argument("j", type=int)
    p = add("validate", cmd_validate, "check the operad laws")
    p.add_argument("operad")
    p.add_argument("--cap", type=_positive, default=None)
    return ap


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        code, result = args.fn(args)
    except UsageError as exc:
        print(f"dendro: {exc}", file=sys.stderr)
        return USAGE
    except CapExceeded as exc:
        out.write(emit_report({"error": str(exc)}) + "\n")
        return BOUND
    except (TreeError, KeyError, ValueError) as exc:
        print(f"dendro: bad input: {exc}", file=sys.stderr)
        return USAGE
    if isinstance(result, str):
        out.write(result)
    else:
        out.write(emit_report(result) + "\n")
    return code


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
