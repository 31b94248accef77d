import io
import json
import subprocess
import sys

import jsonschema
from referencing import Registry, Resource

from conftest import ROOT
from dendro.cli import emit_report, run
from dendro.dset import codes_by_size, dset_from_json

SCHEMAS = ROOT / "schemas"
FIX = ROOT / "fixtures"


def _registry():
    res = []
    for p in SCHEMAS.glob("*.json"):
        res.append((p.name, Resource.from_contents(json.loads(p.read_text()))))
    return Registry().with_resources(res)


REGISTRY = _registry()


def check(doc, schema_name):
    schema = json.loads((SCHEMAS / schema_name).read_text())
    jsonschema.Draft202012Validator(schema, registry=REGISTRY).validate(doc)


def call(*argv):
    buf = io.StringIO()
    code = run([str(a) for a in argv], out=buf)
    text = buf.getvalue()
    return code, text


def call_json(*argv):
    code, text = call(*argv)
    return code, json.loads(text)


def test_schemas_are_valid():
    for p in SCHEMAS.glob("*.json"):
        jsonschema.Draft202012Validator.check_schema(json.loads(p.read_text()))


def test_hom():
    code, maps = call_json("hom", "x(y)", "0(1(2))")
    assert code == 0 and len(maps) == 6
    check(maps, "edge_maps.schema.json")


def test_hom_empty_is_an_empty_array():
    code, text = call("hom", "a(b,c)", "x(y)")
    assert code == 0 and json.loads(text) == []


def test_emit_report_empty():
    assert json.loads(emit_report([])) == []


def test_parse_and_render():
    code, doc = call_json("parse", "a(b(e,f),c,d())")
    assert code == 0
    check(doc, "parse.schema.json")
    check(doc["tree"], "tree.schema.json")
    code, doc = call_json("render", "a(b,c)", "--format", "json")
    check(doc, "tree.schema.json")
    code, dot = call("render", "a(b(e,f),c,d())", "--format", "dot")
    assert code == 0 and dot.startswith("digraph")
    code, term = call("render", "e", "--format", "term")
    assert term == "e"


def test_factorize():
    code, doc = call_json("factorize", FIX / "morphism.json")
    assert code == 0 and doc["recomposes"]
    check(doc, "factorization.schema.json")
    check(json.loads((FIX / "morphism.json").read_text()), "morphism.schema.json")


def test_nerve_and_validate():
    code, doc = call_json("nerve", FIX / "comm.json", "--bound", "3")
    assert code == 0
    check(doc, "dset.schema.json")
    assert doc["carrier"]["*"] == ["0"]
    code, doc = call_json("validate", FIX / "A_S.json")
    assert code == 0 and doc == {}
    check(doc, "validate.schema.json")


def test_validate_reports_violation(tmp_path):
    data = json.loads((FIX / "comm.json").read_text())
    for e in data["compose"]:
        if e["p"] == 2 and e["q"] == 2:
            e["result"] = 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    code, doc = call_json("validate", bad)
    assert code == 1 and doc


def test_kan_check_strict():
    code, doc = call_json("kan-check", FIX / "nerve_AS.json", "--size", "3", "--strict")
    assert code == 0 and doc["verdict"] == "strict inner-Kan"
    check(doc, "kan_report.schema.json")
    assert {r["fillers"] for r in doc["records"]} == {1}


def test_kan_check_bound_insufficient():
    code, doc = call_json("kan-check", FIX / "nerve_comm.json", "--size", "4")
    assert code == 2


def test_kan_check_counterexample(tmp_path):
    from dendro.dset import dset_to_json
    from dendro.kan import horn
    from dendro.tree import canonical_tree

    t = canonical_tree("(()*)")
    p = tmp_path / "horn.json"
    p.write_text(json.dumps(dset_to_json(horn(t, t.inner_edges[0], 3).as_dset(), 3)))
    code, doc = call_json("kan-check", p, "--size", "3")
    assert code == 1 and doc["verdict"] == "counterexample"


def test_tensor_dset_matches_product():
    code, doc = call_json("tensor-dset", FIX / "sq_left.json", FIX / "sq_right.json", "--bound", "3")
    assert code == 0
    check(doc, "dset.schema.json")
    ref = json.loads((FIX / "sq_product.json").read_text())
    for c in codes_by_size(3):
        assert len(doc["carrier"][c]) == len(ref["carrier"][c])


def test_hom_dset():
    code, doc = call_json("hom-dset", FIX / "sq_left.json", FIX / "nerve_AS.json", "--bound", "2")
    assert code == 0
    check(doc, "dset.schema.json")


def test_tau_and_tensor():
    code, doc = call_json("tau", FIX / "nerve_AS.json", "--cap", "2")
    assert code == 0 and doc["exact"] and len(doc["colours"]) == 4
    check(doc, "operad.schema.json")
    code, doc = call_json("tensor", FIX / "omega_c1.json", FIX / "omega_c1.json", "--cap", "3")
    assert code == 0 and doc["exact"] and len(doc["colours"]) == 4
    check(doc, "operad.schema.json")


def test_tau_bound_too_small():
    code, doc = call_json("tau", FIX / "nerve_comm.json", "--cap", "2")
    assert code == 2 and "error" in doc


def test_normal():
    code, doc = call_json("normal", FIX / "nerve_comm.json")
    assert code == 1 and doc["witness"]["tree"] == "(**)"
    check(doc, "normal.schema.json")
    code, doc = call_json("normal", FIX / "nerve_AS.json")
    assert code == 0 and doc["normal"]


def test_grothendieck():
    diagram = json.loads((FIX / "grothendieck_meet.json").read_text())
    check(diagram, "grothendieck.schema.json")
    code, doc = call_json("grothendieck", FIX / "grothendieck_meet.json", "--bound", "3")
    assert code == 0
    check(doc, "dset.schema.json")
    x = dset_from_json(doc)
    from dendro.kan import check_inner_kan

    assert check_inner_kan(x, 3).inner_kan


def test_hcnerve_and_wcube():
    for name in ("cat_discrete_AS.json", "cat_graded_comm.json"):
        check(json.loads((FIX / name).read_text()), "catoperad.schema.json")
        code, doc = call_json("hcnerve", FIX / name, "--bound", "3")
        assert code == 0
        check(doc, "dset.schema.json")
    code, doc = call_json("wcube", 3, 0, 3)
    assert code == 0 and len(doc["objects"]) == 4
    check(doc, "wcube.schema.json")


def test_fincat_schema():
    from dendro.category import linear_order

    check(json.loads(json.dumps(linear_order(2).to_json())), "fincat.schema.json")


def test_usage_errors(tmp_path, capsys):
    assert run(["bogus"]) == 64
    assert run(["nerve", str(FIX / "comm.json"), "--bound", "0"]) == 64
    assert run(["nerve", str(FIX / "comm.json"), "--nope"]) == 64
    bad = tmp_path / "bad.json"
    bad.write_text('{"a": 1,\n  ,}')
    assert run(["nerve", str(bad)]) == 64
    err = capsys.readouterr().err
    assert f"{bad}:2:3" in err


def test_missing_file(capsys):
    assert run(["nerve", "/nonexistent/x.json"]) == 64
    assert "/nonexistent/x.json" in capsys.readouterr().err


def test_deterministic_output():
    a = call("nerve", FIX / "A_S.json", "--bound", "3")[1]
    b = call("nerve", FIX / "A_S.json", "--bound", "3")[1]
    assert a == b


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "dendro.cli", "hom", "x(y)", "0(1(2))"],
        capture_output=True,
        text=True,
        env={"PYTHONPATH": str(ROOT / "src")},
    )
    assert proc.returncode == 0 and len(json.loads(proc.stdout)) == 6
