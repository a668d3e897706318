import io as stdio
import json

import pytest

from lsakit import io
from lsakit.cli import main

IDENTITY4 = [["1", "0", "0", "0"], ["0", "1", "0", "0"], ["0", "0", "1", "0"], ["0", "0", "0", "1"]]


def run(*argv):
    out, err = stdio.StringIO(), stdio.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, _ = run(*argv, "--output", "json")
    return code, json.loads(out)


def test_check_left_symmetric_passes():
    code, out, _ = run("check", "examples:ex46", "--kind", "left-symmetric")
    assert code == 0
    assert out.startswith("PASS")


def test_check_novikov_fails_with_witness():
    code, doc = run_json("check", "examples:ex46", "--kind", "novikov")
    assert code == 1
    assert doc["pass"] is False
    witnesses = [v["witness"] for v in doc["violations"]]
    assert ["e4", "e3", "e2"] in witnesses


def test_check_ex47_novikov_over_prime_field():
    code, _, _ = run("check", "examples:ex47", "--kind", "novikov", "--field", "prime:7")
    assert code == 0


def test_check_commutator_kind():
    for kind in ("antisymmetry-of-commutator", "lie-jacobi-of-commutator"):
        assert run("check", "examples:ex46", "--kind", kind)[0] == 0


def test_inline_json_and_file(tmp_path):
    doc = {"dim": 1, "products": [{"i": 1, "j": 1, "out": {"1": "1"}}]}
    code, _, _ = run("check", json.dumps(doc), "--kind", "novikov")
    assert code == 0
    path = tmp_path / "a.json"
    path.write_text(json.dumps(doc))
    code, _, _ = run("check", str(path), "--kind", "novikov")
    assert code == 0


@pytest.mark.parametrize("argv", [
    ("check", "{not json", "--kind", "novikov"),
    ("check", "examples:nope"),
    ("check", "examples:ex46", "--kind", "associative-ish"),
    ("check", "examples:ex46", "--field", "prime:4"),
    ("check", "/nonexistent/file.json"),
    ("extract", "examples:ex55", "--sub", "1,9"),
    ("frobnicate",),
])
def test_parse_and_usage_errors_exit_2(argv, capsys):
    code, _, _ = run(*argv)
    assert code == 2


def test_lie_prints_brackets():
    code, out, _ = run("lie", "examples:ex47")
    assert code == 0
    assert "[e1, e2] = 1*e2" in out
    assert "[e1, e3] = 1*e3" in out


def test_extract_ex55():
    code, doc = run_json("extract", "examples:ex55", "--sub", "1,3")
    assert code == 0
    kind, datum = io.from_json(doc["datum"])
    assert kind == "datum"
    assert datum.A.dim == 2 and datum.vdim == 2


def test_extract_not_subalgebra_exits_1():
    code, _, err = run("extract", "examples:ex55", "--sub", "3,4")
    assert code == 1
    assert "NotSubalgebra" in err


def test_unify_flag_fixture_with_check():
    code, out, _ = run("unify", "examples:ex46-ext(1,1,2,1)", "--check")
    assert code == 0
    assert "PASS" in out


def test_conditions_on_matched_pair():
    code, _, _ = run("conditions", "examples:ex55-mp", "--case", "bicrossed")
    assert code == 0


def test_morphism_algebra_identity_with_sub():
    witness = json.dumps({"matrix": IDENTITY4, "stabilizes": True, "costabilizes": True})
    code, _, _ = run("morphism", "examples:ex55", "examples:ex55", "--witness", witness, "--sub", "1,3")
    assert code == 0


def test_morphism_algebra_bad_map_fails():
    zero = [["0"] * 4 for _ in range(4)]
    zero[0][0] = "2"
    code, _, _ = run("morphism", "examples:ex46", "examples:ex46", "--witness", json.dumps({"matrix": zero}))
    assert code == 1


def test_morphism_stabilizes_needs_sub():
    witness = json.dumps({"matrix": IDENTITY4, "stabilizes": True})
    code, _, _ = run("morphism", "examples:ex55", "examples:ex55", "--witness", witness)
    assert code == 2


def test_morphism_flag_pair():
    witness = json.dumps({"beta": "2", "b0": ["0", "0", "0", "0"]})
    args = ("morphism", "examples:ex46-ext(2,2,8,2)", "examples:ex46-ext(1,1,2,1)", "--witness", witness)
    assert run(*args)[0] == 0
    assert run(*args, "--mode", "cohom")[0] == 1


def test_morphism_datum_identity(tmp_path):
    code, doc = run_json("extract", "examples:ex55", "--sub", "1,3")
    datum = doc["datum"]
    path = tmp_path / "d.json"
    path.write_text(json.dumps(datum))
    witness = json.dumps({"lambda": [["0", "0"], ["0", "0"]], "mu": [["1", "0"], ["0", "1"]]})
    code, out, _ = run("morphism", str(path), str(path), "--witness", witness, "--output", "json")
    assert code == 0
    report = json.loads(out)
    assert report["equivalent"] is True and report["cohomologous"] is True


def test_bimodule_regular_passes_and_zero_right_fails():
    base = {"dim": 1, "products": [{"i": 1, "j": 1, "out": {"1": "1"}}]}
    good = {"base": base, "mdim": 1, "S": [[["1"]]], "T": [[["1"]]]}
    code, doc = run_json("bimodule", json.dumps(good), "--kind", "novikov")
    assert code == 0 and doc["representation"] is True
    bad = {"base": json.loads(run("examples", "show", "ex46")[1]), "mdim": 1, "S": [[["1"]]] * 4, "T": [[["0"]]] * 4}
    code, doc = run_json("bimodule", json.dumps(bad), "--kind", "left-symmetric")
    assert code == 1
    assert doc["violations"][0]["condition"] == "bm1"


def test_mp_verify():
    assert run("mp", "verify", "examples:ex55-mp")[0] == 0


def test_deform_check_and_apply():
    assert run("deform", "check", "examples:ex55-mp", "--map", "examples:ex55-phi(7)")[0] == 0
    code, doc = run_json("deform", "apply", "examples:ex55-mp", "--map", "examples:ex55-phi(1)")
    assert code == 0
    kind, B = io.from_json(doc["Bphi"])
    assert kind == "algebra" and B.dim == 2


def test_deform_check_rejects_non_map():
    bad = json.dumps({"matrix": [["0", "1"], ["0", "0"]]})
    code, _, _ = run("deform", "check", "examples:ex55-mp", "--map", bad)
    assert code == 1


def test_deform_enum_f2():
    code, doc = run_json("deform", "enum", "examples:ex55-mp", "--field", "prime:2")
    assert code == 0
    maps = doc["deformation_maps"] if "deformation_maps" in doc else doc["maps"]
    assert len(maps) == 4


def test_deform_classify_f5_and_f2():
    code, doc = run_json("deform", "classify", "examples:ex55-mp", "--field", "prime:5")
    assert code == 0
    assert doc["index"] == 3
    assert sorted(c["members"] for c in doc["classes"]) == [[1], [2, 5], [3, 4]]
    code, doc = run_json("deform", "classify", "examples:ex55-mp", "--field", "prime:2")
    assert code == 0 and doc["index"] == 2


def test_deform_oracle_f2():
    code, doc = run_json("deform", "oracle", "examples:ex55", "--sub", "1,3", "--field", "prime:2")
    assert code == 0
    assert doc["index"] == 2


def test_flag_check_build():
    assert run("flag", "check", "examples:ex46-ext(1,1,2,1)")[0] == 0
    code, doc = run_json("flag", "build", "examples:ex46-ext(1,1,2,1)")
    assert code == 0
    assert io.from_json(doc["algebra"])[1].dim == 5


def test_flag_classify_small():
    base = {"field": {"kind": "prime", "p": 2}, "dim": 1, "products": []}
    code, doc = run_json("flag", "classify", json.dumps(base), "--kind", "novikov")
    assert code == 0
    assert doc["class_count"] == len(doc["classes"]) == 9


def test_flag_enum_too_large_exits_3():
    code, out, err = run("flag", "enum", "examples:ex47", "--field", "prime:2", "--kind", "novikov")
    assert code == 3
    assert "cap" in err


def test_env_cap(monkeypatch):
    monkeypatch.setenv("LSAKIT_MAX_CANDIDATES", "10")
    code, doc = run_json("deform", "classify", "examples:ex55-mp", "--field", "prime:5")
    assert code == 3
    assert doc["error"] == "EnumerationTooLarge" and doc["cap"] == 10


def test_cap_flag_overrides_env(monkeypatch):
    monkeypatch.setenv("LSAKIT_MAX_CANDIDATES", "10")
    code, _, _ = run("deform", "classify", "examples:ex55-mp", "--field", "prime:5", "--max-candidates", "100000")
    assert code == 0


def test_json_output_is_deterministic():
    argv = ("deform", "classify", "examples:ex55-mp", "--field", "prime:5", "--output", "json")
    first = run(*argv)[1]
    assert first == run(*argv)[1]
    assert first.endswith("\n")


def test_examples_list_and_show_roundtrip():
    code, out, _ = run("examples", "list")
    assert code == 0 and "ex55-mp" in out
    for name in ("ex46", "ex47", "ex55", "ex55-mp", "ex46-ext(1,1,2,1)", "ex55-phi(2)"):
        code, out, _ = run("examples", "show", name)
        assert code == 0
        kind, value = io.from_json(json.loads(out))
        assert io.dumps(io.to_json(kind, value)) == out
