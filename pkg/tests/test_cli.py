import json
import os
from pathlib import Path

import pytest

from xgroup.cli import main


def run(capsys, argv):
    rc = main(argv)
    out = capsys.readouterr().out
    return rc, out


def test_construct_metacyclic(tmp_path, capsys):
    rc, out = run(capsys, ["construct", "--family", "metacyclic",
                           "--m", "7", "--n", "3", "--u", "2",
                           "--out", str(tmp_path)])
    assert rc == 0
    prov = json.loads((tmp_path / "metacyclic.provenance.json").read_text())
    assert prov["intended_case"] == "2.1.1"
    assert prov["order"] == 21
    group_doc = json.loads((tmp_path / "metacyclic.group.json").read_text())
    assert group_doc["degree"] == 10


def test_construct_constraint_violation(tmp_path, capsys):
    rc = main(["construct", "--family", "affine", "--p", "11",
               "--complement", "sl2_3_dot2", "--out", str(tmp_path)])
    err = capsys.readouterr().err
    assert rc == 2
    assert "±1 (mod 8)" in err


def test_construct_basic_abelian(tmp_path, capsys):
    rc, _ = run(capsys, ["construct", "--family", "basic_abelian",
                         "--factors", "6", "--out", str(tmp_path),
                         "--name", "c6"])
    assert rc == 0
    doc = json.loads((tmp_path / "c6.group.json").read_text())
    assert doc["degree"] == 6


def test_check_sym5_both_methods(tmp_path, capsys):
    rc, _ = run(capsys, ["construct", "--family", "sym_alt", "--n", "5",
                         "--out", str(tmp_path), "--name", "s5"])
    assert rc == 0
    rc, out = run(capsys, ["check", str(tmp_path / "s5.group.json"),
                           "--method", "both", "--emit-witness"])
    assert rc == 1
    doc = json.loads(out)
    assert doc["agreement"] is True
    assert [v["result"] for v in doc["verdicts"]] == ["NotX", "NotX"]
    assert all(v.get("witness_valid", True) for v in doc["verdicts"])


def test_check_exit_zero_for_member(tmp_path, capsys):
    run(capsys, ["construct", "--family", "two_group", "--kind", "quaternion",
                 "--order", "8", "--out", str(tmp_path), "--name", "q8"])
    rc, out = run(capsys, ["check", str(tmp_path / "q8.group.json")])
    assert rc == 0
    assert json.loads(out)["result"] == "IsX"


def test_classify_sl23(tmp_path, capsys):
    run(capsys, ["construct", "--family", "matrix_group", "--kind", "SL2",
                 "--q", "3", "--out", str(tmp_path), "--name", "sl23"])
    rc, out = run(capsys, ["classify", str(tmp_path / "sl23.group.json")])
    assert rc == 0
    doc = json.loads(out)
    assert doc["label"] == "3.2.1"
    assert doc["confirmation"] == "brute"


def test_malformed_input_exit_4(tmp_path, capsys):
    bad = tmp_path / "bad.group.json"
    bad.write_text(json.dumps({"degree": 3, "generators": [[0, 0, 1]]}))
    rc = main(["check", str(bad)])
    assert rc == 4
    rc = main(["classify", str(bad)])
    assert rc == 4
    notjson = tmp_path / "nope.group.json"
    notjson.write_text("{oops")
    assert main(["check", str(notjson)]) == 4


def test_check_cap_exit_3(tmp_path, capsys):
    run(capsys, ["construct", "--family", "sym_alt", "--n", "5",
                 "--out", str(tmp_path), "--name", "s5"])
    rc = main(["--brute-cap", "50", "check", str(tmp_path / "s5.group.json")])
    assert rc == 3


def test_env_cap_override(tmp_path, capsys, monkeypatch):
    run(capsys, ["construct", "--family", "sym_alt", "--n", "5",
                 "--out", str(tmp_path), "--name", "s5"])
    monkeypatch.setenv("XGROUP_CAP", "50")
    rc = main(["check", str(tmp_path / "s5.group.json")])
    assert rc == 3


def test_roundtrip_matches_in_process(tmp_path, capsys):
    # construct -> serialize -> classify equals classifying the in-process group
    from xgroup.constructors import metacyclic
    from xgroup.classifier import classify as classify_fn
    rec = metacyclic(5, 4, 4)
    in_process = classify_fn(rec.group)
    run(capsys, ["construct", "--family", "metacyclic", "--m", "5",
                 "--n", "4", "--u", "4", "--out", str(tmp_path),
                 "--name", "m544"])
    rc, out = run(capsys, ["classify", str(tmp_path / "m544.group.json")])
    doc = json.loads(out)
    assert doc["label"] == in_process.label == "2.1.3"
    assert doc["parameters"]["z_order"] == in_process.parameters["z_order"]


def test_corpus_negative_suite(tmp_path, capsys):
    rc, out = run(capsys, ["--workers", "4", "corpus", "--suite", "negative"])
    assert rc == 0
    lines = [l for l in out.splitlines() if l and not l.startswith("#")]
    rows = lines[1:]
    assert len(rows) == 8
    assert all("\tNotX\tNotX\tNotX\tmatch" in r for r in rows)


def test_corpus_unknown_suite(capsys):
    assert main(["corpus", "--suite", "nope"]) == 4


def test_tower_cli(tmp_path, capsys):
    rc, _ = run(capsys, ["tower", "--kind", "prufer-metacyclic", "--p", "5",
                         "--d", "4", "--depth", "3", "--out", str(tmp_path)])
    assert rc == 0
    text = (tmp_path / "tower_report.tsv").read_text()
    assert "2.1.1" in text
    assert "stabilization_ok=True" in text
    assert (tmp_path / "tower_orders.png").exists()


def test_tower_cli_quaternion(capsys):
    rc, out = run(capsys, ["tower", "--kind", "prufer2-ext", "--y-order", "4",
                           "--depth", "3"])
    assert rc == 0
    assert "1.4" in out


def test_pretty_format(tmp_path, capsys):
    run(capsys, ["construct", "--family", "two_group", "--kind", "quaternion",
                 "--order", "8", "--out", str(tmp_path), "--name", "q8"])
    rc, out = run(capsys, ["--format", "pretty", "classify",
                           str(tmp_path / "q8.group.json")])
    assert rc == 0
    assert "label: 1.4" in out
