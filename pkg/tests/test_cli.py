import json
import os
import subprocess
import sys

import pytest

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def run_cli(*args):
    proc = subprocess.run([sys.executable, "-m", "lodua.cli", *args],
                          capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


def fixture(name):
    return os.path.join(FIXTURES, name)


def test_lcomplete_check_zp():
    code, out, _ = run_cli("lcomplete-check", fixture("zp.json"))
    assert code == 0
    report = json.loads(out)
    assert report["result"]["verdict"] == "complete"


def test_gm_check_prufer():
    code, out, _ = run_cli("gm-check", fixture("z-mod-p-infty.json"), "--s", "1")
    assert code == 0
    assert json.loads(out)["result"]["status"] == "exact"


def test_verify_completion_formula():
    code, out, _ = run_cli("verify", fixture("c2-swap.json"),
                           "--which", "completion-formula")
    assert code == 0
    assert json.loads(out)["result"]["verdict"] == "pass"


def test_byte_identical_reports():
    _, out1, _ = run_cli("gm-check", fixture("z-mod-p-infty.json"), "--s", "0")
    _, out2, _ = run_cli("gm-check", fixture("z-mod-p-infty.json"), "--s", "0")
    assert out1 == out2
    assert "time" not in json.loads(out1)


def test_not_complete_exits_one(tmp_path):
    doc = {
        "version": "1",
        "ring": {"base": "Z"},
        "ideal": ["5"],
        "modules": {"Z": {"generators": 1, "relations": []}},
        "descriptors": {"z": {"kind": "fp", "module": "Z"}},
        "command": {"verb": "lcomplete-check", "target": "z"},
    }
    path = tmp_path / "z.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run_cli("lcomplete-check", str(path))
    assert code == 1
    report = json.loads(out)
    assert report["result"]["verdict"] == "not-complete"
    assert report["result"]["witness"]


def test_invalid_document_exits_three(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{ not json")
    code, _, err = run_cli("resolve", str(path))
    assert code == 3
    path.write_text(json.dumps({"version": "1", "ring": {"base": "nope"}}))
    code, _, err = run_cli("resolve", str(path))
    assert code == 3
    assert "invalid input" in err


def test_missing_reference_exits_three(tmp_path):
    doc = {"version": "1", "ring": {"base": "Z"}, "ideal": ["5"],
           "command": {"verb": "localcoh", "target": "nope", "s": 0}}
    path = tmp_path / "doc.json"
    path.write_text(json.dumps(doc))
    code, _, err = run_cli("localcoh", str(path))
    assert code == 3


def test_resolve_verb():
    code, out, _ = run_cli("resolve", fixture("z.json"))
    assert code == 0
    report = json.loads(out)
    assert report["ring"] == "ZZ"
    assert "Zmod125" in report["modules"]


def test_localcoh_and_lambda_verbs(tmp_path):
    doc = {
        "version": "1",
        "ring": {"base": "Z"},
        "ideal": ["5"],
        "modules": {"Z": {"generators": 1, "relations": []}},
        "command": {},
    }
    path = tmp_path / "doc.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run_cli("localcoh", str(path), "--target", "Z", "--s", "1")
    assert code == 0
    assert json.loads(out)["result"]["kind"] == "telescope_quotient"
    code, out, _ = run_cli("lambda", str(path), "--target", "Z")
    assert code == 0
    assert json.loads(out)["result"]["0"]["kind"] == "module"


def test_tor_ext_verbs(tmp_path):
    doc = {
        "version": "1",
        "ring": {"base": "Z"},
        "modules": {"M": {"generators": 1, "relations": [["4"]]},
                    "N": {"generators": 1, "relations": [["6"]]},
                    "F": {"generators": 1, "relations": []}},
        "command": {},
    }
    path = tmp_path / "doc.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run_cli("tor", str(path), "--M", "M", "--N", "N", "--s", "1")
    assert code == 0
    assert json.loads(out)["result"]["torsion"] == ["2"]
    code, out, _ = run_cli("ext", str(path), "--M", "M", "--N", "F", "--s", "1")
    assert code == 0
    assert json.loads(out)["result"]["torsion"] == ["4"]


def test_proreg_and_membership_verbs(tmp_path):
    doc = {
        "version": "1",
        "ring": {"base": "Q", "vars": ["x", "y"]},
        "ideal": ["x + y", "x*y"],
        "modules": {"A": {"generators": 1, "relations": []}},
        "command": {},
        "options": {"K": 4, "lag": 3},
    }
    path = tmp_path / "doc.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run_cli("proreg-check", str(path))
    assert code == 0
    assert json.loads(out)["result"]["status"] == "weakly-proregular"


def test_comodule_verbs_and_recheck(tmp_path):
    code, out, _ = run_cli("comodule-complete", fixture("c2-swap.json"),
                           "--comodule", "CA")
    assert code == 0
    report = json.loads(out)
    assert "method_agreement" in report
    # recheck a verify report without recomputation
    code, out, _ = run_cli("verify", fixture("c2-swap.json"),
                           "--which", "completion-formula")
    prior = tmp_path / "report.json"
    prior.write_text(out)
    code, out, _ = run_cli("verify", fixture("c2-swap.json"),
                           "--recheck", str(prior))
    assert code == 0
    assert json.loads(out)["recheck"]["names_resolve"] is True


def test_iota_verb():
    code, out, _ = run_cli("iota", fixture("c2-swap.json"), "--comodule", "CA")
    assert code == 0
    assert "certificate" in json.loads(out)


def test_golden_reports_are_stable():
    """Committed goldens pin the schema: byte-for-byte regression check."""
    for doc, verb, extra, golden in [
        ("zp.json", "lcomplete-check", [], "golden/zp.lcomplete-check.json"),
        ("z-mod-p-infty.json", "gm-check", ["--s", "1"],
         "golden/z-mod-p-infty.gm-check.json"),
    ]:
        code, out, _ = run_cli(verb, fixture(doc), *extra)
        assert code == 0
        with open(fixture(golden)) as fh:
            assert out == fh.read()


def test_tower_block_in_documents(tmp_path):
    doc = {
        "version": "1",
        "ring": {"base": "Z"},
        "ideal": ["5"],
        "modules": {"Z": {"generators": 1, "relations": []}},
        "towers": {"adicZ": {"kind": "adic", "module": "Z", "ideal": ["5"]},
                   "multZ": {"kind": "mult", "module": "Z", "x": "5"}},
        "command": {"verb": "resolve"},
    }
    path = tmp_path / "towers.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run_cli("resolve", str(path))
    assert code == 0
    towers = json.loads(out)["towers"]
    assert towers["adicZ"]["lim"]["kind"] == "module"
    assert towers["multZ"]["lim1"]["kind"] == "completion_cokernel"


def test_budget_env_var_exits_two(tmp_path):
    doc = {
        "version": "1",
        "ring": {"base": "Q", "vars": ["x", "y"]},
        "modules": {"M": {"generators": 1,
                          "relations": [["x^3 - 2*x*y"], ["x^2*y - 2*y^2 + x"]]},
                    "N": {"generators": 1, "relations": [["x"], ["y"]]}},
        "command": {},
    }
    path = tmp_path / "heavy.json"
    path.write_text(json.dumps(doc))
    env = dict(os.environ, LODUA_BUDGET="3")
    proc = subprocess.run([sys.executable, "-m", "lodua.cli", "tor", str(path),
                           "--M", "M", "--N", "N", "--s", "1"],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 2
    assert "inconclusive" in proc.stderr


def test_golden_comodule_verify_report():
    code, out, _ = run_cli("verify", fixture("c2-swap.json"),
                           "--which", "completion-formula")
    assert code == 0
    with open(fixture("golden/c2-swap.completion-formula.json")) as fh:
        assert out == fh.read()


def test_lambda_and_localcoh_on_descriptors(tmp_path):
    doc = {
        "version": "1",
        "ring": {"base": "Z"},
        "ideal": ["5"],
        "modules": {"Z": {"generators": 1, "relations": []}},
        "descriptors": {"prufer": {"kind": "telescope_quotient",
                                   "module": "Z", "mult": "5"}},
        "command": {},
    }
    path = tmp_path / "doc.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run_cli("lambda", str(path), "--target", "prufer")
    assert code == 0
    assert json.loads(out)["result"]["1"]["kind"] == "module"
    code, out, _ = run_cli("localcoh", str(path), "--target", "prufer", "--s", "0")
    assert code == 0
    assert json.loads(out)["result"]["kind"] == "telescope_quotient"


def test_duplicate_names_rejected(tmp_path):
    doc = {
        "version": "1",
        "ring": {"base": "Z"},
        "modules": {"M": {"generators": 1, "relations": []}},
        "descriptors": {"M": {"kind": "fp", "module": "M"}},
        "command": {"verb": "resolve"},
    }
    path = tmp_path / "dup.json"
    path.write_text(json.dumps(doc))
    code, _, err = run_cli("resolve", str(path))
    assert code == 3 and "duplicate" in err


def test_recheck_validates_certificate_invariants(tmp_path):
    code, out, _ = run_cli("lcomplete-check", fixture("zp.json"))
    prior = tmp_path / "report.json"
    prior.write_text(out)
    code, out2, _ = run_cli("lcomplete-check", fixture("zp.json"),
                            "--recheck", str(prior))
    assert code == 0
    assert "completeness grid covers" in out2
    # a tampered report is rejected
    bad = json.loads(prior.read_text())
    bad["result"]["verdict"] = "not-complete"
    prior.write_text(json.dumps(bad))
    code, _, err = run_cli("lcomplete-check", fixture("zp.json"),
                           "--recheck", str(prior))
    assert code == 3 and "all-zero grid" in err
