import json
import subprocess
import sys

import pytest

from eisenfact.cli import main
from eisenfact.exprlang import default_catalog_path
from eisenfact.generators import registry_for


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_expand_examples(capsys):
    code, out, _ = run(capsys, "expand", "E1m3", "--depth", "5")
    assert code == 0 and out.strip() == "1/6, q:1, q^2:0, q^3:1, q^4:1"
    code, out, _ = run(capsys, "expand", "f(2,0)", "--depth", "2")
    assert out.strip() == "1, q^{1/2}:4i, q:4, q^{3/2}:0"
    code, _, err = run(capsys, "expand", "E2[(1*t+1)/5]")
    assert code != 0 and "lattice" in err
    code, out, _ = run(capsys, "expand", "theta", "--depth", "2", "--format", "complex")
    assert out.startswith("1+0i, q:2+0i")


def test_verify_examples(capsys):
    code, out, _ = run(capsys, "verify", "E4^3-E6^2-1728*eta^24", "--level", "1", "--weight", "12")
    assert code == 0 and "PASS" in out
    code, out, _ = run(capsys, "verify", "--id", "L3-thm-cube-0")
    assert code == 0
    code, out, _ = run(capsys, "verify", "E4^3-E6^2-1729*eta^24", "--level", "1", "--weight", "12")
    assert code == 1 and "witness q^1" in out
    code, out, _ = run(capsys, "verify", "--id", "L1-basic", "--mode", "multimodular", "--output", "json")
    assert code == 0 and json.loads(out)["entries"][0]["mode"].startswith("multimodular")
    code, _, _ = run(capsys, "verify", "--id", "no-such-entry")
    assert code == 2


def test_catalog_command(capsys, tmp_path):
    out_file = tmp_path / "r.json"
    code, out, _ = run(capsys, "catalog", "--jobs", "2", "--out", str(out_file))
    n = sum(1 for line in default_catalog_path().read_text().splitlines() if line.startswith("id:"))
    assert code == 0 and out.strip().endswith(f"{n}/{n} pass")
    doc = json.loads(out_file.read_text())
    assert doc["summary"]["pass"] == n
    assert run(capsys, "catalog", str(tmp_path / "missing.cat"))[0] == 2
    bad = tmp_path / "bad.cat"
    bad.write_text(default_catalog_path().read_text().replace("- 16*eta[4*t]^8", "- 17*eta[4*t]^8", 1)
                   .replace("(eta^8 + 16*eta[4*t]^8)", "(eta^8 + 17*eta[4*t]^8)"))
    code, out, _ = run(capsys, "catalog", str(bad), "--output", "json")
    doc = json.loads(out)
    assert code == 1 and doc["summary"]["fail"] == 1


def test_human_and_json_agree(capsys):
    _, human, _ = run(capsys, "catalog", "--seed", "3")
    _, js, _ = run(capsys, "catalog", "--seed", "3", "--output", "json")
    statuses = {e["id"]: e["status"] for e in json.loads(js)["entries"]}
    for line in human.splitlines()[:-1]:
        status, ident = line.split()[:2]
        assert statuses[ident] == status.lower()


def test_eval_examples(capsys):
    code, out, _ = run(capsys, "eval", "theta", "--tau", "0", "1")
    assert code == 0 and out.startswith("1.0037348854877")
    code, out, _ = run(capsys, "eval", "f(1,0)", "--at", "(1+sqrt(-3))/2", "--output", "json")
    assert json.loads(out)["abs"] < 1e-8
    code, _, _ = run(capsys, "eval", "E4", "--tau", "0", "-1")
    assert code != 0


def test_transform_check(capsys):
    code, out, _ = run(capsys, "transform-check", "--id", "N-L4-f-0")
    assert code == 0
    code, out, _ = run(capsys, "transform-check", "--lhs", "F(1,0)[-1/t]", "--rhs", "F(1,1)",
                       "--multiplier", "t^5")
    assert code == 1
    assert run(capsys, "transform-check")[0] == 2


def test_usage_errors(capsys):
    assert run(capsys, "expand", "E4^^2")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "expand", "E4", "--depth", "-3")[0] == 2


def test_cache_changes_nothing(capsys, tmp_path):
    reg = registry_for()
    _, plain, _ = run(capsys, "catalog", "--output", "json")
    try:
        reg.clear()
        _, cold, _ = run(capsys, "--cache-dir", str(tmp_path), "catalog", "--output", "json")
        reg.clear()
        _, warm, _ = run(capsys, "--cache-dir", str(tmp_path), "catalog", "--output", "json")
    finally:
        reg.disk_cache = None
    assert any(tmp_path.iterdir())

    def strip(text):
        doc = json.loads(text)
        for e in doc["entries"]:
            e.pop("ms")
        return doc

    assert strip(plain) == strip(cold) == strip(warm)


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "eisenfact", "expand", "E4", "--depth", "3"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "1, q:240, q^2:2160"
