import io
import json
import subprocess
import sys

import pytest

from locoh.cli import main

U3 = {"ring": {"p": 3}, "generators": [[[1, 1], [0, 1]]]}
BOREL5 = {"ring": {"p": 5}, "generators": [[[1, 1], [0, 1]], [[2, 0], [0, 1]]]}
SL3 = {"ring": {"p": 3}, "generators": [[[1, 1], [0, 1]], [[1, 0], [1, 1]]]}
Z4_POOL = {"ring": {"p": 2, "n": 2}, "generators": [[[1, 2], [0, 1]], [[3, 2], [0, 3]]]}


@pytest.fixture
def gfile(tmp_path):
    def write(obj, name="g.json"):
        path = tmp_path / name
        path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(path)
    return write


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_h1loc_with_oracle(gfile):
    code, text = run("h1loc", gfile(U3), "--oracle")
    assert code == 0
    assert "h1_invariants: [3]" in text and "h1loc_invariants: []" in text
    assert "oracle agrees: yes" in text and "interpretation:" in text


def test_h1loc_nontrivial_has_no_interpretation(gfile):
    code, text = run("h1loc", gfile(Z4_POOL), "--oracle")
    assert code == 0 and "h1loc_invariants: [2]" in text
    assert "interpretation" not in text


def test_h1loc_json(gfile, tmp_path):
    path = tmp_path / "r.json"
    code, text = run("h1loc", gfile(U3), "--json", str(path))
    assert code == 0 and "z1_order" in text
    data = json.loads(path.read_text())
    assert data["report"]["h1_invariants"] == [3]
    code, text = run("h1loc", gfile(U3), "--json", "-")
    assert json.loads(text)["report"]["h1loc_invariants"] == []


def test_h1loc_malformed(gfile, capsys):
    code, _ = run("h1loc", gfile('{"ring": {"p": 5}, "generators": [[[1, 2, 3], [0, 1]]]}'))
    assert code == 2
    assert "generator 0: row 0 must have 2 entries, got 3" in capsys.readouterr().err
    code, _ = run("h1loc", gfile('{"ring": {"p": 5},\n "generators": [[1, 2]]]}'))
    assert code == 2


def test_cap_exceeded(gfile, capsys):
    code, _ = run("h1loc", gfile(SL3), "--max-order", "5")
    assert code == 3 and "error:" in capsys.readouterr().err


def test_classify(gfile):
    code, text = run("classify", gfile(BOREL5))
    assert code == 0
    assert 'projective_type: "p-Borel"' in text and "borel_certificate: pass" in text
    code, text = run("classify", gfile(SL3))
    assert 'projective_type: "A4"' in text and "not applicable" in text
    code, text = run("classify", gfile({"ring": {"p": 5}, "generators": []}))
    assert code == 0 and "order 1 " in text


def test_scan_small_and_infeasible(capsys):
    code, text = run("scan", "3")
    assert code == 0 and "informational" in text
    assert run("scan", "11")[0] == 2
    assert run("scan", "4")[0] == 2


def test_scan_jobs_deterministic():
    a = run("scan", "5")
    b = run("scan", "5", "--jobs", "4")
    assert a[0] == b[0] == 0 and a[1] == b[1]


def test_verify_only(tmp_path):
    path = tmp_path / "v.json"
    code, text = run("verify", "--only", "euclid,index-gcd", "--json", str(path))
    assert code == 0 and text.startswith("PASS euclid")
    data = json.loads(path.read_text())
    assert [c["check"] for c in data["checks"]] == ["euclid", "index-gcd"]
    assert run("verify", "--only", "nonsense")[0] == 2


def test_criterion_exit_codes():
    code, text = run("criterion", "1", "29", "2", "29", "--assume-all")
    assert code == 0 and "threshold = 25" in text and "verdict: H^1_loc vanishes" in text
    code, text = run("criterion", "1", "23", "2", "23", "--assume-all")
    assert code == 1 and "condition 7: fail" in text
    code, text = run("criterion", "2", "11", "2", "121", "--assume", "1,2", "--assume", "4,5,6")
    assert code == 1 and f"threshold = {(1 + 2 ** 512) ** 4}" in text
    assert run("criterion", "1", "5", "2", "24")[0] == 2
    assert run("criterion", "1", "29", "2", "29", "--assume", "3")[0] == 2


def test_config_env(gfile, tmp_path, monkeypatch):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("closure_cap = 5\n")
    monkeypatch.setenv("LOCOH_CONFIG", str(cfg))
    assert run("classify", gfile(SL3))[0] == 3
    assert run("classify", gfile(SL3), "--max-order", "100")[0] == 0


def test_usage_and_version():
    assert run()[0] == 2
    assert run("--help")[0] == 0


def test_module_entry_point(gfile):
    proc = subprocess.run([sys.executable, "-m", "locoh.cli", "classify", gfile(U3)], capture_output=True, text=True)
    assert proc.returncode == 0 and "p-Borel" in proc.stdout
