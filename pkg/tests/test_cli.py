import json
import subprocess
import sys

import pytest

from superdual.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def js(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def strip_approx(obj):
    for r in obj.get("reports", []):
        r.pop("eigenvalues_approx", None)
    return obj


# -- algebra --------------------------------------------------------------------------

def test_algebra_gl11(capsys):
    code, d = js(capsys, "algebra", "--type", "a", "--family", "bar", "--m", "1", "--n", "1")
    assert code == 0 and d["dim"] == 4 and d["positive_roots"] == 1
    assert all(v == "ok" for v in d["checks"].values())
    code, d = js(capsys, "algebra", "--type", "a", "--m", "1", "--n", "1", "--extended")
    assert d["dim"] == 5


def test_algebra_spo22(capsys):
    code, d = js(capsys, "algebra", "--type", "c", "--family", "bar", "--m", "1", "--n", "1")
    assert code == 0 and d["dim"] == 8 and d["positive_roots"] == 3
    assert "phi_bracket" in d["checks"]


@pytest.mark.parametrize("argv", [["algebra", "--type", "a", "--m", "-1"],
                                  ["algebra", "--type", "a", "--m", "9"],
                                  ["algebra", "--type", "q"],
                                  ["bogus"]])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_algebra_dump_golden(capsys, golden):
    code, out, _ = run(capsys, "algebra", "--type", "c", "--family", "unbar", "--m", "1", "--n", "1", "--dump")
    assert code == 0
    golden("cli_algebra_c_unbar_1_1.txt", out)


# -- module ------------------------------------------------------------------------------

def test_module_trivial(capsys):
    code, d = js(capsys, "module", "--type", "c", "--m", "1", "--n", "1", "--partition", "", "--d", "0")
    assert code == 0 and d["dim"] == 1 and d["status"] == "complete"


@pytest.mark.parametrize("m,n", [(1, 1), (1, 2), (2, 1)])
def test_module_naturals(capsys, m, n):
    code, d = js(capsys, "module", "--type", "a", "--m", str(m), "--n", str(n), "--partition", "1")
    assert d["dim"] == m + n


def test_module_type_c_unitary(capsys):
    code, d = js(capsys, "module", "--type", "c", "--m", "1", "--n", "1", "--weight", "1*e(1/2)", "--depth", "4")
    assert code == 0 and d["positive_definite"]
    assert all(b["gram"] == "positive definite" for b in d["blocks"])


def test_module_nonunitary(capsys):
    code, d = js(capsys, "module", "--type", "a", "--family", "unbar", "--m", "0", "--n", "2",
                 "--weight=-1*e(1)", "--depth", "3")
    assert d["status"] == "window(3)" and not d["positive_definite"]


# -- spectrum --------------------------------------------------------------------------------

def test_spectrum_gl2_golden(capsys, golden):
    code, d = js(capsys, "spectrum", "--type", "a", "--family", "unbar", "--m", "0", "--n", "2",
                 "--factors", "1;1", "--mu", "2", "--z", "0,1")
    assert code == 0
    assert d["reports"][0]["charpoly"] == ["1/1", "1/1"]
    assert d["reports"][1]["charpoly"] == ["-1/1", "1/1"]
    golden("cli_spectrum_gl2_sym.json", json.dumps(strip_approx(d), sort_keys=True, indent=1) + "\n")


def test_spectrum_trivial(capsys):
    code, d = js(capsys, "spectrum", "--type", "a", "--m", "1", "--n", "1", "--factors", ";;", "--mu", "")
    assert code == 0
    assert all(r["charpoly"] == ["0/1", "1/1"] for r in d["reports"])


def test_spectrum_repeated_points(capsys):
    assert run(capsys, "spectrum", "--type", "a", "--m", "1", "--n", "1", "--factors", "1;1", "--mu", "2",
               "--z", "1,1")[0] == 2


# -- duality -----------------------------------------------------------------------------------

@pytest.mark.parametrize("name", ["a-naturals-l3", "trivial"])
def test_duality_shipped(capsys, name):
    code, d = js(capsys, "duality", name)
    assert code == 0 and d["passed"]


def test_duality_corrupted(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"type": "a", "m": 1')
    assert run(capsys, "duality", str(bad))[0] == 2
    bad.write_text('{"type": "a", "m": 1, "n": 1, "k": 2, "partitions": [[1]], "levels": [], "mu": [1]}')
    assert run(capsys, "duality", str(bad))[0] == 2


def test_out_flag_and_determinism(capsys, tmp_path):
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "duality", "a-naturals-l3", "--seed", "4", "--out", str(p1))[0] == 0
    assert run(capsys, "--seed", "4", "--out", str(p2), "duality", "a-naturals-l3")[0] == 0
    assert p1.read_bytes() == p2.read_bytes()
    assert not [f for f in tmp_path.iterdir() if f.name.startswith(".tmp-")]


def test_selftest(capsys):
    code, d = js(capsys, "selftest")
    assert code == 0 and set(d.values()) == {"PASS"}


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "superdual", "algebra", "--type", "a", "--m", "1", "--n", "1"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["dim"] == 4
