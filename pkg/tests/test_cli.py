import io
import json
import subprocess
import sys

import pytest

from daha_hc.cli import run_command


def run(argv, environ=None):
    out, err = io.StringIO(), io.StringIO()
    code = run_command(argv, stdout=out, stderr=err, environ=environ or {})
    return code, out.getvalue(), err.getvalue()


def test_epoly_example():
    code, out, _ = run(["epoly", "A1", "-1"])
    rec = json.loads(out)
    assert code == 0
    # X^{-1} + (1 - t)/(1 - tq) X with t = 1/81, q = 1/16
    assert rec["coefficients"] == [[[-1], "1/1"], [[1], "256/259"]]


def test_roots_a2():
    code, out, _ = run(["roots", "A2"])
    rec = json.loads(out)
    assert code == 0 and rec["m"] == 3 and len(rec["positive_roots"]) == 3


def test_verify_a1_closed():
    code, out, _ = run(["verify", "a1-closed", "--type", "A1", "--v", "1/2", "--u", "1/3"])
    lines = [json.loads(x) for x in out.splitlines()]
    assert code == 0 and lines and all(r["pass"] for r in lines)


def test_point_commands():
    for argv in (["theta", "--point", "3"], ["sigma", "--point", "3/2"],
                 ["psi", "--x", "5", "--lam", "3/2"], ["gfun", "--x", "5", "--lam", "3/2"],
                 ["mu", "--type", "A2"], ["eval", "A2", "1,-2"], ["duality", "1,0", "-1,1", "--type", "A2"],
                 ["sympoly", "A2", "-1,-1"]):
        code, out, _ = run(argv)
        assert code == 0, argv
        assert json.loads(out.splitlines()[0])


@pytest.mark.parametrize("argv,code", [
    (["verify", "nope"], 2),
    (["epoly", "A1", "x"], 2),
    (["epoly", "Q7", "1"], 2),
    (["theta", "--point", "1,2"], 2),
    (["roots", "--tolerance", "0"], 2),
    (["epoly", "A1", "-1", "--u", "2"], 3),
    (["theta", "--point", "3", "--theta-shells", "4"], 4),
])
def test_exit_codes(argv, code):
    assert run(argv)[0] == code


def test_failure_exit_code():
    # the limit criterion misses its tolerance at the default n_max
    code, out, _ = run(["verify", "limits-a1"])
    assert code == 1
    assert not all(json.loads(x)["pass"] for x in out.splitlines())


def test_precedence(tmp_path):
    cfg = tmp_path / "daha.ini"
    cfg.write_text("[daha]\ntype = A2\nv = 1/3\n")
    _, out, _ = run(["roots", "--config", str(cfg)])
    assert json.loads(out)["type"] == "A2"
    _, out, _ = run(["roots", "--config", str(cfg)], {"DAHA_TYPE": "B2"})
    assert json.loads(out)["type"] == "B2"
    _, out, _ = run(["roots", "--type", "G2", "--config", str(cfg)], {"DAHA_TYPE": "B2"})
    assert json.loads(out)["type"] == "G2"
    _, out, _ = run(["epoly", "-1", "--config", str(cfg)], {"DAHA_TYPE": "A1"})
    assert json.loads(out)["params"]["v"] == "1/3"


def test_csv_and_output_file(tmp_path):
    path = tmp_path / "r.csv"
    code, out, _ = run(["verify", "mu-ct", "--format", "csv", "--output", str(path)])
    assert code == 0 and out == ""
    rows = path.read_text().splitlines()
    assert rows[0] == "identity,residual,tail,pass" and rows[1].endswith("True")


def test_deterministic():
    a = run(["verify", "eval", "--type", "A2"])[1]
    b = run(["verify", "eval", "--type", "A2"])[1]
    assert a == b and a


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "daha_hc", "roots", "A1"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["rank"] == 1
