import json
import subprocess
import sys

import pytest

from degloci.cli import main
from degloci.exactalg import poly_from_json


def run(args, env=None):
    return subprocess.run([sys.executable, "-m", "degloci", *args], capture_output=True, text=True, env=env)


def test_groth_single_box(capsys):
    assert main(["groth", "--lambda", "1", "--d", "1", "--nb", "1"]) == 0
    assert capsys.readouterr().out.strip() == "beta*z1*b1 + z1 + b1"


def test_groth_empty(capsys):
    assert main(["groth", "--lambda", "", "--d", "2"]) == 0
    assert capsys.readouterr().out.strip() == "1"


def test_groth_both(capsys):
    assert main(["groth", "--method", "both", "--lambda", "2,1", "--d", "2", "--nb", "3", "--cap", "8"]) == 0
    assert capsys.readouterr().out.strip().endswith("EQUAL (mod deg>8)")


def test_malformed_partition():
    assert main(["groth", "--lambda", "2,x"]) == 2
    assert main(["gtheta", "--k", "0", "--lambda", "1,1"]) == 2


def test_gtheta_classical_slice(capsys):
    assert main(["gtheta", "--k", "0", "--lambda", "2,1", "--nx", "2", "--beta", "0", "--nb", "0"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "4*x1^2*x2 + 4*x1*x2^2"
    assert out[1].endswith("holds")


def test_gtheta_prime_reports_cancellation(capsys):
    assert main(["gtheta", "--k", "1", "--lambda", "1,1", "--prime", "--cap", "4"]) == 0
    assert "cancellation in x1, x2: holds" in capsys.readouterr().out


def test_json_roundtrip(capsys):
    assert main(["groth", "--lambda", "2", "--d", "2", "--nb", "2", "--cap", "5", "--format", "json"]) == 0
    text = capsys.readouterr().out
    p = poly_from_json(json.loads(text))
    assert main(["groth", "--lambda", "2", "--d", "2", "--nb", "2", "--cap", "5", "--format", "json"]) == 0
    again = capsys.readouterr().out
    assert text == again
    assert json.dumps({"terms": json.loads(text)["terms"]}, sort_keys=True) == text.strip()
    assert not p.is_zero()


def test_latex_output(capsys):
    assert main(["gtheta", "--k", "1", "--lambda", "2", "--nx", "2", "--nb", "2", "--localize", "2", "--cap", "3", "--format", "latex"]) == 0
    assert r"b_{1}" in capsys.readouterr().out


def test_enumerate(capsys):
    assert main(["enumerate", "--n", "2", "--k", "0", "--format", "json"]) == 0
    items = json.loads(capsys.readouterr().out)
    assert [it["lambda"] for it in items] == [[2, 1], [2], [1], []]


def test_pfclass(capsys):
    assert main(["pfclass", "--lambda", "1", "--k", "1", "--n", "2", "--cap", "3"]) == 0
    assert capsys.readouterr().out.strip()


@pytest.mark.parametrize(
    "args",
    [
        ["verify", "pushbeta", "--emax", "3"],
        ["verify", "lem4c", "--rmax", "2", "--k", "1", "--window", "6"],
        ["verify", "gkm", "--n", "2", "--k", "0", "--cap", "5"],
        ["verify", "typea", "--d", "2", "--nb", "3", "--cap", "6"],
    ],
)
def test_verify_suites(args, capsys):
    assert main(args) == 0
    assert capsys.readouterr().out.strip().endswith("pass")


def test_unknown_suite():
    assert run(["verify", "nosuch"]).returncode == 2


def test_env_cap(monkeypatch, capsys):
    monkeypatch.setenv("DEGLOCI_CAP", "2")
    assert main(["groth", "--lambda", "1", "--d", "2", "--nb", "1"]) == 0
    out = capsys.readouterr().out
    assert "beta" in out and "z1*z2*b1" not in out
    monkeypatch.setenv("DEGLOCI_CAP", "zero")
    assert main(["groth", "--lambda", "1"]) == 2


def test_module_entry_point_is_deterministic():
    a = run(["gtheta", "--k", "1", "--lambda", "2,1", "--nx", "2", "--nb", "1", "--cap", "4"])
    b = run(["gtheta", "--k", "1", "--lambda", "2,1", "--nx", "2", "--nb", "1", "--cap", "4"])
    assert a.returncode == 0 and a.stdout == b.stdout
