import json
import shutil
import subprocess
import sys

import pytest

from presburger import cli


def run(capsys, *argv):
    code = cli.main([*argv, "--json"])
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_qe(capsys):
    code, rep = run(capsys, "qe", "exists u. x = u + u")
    assert code == 0 and rep["status"] == "ok"
    assert "mod 2" in rep["payload"]["formula"]


@pytest.mark.parametrize("text, value", [("forall x. exists y. y = x + x", True), ("exists x. x + 1 = 0", False)])
def test_decide(capsys, text, value):
    code, rep = run(capsys, "decide", text)
    assert code == 0 and rep["payload"]["value"] is value


def test_decide_rejects_open_formula(capsys):
    code, rep = run(capsys, "decide", "x = 1")
    assert code == 2 and rep["status"] == "error" and rep["diagnostics"]


def test_parse_error_is_an_error(capsys):
    code, rep = run(capsys, "qe", "x = = 1")
    assert code == 2


def test_decompose_and_dim(capsys):
    code, rep = run(capsys, "decompose", "-m", "2", "x1 < x2")
    assert code == 0 and rep["payload"]["dimension"] == 2
    assert rep["payload"]["pieces"]
    code, rep = run(capsys, "dim", "-m", "2", "x2 = 2*x1")
    assert code == 0 and rep["payload"]["dimension"] == 1


def test_piece_budget_is_an_error(capsys):
    code, rep = run(capsys, "decompose", "-m", "1", "x1 < 50", "--budget-pieces", "5")
    assert code == 2 and "PieceBudgetExceeded" in rep["diagnostics"][0]


def test_validate(capsys):
    code, rep = run(capsys, "validate", "catalog:lex_omega2")
    assert code == 0 and rep["payload"]["ok"]
    code, rep = run(capsys, "validate", "catalog:broken_reflexive")
    assert code == 1 and not rep["payload"]["ok"]


def test_validate_file(capsys, tmp_path):
    path = tmp_path / "w.json"
    path.write_text(json.dumps({"name": "w", "dim": 1, "domain": "0 = 0", "less": "x1 < y1"}))
    code, rep = run(capsys, "validate", str(path))
    assert code == 0
    path.write_text(json.dumps({"name": "w", "dim": 0, "domain": "0 = 0", "less": "x1 < y1"}))
    code, rep = run(capsys, "validate", str(path))
    assert code == 2 and "dim" in rep["diagnostics"][0]
    code, rep = run(capsys, "validate", str(tmp_path / "missing.json"))
    assert code == 2


def test_galaxy(capsys):
    code, rep = run(capsys, "galaxy", "catalog:omega_plus_omega_star", "--point", "1")
    assert code == 0 and rep["payload"]["type"] == "TypeNegN"


def test_condense_and_rank(capsys):
    code, rep = run(capsys, "condense", "catalog:lex_omega2")
    assert code == 0 and rep["payload"]["dimension"] == 1
    code, rep = run(capsys, "rank", "catalog:lex_omega2")
    assert code == 0 and rep["payload"]["rank"] == 2


def test_catalog(capsys):
    code, rep = run(capsys, "catalog", "list")
    names = [e["name"] for e in rep["payload"]["entries"]]
    assert "growing_boxes" in names and "omega" in names
    code, rep = run(capsys, "catalog", "get", "zeta")
    assert code == 0 and rep["payload"]["dim"] == 1
    code, rep = run(capsys, "catalog", "get", "nonesuch")
    assert code == 2


def test_count(capsys):
    code, rep = run(capsys, "count", "-A", "1,1", "-u", "5")
    assert code == 0 and rep["payload"]["count"] == 6
    code, rep = run(capsys, "count", "-A", "1,-1", "-u", "0")
    assert rep["payload"]["count"] == "infinite"
    code, rep = run(capsys, "count", "fit", "-A", "2,2", "--range", "0:20")
    assert code == 0 and rep["payload"]["degree_bound_holds"]


def test_lexrep_build_then_verify(capsys, tmp_path):
    code, rep = run(capsys, "lexrep", "build", "catalog:omega_plus_omega_star", "--prefix", "60")
    assert code == 0 and rep["payload"]["verification"]["ok"]
    path = tmp_path / "rep.json"
    path.write_text(json.dumps(rep))
    code, rep = run(capsys, "lexrep", "verify", "catalog:omega_plus_omega_star", str(path), "--prefix", "60")
    assert code == 0 and rep["payload"]["ok"]
    code, rep = run(capsys, "lexrep", "verify", "catalog:finite5", str(path), "--prefix", "60")
    assert code == 1


def test_human_output(capsys):
    assert cli.main(["decide", "forall x. x >= 0"]) == 0
    assert capsys.readouterr().out.strip()


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "presburger.cli", "decide", "exists x. x = 3", "--json"],
        capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["payload"]["value"] is True


@pytest.mark.skipif(shutil.which("presburger") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["presburger", "rank", "catalog:omega", "--json"], capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["payload"]["rank"] == 1
