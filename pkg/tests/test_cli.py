import json
import subprocess
import sys

import pytest

from succinct_mso.cli import main
from succinct_mso.structures import complete, dump_graph


@pytest.fixture
def files(tmp_path):
    (tmp_path / "k3.graph").write_text(dump_graph(complete(3)))
    (tmp_path / "sat.cnf").write_text("p cnf 2 2\n1 2 0\n-1 0\n")
    (tmp_path / "unsat.cnf").write_text("p cnf 1 2\n1 0\n-1 0\n")
    (tmp_path / "one.net").write_text("inputs 0\ng0 = CONST 1\noutputs g0\n")
    return tmp_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_mc_and_type(capsys, files):
    code, out, _ = run(capsys, "mc", "--graph", files / "k3.graph", "--formula", "psi1")
    assert code == 0 and out.strip() == "true"
    code, out, _ = run(capsys, "type", "--graph", files / "k3.graph", "--rank", "1")
    assert code == 0 and out.startswith("type rank=1 digest=")


def test_encode_decode_pipeline(capsys, files):
    sg = files / "k3.succ"
    assert run(capsys, "encode", "--graph", files / "k3.graph", "--out", sg)[0] == 0
    code, out, _ = run(capsys, "decode", "--succinct", sg)
    assert code == 0 and out == dump_graph(complete(3))
    code, out, _ = run(capsys, "decide-xi", "--succinct", sg)
    assert out.strip() == "true"


def test_min_order_pipeline(capsys, files):
    for name, want in (("sat.cnf", "true"), ("unsat.cnf", "false")):
        sg = files / (name + ".succ")
        assert run(capsys, "reduce-minorder", "--cnf", files / name, "--out", sg)[0] == 0
        code, out, _ = run(capsys, "mc", "--succinct", sg, "--formula", "min_loop")
        assert code == 0 and out.strip() == want


def test_sat_pipeline(capsys, files):
    sg = files / "sat.succ"
    assert run(capsys, "reduce-sat", "--cnf", files / "sat.cnf", "--out", sg)[0] == 0
    # the fixture pumps the negation of psi1, so satisfiable means psi1 holds
    code, out, _ = run(capsys, "mc", "--succinct", sg, "--formula", "psi1")
    assert code == 0 and out.strip() == "true"


def test_cvp_pipeline(capsys, files):
    sg = files / "cvp.succ"
    assert run(capsys, "reduce-cvp", "--netlist", files / "one.net", "--out", sg)[0] == 0
    code, out, _ = run(capsys, "mc", "--succinct", sg, "--formula", "psi1")
    assert out.strip() == "true"


def test_pump_commands(capsys):
    code, out, _ = run(capsys, "pump", "--fixture", "loops")
    assert code == 0 and '"sizes"' in out
    code, out, _ = run(capsys, "synth-pump", "--fixture", "tournament", "--ell", "3")
    assert code == 0 and out.startswith("succinct N=")


@pytest.mark.parametrize("argv", [
    ["mc", "--graph", "/nonexistent", "--formula", "psi1"],
    ["mc", "--graph", "GRAPH", "--formula", "no_such_formula"],
    ["pump", "--fixture", "nope"],
    ["reduce-sat", "--cnf", "GRAPH"],
    ["verify", "--check", "not_a_check"],
    ["--decode-guard", "0", "mc", "--graph", "GRAPH", "--formula", "psi1"],
])
def test_input_errors_exit_2(capsys, files, argv):
    argv = [str(files / "k3.graph") if a == "GRAPH" else a for a in argv]
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_decode_guard_env(capsys, files, monkeypatch):
    sg = files / "k3.succ"
    run(capsys, "encode", "--graph", files / "k3.graph", "--out", sg)
    monkeypatch.setenv("SUCCINCT_MSO_DECODE_GUARD", "2")
    assert run(capsys, "decode", "--succinct", sg)[0] == 2


def test_verify_report_lines(capsys):
    code, out, err = run(capsys, "verify", "--quick", "--check", "saturation", "--check", "pumping")
    lines = out.strip().splitlines()
    assert code == 0
    assert [ln.split()[0] for ln in lines] == ["check=pumping", "check=saturation"]
    assert all(" status=pass " in ln for ln in lines)
    assert "2/2 checks passed" in err


def test_verify_is_deterministic_per_seed(capsys):
    argv = ["verify", "--quick", "--seed", "7", "--check", "compositionality", "--check", "cvp_reduction"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "succinct_mso", "--help"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "verify-all" in proc.stdout


def test_verify_all_figures(capsys, tmp_path):
    code, out, err = run(capsys, "verify-all", "--quick", "--figures", tmp_path / "figs")
    assert code == 0
    assert len(out.strip().splitlines()) == 12
    for name in ("gate_growth.png", "adjacency.png", "type_stabilization.png"):
        assert (tmp_path / "figs" / name).stat().st_size > 0


def test_pump_stable_fixture(capsys):
    code, out, err = run(capsys, "pump", "--stable-fixture", "psi1-top")
    doc = json.loads(out)
    assert code == 0 and doc["branch"] == "not-psi"
    assert all(r["psi_prime"] == r["expected"] and r["chi"] for r in doc["verification"])


def test_pump_stable_from_files(capsys, tmp_path):
    from succinct_mso import cwd
    from succinct_mso import fixtures as F
    docs = {"universe": [json.loads(cwd.dumps(c)) for c in F.arc_universe()],
            "pump_models": [json.loads(cwd.dumps(F.edgeless_chain(4)))]}
    (tmp_path / "u.json").write_text(json.dumps(docs))
    code, out, _ = run(capsys, "pump", "--formula", "psi1", "--chi", "top",
                       "--universe", tmp_path / "u.json")
    assert code == 0 and json.loads(out)["sizes"][1] == json.loads(out)["sizes"][2]
