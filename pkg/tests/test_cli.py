import json
import subprocess
import sys
from fractions import Fraction

import pytest

from semimeas.cli import main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.startswith("{") else out)


def fr(v):
    return Fraction(v)


def test_check_fixture_a(files, capsys):
    code, rep = run(["check", files["fa"]], capsys)
    assert code == 0 and rep["verdict"] == "pass"
    assert rep["family"]["cap_closed"] and not rep["family"]["cup_closed"]
    assert rep["semimodular"] and rep["agree"]
    assert rep["seed"] == 0 and rep["tool"]["name"] == "semimeas"


def test_check_non_modular_gives_no_with_witness(files, capsys):
    code, rep = run(["check", files["nonmod"]], capsys)
    assert code == 0 and rep["semimodular"] is False and rep["agree"]
    assert "witness" in json.dumps(rep)


@pytest.mark.parametrize("name", ["not_semilattice", "broken"])
def test_check_bad_input_exits_2(files, capsys, name):
    code, rep = run(["check", files[name]], capsys)
    assert code == 2 and rep["verdict"] == "input_error" and rep["error"]


def test_missing_file_exits_2(tmp_path, capsys):
    code, rep = run(["check", str(tmp_path / "absent.json")], capsys)
    assert code == 2


def test_extend_ring_atom_table(files, capsys):
    code, rep = run(["extend", files["fa"], "--to", "ring"], capsys)
    assert code == 0
    assert rep["atom_table"] == {"1": ["1"], "2": ["1"], "3": ["2"]}
    assert all(e["equal"] for e in rep["ledger"])


def test_extend_lattice_value(files, capsys):
    code, rep = run(["extend", files["fa"], "--to", "lattice"], capsys)
    vals = {tuple(v["set"]): v["value"] for v in rep["values"]}
    assert code == 0 and vals[("1", "2", "3")] == ["4"]


def test_extend_algebra_complement_rule(files, capsys):
    code, rep = run(["extend", files["open_chain"], "--to", "algebra", "--total", "0"], capsys)
    assert code == 0 and rep["total"] == ["0"]
    vals = {frozenset(v["set"]): fr(v["value"][0]) for v in rep["values"]}
    full = frozenset("abc")
    for s, v in vals.items():
        assert vals[full - s] == -v + 0
    assert rep["positivity"]["positive"] is False


def test_extend_algebra_total_conflict_is_input_error(files, capsys):
    code, rep = run(["extend", files["fa"], "--to", "algebra", "--total", "0"], capsys)
    assert code == 2 and "fixed at 4" in rep["error"]


def test_extend_non_semimodular_is_input_error(files, capsys):
    code, rep = run(["extend", files["nonmod"]], capsys)
    assert code == 2 and "not semi-modular" in rep["error"]


def test_extend_product_tensor(files, capsys):
    code, rep = run(["extend", files["product"], "--product"], capsys)
    assert code == 0 and rep["target"] == "product_ring"
    assert all(e["equal"] for e in rep["ledger"])
    total = sum(fr(x["value"][0]) for x in rep["atom_tensor"])
    assert total == 16


def test_process_fixture_b(files, capsys):
    code, rep = run(["process", files["fb"], "--op", "doob-meyer"], capsys)
    assert code == 0
    assert all(fr(v) == 0 for v in rep["M"])
    assert all(e["equal"] for e in rep["ledger"] if e["name"] == "doob_meyer")
    code, rep = run(["process", files["fb"], "--op", "riesz"], capsys)
    assert code == 0 and all(fr(v) == 0 for z in rep["Z"].values() for v in z)
    code, rep = run(["process", files["fb"], "--op", "quasinorm"], capsys)
    assert code == 0 and fr(rep["quasinorm"]) == 0


@pytest.mark.parametrize("op", ["validate", "extend", "quasinorm", "riesz", "doob-meyer",
                                "isometry", "chain", "stopping"])
@pytest.mark.parametrize("model", ["chain", "g22"])
def test_every_process_op_passes(files, capsys, op, model):
    code, rep = run(["process", files[model], "--op", op], capsys)
    assert code == 0, rep.get("error")
    assert all(e["equal"] for e in rep.get("ledger", []) if "equal" in e)


def test_unsupported_grid_exits_2(files, capsys):
    code, rep = run(["process", files["g23"], "--op", "extend"], capsys)
    assert code == 2 and "semi-additive" in rep["error"]


def test_demo_bounds(capsys):
    code, rep = run(["demo", "experiment", "--locations", "4", "--groups", "1,2,4", "--eta", "3"], capsys)
    assert code == 0
    assert [fr(r["bound"]) for r in rep["table"]] == [3, 6, 12]


def test_selftest_core_is_byte_stable(capsys):
    argv = ["selftest", "--suite", "core", "--samples", "20", "--seed", "7"]
    c1, out1 = main(argv), capsys.readouterr().out
    c2, out2 = main(argv + ["--parallel", "2"]), capsys.readouterr().out
    assert c1 == c2 == 0 and out1 == out2


def test_selftest_fault_injection_fails_moebius(capsys):
    code, rep = run(["selftest", "--suite", "core", "--samples", "5", "--inject-fault", "nu"], capsys)
    assert code == 1 and rep["verdict"] == "fail"
    failed = {p["name"] for p in rep["properties"] if not p["passed"]}
    assert "mobius_interval_sums_vanish" in failed
    assert all(p["witness"] is not None for p in rep["properties"] if not p["passed"])


def test_reports_are_deterministic(files, capsys):
    outs = []
    for _ in range(2):
        main(["process", files["g22"], "--op", "doob-meyer", "--seed", "5"])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]


def test_text_format_and_output_file(files, tmp_path, capsys):
    target = tmp_path / "r.json"
    assert main(["check", files["fa"], "--output", str(target)]) == 0
    assert json.loads(target.read_text())["verdict"] == "pass"
    assert main(["check", files["fa"], "--format", "text"]) == 0
    assert "verdict: pass" in capsys.readouterr().out


def test_ground_cap_is_enforced(files, capsys, monkeypatch):
    # the flag writes the variable; registering it here makes monkeypatch undo that
    monkeypatch.setenv("SEMIMEAS_MAX_GROUND", "20")
    code, rep = run(["check", files["fa"], "--max-ground", "2"], capsys)
    assert code == 2


def test_ledger_round_trips_from_serialized_values(files, capsys):
    code, rep = run(["process", files["g22"], "--op", "doob-meyer"], capsys)
    for e in rep["ledger"]:
        if isinstance(e["lhs"], list):
            assert [fr(x) for x in e["lhs"]] == [fr(x) for x in e["rhs"]]


def test_console_script_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "semimeas.cli", "check", files["fa"]],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["verdict"] == "pass"
    assert "finished" in proc.stderr
