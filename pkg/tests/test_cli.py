import json

import pytest

from qencopt.cli import main
from qencopt.circuit import read_circuit


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def encoder_file(tmp_path, capsys):
    path = tmp_path / "enc.circ"
    assert run(capsys, "synth", "--out", str(path))[0] == 0
    return path


def test_synth_and_stats(encoder_file, capsys):
    code, out, _ = run(capsys, "stats", "--in", str(encoder_file))
    assert code == 0
    d = json.loads(out)
    assert (d["h"], d["z"], d["cnot"], d["cz"]) == (4, 2, 4, 6)


def test_synth_to_stdout(capsys):
    code, out, _ = run(capsys, "synth")
    assert code == 0 and out.startswith("qubits 5")


def test_optimize_verify_route(encoder_file, tmp_path, capsys):
    opt = tmp_path / "opt.circ"
    trace = tmp_path / "trace.json"
    code, out, _ = run(capsys, "optimize", "--in", str(encoder_file), "--out", str(opt), "--trace", str(trace))
    assert code == 0
    assert json.loads(out)["census_after"]["cnot"] == 8
    entries = json.loads(trace.read_text())
    assert {"rule", "location", "census_before", "census_after"} <= set(entries[0])

    code, out, _ = run(capsys, "verify", "--circuit", str(opt))
    assert code == 0 and json.loads(out)["verdict"] == "PASS"

    routed = tmp_path / "routed.circ"
    report = tmp_path / "route.json"
    code, _, _ = run(capsys, "route", "--in", str(opt), "--grid", "2x3", "--search", "--decompose",
                     "--out", str(routed), "--report", str(report))
    assert code == 0
    rep = json.loads(report.read_text())
    assert rep["swap_count"] == 1 and rep["census"]["swap"] == 1
    assert read_circuit(routed).census()["cnot"] == 11

    layout = tmp_path / "layout.txt"
    layout.write_text(rep["layout_text"])
    code, _, _ = run(capsys, "route", "--in", str(opt), "--grid", "2x3", "--layout", str(layout),
                     "--report", str(tmp_path / "r2.json"), "--out", str(tmp_path / "r2.circ"))
    assert code == 0
    assert json.loads((tmp_path / "r2.json").read_text())["swap_count"] == 1


def test_verify_mutated_fails(encoder_file, tmp_path, capsys):
    lines = encoder_file.read_text().splitlines()
    mutated = tmp_path / "bad.circ"
    mutated.write_text("\n".join(l for l in lines if l != "z 3") + "\n")
    code, out, _ = run(capsys, "--pretty", "verify", "--circuit", str(mutated))
    assert code == 1 and "FAIL" in out


def test_verify_strict(encoder_file, capsys):
    assert run(capsys, "verify", "--circuit", str(encoder_file), "--strict")[0] == 1


def test_linear_both_ways(tmp_path, capsys):
    m = tmp_path / "m.txt"
    m.write_text("100\n110\n101\n")
    out = tmp_path / "c.circ"
    assert run(capsys, "linear", "--matrix", str(m), "--method", "optimal", "--out", str(out))[0] == 0
    assert read_circuit(out).census()["cnot"] == 2
    code, text, _ = run(capsys, "linear", "--in", str(out))
    assert code == 0 and text == "100\n110\n101\n"


@pytest.mark.parametrize("argv", [
    ["stats", "--in", "/nonexistent.circ"],
    ["route", "--in", "{enc}", "--grid", "2by3"],
    ["route", "--in", "{enc}", "--grid", "1x2"],
    ["optimize", "--in", "{enc}", "--passes", "bogus"],
    ["verify", "--circuit", "{enc}", "--code", "{bad}"],
    ["linear", "--matrix", "{bad}"],
    ["linear", "--in", "{enc}"],
    ["frobnicate"],
])
def test_input_errors_exit_2(argv, encoder_file, tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("garbage here\n")
    argv = [a.format(enc=encoder_file, bad=bad) for a in argv]
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_malformed_circuit_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.circ"
    bad.write_text("qubits 2\ncnot 0 0\n")
    code, _, err = run(capsys, "stats", "--in", str(bad))
    assert code == 2 and "line 2" in err


def test_demo(tmp_path, capsys):
    code, out, _ = run(capsys, "--out-dir", str(tmp_path / "a"), "demo")
    assert code == 0
    rep = json.loads(out)
    stages = {s["stage"]: s for s in rep["stages"]}
    assert stages["route-initial"]["swap_count"] == 3
    assert stages["route-optimized"]["swap_count"] == 1
    assert rep["gates_saved"] == 4
    assert rep["table"][-1]["cnot"] == 6
    # Deterministic artifacts.
    run(capsys, "demo", "--out-dir", str(tmp_path / "b"))
    for f in (tmp_path / "a").iterdir():
        assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes()


def test_demo_skip_optimize(tmp_path, capsys):
    code, out, _ = run(capsys, "demo", "--skip-optimize", "--pretty", "--out-dir", str(tmp_path))
    assert code == 0
    assert "swaps=3" in out and "optimized" not in out.split("column")[0]
