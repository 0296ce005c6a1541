import csv
import io
import json
import math

import pytest

from harmonic_chain import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr()


def table(text):
    lines = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def test_spectrum_n3(capsys):
    code, out = run(capsys, "spectrum", "--n-atoms", "3")
    assert code == 0
    rows = table(out.out)
    assert [float(r["lambda_exact"]) for r in rows] == pytest.approx([0, 1, 3], abs=1e-12)
    assert '# parameters: ' in out.out and '"reading": "consistent"' in out.out


def test_spectrum_n2_error(capsys):
    code, out = run(capsys, "spectrum", "--n-atoms", "2")
    assert float(table(out.out)[1]["abs_error"]) == pytest.approx(2.0)


def test_spectrum_json(capsys):
    code, out = run(capsys, "spectrum", "--n-atoms", "10", "--format", "json")
    doc = json.loads(out.out)
    assert doc["columns"][0] == "n" and len(doc["rows"]) == 10
    assert doc["metadata"]["max_abs_error"] <= 0.4


def test_widths_start_at_sigma(capsys):
    code, out = run(capsys, "widths", "--sigma", "0.8", "--t-points", "5")
    rows = table(out.out)
    firsts = [r for r in rows if float(r["t"]) == 0.0]
    assert firsts and all(float(r["value"]) == pytest.approx(0.8) for r in firsts)


def test_widths_kg_negative_radicand_flagged(capsys):
    code, out = run(capsys, "widths", "--kind", "kg", "--reading", "verbatim", "--sbar", "0.5",
                    "--k-values", "1", "--t-points", "41")
    assert code == 0
    statuses = {r["status"] for r in table(out.out)}
    assert statuses == {"ok", "NEGATIVE_RADICAND"}


def test_kernel_caustic_rows(capsys):
    code, out = run(capsys, "kernel", "--t-max", str(math.pi), "--t-points", "3")
    assert code == 0
    rows = table(out.out)
    assert rows[-1]["status"].startswith("CAUSTIC")
    assert rows[0]["status"] == "ok"


def test_quench_default_peak(capsys, caplog):
    code, out = run(capsys, "quench", "--t-max", str(math.pi), "--t-points", "3")
    assert code == 0
    assert "free" in caplog.text
    last = [r for r in table(out.out) if r["label"] == "1"][-1]
    assert float(last["formula_value"]) == pytest.approx(1.0)
    assert float(last["oracle_value"]) == pytest.approx(2.0, abs=1e-6)


def test_quench_zero_source(capsys, tmp_path):
    path = tmp_path / "zero.csv"
    path.write_text("# kind: site\nlabel,value\n0,0\n1,0\n2,0\n")
    code, out = run(capsys, "quench", "--source", str(path), "--t-points", "4")
    assert code == 0
    rows = table(out.out)
    assert rows and all(float(r["formula_value"]) == 0.0 for r in rows)


def test_quench_xi_and_k_sources(capsys, tmp_path):
    xi = tmp_path / "xi.csv"
    xi.write_text("# kind: xi\nlabel,value\n0,1\n3.2,1\n")
    code, out = run(capsys, "quench", "--source", str(xi), "--n-atoms", "20", "--j-max", "3",
                    "--t-points", "4")
    assert code == 0 and {r["quantity"] for r in table(out.out)} == {"alpha_j"}
    k = tmp_path / "k.csv"
    k.write_text("# kind: k\nlabel,value\n2,1\n")
    code, out = run(capsys, "quench", "--source", str(k), "--t-points", "4")
    assert code == 0 and {r["quantity"] for r in table(out.out)} == {"alpha_k", "nu_k"}


def test_quanta_reports_both(capsys):
    code, out = run(capsys, "quanta", "--modes", "1", "--t-points", "2", "--t-max", "0.5",
                    "--grid-points", "1024")
    rows = table(out.out)
    assert float(rows[0]["formula_value"]) == pytest.approx(0.75)
    assert float(rows[0]["oracle_value"]) == pytest.approx(0.125, abs=1e-4)


def test_continuum_and_figure1(capsys):
    code, out = run(capsys, "continuum", "--n-values", "50,100", "--j-values", "1")
    assert code == 0 and len(table(out.out)) == 2
    code, out = run(capsys, "figure1", "--format", "json")
    doc = json.loads(out.out)
    assert {r[1] for r in doc["rows"]} == {5.0, 10.0}


def test_determinism(capsys):
    first = run(capsys, "figure1", "--t-points", "11")[1].out
    second = run(capsys, "figure1", "--t-points", "11")[1].out
    assert first == second


def test_config_precedence(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n_atoms": 4, "omega": 2.0}))
    code, out = run(capsys, "spectrum", "--config", str(cfg), "--n-atoms", "5")
    assert len(table(out.out)) == 5
    assert '"omega": 2.0' in out.out


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "spectrum", "--n-atoms", "1")[0] == cli.EXIT_CONFIG
    assert run(capsys, "widths", "--kind", "nope")[0] == cli.EXIT_CONFIG
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"not_a_field": 1}))
    assert run(capsys, "spectrum", "--config", str(bad))[0] == cli.EXIT_CONFIG
    assert run(capsys, "quench", "--source", str(tmp_path / "missing.csv"))[0] == cli.EXIT_CONFIG
    # verbatim reading at a point where the radicand is negative for every k requested
    assert run(capsys, "figure1", "--reading", "verbatim", "--sbar", "0.3")[0] == cli.EXIT_NUMERIC
    with pytest.raises(SystemExit):
        cli.main(["nosuchcommand"])
