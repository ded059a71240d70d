import json
import math

import pytest

from graphex.cli import main, parse_grid


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def triangle_file(tmp_path):
    p = tmp_path / "tri.txt"
    p.write_text("1 2\n2 3\n1 3\n")
    return str(p)


def test_parse_grid():
    assert parse_grid("16..128") == [16.0, 32.0, 64.0, 128.0]
    assert parse_grid("0.1,0.5") == [0.1, 0.5]
    with pytest.raises(ValueError):
        parse_grid("10..1")


def test_estimate_triangle(capsys, triangle_file):
    code, out, _ = run(capsys, "estimate", "--input", triangle_file, "--p", "0.5")
    assert code == 0
    doc = json.loads(out)
    assert doc["n1"] == 3 and doc["np"] == pytest.approx(1.125)
    assert doc["sigma_hat"] == pytest.approx(-math.log2(0.75), abs=1e-12)
    assert doc["sigma_hat"] == pytest.approx(0.41504, abs=5e-6)


def test_estimate_cr_and_undefined(capsys, tmp_path, triangle_file):
    code, out, _ = run(capsys, "estimate", "--input", triangle_file, "--estimator", "cr")
    assert code == 0 and json.loads(out)["sigma_hat"] == pytest.approx(1.0)
    one = tmp_path / "one.txt"
    one.write_text("a b\n")
    code, _, err = run(capsys, "estimate", "--input", str(one), "--estimator", "cr")
    assert code == 3 and "numerical" in err


def test_simulate_is_reproducible(capsys, tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for path in (a, b):
        code, _, _ = run(capsys, "simulate", "--model", "dense", "--size", "50", "--seed", "7", "--out", str(path))
        assert code == 0
    assert a.read_bytes() == b.read_bytes()


def test_seed_from_environment(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("GRAPHEX_SEED", "7")
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    run(capsys, "simulate", "--model", "dense", "--size", "50", "--out", str(a))
    run(capsys, "simulate", "--model", "dense", "--size", "50", "--seed", "7", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "frobnicate")[0] == 1
    assert run(capsys, "estimate", "--input", str(tmp_path / "missing.txt"))[0] == 2
    assert run(capsys, "estimate")[0] == 1
    bad = tmp_path / "bad.txt"
    bad.write_text("1 2 3\n")
    code, _, err = run(capsys, "estimate", "--input", str(bad))
    assert code == 2 and "line 1" in err
    assert run(capsys, "risk-table", "--model", "nope", "--reps", "2")[0] == 1
    assert run(capsys, "--version")[0] == 0


def test_real_eval_r_one(capsys, triangle_file, tmp_path):
    g = tmp_path / "g.txt"
    g.write_text("".join(f"{i} {j}\n" for i in range(12) for j in range(i + 1, 12) if (i * j) % 3))
    code, out, _ = run(capsys, "real-eval", "--input", str(g), "--r", "1", "--reps", "5", "--seed", "1")
    assert code == 0
    rows = [line.split(",") for line in out.strip().splitlines()[1:]]
    nrmse = [float(r[3]) for r in rows if r[2] == "nrmse"]
    assert len(nrmse) == 3 and all(v == 0 for v in nrmse)


def test_trace_eval(capsys, tmp_path):
    tr = tmp_path / "t.txt"
    tr.write_text("1 a b\n2 c d\n3 e f\n")
    code, out, _ = run(capsys, "trace-eval", "--input", str(tr), "--times", "3", "--final", "3")
    assert code == 0
    nhat = [float(r.split(",")[3]) for r in out.splitlines() if ",nhat," in r]
    assert nhat == [3.0, 3.0, 3.0]


def test_risk_table_writes_csv_and_json(capsys, tmp_path):
    out = tmp_path / "r.csv"
    code, stdout, _ = run(capsys, "risk-table", "--model", "dense", "--sizes", "10,20", "--reps", "10",
                          "--seed", "1", "--out", str(out), "--threads", "1")
    assert code == 0
    assert out.read_text().startswith("size,estimator,metric,value,stderr,n_reps\n")
    doc = json.loads(stdout)
    assert doc["config"]["replicates"] == 10 and doc["config"]["sizes"] == [10.0, 20.0]


def test_species_table_runs(capsys):
    code, out, _ = run(capsys, "species-table", "--model", "ggp", "--sigma", "0.5", "--sizes", "20",
                       "--reps", "5", "--seed", "1")
    assert code == 0 and ",nrmse," in out


def test_theory_csv(capsys, tmp_path):
    out = tmp_path / "th.csv"
    code, stdout, _ = run(capsys, "theory", "--model", "dense", "--sizes", "16..256", "--out", str(out))
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "sigma,size,gamma,bias" and len(lines) == 6
    assert json.loads(stdout)["diagnostics"][0]["slope"] == pytest.approx(-1.0, abs=0.1)
