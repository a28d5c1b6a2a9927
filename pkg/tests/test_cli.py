import csv
import io
import json
import shutil
import subprocess

import pytest

from littlewood_lab.cli import EXIT_INPUT, EXIT_OK, main

S2, S3 = "0+1*sqrt(2)", "0+1*sqrt(3)"
NEAR = ["--alpha", "1/3+1/1000000*sqrt(2)", "--beta", "1/5+1/1000000*sqrt(3)"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_count_csv(capsys):
    code, out, err = run(capsys, "count", "--alpha", S2, "--beta", S3, "--N", "1000", "--eps", "0.1")
    assert code == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [int(r["n"]) for r in rows] == [4, 7, 12, 15, 29, 41, 56, 70, 82, 239, 362, 780, 985]
    assert "count: 13 of n <= 1000" in err


def test_count_eps_zero(capsys):
    code, out, _ = run(capsys, "count", "--alpha", S2, "--beta", S3, "--N", "500", "--eps", "0",
                       "--format", "json")
    assert code == EXIT_OK and json.loads(out)["count"] == 0


def test_count_cube_matches_threshold(capsys):
    _, a, _ = run(capsys, "count", "--alpha", S2, "--beta", S3, "--T", "3", "--eps", "1/4", "--cube",
                  "--non-strict", "--format", "json")
    _, b, _ = run(capsys, "count", "--alpha", S2, "--beta", S3, "--T", "3", "--eps", "1/64",
                  "--non-strict", "--format", "json")
    assert json.loads(a)["hits"] == json.loads(b)["hits"]
    assert json.loads(a)["N"] == 403


def test_rational_warning(capsys):
    code, _, err = run(capsys, "count", "--alpha", "1/2", "--beta", S3, "--N", "100", "--eps", "0.1")
    assert code == EXIT_OK
    assert "warning: rational input, theorem hypotheses void" in err


@pytest.mark.parametrize("argv", [
    ["count", "--alpha", "abc", "--beta", S3, "--N", "10"],
    ["count", "--beta", S3, "--N", "10"],
    ["count", "--alpha", S2, "--beta", S3],
    ["count", "--alpha", S2, "--beta", S3, "--N", "10", "--eps=-1/4"],
    ["growth", "--alpha", S2, "--beta", S3, "--Ns", "10,100"],
    ["triangles", "--alpha", S2, "--beta", S3, "--N", "100"],
    ["coverage", "--alpha", S2, "--beta", S3, "--T", "3", "--grid", "8"],
    ["verify", "--alpha", S2, "--beta", S3, "--T", "3", "--eps", "1/2"],
])
def test_input_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_INPUT and err.startswith("error:")


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"alpha": S2, "beta": S3, "N": 1000, "eps": 0.1}))
    code, out, _ = run(capsys, "count", "--config", str(cfg), "--format", "json")
    assert code == EXIT_OK and json.loads(out)["count"] == 13
    assert json.loads(out)["config"]["eps"] == "0.1"
    code, out, _ = run(capsys, "count", "--config", str(cfg), "--eps", "0.05", "--format", "json")
    assert json.loads(out)["count"] < 13
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"alpha": S2, "beta": S3, "N": 10, "colour": 1}))
    assert run(capsys, "count", "--config", str(bad))[0] == EXIT_INPUT


def test_triangles_outputs(tmp_path, capsys):
    stem = tmp_path / "sub" / "atlas"
    code, _, _ = run(capsys, "triangles", "--alpha", S2, "--beta", S3, "--T", "4", "-o", str(stem))
    assert code == EXIT_OK
    svg = (tmp_path / "sub" / "atlas.svg").read_text()
    rows = list(csv.DictReader(io.StringIO((tmp_path / "sub" / "atlas.csv").read_text())))
    assert svg.count("<polygon") == len(rows) > 0
    # [0, T]^2 maps onto a fixed 1000 x 1000 square
    assert '<rect x="0.000" y="0.000" width="1000.000" height="1000.000"' in svg
    for r in rows:
        assert f'>{r["n"]}</text>' in svg


def test_coverage_json(tmp_path, capsys):
    out = tmp_path / "cov.json"
    code, _, _ = run(capsys, "coverage", "--alpha", S2, "--beta", S3, "--T", "3", "--grid", "40",
                     "-o", str(out))
    rep = json.loads(out.read_text())
    assert code == EXIT_OK
    assert rep["coverage"]["agreement"] is True
    assert rep["coverage"]["gamma_lower"] <= rep["coverage"]["gamma_upper"]


def test_verify_near_rational(tmp_path, capsys):
    out = tmp_path / "v.json"
    code, _, _ = run(capsys, "verify", *NEAR, "--T", "6", "--eps", "1/4", "--grid", "64", "-o", str(out))
    rep = json.loads(out.read_text())
    assert code == EXIT_OK and rep["all_satisfied"] is True
    assert rep["witness"]["n0"] == 15 and rep["witness"]["ks"] == [1, 2, 3]
    assert [c["label"] for c in rep["bound_checks"]][-1] == "18(log T)^2"
    assert rep["optimal_L"]["bound"] >= rep["optimal_L"]["log_bound"]
    assert rep["fgamma"]["holds"] is True


def test_verify_small_T_skips_log_choice(capsys):
    code, out, err = run(capsys, "verify", "--alpha", S2, "--beta", S3, "--T", "2", "--grid", "32")
    assert code == EXIT_OK and "skipped" in err
    rep = json.loads(out)
    assert all(c["label"] == "" for c in rep["bound_checks"]) and "optimal_L" not in rep


def test_growth_csv(capsys):
    code, out, _ = run(capsys, "growth", "--alpha", S2, "--beta", S3, "--eps", "0.01", "--Ns", "16,1000,100000")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == EXIT_OK and [int(r["N"]) for r in rows] == [16, 1000, 100000]
    counts = [int(r["count"]) for r in rows]
    assert counts == sorted(counts)


def test_determinism(tmp_path, capsys):
    outs = []
    for i in range(2):
        stem = tmp_path / f"a{i}"
        run(capsys, "triangles", *NEAR, "--T", "5", "-o", str(stem))
        run(capsys, "verify", *NEAR, "--T", "5", "--grid", "48", "--threads", str(1 + 3 * i),
            "-o", str(tmp_path / f"v{i}.json"))
        outs.append([(stem.with_suffix(x)).read_bytes() for x in (".svg", ".csv")]
                    + [(tmp_path / f"v{i}.json").read_bytes()])
    assert outs[0] == outs[1]


@pytest.mark.skipif(shutil.which("littlewood-lab") is None, reason="console script not installed")
def test_console_script():
    p = subprocess.run(["littlewood-lab", "count", "--alpha", S2, "--beta", S3, "--N", "100", "--eps", "0.1"],
                       capture_output=True, text=True)
    assert p.returncode == 0 and p.stdout.startswith("n,m1,m2")
    p = subprocess.run(["littlewood-lab", "count", "--alpha", "x", "--beta", S3, "--N", "100"],
                       capture_output=True, text=True)
    assert p.returncode == 1
