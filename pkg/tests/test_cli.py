import hashlib
import subprocess
import sys

import numpy as np
import pytest

from scalenets.cli import main
from scalenets.geometry import read_points


def run(args):
    return main(args)


def sha(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def test_gen_data_affine(tmp_path):
    out = tmp_path / "pts.txt"
    assert run(
        ["gen-data", "--kind", "affine", "--k", "2", "--d", "16", "--n", "500",
         "--seed", "1", "--output", str(out)]
    ) == 0
    cloud = read_points(out)
    assert cloud.n == 500 and cloud.dim == 16
    assert len(out.read_text().splitlines()) == 501


def test_gen_data_missing_seed_is_usage_error(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "scalenets", "gen-data", "--kind", "uniform",
         "--n", "10", "--d", "2", "--output", str(tmp_path / "x.txt")],
        capture_output=True,
    )
    assert proc.returncode == 2


def test_gen_data_curve_replay(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    args = ["gen-data", "--kind", "curve", "--spacing", "0.01", "--n", "60",
            "--d", "3", "--seed", "9"]
    assert run(args + ["--output", str(a)]) == 0
    assert run(args + ["--output", str(b)]) == 0
    assert sha(a) == sha(b)
    pts = read_points(a).points
    steps = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    assert np.allclose(steps, 0.01)


def test_build_forest_verify_and_single_root(tmp_path):
    pts = tmp_path / "pts.txt"
    run(["gen-data", "--kind", "uniform", "--n", "60", "--d", "3",
         "--seed", "2", "--output", str(pts)])
    forest = tmp_path / "forest.txt"
    assert run(
        ["build-forest", "--input", str(pts), "--output", str(forest),
         "--t", "0.4", "--seed", "3", "--exact-nn", "--verify"]
    ) == 0
    # t larger than the diameter: one root
    big = tmp_path / "big.txt"
    assert run(
        ["build-forest", "--input", str(pts), "--output", str(big),
         "--t", "100", "--seed", "3", "--exact-nn"]
    ) == 0
    first = big.read_text().splitlines()[1]
    assert first.startswith("node 0 parent=-")
    assert sum(1 for line in big.read_text().splitlines() if "parent=-" in line) == 1


def test_build_forest_bad_input(tmp_path):
    assert run(
        ["build-forest", "--input", str(tmp_path / "missing.txt"),
         "--output", str(tmp_path / "f.txt"), "--t", "1", "--seed", "1"]
    ) == 1


def test_exact_nn_repeatable_topology(tmp_path):
    pts = tmp_path / "pts.txt"
    run(["gen-data", "--kind", "clustered", "--n", "80", "--d", "3",
         "--seed", "5", "--output", str(pts)])
    outs = []
    for name in ("f1.txt", "f2.txt"):
        out = tmp_path / name
        assert run(
            ["build-forest", "--input", str(pts), "--output", str(out),
             "--t", "1.0", "--seed", "7", "--exact-nn"]
        ) == 0
        outs.append(sha(out))
    assert outs[0] == outs[1]


def test_wspd_pipeline_with_verify(tmp_path):
    pts = tmp_path / "pts.txt"
    run(["gen-data", "--kind", "clustered", "--n", "300", "--d", "3",
         "--seed", "4", "--output", str(pts)])
    out = tmp_path / "out.wspd"
    assert run(
        ["wspd", "--input", str(pts), "--output", str(out), "--t", "2",
         "--epsilon", "0.5", "--seed", "6", "--exact-nn", "--verify"]
    ) == 0
    assert out.read_text().startswith("wspd v1 ")


def test_wssd_pipeline_with_verify(tmp_path):
    pts = tmp_path / "pts.txt"
    run(["gen-data", "--kind", "uniform", "--n", "40", "--d", "3",
         "--seed", "8", "--output", str(pts)])
    out = tmp_path / "out.wssd"
    assert run(
        ["wssd", "--input", str(pts), "--output", str(out), "--t", "0.25",
         "--epsilon", "0.5", "--k", "2", "--seed", "6", "--exact-nn", "--verify"]
    ) == 0
    assert out.read_text().startswith("wssd v1 ")


def test_cech_pipeline_with_verify(tmp_path):
    pts = tmp_path / "pts.txt"
    run(["gen-data", "--kind", "uniform", "--n", "20", "--d", "3",
         "--seed", "3", "--output", str(pts)])
    out = tmp_path / "out.cech"
    assert run(
        ["cech", "--input", str(pts), "--output", str(out), "--t", "0.5",
         "--epsilon", "0.5", "--k", "2", "--seed", "6", "--exact-nn",
         "--verify", "--grid", "0.15,0.3,0.5"]
    ) == 0
    assert out.read_text().startswith("cechapprox v1 ")


def test_forest_scale_mismatch_rejected(tmp_path):
    pts = tmp_path / "pts.txt"
    run(["gen-data", "--kind", "uniform", "--n", "30", "--d", "2",
         "--seed", "2", "--output", str(pts)])
    forest = tmp_path / "forest.txt"
    run(["build-forest", "--input", str(pts), "--output", str(forest),
         "--t", "0.5", "--seed", "3", "--exact-nn"])
    assert run(
        ["wspd", "--input", str(pts), "--forest", str(forest),
         "--output", str(tmp_path / "o.wspd"), "--t", "0.3",
         "--epsilon", "0.5", "--seed", "3"]
    ) == 1


def test_dim_estimate_output(tmp_path, capsys):
    pts = tmp_path / "pts.txt"
    run(["gen-data", "--kind", "uniform", "--n", "40", "--d", "2",
         "--seed", "2", "--output", str(pts)])
    forest = tmp_path / "forest.txt"
    run(["build-forest", "--input", str(pts), "--output", str(forest),
         "--t", "0.3", "--seed", "3", "--exact-nn"])
    assert run(["dim-estimate", "--forest", str(forest)]) == 0
    line = capsys.readouterr().out.strip()
    assert line.startswith("dim-estimate t=") and " x=" in line and " log2x=" in line


def test_bench_deterministic_nontiming_columns(tmp_path):
    outs = []
    for name in ("b1.tsv", "b2.tsv"):
        out = tmp_path / name
        assert run(
            ["bench", "--n-list", "200", "--rho-list", "0.5", "--d", "4",
             "--seed", "11", "--output", str(out)]
        ) == 0
        outs.append(out.read_text())
    for text in outs:
        header, row = text.strip().splitlines()
        assert header.split("\t") == [
            "n", "rho", "build_seconds", "mean_query_seconds", "mean_candidates", "recall",
        ]
    stable = []
    for text in outs:
        row = text.strip().splitlines()[1].split("\t")
        stable.append((row[0], row[1], row[4], row[5]))
    assert stable[0] == stable[1]
    assert float(stable[0][3]) >= 0.85  # recall well above 1 - delta


def test_run_suite_cli(tmp_path):
    out = tmp_path / "suite.tsv"
    assert run(["run-suite", "--scale", "tiny", "--seed", "42",
                "--output", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0].startswith("property\t")
    assert all("\tpass\t" in line for line in lines[1:])
