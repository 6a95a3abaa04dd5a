"""CLI pipelines, demo artifacts, and determinism."""

import json
import subprocess
import sys

import pytest

from oamix import read_design
from oamix.cli import main


def test_generate_expand_pipeline(tmp_path):
    base = tmp_path / "base.csv"
    expanded = tmp_path / "expanded.csv"
    assert main(["generate", "--base", "lattice", "--m", "3", "--w", "3", "--out", str(base)]) == 0
    assert main(["expand", "--input", str(base), "--out", str(expanded)]) == 0
    design = read_design(expanded.read_text())
    assert len(design) == 21
    assert design.is_expanded


def test_shell_pipe_matches_file_pipeline(tmp_path):
    out = subprocess.run(
        f"{sys.executable} -m oamix.cli generate --base lattice --m 3 --w 3 | "
        f"{sys.executable} -m oamix.cli expand",
        shell=True,
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0
    assert len(read_design(out.stdout)) == 21


def test_full_pipeline_evaluate(tmp_path):
    base = tmp_path / "b.csv"
    exp = tmp_path / "e.csv"
    crossed = tmp_path / "c.csv"
    report = tmp_path / "r.json"
    main(["generate", "--base", "lattice", "--m", "3", "--w", "3", "--out", str(base)])
    main(["expand", "--input", str(base), "--out", str(exp)])
    main(["cross", "--levels", "0.75,1.5,3", "--input", str(exp), "--out", str(crossed)])
    assert main(["evaluate", "--model", "eq6", "--signal", "0.5",
                 "--input", str(crossed), "--out", str(report)]) == 0
    data = json.loads(report.read_text())
    assert data["n_runs"] == 63 and data["n_params"] == 36
    assert data["avg_pv"] == pytest.approx(36 / 63, abs=1e-8)


def test_projection_pipeline(tmp_path):
    base = tmp_path / "c4.csv"
    proj = tmp_path / "proj.csv"
    main(["generate", "--base", "centroid", "--m", "4", "--out", str(base)])
    main(["project", "--drop", "4", "--input", str(base), "--out", str(proj)])
    design = read_design(proj.read_text())
    assert design.m == 3 and len(design) == 15


def test_matrix_output(tmp_path):
    base = tmp_path / "b.csv"
    exp = tmp_path / "e.csv"
    mat = tmp_path / "m.csv"
    main(["generate", "--base", "centroid", "--m", "4", "--out", str(base)])
    main(["project", "--drop", "4", "--input", str(base), "--out", str(base)])
    main(["expand", "--input", str(base), "--out", str(exp)])
    assert main(["matrix", "--model", "eq8", "--input", str(exp), "--out", str(mat)]) == 0
    lines = mat.read_text().splitlines()
    assert lines[0].startswith("1,a1,a2,a3,z12")
    assert len(lines) == 32


def test_fds_seeded_byte_identical(tmp_path):
    base = tmp_path / "b.csv"
    exp = tmp_path / "e.csv"
    main(["generate", "--base", "centroid", "--m", "4", "--out", str(base)])
    main(["project", "--drop", "4", "--input", str(base), "--out", str(base)])
    main(["expand", "--input", str(base), "--out", str(exp)])
    outs = []
    for name in ("f1.txt", "f2.txt"):
        path = tmp_path / name
        args = ["fds", "--model", "eq8", "--samples", "5000", "--seed", "7",
                "--input", str(exp), "--out", str(path)]
        if name == "f2.txt":
            args += ["--workers", "4"]
        assert main(args) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_power_single_term(tmp_path, capsys):
    base = tmp_path / "b.csv"
    exp = tmp_path / "e.csv"
    main(["generate", "--base", "centroid", "--m", "4", "--out", str(base)])
    main(["project", "--drop", "4", "--input", str(base), "--out", str(base)])
    main(["expand", "--input", str(base), "--out", str(exp)])
    assert main(["power", "--model", "eq8", "--term", "z12", "--signal", "2",
                 "--input", str(exp)]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["power"]["z12"] == pytest.approx(0.3196, abs=0.002)


def test_error_exit_code_and_message(tmp_path, capsys):
    base = tmp_path / "b.csv"
    main(["generate", "--base", "centroid", "--m", "4", "--out", str(base)])
    main(["project", "--drop", "4", "--input", str(base), "--out", str(base)])
    code = main(["cross", "--levels", "1", "--input", str(base)])
    assert code == 2
    assert "WrongKind" in capsys.readouterr().err


def test_demo_writes_artifacts(tmp_path, capsys):
    out = tmp_path / "demo"
    assert main(["demo", "paper", "--out", str(out), "--samples", "2000", "--seed", "7"]) == 0
    for name in ("table1.csv", "table2.csv", "table3.csv", "table5.csv",
                 "example1_report.json", "example2_report.json",
                 "example1_fds.txt", "example2_fds.txt"):
        assert (out / name).exists(), name
    rep2 = json.loads((out / "example2_report.json").read_text())
    assert rep2["g_efficiency_pct"] == pytest.approx(53.79, abs=0.3)
    printed = capsys.readouterr().out
    assert "example1" in printed and "example2" in printed
