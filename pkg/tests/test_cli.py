"""End-to-end tests of the command line interface and rendering helpers."""

from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from ceildyn.cli import CLIError, COMMANDS, export_bfile, main
from ceildyn.rational import InternalCheckError

REPO_ROOT = Path(__file__).resolve().parent.parent

THETA2_BFILE = "1 1\n2 2\n3 1\n4 3\n"
CENSUS_D3_BFILE = "3 0\n4 2\n5 6\n6 0\n7 1\n8 1\n9 0\n10 5\n11 2\n"


def run_cli(capsys, *argv: str) -> tuple[int, str]:
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_theta_exact_output_is_stable(capsys):
    code, out = run_cli(capsys, "theta", "--num", "5", "--den", "2")
    assert code == 0
    assert out == "theta=2 reached=60\n"


def test_theta_windowed_output_is_stable(capsys):
    code, out = run_cli(capsys, "theta", "--num", "6", "--den", "5", "--window", "25")
    assert code == 0
    assert out == "theta=18\n"


def test_theta2_bfile(capsys):
    code, out = run_cli(capsys, "theta2", "--scan", "4", "--format", "bfile")
    assert code == 0
    assert out == THETA2_BFILE


def test_census_bfile(capsys):
    code, out = run_cli(
        capsys, "census", "--den", "3", "--scan", "11", "--from", "3", "--format", "bfile"
    )
    assert code == 0
    assert out == CENSUS_D3_BFILE


def test_export_bfile_rules():
    assert export_bfile([]) == ""
    assert export_bfile([(1, 5), (3, -2)]) == "1 5\n3 -2\n"
    with pytest.raises(CLIError):
        export_bfile([(1, 1), (1, 2)])
    with pytest.raises(CLIError):
        export_bfile([(1, 10**1000)])
    with pytest.raises(CLIError):
        export_bfile([(1, True)])


def test_json_rows_are_valid_json_lines(capsys):
    code, out = run_cli(capsys, "theta", "--num", "5", "--den", "2", "--format", "json")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 1
    row = json.loads(lines[0])
    assert row["input"] == "5/2"
    assert row["theta"] == 2
    assert row["reached"] == "60"
    assert isinstance(row["digits"], int)
    assert row["unresolved"] is False


def test_csv_has_header_and_unix_newlines(capsys):
    code, out = run_cli(capsys, "census", "--den", "3", "--scan", "6", "--format", "csv")
    assert code == 0
    assert "\r" not in out
    lines = out.splitlines()
    assert lines[0].split(",")[:2] == ["input", "l"]
    assert len(lines) == 7


def test_traj_table(capsys):
    code, out = run_cli(capsys, "traj", "--num", "8", "--den", "7")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 4
    assert lines[0].endswith("step=0 value=8/7")
    assert lines[-1].endswith("step=3 value=48")


def test_exceptional_custom_offsets(capsys):
    code, out = run_cli(
        capsys, "exceptional", "--r", "1/2", "--offsets=-2,1", "--bound", "8", "--format", "json"
    )
    assert code == 0
    values = [json.loads(line)["n"] for line in out.splitlines()]
    assert values == sorted(values)


def test_exceptional_denominator2_reports_certification(capsys):
    code, out = run_cli(capsys, "exceptional", "--r", "1/2", "--format", "json")
    assert code == 0
    rows = [json.loads(line) for line in out.splitlines()]
    assert [row["n"] for row in rows] == [1, 2]
    assert all(row["certified"] is True for row in rows)


def test_records_table(capsys):
    code, out = run_cli(capsys, "records", "--kind", "theta_d3", "--bound", "100")
    assert code == 0
    pairs = []
    for line in out.splitlines():
        cells = dict(part.split("=", 1) for part in line.split())
        pairs.append((int(cells["arg"]), int(cells["record"])))
    assert pairs == [(3, 0), (4, 2), (5, 6), (28, 22)]


def test_padic_tree_json(capsys):
    code, out = run_cli(capsys, "padic-tree", "--p", "3", "--k", "1", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert [len(level["prefixes"]) for level in doc["levels"]] == [2, 4, 8, 16]


def test_cache_round_trip(tmp_path, capsys):
    args = ("census", "--den", "3", "--scan", "20", "--cache", str(tmp_path))
    code, first = run_cli(capsys, *args)
    assert code == 0
    cached_files = list(tmp_path.iterdir())
    assert len(cached_files) == 1
    code, second = run_cli(capsys, *args)
    assert code == 0
    assert second == first


def test_cache_corruption_recovers(tmp_path, capsys):
    args = ("theta", "--num", "5", "--den", "2", "--cache", str(tmp_path))
    _, first = run_cli(capsys, *args)
    cache_file = next(tmp_path.iterdir())
    cache_file.write_bytes(b"\x00\xff garbage")
    code, second = run_cli(capsys, *args)
    assert code == 0
    # the poisoned entry is ignored; the recomputed result is served
    assert second == first == "theta=2 reached=60\n"


def test_cache_key_separates_formats(tmp_path, capsys):
    base = ("theta", "--num", "5", "--den", "2", "--cache", str(tmp_path))
    _, table_out = run_cli(capsys, *base)
    _, json_out = run_cli(capsys, *base, "--format", "json")
    assert len(list(tmp_path.iterdir())) == 2
    assert table_out == "theta=2 reached=60\n"
    assert json.loads(json_out)["theta"] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ("census", "--den", "3", "--scan", "40"),
        ("records", "--kind", "theta_mult", "--bound", "200"),
    ],
)
def test_worker_count_does_not_change_output(argv, capsys):
    _, serial = run_cli(capsys, *argv, "--workers", "1")
    _, parallel = run_cli(capsys, *argv, "--workers", "3")
    assert parallel == serial


def test_missing_required_argument_exits_2(capsys):
    assert main(["theta", "--num", "5"]) == 2
    capsys.readouterr()


def test_subunit_start_reports_unresolved(capsys):
    code, out = run_cli(capsys, "theta", "--num", "2", "--den", "5")
    assert code == 0
    assert out == "unresolved=true\n"


def test_invalid_input_exits_2(capsys):
    assert main(["padic-tree", "--p", "4"]) == 2
    err = capsys.readouterr().err
    assert "error:" in err


def test_bfile_without_representation_exits_2(capsys):
    assert main(["alpha", "--den", "6", "--format", "bfile"]) == 2
    capsys.readouterr()


def test_internal_check_failure_exits_3(monkeypatch, capsys):
    def broken(args):
        raise InternalCheckError("synthetic failure")

    monkeypatch.setitem(COMMANDS, "alpha", (broken, None, None))
    assert main(["alpha", "--den", "6"]) == 3
    assert "internal check failed" in capsys.readouterr().err


def test_help_exits_0(capsys):
    assert main(["--help"]) == 0
    assert "traj" in capsys.readouterr().out


def test_reproduce_tables_script_runs():
    proc = subprocess.run(
        [sys.executable, "scripts/reproduce_tables.py", "--table", "half"],
        cwd=REPO_ROOT,
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0, proc.stderr
    assert "4 3 268065" in proc.stdout


def test_search_records_script_writes_bfile(tmp_path):
    out_file = tmp_path / "records.txt"
    proc = subprocess.run(
        [
            sys.executable,
            "scripts/search_records.py",
            "--kind",
            "theta_d3",
            "--bound",
            "50",
            "--out",
            str(out_file),
        ],
        cwd=REPO_ROOT,
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0, proc.stderr
    assert out_file.read_text() == "3 0\n4 2\n5 6\n28 22\n"
    assert proc.stdout == out_file.read_text()
