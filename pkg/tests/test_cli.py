"""Tests for the command-line interface: exit codes, files, and formats."""

import json
import subprocess
import sys

import pytest

from atiyahdet.cli import main
from conftest import COLLINEAR4, REG_TETRA


def write_points(path, coords):
    path.write_text(json.dumps({"points": [list(c) for c in coords]}))
    return str(path)


class TestCompute:
    def test_regular_tetrahedron(self, tmp_path, capsys):
        inp = write_points(tmp_path / "t.json", REG_TETRA)
        assert main(["compute", "--in", inp]) == 0
        out = capsys.readouterr().out
        assert "det M" in out
        assert "100.0" in out

    def test_output_file(self, tmp_path):
        inp = write_points(tmp_path / "t.json", COLLINEAR4)
        outp = tmp_path / "result.json"
        assert main(["compute", "--in", inp, "--out", str(outp)]) == 0
        rec = json.loads(outp.read_text())
        assert rec["n"] == 4
        assert abs(rec["detM_re"] - 768.0) < 1e-9
        assert abs(rec["abs_D"] - 1.0) < 1e-12

    def test_high_precision_flag(self, tmp_path, capsys):
        inp = write_points(tmp_path / "t.json", REG_TETRA)
        assert main(["compute", "--in", inp, "--precision", "128"]) == 0
        assert "128" in capsys.readouterr().out

    def test_missing_file(self, tmp_path):
        assert main(["compute", "--in", str(tmp_path / "nope.json")]) == 2

    def test_malformed_json(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{not json")
        assert main(["compute", "--in", str(p)]) == 2

    def test_bad_points_payload(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text(json.dumps({"points": [[0, 0], [1, 1]]}))
        assert main(["compute", "--in", str(p)]) == 2

    def test_coincident_points(self, tmp_path):
        p = tmp_path / "dup.json"
        p.write_text(json.dumps({"points": [[0, 0, 0], [0, 0, 0], [1, 0, 0]]}))
        assert main(["compute", "--in", str(p)]) == 2

    def test_non_finite_coordinates(self, tmp_path):
        p = tmp_path / "inf.json"
        p.write_text('{"points": [[0, 0, 0], [1e999, 0, 0]]}')
        assert main(["compute", "--in", str(p)]) == 2


class TestVerify:
    def test_clean_run(self, tmp_path):
        outp = tmp_path / "report.json"
        code = main(["verify", "--n", "4", "--trials", "40", "--seed", "7",
                     "--out", str(outp)])
        assert code == 0
        rec = json.loads(outp.read_text())
        assert rec["identity"]["failures"] == []
        assert rec["invariance"]["failures"] == []

    def test_trials_respected(self, tmp_path):
        outp = tmp_path / "report.json"
        main(["verify", "--n", "3", "--trials", "25", "--out", str(outp)])
        rec = json.loads(outp.read_text())
        assert rec["identity"]["trials"] == 25


class TestScan:
    def test_json_report(self, tmp_path, capsys):
        outp = tmp_path / "scan.json"
        code = main(["scan", "--trials", "300", "--seed", "5",
                     "--out", str(outp)])
        assert code == 0
        rec = json.loads(outp.read_text())
        assert rec["min_gap2"] >= -1e-9
        assert rec["min_gap3"] >= -1e-9
        out = capsys.readouterr().out
        assert "gap2" in out

    def test_csv_rows(self, tmp_path):
        outp = tmp_path / "scan.csv"
        code = main(["scan", "--trials", "50", "--seed", "5",
                     "--format", "csv", "--out", str(outp)])
        assert code == 0
        lines = outp.read_text().strip().splitlines()
        assert len(lines) == 51

    def test_kind_flag(self, tmp_path):
        outp = tmp_path / "scan.json"
        code = main(["scan", "--trials", "50", "--kind", "near-collinear",
                     "--degeneracy", "0.9", "--out", str(outp)])
        assert code == 0
        assert json.loads(outp.read_text())["generator"]["kind"] == "near-collinear"


class TestSearch:
    def test_small_search(self, tmp_path, capsys):
        arch = tmp_path / "arch.jsonl"
        code = main(["search", "--n", "3", "--objective", "abs-D",
                     "--trials", "2", "--seed", "1", "--out", str(arch)])
        assert code == 0
        out = capsys.readouterr().out
        assert "best" in out
        assert len(arch.read_text().strip().splitlines()) == 1

    def test_bad_objective_is_usage_error(self):
        assert main(["search", "--n", "4", "--objective", "nope"]) == 2


class TestExpand:
    def test_writes_polynomial(self, tmp_path, capsys):
        outp = tmp_path / "re_detm.txt"
        assert main(["expand", "--out", str(outp)]) == 0
        assert "terms: 248" in capsys.readouterr().out
        lines = [ln for ln in outp.read_text().splitlines() if ln.strip()]
        assert len(lines) == 248
        # every line: integer coefficient plus six exponents
        for ln in lines[:10]:
            parts = ln.split()
            assert len(parts) == 7
            int(parts[0])


class TestUsage:
    def test_no_subcommand(self):
        assert main([]) == 2

    def test_unknown_flag(self):
        assert main(["compute", "--frobnicate"]) == 2

    def test_module_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "atiyahdet.cli", "--help"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "compute" in proc.stdout

    def test_console_script_installed(self):
        proc = subprocess.run(["atiyahdet", "--help"], capture_output=True,
                              text=True)
        assert proc.returncode == 0
        assert "compute" in proc.stdout
