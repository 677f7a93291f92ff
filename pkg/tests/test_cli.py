import csv
from pathlib import Path

import pytest
import yaml

from windbench.cli import main
from windbench.mppt import optimal_operating_point
from windbench.reference import REFERENCE_ROWS

REPO_ROOT = Path(__file__).resolve().parent.parent


class TestTable:
    def test_text_output_with_footnote(self, capsys):
        assert main(["table"]) == 0
        out = capsys.readouterr().out
        lines = out.splitlines()
        assert "P_wt (W)" in lines[0]
        # nine data rows between the header and the footnote
        data = [l for l in lines[1:] if not l.lstrip().startswith("*") and "reports" not in l]
        assert len(data) == 9
        assert "131.02" in out and "2907.97" in out
        # the crossover rows carry the marker explained by the footnote
        assert out.count(" *") == 5
        assert "does not model it" in out

    def test_csv_output(self, capsys):
        assert main(["table", "--format", "csv"]) == 0
        rows = list(csv.DictReader(capsys.readouterr().out.splitlines()))
        assert len(rows) == 9
        assert [r["v"] for r in rows] == [str(ref.wind_speed) for ref in REFERENCE_ROWS]
        assert [r["exceeds_estimate"] for r in rows] == ["0"] * 4 + ["1"] * 5

    def test_speed_override_skips_reference_column(self, capsys):
        assert main(["table", "--speeds", "6.5", "--format", "csv"]) == 0
        rows = list(csv.DictReader(capsys.readouterr().out.splitlines()))
        assert len(rows) == 1
        assert rows[0]["p_gen_ref"] == ""


class TestCurve:
    def test_text_grid(self, capsys):
        assert main(["curve", "--wind", "8.0"]) == 0
        out = capsys.readouterr().out
        assert "power curve at v = 8.0" in out
        assert "omega = 9.57" in out

    def test_csv_grid_peaks_near_the_optimum(self, capsys, turbine):
        assert main(["curve", "--wind", "8.0", "--points", "80", "--format", "csv"]) == 0
        rows = list(csv.DictReader(capsys.readouterr().out.splitlines()))
        assert len(rows) == 80
        best = max(rows, key=lambda r: float(r["power"]))
        point = optimal_operating_point(8.0, turbine)
        assert float(best["omega"]) == pytest.approx(point.rotor_speed, rel=0.05)
        assert float(best["power"]) == pytest.approx(point.power, rel=0.01)

    @pytest.mark.parametrize("argv", [
        ["curve", "--wind", "-2.0"],
        ["curve", "--wind", "8.0", "--points", "1"],
    ])
    def test_invalid_grid_exits_2(self, capsys, argv):
        assert main(argv) == 2
        assert capsys.readouterr().err != ""


class TestMppt:
    def test_prints_the_locus(self, capsys):
        assert main(["mppt"]) == 0
        out = capsys.readouterr().out
        assert "lambda* = 2.9914" in out
        assert "Cp*     = 0.1702" in out
        assert "k_opt   = 1.1950" in out
        assert len(out.splitlines()) == 3 + 1 + 9  # headers + column row + locus


class TestRun:
    def test_writes_log_and_summary(self, capsys, tmp_path):
        log = tmp_path / "out.csv"
        summary = tmp_path / "out.yaml"
        code = main([
            "run", "const4", "--log", str(log), "--summary", str(summary),
        ])
        assert code == 0
        out = capsys.readouterr().out
        assert "scenario 'const4': 60000 steps" in out
        assert log.exists() and summary.exists()
        assert yaml.safe_load(summary.read_text())["tripped"] is False

    def test_unknown_scenario_exits_2(self, capsys):
        assert main(["run", "tornado"]) == 2
        err = capsys.readouterr().err
        assert "tornado" in err

    def test_unwritable_log_exits_2(self, capsys, tmp_path):
        code = main(["run", "const4", "--log", str(tmp_path / "no" / "dir.csv")])
        assert code == 2


class TestIdentify:
    def test_recovers_the_rotor_radius(self, capsys, tmp_path):
        path = tmp_path / "rows.csv"
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["v", "p", "omega"])
            for ref in REFERENCE_ROWS:
                writer.writerow([ref.wind_speed, ref.p_wt, ref.omega])
        assert main(["identify", str(path)]) == 0
        out = capsys.readouterr().out
        radius = float(out.splitlines()[0].split("=")[1].strip().split()[0])
        assert radius == pytest.approx(2.5, rel=0.01)

    def test_missing_columns_exit_2(self, capsys, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("wind,power\n4.0,100.0\n")
        assert main(["identify", str(path)]) == 2
        assert "columns" in capsys.readouterr().err

    def test_missing_file_exits_2(self, capsys, tmp_path):
        assert main(["identify", str(tmp_path / "nope.csv")]) == 2


class TestConfigHandling:
    def test_bad_config_path_exits_2(self, capsys):
        assert main(["table", "--config", "/does/not/exist.yaml"]) == 2
        assert "error:" in capsys.readouterr().err

    def test_invalid_config_exits_2(self, capsys, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("turbine:\n  rotor_radius: -1\n")
        assert main(["table", "--config", str(path)]) == 2

    def test_example_config_works(self, capsys):
        example = REPO_ROOT / "bench.example.yaml"
        assert main(["mppt", "--config", str(example)]) == 0
        assert "lambda*" in capsys.readouterr().out


class TestServe:
    @pytest.mark.parametrize("listen", ["8765", ":8765", "localhost:http"])
    def test_bad_listen_exits_2(self, capsys, listen):
        assert main(["serve", "--listen", listen]) == 2
        assert capsys.readouterr().err != ""
