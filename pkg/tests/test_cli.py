"""Command-line behavior: formats, determinism, reports, exit codes."""

import json

import pytest

from qcorr.cli import CSV_COLUMNS, format_real, run

FAST = ["--grid", "12", "--refine-iters", "60"]


def read_lines(path):
    return path.read_text(encoding="utf-8").splitlines()


class TestValidate:
    def test_default_estimate(self, capsys):
        assert run(["--validate"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["p_steps"] == 101
        assert len(report["bipartitions"]) == 6
        assert report["grid_stage_evaluations"] == 101 * 6 * 24**4
        assert report["refine_stage_evaluations"] == 101 * 6 * 200

    def test_grid_doubling_costs_sixteen_fold(self, capsys):
        assert run(["--validate"]) == 0
        base = json.loads(capsys.readouterr().out)
        assert run(["--validate", "--grid", "48"]) == 0
        doubled = json.loads(capsys.readouterr().out)
        assert doubled["grid_stage_evaluations"] == 16 * base["grid_stage_evaluations"]

    def test_custom_without_channels_fails(self, capsys):
        assert run(["--validate", "--scenario", "custom"]) == 2
        assert "--channel-a" in capsys.readouterr().err


class TestRun:
    def test_row_count_and_header(self, tmp_path):
        out = tmp_path / "r.csv"
        rc = run(
            ["--scenario", "ape", "--a", "0.4", "--p-steps", "4",
             "--bipartitions", "all", "--out", str(out), *FAST]
        )
        assert rc == 0
        lines = read_lines(out)
        assert lines[0] == (
            "scenario,a,p,bipartition,total,classical_K,quantum_Q,discord_D,"
            "classical_C,concurrence,theta_a,phi_a,theta_b,phi_b,oracle_max_abs_dev"
        )
        assert len(lines) == 1 + 4 * 6
        assert (tmp_path / "r.config.json").exists()

    def test_bell_transfer_row_prints_exact_concurrence(self, tmp_path):
        out = tmp_path / "bea.csv"
        rc = run(
            ["--scenario", "abe", "--a", "1", "--p-steps", "2",
             "--bipartitions", "BEA", "--out", str(out)]
        )
        assert rc == 0
        lines = read_lines(out)
        assert len(lines) == 3
        final = lines[2].split(",")
        columns = [name for name, _ in CSV_COLUMNS]
        assert final[columns.index("p")] == "1.000000000000"
        assert final[columns.index("concurrence")] == "1.000000000000"
        assert final[columns.index("total")] == "2.000000000000"

    def test_determinism_byte_identical(self, tmp_path):
        args = ["--scenario", "ppe", "--a", "0.4", "--p-steps", "5",
                "--bipartitions", "AB,EAEB", *FAST]
        out1 = tmp_path / "one.csv"
        out2 = tmp_path / "two.csv"
        assert run(args + ["--out", str(out1)]) == 0
        assert run(args + ["--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_json_round_trip_reproduces_csv_fields(self, tmp_path):
        args = ["--scenario", "ape", "--a", "0.7", "--p-steps", "3",
                "--bipartitions", "AB,BEA", "--oracle-check", *FAST]
        csv_out = tmp_path / "r.csv"
        json_out = tmp_path / "r.json"
        assert run(args + ["--out", str(csv_out), "--format", "csv"]) == 0
        assert run(args + ["--out", str(json_out), "--format", "json"]) == 0
        csv_rows = [line.split(",") for line in read_lines(csv_out)[1:]]
        payload = json.loads(json_out.read_text(encoding="utf-8"))
        assert len(payload["records"]) == len(csv_rows)
        for row, record in zip(csv_rows, payload["records"]):
            for (name, _), cell in zip(CSV_COLUMNS, row):
                value = record[name]
                if name in ("scenario", "bipartition"):
                    assert cell == value
                elif value is None:
                    assert cell == ""
                else:
                    assert cell == format_real(value)

    def test_oracle_check_writes_discrepancy_report(self, tmp_path):
        out = tmp_path / "ape.csv"
        rc = run(
            ["--scenario", "ape", "--a", "0.4", "--p-steps", "3",
             "--bipartitions", "all", "--oracle-check", "--out", str(out), *FAST]
        )
        assert rc == 0
        report = read_lines(out.with_suffix(".discrepancies.csv"))
        assert report[0] == (
            "scenario,pair,a,p,max_abs_dev,trace_of_printed_matrix,printed_is_valid"
        )
        flagged_pairs = {line.split(",")[1] for line in report[1:]}
        assert flagged_pairs == {"AEB"}
        for line in report[1:]:
            cells = line.split(",")
            assert cells[6] == "false"
            assert cells[5] == format_real(0.75)
        # the healthy pairs carry near-zero deviations in the main table
        columns = [name for name, _ in CSV_COLUMNS]
        for line in read_lines(out)[1:]:
            cells = line.split(",")
            dev = cells[columns.index("oracle_max_abs_dev")]
            if cells[columns.index("bipartition")] == "AEB":
                assert dev == ""
            else:
                assert float(dev) < 1e-12

    def test_events_file_for_ppe(self, tmp_path):
        out = tmp_path / "ppe.csv"
        rc = run(
            ["--scenario", "ppe", "--a", "0.4", "--p-steps", "41",
             "--bipartitions", "AB", "--events", "--out", str(out), *FAST]
        )
        assert rc == 0
        lines = read_lines(out.with_suffix(".events.csv"))
        assert lines[0] == "scenario,a,bipartition,measure,kind,p_lo,p_hi"
        conc = [line.split(",") for line in lines[1:] if line.split(",")[3] == "concurrence"]
        kinds = [cells[4] for cells in conc]
        assert kinds.count("death") == 1
        assert kinds.count("revival") == 0

    def test_custom_scenario_runs(self, tmp_path):
        out = tmp_path / "c.csv"
        rc = run(
            ["--scenario", "custom", "--channel-a", "amplitude-damping",
             "--channel-b", "bit-phase-flip", "--p-steps", "2",
             "--bipartitions", "AB", "--out", str(out), *FAST]
        )
        assert rc == 0
        assert read_lines(out)[1].startswith("custom,")


class TestExitCodes:
    def test_missing_out(self, capsys):
        assert run(["--p-steps", "2"]) == 2
        assert "--out" in capsys.readouterr().err

    def test_unknown_bipartition(self, tmp_path, capsys):
        rc = run(["--bipartitions", "AB,XY", "--out", str(tmp_path / "x.csv")])
        assert rc == 2
        assert "XY" in capsys.readouterr().err

    def test_oracle_check_with_custom(self, tmp_path, capsys):
        rc = run(
            ["--scenario", "custom", "--channel-a", "bit-flip", "--channel-b",
             "bit-flip", "--oracle-check", "--out", str(tmp_path / "x.csv")]
        )
        assert rc == 2
        assert "oracle-check" in capsys.readouterr().err

    def test_channels_with_named_scenario(self, tmp_path, capsys):
        rc = run(
            ["--scenario", "ape", "--channel-a", "bit-flip",
             "--out", str(tmp_path / "x.csv")]
        )
        assert rc == 2

    def test_missing_output_directory(self, tmp_path, capsys):
        rc = run(["--p-steps", "2", "--out", str(tmp_path / "nope" / "x.csv")])
        assert rc == 2

    def test_bad_a(self, capsys):
        assert run(["--a", "0", "--validate"]) == 2

    def test_bad_channel_name(self, capsys):
        rc = run(
            ["--scenario", "custom", "--channel-a", "depolarizing",
             "--channel-b", "bit-flip", "--validate"]
        )
        assert rc == 2


class TestFormatting:
    def test_twelve_decimals(self):
        assert format_real(1.0) == "1.000000000000"
        assert format_real(0.5) == "0.500000000000"
        assert format_real(0.118709100769307) == "0.118709100769"

    def test_negative_zero_normalized(self):
        assert format_real(-0.0) == "0.000000000000"
