import json

import pytest
from typer.testing import CliRunner

from caliber_cli.cli import app, fields
from caliber_cli.engine.forms import InvariantViolation
from caliber_cli.engine.ideals import rho_by_formula
from caliber_cli.utils import CSV_COLUMNS

runner = CliRunner()


def json_lines(result):
    return [json.loads(line) for line in result.stdout.splitlines() if line.startswith("{")]


class TestFieldCommands:
    def test_caliber(self):
        result = runner.invoke(app, ["caliber", "13"])
        assert result.exit_code == 0
        assert result.stdout.strip() == "1"

    def test_caliber_with_verbose_flag(self):
        result = runner.invoke(app, ["-v", "caliber", "17"])
        assert result.exit_code == 0
        assert "3" in result.stdout

    @pytest.mark.parametrize("d", ["12", "1", "0"])
    def test_caliber_domain_error(self, d):
        result = runner.invoke(app, ["caliber", d])
        assert result.exit_code == 3

    def test_forms_json(self):
        result = runner.invoke(app, ["forms", "10", "--json"])
        assert result.exit_code == 0
        (payload,) = json_lines(result)
        assert payload["D"] == 40
        assert payload["kappa"] == 4
        assert payload["h"] == 2
        assert payload["cycle_sizes"] == [1, 3]
        assert payload["cycles"][0] == [[1, -6, -1]]

    def test_forms_table(self):
        result = runner.invoke(app, ["forms", "10"])
        assert result.exit_code == 0
        assert "principal" in result.stdout

    def test_cf_of_omega(self):
        result = runner.invoke(app, ["cf", "13"])
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert "preperiod: [2]" in lines
        assert "period: [3]" in lines
        assert "caliber: 1" in lines

    def test_cf_of_explicit_irrationality(self):
        result = runner.invoke(app, ["cf", "--p", "0", "--q", "3", "--disc", "2"])
        assert result.exit_code == 0
        assert "x: (0+√18)/9" in result.stdout.splitlines()

    @pytest.mark.parametrize("args", [["cf"], ["cf", "13", "--p", "1"], ["cf", "--p", "1", "--q", "2"]])
    def test_cf_usage_errors(self, args):
        assert runner.invoke(app, args).exit_code == 2

    def test_cf_rejects_square_radicand(self):
        assert runner.invoke(app, ["cf", "--p", "0", "--q", "1", "--disc", "4"]).exit_code == 3

    def test_rho(self):
        result = runner.invoke(app, ["rho", "17", "2"])
        assert result.exit_code == 0
        assert "rho: 2" in result.stdout
        assert "residues: [1, 3]" in result.stdout

    def test_rho_of_inert_norm(self):
        result = runner.invoke(app, ["rho", "13", "2"])
        assert result.exit_code == 0
        assert "rho: 0" in result.stdout

    def test_rho_norm_above_limit(self):
        result = runner.invoke(app, ["rho", "13", "3000000000"])
        assert result.exit_code == 3
        assert "limit" in result.output

    def test_bounds(self):
        result = runner.invoke(app, ["bounds", "17", "--cutoff", "20"])
        assert result.exit_code == 0
        assert "pass" in result.stdout

    def test_bounds_uses_multiplicative_rho(self, monkeypatch):
        seen = {}
        real = fields.bound_report

        def spy(*args, **kwargs):
            seen.update(kwargs)
            return real(*args, **kwargs)

        monkeypatch.setattr(fields, "bound_report", spy)
        assert runner.invoke(app, ["bounds", "101"]).exit_code == 0
        assert seen["rho_fn"] is rho_by_formula

    def test_invariant_violation_exits_4(self, monkeypatch):
        def broken(d):
            raise InvariantViolation(f"neighbor left the reduced set for d = {d}")

        monkeypatch.setattr(fields, "caliber_number", broken)
        result = runner.invoke(app, ["caliber", "13"])
        assert result.exit_code == 4
        assert "internal invariant violated" in result.output

    def test_classify(self):
        result = runner.invoke(app, ["classify", "33"])
        assert result.exit_code == 0
        assert "Richaud-Degert" in result.stdout
        assert "N2P1" not in result.stdout


class TestScanCommand:
    def test_caliber_two_jsonl(self):
        result = runner.invoke(app, ["scan", "--from", "2", "--to", "300", "--kappa", "2", "--mod8", "not5", "-q"])
        assert result.exit_code == 0
        records = json_lines(result)
        assert [r["d"] for r in records] == [3, 6, 11, 38, 83, 227]
        assert all(r["kappa"] == 2 and r["h"] == 1 for r in records)

    def test_jsonl_lines_are_canonical(self):
        result = runner.invoke(app, ["scan", "--from", "2", "--to", "30", "-q"])
        lines = [line for line in result.stdout.splitlines() if line.startswith("{")]
        assert len(lines) == 18
        for line in lines:
            assert json.dumps(json.loads(line), separators=(",", ":")) == line

    def test_csv(self):
        result = runner.invoke(app, ["scan", "--from", "10", "--to", "13", "--format", "csv", "-q"])
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        header = lines.index(",".join(CSV_COLUMNS))
        rows = lines[header + 1:header + 4]
        assert [row.split(",")[0] for row in rows] == ["10", "11", "13"]
        assert rows[0].startswith("10,40,4,2,1;3,")

    def test_jobs_do_not_change_output(self):
        args = ["scan", "--from", "2", "--to", "200", "-q"]
        serial = runner.invoke(app, args + ["--jobs", "1"])
        parallel = runner.invoke(app, args + ["--jobs", "2"])
        assert json_lines(serial) == json_lines(parallel)

    def test_out_file(self, tmp_path):
        target = tmp_path / "records.jsonl"
        result = runner.invoke(app, ["scan", "--from", "2", "--to", "50", "--out", str(target), "-q"])
        assert result.exit_code == 0
        lines = target.read_text(encoding="utf-8").splitlines()
        assert len(lines) == 30
        assert json.loads(lines[0])["d"] == 2
        assert not json_lines(result)
        assert [p.name for p in tmp_path.iterdir()] == ["records.jsonl"]

    @pytest.mark.parametrize("option", [["--mod8", "9"], ["--mod8", "notx"], ["--family", "N2P3"], ["--format", "xml"]])
    def test_usage_errors(self, option):
        result = runner.invoke(app, ["scan", "--from", "2", "--to", "10", "-q"] + option)
        assert result.exit_code == 2

    @pytest.mark.parametrize("lo, hi", [("1", "10"), ("20", "10")])
    def test_bad_range(self, lo, hi):
        assert runner.invoke(app, ["scan", "--from", lo, "--to", hi, "-q"]).exit_code == 3

    def test_jobs_from_environment(self, monkeypatch):
        monkeypatch.setenv("CALIBER_JOBS", "0")
        result = runner.invoke(app, ["scan", "--from", "2", "--to", "10", "-q"])
        assert result.exit_code == 2


class TestVerifyCommand:
    def test_json_report(self):
        result = runner.invoke(app, ["verify", "--suite", "sandwich", "--from", "2", "--to", "200", "--format", "json"])
        assert result.exit_code == 0
        (report,) = json_lines(result)
        assert report["suite"] == "sandwich"
        assert report["failures"] == []
        assert report["checked"] == report["passed"]

    def test_text_report_lists_anomalies(self):
        result = runner.invoke(app, ["verify", "-s", "corollary-splitprime", "--from", "2", "--to", "50", "-q"])
        assert result.exit_code == 0
        assert "anomaly d = 3" in result.stdout
        assert "anomaly d = 5" in result.stdout

    def test_unknown_suite_is_usage_error(self):
        result = runner.invoke(app, ["verify", "--suite", "nope", "--to", "10"])
        assert result.exit_code == 2

    @pytest.mark.parametrize("option", [["--samples", "-1"], ["--samples", "0"], ["--limit", "0"], ["--limit", "20000000"]])
    def test_sampling_bounds(self, option):
        result = runner.invoke(app, ["verify", "--suite", "rho-formula", "--to", "50", "-q"] + option)
        assert result.exit_code == 2

    def test_bad_format(self):
        assert runner.invoke(app, ["verify", "--suite", "sandwich", "--format", "xml"]).exit_code == 2


class TestSettingsCommand:
    def test_set_and_show(self, isolated_config):
        result = runner.invoke(app, ["settings", "set", "jobs", "4"])
        assert result.exit_code == 0
        assert (isolated_config / "config.json").exists()
        shown = runner.invoke(app, ["settings", "show"])
        assert shown.exit_code == 0
        assert "4" in shown.stdout

    @pytest.mark.parametrize("key, value", [("jobs", "0"), ("jobs", "many"), ("colour", "red"), ("format", "xml")])
    def test_invalid_values(self, key, value):
        assert runner.invoke(app, ["settings", "set", key, value]).exit_code == 2

    def test_configured_format_is_used(self):
        runner.invoke(app, ["settings", "set", "format", "csv"])
        result = runner.invoke(app, ["scan", "--from", "2", "--to", "5", "-q"])
        assert ",".join(CSV_COLUMNS) in result.stdout.splitlines()

    def test_reset(self):
        runner.invoke(app, ["settings", "set", "format", "csv"])
        assert runner.invoke(app, ["settings", "reset"]).exit_code == 0
        result = runner.invoke(app, ["scan", "--from", "2", "--to", "5", "-q"])
        assert len(json_lines(result)) == 3


def test_jsonl_record_is_stable():
    result = runner.invoke(app, ["scan", "--from", "13", "--to", "13", "-q"])
    assert result.exit_code == 0
    (line,) = [line for line in result.stdout.splitlines() if line.startswith("{")]
    assert line == (
        '{"d":13,"D":13,"kappa":1,"h":1,"cycle_sizes":[1],"forms":[[1,-3,-1]],'
        '"smallest_split_prime":3,"rd":{"n":3,"r":4},"family":"N2P4",'
        '"verdicts":{"sandwich":"pass","lowerbound":"pass","prop31":"pass",'
        '"corollary-splitprime":"vacuous","fixtures":"pass","families":"pass",'
        '"rd-class-one":"vacuous","two-ideal":"vacuous"},"anomaly":false}'
    )
