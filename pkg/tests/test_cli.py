import csv
import json
import math

import pytest

from blockmonte import cli
from blockmonte.estimators import ExperimentConfig, run_config
from blockmonte.geometry import GridCell, rasterize_circle
from blockmonte.runner import (
    RunManifest,
    emit_scatter,
    load_manifest,
    record_from_row,
    report_row,
    run_experiment,
)


def write_manifest(path, body):
    path.write_text(body, encoding="utf-8")
    return path


BASIC_MANIFEST = """\
[run]
run_id = demo
output_dir = {out}
formats = jsonl,csv,txt

[pi_small]
variant = pi
trials = 10000
seed = 7

[e_small]
variant = e
trials = 8000
seed = 3
"""


class TestManifest:
    def test_load_parses_sections(self, tmp_path):
        path = write_manifest(tmp_path / "demo.ini", BASIC_MANIFEST.format(out=tmp_path / "out"))
        manifest = load_manifest(path)
        assert manifest.run_id == "demo"
        assert [c.variant for c in manifest.configs] == ["pi", "e"]
        assert manifest.configs[0].master_seed == 7
        assert manifest.formats == ("jsonl", "csv", "txt")

    def test_missing_variant_is_named(self, tmp_path):
        path = write_manifest(tmp_path / "bad.ini", "[exp]\ntrials = 10\n")
        with pytest.raises(ValueError, match="variant"):
            load_manifest(path)

    def test_default_seed_applies(self, tmp_path):
        path = write_manifest(tmp_path / "d.ini", "[exp]\nvariant = pi\ntrials = 100\n")
        manifest = load_manifest(path, default_seed=99)
        assert manifest.configs[0].master_seed == 99

    def test_run_id_must_be_non_empty(self):
        with pytest.raises(ValueError, match="run_id"):
            RunManifest(run_id="", configs=[], output_dir="x")

    def test_unknown_format_rejected(self):
        with pytest.raises(ValueError, match="formats"):
            RunManifest(run_id="r", configs=[], output_dir="x", formats=("pdf",))


class TestReports:
    def run_demo(self, tmp_path, name):
        out = tmp_path / name
        path = write_manifest(tmp_path / f"{name}.ini", BASIC_MANIFEST.format(out=out))
        records = run_experiment(load_manifest(path))
        return out, records

    def test_rerun_is_byte_identical(self, tmp_path):
        out1, _ = self.run_demo(tmp_path, "first")
        out2, _ = self.run_demo(tmp_path, "second")
        for suffix in (".jsonl", ".csv", ".txt"):
            assert (out1 / "demo").with_suffix(suffix).read_bytes() == \
                   (out2 / "demo").with_suffix(suffix).read_bytes()

    def test_jsonl_round_trip(self, tmp_path):
        out, records = self.run_demo(tmp_path, "rt")
        lines = (out / "demo.jsonl").read_text().splitlines()
        assert len(lines) == len(records)
        for line, record in zip(lines, records):
            row = json.loads(line)
            assert row["wall_ms"] is None
            assert record_from_row(row) == record

    def test_csv_and_jsonl_numbers_agree_at_six_digits(self, tmp_path):
        out, _ = self.run_demo(tmp_path, "agree")
        rows = [json.loads(line) for line in (out / "demo.jsonl").read_text().splitlines()]
        with open(out / "demo.csv", newline="") as handle:
            csv_rows = list(csv.DictReader(handle))
        numeric = ("estimate", "stderr", "ci_low", "ci_high", "reference", "rel_error_pct")

        def six_sig(v):
            return float(f"{v:.6g}")

        for json_row, csv_row in zip(rows, csv_rows):
            for column in numeric:
                assert six_sig(float(csv_row[column])) == six_sig(json_row[column])

    def test_counts_only_manifest(self, tmp_path):
        body = ("[run]\nrun_id = counts\noutput_dir = {out}\nformats = jsonl\n\n"
                "[apery]\nvariant = zeta\ntrials = 1\ncounts = 70,58\nm = 3\n").format(
                    out=tmp_path / "out")
        records = run_experiment(load_manifest(write_manifest(tmp_path / "c.ini", body)))
        line = (tmp_path / "out" / "counts.jsonl").read_text().splitlines()[0]
        assert round(json.loads(line)["estimate"], 4) == 1.2069
        assert records[0].params["reported_estimate"] == "1.2069"

    def test_degenerate_config_marks_record_failed(self, tmp_path):
        body = ("[run]\nrun_id = bad\noutput_dir = {out}\nformats = jsonl\n\n"
                "[course]\nvariant = sqrt2\ntrials = 1\nleg_blocks = 1\nspeed = 100\n"
                "\n[fine]\nvariant = pi\ntrials = 1000\n").format(out=tmp_path / "out")
        records = run_experiment(load_manifest(write_manifest(tmp_path / "b.ini", body)))
        assert records[0].estimate is None
        assert "failed" in records[0].params
        assert records[1].estimate is not None

    def test_svg_written_for_pi_configs(self, tmp_path):
        out = tmp_path / "sv"
        manifest = RunManifest(
            run_id="svgdemo",
            configs=[ExperimentConfig(variant="pi", master_seed=1, trials=500,
                                      variant_params={"radius": 11})],
            output_dir=out, formats=("jsonl", "svg"))
        run_experiment(manifest)
        svg = (out / "svgdemo_00_pi.svg").read_text()
        assert svg.count("<circle") == 500


class TestScatter:
    def test_single_dot_caption(self, tmp_path):
        path = tmp_path / "one.svg"
        emit_scatter([GridCell(0, 0)], rasterize_circle(11), path)
        svg = path.read_text()
        assert svg.count("<circle") == 1
        assert "4 · 1/1 = 4.000" in svg

    def test_injected_counts_caption(self, tmp_path):
        path = tmp_path / "fig.svg"
        emit_scatter([GridCell(0, 0)], rasterize_circle(11), path, counts=(33943, 43270))
        assert "4 · 33943/43270 = 3.13779" in path.read_text()

    def test_uniform_dot_field_colors_match_area(self, tmp_path):
        from blockmonte.estimators import collect_pi_outcomes

        cfg = ExperimentConfig(variant="pi", master_seed=12, trials=10_000,
                               variant_params={"radius": 50})
        cells = collect_pi_outcomes(cfg, 10_000)
        path = tmp_path / "field.svg"
        emit_scatter(cells, rasterize_circle(50), path)
        inside = path.read_text().count('fill="#1f77b4"')
        expected = math.pi / 4 * 10_000
        assert abs(inside - expected) < 3 * math.sqrt(10_000 * 0.785 * 0.215)

    def test_empty_outcomes_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            emit_scatter([], rasterize_circle(5), tmp_path / "no.svg")


class TestCommandLine:
    def test_estimate_from_counts(self, capsys):
        assert cli.main(["estimate", "pi", "--from-counts", "508,619"]) == 0
        row = json.loads(capsys.readouterr().out.strip())
        assert row["params"]["reported_estimate"] == "3.283"
        assert row["params"]["reported_error_pct"] == "4.49"

    def test_estimate_writes_reports(self, tmp_path, capsys):
        code = cli.main(["estimate", "pi", "--seed", "4", "--trials", "2000",
                         "--out", str(tmp_path), "--format", "jsonl,csv"])
        assert code == 0
        assert (tmp_path / "pi.jsonl").exists()
        assert (tmp_path / "pi.csv").exists()

    def test_zero_trials_exits_two_and_names_field(self, capsys):
        assert cli.main(["estimate", "pi", "--trials", "0"]) == 2
        assert "trials" in capsys.readouterr().err

    def test_unknown_param_exits_two(self, capsys):
        assert cli.main(["estimate", "pi", "--param", "wobble=1"]) == 2
        assert "wobble" in capsys.readouterr().err

    def test_degenerate_exits_one(self, capsys):
        code = cli.main(["estimate", "sqrt2", "--param", "leg_blocks=1",
                         "--param", "speed=100"])
        assert code == 1
        assert "degenerate" in capsys.readouterr().err

    def test_env_seed_default_and_flag_override(self, capsys, monkeypatch):
        monkeypatch.setenv(cli.SEED_ENV_VAR, "123")
        cli.main(["estimate", "pi", "--trials", "100"])
        assert json.loads(capsys.readouterr().out.strip())["seed"] == 123
        cli.main(["estimate", "pi", "--trials", "100", "--seed", "5"])
        assert json.loads(capsys.readouterr().out.strip())["seed"] == 5

    def test_bad_env_seed_exits_two(self, capsys, monkeypatch):
        monkeypatch.setenv(cli.SEED_ENV_VAR, "not-a-number")
        assert cli.main(["estimate", "pi", "--trials", "100"]) == 2

    def test_run_command(self, tmp_path, capsys):
        path = write_manifest(tmp_path / "m.ini", BASIC_MANIFEST.format(out=tmp_path / "o"))
        assert cli.main(["run", str(path)]) == 0
        out_lines = capsys.readouterr().out.strip().splitlines()
        assert len(out_lines) == 2

    def test_run_manifest_with_zero_trials_exits_two(self, tmp_path, capsys):
        path = write_manifest(tmp_path / "z.ini",
                              "[exp]\nvariant = pi\ntrials = 0\n")
        assert cli.main(["run", str(path)]) == 2
        assert "trials" in capsys.readouterr().err

    def test_raster_circle_text(self, capsys):
        assert cli.main(["raster", "circle", "--radius", "2", "--txt"]) == 0
        assert capsys.readouterr().out == "..#..\n.###.\n#####\n.###.\n..#..\n"

    def test_raster_outline(self, capsys):
        assert cli.main(["raster", "circle", "--radius", "2", "--outline"]) == 0
        out = capsys.readouterr().out
        # Interior cells whose 4-neighbours are all inside disappear.
        assert out == "..#..\n.#.#.\n#...#\n.#.#.\n..#..\n"

    @pytest.mark.parametrize("argv,expected", [
        (["oracle", "derangement_count", "9"], "133496"),
        (["oracle", "zigzag_count", "4"], "5"),
        (["oracle", "coprime_probability_exact", "3", "10"], "841/1000"),
    ])
    def test_oracle_values(self, capsys, argv, expected):
        assert cli.main(argv) == 0
        assert capsys.readouterr().out.strip() == expected

    def test_oracle_archimedes(self, capsys):
        assert cli.main(["oracle", "archimedes_bounds", "4"]) == 0
        lower, upper = (float(v) for v in capsys.readouterr().out.split())
        assert 3.1408 <= lower < math.pi < upper <= 3.1429

    def test_oracle_zeta_partial(self, capsys):
        assert cli.main(["oracle", "zeta_partial", "3", "100000"]) == 0
        assert abs(float(capsys.readouterr().out) - 1.20205) < 1e-4

    def test_oracle_arity_check(self, capsys):
        assert cli.main(["oracle", "derangement_count"]) == 2


def test_report_row_round_trip_without_files():
    record = run_config(ExperimentConfig(variant="e", master_seed=2, trials=5000))
    assert record_from_row(json.loads(json.dumps(report_row("x", record)))) == record
