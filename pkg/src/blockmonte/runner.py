"""Manifest execution and report emission.

A run manifest lists experiment configs; running it produces one report row
per config in config order, written as JSON Lines and optionally CSV, plain
text, and SVG scatter plots.  Report files contain nothing non-deterministic,
so re-running a manifest with the same seeds reproduces them byte for byte.
"""

from __future__ import annotations

import configparser
import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path

from .errors import DegenerateResultError
from .estimators import (
    ExperimentConfig,
    EstimateRecord,
    collect_pi_outcomes,
    run_config,
)
from .geometry import CircleRaster, GridCell, rasterize_circle

REPORT_FORMATS = ("jsonl", "csv", "svg", "txt")

# Column order of every report row.  wall_ms is always null in report files:
# wall-clock timing would break byte-identical reruns, so it goes to stderr
# in the CLI instead.
REPORT_COLUMNS = ("run_id", "variant", "seed", "trials", "success_count",
                  "estimate", "stderr", "ci_low", "ci_high", "reference",
                  "rel_error_pct", "params", "wall_ms")

SCATTER_DOT_LIMIT = 10_000


@dataclass
class RunManifest:
    run_id: str
    configs: list[ExperimentConfig]
    output_dir: Path
    formats: tuple[str, ...] = ("jsonl",)
    workers: int = 1

    def __post_init__(self) -> None:
        if not self.run_id:
            raise ValueError("invalid value for 'run_id': must be non-empty")
        if not self.formats:
            raise ValueError("invalid value for 'formats': at least one required")
        for fmt in self.formats:
            if fmt not in REPORT_FORMATS:
                raise ValueError(f"invalid value for 'formats': {fmt!r} "
                                 f"(expected subset of {', '.join(REPORT_FORMATS)})")
        if self.workers < 1:
            raise ValueError("invalid value for 'workers': must be >= 1")
        self.output_dir = Path(self.output_dir)


def load_manifest(path, default_seed: int = 0) -> RunManifest:
    """Parse a flat key=value manifest: one [run] section plus one section
    per experiment, all variant params as strings."""
    path = Path(path)
    parser = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as handle:
            parser.read_file(handle)
    except configparser.Error as exc:
        raise ValueError(f"invalid manifest {path}: {exc}") from None

    run_id = path.stem
    output_dir = Path("runs")
    formats: tuple[str, ...] = ("jsonl",)
    workers = 1
    if parser.has_section("run"):
        section = parser["run"]
        run_id = section.get("run_id", run_id)
        output_dir = Path(section.get("output_dir", str(output_dir)))
        if "formats" in section:
            formats = tuple(f.strip() for f in section["formats"].split(",") if f.strip())
        workers = _parse_int(section.get("workers", "1"), "workers")

    configs = []
    for name in parser.sections():
        if name == "run":
            continue
        section = dict(parser[name])
        if "variant" not in section:
            raise ValueError(f"invalid value for 'variant': section [{name}] has none")
        variant = section.pop("variant")
        seed = _parse_int(section.pop("seed", str(default_seed)), "seed")
        trials = _parse_int(section.pop("trials", "10000"), "trials")
        configs.append(ExperimentConfig(variant=variant, master_seed=seed,
                                        trials=trials, variant_params=section))
    return RunManifest(run_id=run_id, configs=configs, output_dir=output_dir,
                       formats=formats, workers=workers)


def _parse_int(raw: str, key: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"invalid value for '{key}': {raw!r} is not an integer") from None


def run_experiment(manifest: RunManifest) -> list[EstimateRecord]:
    """Execute every config and write one report row per record.

    Degenerate samples do not abort the run: the record is marked failed
    (estimate null) and the remaining configs still execute.
    """
    records = []
    for config in manifest.configs:
        try:
            record = run_config(config, workers=manifest.workers)
        except DegenerateResultError as exc:
            record = _failed_record(config, str(exc))
        records.append(record)
    write_reports(manifest, records)
    return records


def _failed_record(config: ExperimentConfig, reason: str) -> EstimateRecord:
    params = {str(k): str(v) for k, v in config.variant_params.items()}
    params["failed"] = reason
    return EstimateRecord(
        variant=config.variant, estimate=None, trials_used=config.trials,
        success_count=None, stderr=None, ci_low=None, ci_high=None,
        reference=None, relative_error_percent=None,
        seed=config.master_seed, params=params)


def report_row(run_id: str, record: EstimateRecord) -> dict:
    return {
        "run_id": run_id,
        "variant": record.variant,
        "seed": record.seed,
        "trials": record.trials_used,
        "success_count": record.success_count,
        "estimate": record.estimate,
        "stderr": record.stderr,
        "ci_low": record.ci_low,
        "ci_high": record.ci_high,
        "reference": record.reference,
        "rel_error_pct": record.relative_error_percent,
        "params": record.params,
        "wall_ms": None,
    }


def record_from_row(row: dict) -> EstimateRecord:
    return EstimateRecord(
        variant=row["variant"], estimate=row["estimate"], trials_used=row["trials"],
        success_count=row["success_count"], stderr=row["stderr"],
        ci_low=row["ci_low"], ci_high=row["ci_high"], reference=row["reference"],
        relative_error_percent=row["rel_error_pct"], seed=row["seed"],
        params=row["params"])


def write_reports(manifest: RunManifest, records: list[EstimateRecord]) -> list[Path]:
    manifest.output_dir.mkdir(parents=True, exist_ok=True)
    rows = [report_row(manifest.run_id, record) for record in records]
    written = []
    base = manifest.output_dir / manifest.run_id
    if "jsonl" in manifest.formats:
        path = base.with_suffix(".jsonl")
        path.write_text("".join(json.dumps(row) + "\n" for row in rows), encoding="utf-8")
        written.append(path)
    if "csv" in manifest.formats:
        path = base.with_suffix(".csv")
        path.write_text(_render_csv(rows), encoding="utf-8")
        written.append(path)
    if "txt" in manifest.formats:
        path = base.with_suffix(".txt")
        path.write_text("".join(_summary_line(row) + "\n" for row in rows), encoding="utf-8")
        written.append(path)
    if "svg" in manifest.formats:
        for index, (config, record) in enumerate(zip(manifest.configs, records)):
            if config.variant != "pi" or record.estimate is None:
                continue
            path = manifest.output_dir / f"{manifest.run_id}_{index:02d}_pi.svg"
            radius = int(record.params.get("radius", 50))
            outcomes = collect_pi_outcomes(config, SCATTER_DOT_LIMIT)
            emit_scatter(outcomes, rasterize_circle(radius), path)
            written.append(path)
    return written


def _render_csv(rows: list[dict]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(REPORT_COLUMNS)
    for row in rows:
        writer.writerow([
            json.dumps(row[col], sort_keys=True) if col == "params"
            else ("" if row[col] is None else row[col])
            for col in REPORT_COLUMNS])
    return buffer.getvalue()


def _summary_line(row: dict) -> str:
    if row["estimate"] is None:
        return f"{row['run_id']} {row['variant']}: FAILED ({row['params'].get('failed', '?')})"
    parts = [f"{row['run_id']} {row['variant']}: estimate={row['estimate']:.6g}"]
    if row["stderr"] is not None:
        parts.append(f"stderr={row['stderr']:.3g}")
    parts.append(f"reference={row['reference']:.6g}")
    if row["rel_error_pct"] is not None:
        parts.append(f"rel_error={row['rel_error_pct']:#.3g}%")
    return " ".join(parts)


# ---------------------------------------------------------------------------
# scatter plots


_INSIDE_COLOR = "#1f77b4"
_OUTSIDE_COLOR = "#d62728"


def emit_scatter(outcomes: list[GridCell], raster: CircleRaster, path,
                 counts: tuple[int, int] | None = None) -> Path:
    """Write an SVG: arena square, raster circle outline, one dot per death
    colored by raster membership, and a caption with the 4*inside/total
    arithmetic.

    ``counts`` substitutes recorded (inside, total) tallies in the caption,
    for replaying tallies whose individual dots were never kept.
    """
    if not outcomes:
        raise ValueError("outcomes must be non-empty")
    path = Path(path)
    r = raster.radius
    scale = max(4, 600 // (2 * r + 3))
    size = (2 * r + 3) * scale

    def sx(world_x: float) -> float:
        return (world_x + r + 1) * scale

    def sy(world_z: float) -> float:
        return (r + 2 - world_z) * scale

    inside_count = sum(1 for cell in outcomes if cell in raster)
    caption_inside, caption_total = counts if counts is not None else (inside_count, len(outcomes))
    estimate = 4.0 * caption_inside / caption_total

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size + 2 * scale}" '
        f'viewBox="0 0 {size} {size + 2 * scale}">',
        f'<rect x="0" y="0" width="{size}" height="{size + 2 * scale}" fill="white"/>',
        f'<rect x="{sx(-r)}" y="{sy(r + 1)}" width="{(2 * r + 1) * scale}" '
        f'height="{(2 * r + 1) * scale}" fill="none" stroke="black" stroke-width="1"/>',
    ]
    for cell in sorted(raster.outline_cells()):
        parts.append(f'<rect x="{sx(cell.x)}" y="{sy(cell.z + 1)}" width="{scale}" '
                     f'height="{scale}" fill="#bbbbbb"/>')
    dot_radius = max(1.0, 0.3 * scale)
    for cell in outcomes:
        color = _INSIDE_COLOR if cell in raster else _OUTSIDE_COLOR
        parts.append(f'<circle cx="{sx(cell.x + 0.5):g}" cy="{sy(cell.z + 0.5):g}" '
                     f'r="{dot_radius:.2f}" fill="{color}"/>')
    caption = f"4 · {caption_inside}/{caption_total} = {_caption_value(estimate)}"
    parts.append(f'<text x="{scale}" y="{size + scale}" font-family="monospace" '
                 f'font-size="{max(10, scale)}">{caption}</text>')
    parts.append("</svg>")
    path.write_text("\n".join(parts) + "\n", encoding="utf-8")
    return path


def _caption_value(value: float) -> str:
    """Five decimals, trimmed to no fewer than three ('4.000', '3.13779')."""
    text = f"{value:.5f}"
    while text.endswith("0") and len(text.split(".")[1]) > 3:
        text = text[:-1]
    return text
