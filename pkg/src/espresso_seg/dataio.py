"""Dataset files and result documents.

Input is CSV with a header row: numeric channel columns plus an optional
per-sample label column whose change indices define ground-truth
boundaries. A plain boundary-list text file (one integer per line) is also
accepted where ground truth or estimates are needed on their own.

Results are emitted as JSON documents with a stable key order so that
repeated runs with the same seed are byte-identical apart from the
``timing`` block, which :func:`canonical_json` can exclude.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import IngestError, MissingColumn, NonNumeric, ParseError, ValidationError
from .metrics import EvalReport
from .pipeline import PipelineResult
from .series import MultiSeries, validate_series
from .synthetic import labels_from_boundaries

SCHEMA_ID = "espresso-result/1"

# Documented shape of a result document (JSON Schema, draft 2020-12 subset).
RESULT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "espresso run result",
    "type": "object",
    "required": [
        "schema", "config", "n_samples", "n_channels", "boundaries",
        "k", "source_channel", "ig_trace", "per_channel", "timing",
    ],
    "properties": {
        "schema": {"const": SCHEMA_ID},
        "config": {"type": "object"},
        "n_samples": {"type": "integer", "minimum": 2},
        "n_channels": {"type": "integer", "minimum": 1},
        "channel_names": {"type": "array", "items": {"type": "string"}},
        "boundaries": {"type": "array", "items": {"type": "integer"}},
        "boundaries_seconds": {
            "type": ["array", "null"], "items": {"type": "number"}},
        "k": {"type": "integer", "minimum": 1},
        "source_channel": {"type": ["integer", "string"]},
        "ig_trace": {"type": "array", "items": {"type": "number"}},
        "per_channel": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["channel", "candidates", "score"],
                "properties": {
                    "channel": {"type": ["integer", "string"]},
                    "candidates": {"type": "array", "items": {"type": "integer"}},
                    "score": {"type": "number"},
                },
            },
        },
        "ground_truth": {"type": ["array", "null"], "items": {"type": "integer"}},
        "metrics": {"type": ["object", "null"]},
        "timing": {"type": "object"},
    },
}


@dataclass(frozen=True)
class DatasetManifest:
    """Where a dataset lives and how to read it."""

    path: str | Path
    format: str = "csv"
    label_column: str | None = None
    channel_columns: tuple[str, ...] | None = None
    sample_rate_hz: float | None = None

    def __post_init__(self):
        if self.format != "csv":
            raise ValidationError(f"unsupported format {self.format!r}")
        if self.channel_columns is not None:
            if not self.channel_columns:
                raise ValidationError("need at least one channel column")
            if self.label_column in self.channel_columns:
                raise ValidationError(f"label column {self.label_column!r} cannot also be a channel")
            object.__setattr__(self, "channel_columns", tuple(self.channel_columns))


def ingest_csv(manifest: DatasetManifest) -> tuple[MultiSeries, list[int] | None]:
    """Read a CSV dataset into a validated series plus optional ground truth.

    Channel columns keep the manifest order (header order when the
    manifest leaves them implicit). When a label column is named, the
    ground-truth boundaries are the row indices where the label changes
    from the previous row.
    """
    path = Path(manifest.path)
    with path.open(newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(0, 0, "empty file") from None
        header = [h.strip() for h in header]

        label_idx = None
        if manifest.label_column is not None:
            if manifest.label_column not in header:
                raise MissingColumn(manifest.label_column)
            label_idx = header.index(manifest.label_column)

        if manifest.channel_columns is not None:
            channel_idx = []
            for name in manifest.channel_columns:
                if name not in header:
                    raise MissingColumn(name)
                channel_idx.append(header.index(name))
        else:
            channel_idx = [i for i in range(len(header)) if i != label_idx]
            if not channel_idx:
                raise ValidationError("no channel columns left after removing the label column")

        columns: list[list[float]] = [[] for _ in channel_idx]
        labels: list[str] = []
        for row_no, row in enumerate(reader, start=1):
            if len(row) != len(header):
                raise ParseError(row_no, 0, f"expected {len(header)} fields, got {len(row)}")
            for k, ci in enumerate(channel_idx):
                try:
                    columns[k].append(float(row[ci]))
                except ValueError:
                    raise NonNumeric(row_no, ci, row[ci]) from None
            if label_idx is not None:
                labels.append(row[label_idx])

    series = validate_series(
        np.array(columns, dtype=float),
        channel_names=[header[i] for i in channel_idx],
        sample_rate_hz=manifest.sample_rate_hz,
    )
    boundaries = None
    if label_idx is not None:
        boundaries = [i for i in range(1, len(labels)) if labels[i] != labels[i - 1]]
    return series, boundaries


def read_boundaries(path: str | Path) -> list[int]:
    """Read a boundary list: one integer per line, blank lines ignored."""
    out = []
    for line_no, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            out.append(int(line))
        except ValueError:
            raise ParseError(line_no, 0, f"expected an integer, got {line!r}") from None
    return sorted(set(out))


def write_series_csv(path: str | Path, series: MultiSeries, boundaries: list[int] | None = None,
                     label_column: str = "label") -> None:
    """Write a series (and implied segment labels, if boundaries are given) as CSV."""
    path = Path(path)
    header = list(series.channel_names)
    labels = None
    if boundaries is not None:
        labels = labels_from_boundaries(boundaries, series.n_samples)
        header.append(label_column)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for i in range(series.n_samples):
            row = [repr(float(v)) for v in series.data[:, i]]
            if labels is not None:
                row.append(str(int(labels[i])))
            writer.writerow(row)


def write_curve_csv(path: str | Path, values) -> None:
    """Write a shape curve as (tick, value) rows for external plotting."""
    with Path(path).open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["tick", "value"])
        for t, v in enumerate(values):
            writer.writerow([t, repr(float(v))])


def result_document(
    result: PipelineResult,
    series: MultiSeries,
    config_echo: dict,
    ground_truth: list[int] | None = None,
    report: EvalReport | None = None,
) -> dict:
    """Assemble the documented JSON result for one pipeline run."""
    seg = result.segmentation
    rate = series.sample_rate_hz
    return {
        "schema": SCHEMA_ID,
        "config": config_echo,
        "n_samples": series.n_samples,
        "n_channels": series.n_channels,
        "channel_names": list(series.channel_names),
        "boundaries": [int(b) for b in seg.boundaries],
        "boundaries_seconds": [b / rate for b in seg.boundaries] if rate else None,
        "k": seg.k,
        "source_channel": seg.source_channel,
        "ig_trace": [float(v) for v in seg.ig_trace],
        "per_channel": [
            {
                "channel": entry.channel,
                "candidates": [int(c) for c in entry.candidates],
                "score": float(entry.score),
            }
            for entry in result.per_channel
        ],
        "ground_truth": [int(b) for b in ground_truth] if ground_truth is not None else None,
        "metrics": report.to_dict() if report is not None else None,
        "timing": {k: float(v) for k, v in result.timing.items()},
    }


def canonical_json(document: dict, exclude_timing: bool = False) -> str:
    """Deterministic JSON text for a document; optionally drop timing fields."""
    doc = dict(document)
    if exclude_timing:
        doc.pop("timing", None)
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_result(path: str | Path, document: dict) -> None:
    Path(path).write_text(canonical_json(document))


def aggregate_metrics(reports: list[EvalReport]) -> dict:
    """Arithmetic mean of each metric across runs (a sweep's summary row)."""
    if not reports:
        raise ValidationError("nothing to aggregate")
    keys = ("f_score", "precision", "recall", "rmse_norm", "mae_samples")
    return {k: float(np.mean([getattr(r, k) for r in reports])) for k in keys}
