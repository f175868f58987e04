"""File ingestion and report emission.

CSV conventions: comma separator, '.' decimal point (no locale), one
point per row, optional header, optional trailing ``label`` column
(recognized by its header name).  NaN/Inf cells are rejected with the
offending row number.  JSON reports are written deterministically
(sorted keys) so identical runs produce byte-identical files; volatile
run metadata (timestamps) goes to a separate ``.meta.json`` sidecar.
"""

from __future__ import annotations

import csv
import json
import math
import time
from pathlib import Path

import numpy as np

from .errors import IngestError
from .generator import ModeSet
from .metrics import SampleSet


def _parse_rows(path: Path) -> tuple[list[str] | None, list[list[float]]]:
    try:
        text = path.read_text()
    except OSError as exc:
        raise IngestError(f"cannot read {path}: {exc}") from exc
    reader = csv.reader(text.splitlines())
    rows = [row for row in reader if row and any(c.strip() for c in row)]
    if not rows:
        raise IngestError(f"{path}: file contains no data rows")

    header = None
    first = rows[0]
    try:
        [float(c) for c in first]
    except ValueError:
        header = [c.strip() for c in first]
        rows = rows[1:]
        if not rows:
            raise IngestError(f"{path}: header but no data rows")

    width = len(rows[0])
    parsed = []
    for lineno, row in enumerate(rows, start=1):
        if len(row) != width:
            raise IngestError(f"{path}: row {lineno} has {len(row)} cells, "
                              f"expected {width} (ragged rows)")
        vals = []
        for col, cell in enumerate(row):
            try:
                v = float(cell)
            except ValueError:
                raise IngestError(f"{path}: row {lineno} column {col + 1} "
                                  f"is not numeric: {cell!r}") from None
            if not math.isfinite(v):
                raise IngestError(f"{path}: row {lineno} column {col + 1} "
                                  f"is not finite: {cell!r}")
            vals.append(v)
        parsed.append(vals)
    return header, parsed


def read_points_csv(path: str | Path) -> tuple[np.ndarray, np.ndarray | None]:
    """Points and optional integer labels from a CSV file."""
    path = Path(path)
    header, rows = _parse_rows(path)
    data = np.asarray(rows, dtype=np.float64)
    labels = None
    if header is not None and header and header[-1].lower() == "label":
        raw = data[:, -1]
        labels = raw.astype(np.int64)
        if not np.array_equal(raw, labels):
            raise IngestError(f"{path}: label column contains non-integers")
        data = data[:, :-1]
    if data.shape[1] == 0:
        raise IngestError(f"{path}: no coordinate columns")
    return data, labels


def read_points_json(path: str | Path) -> tuple[np.ndarray, np.ndarray | None]:
    path = Path(path)
    try:
        obj = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise IngestError(f"cannot parse {path}: {exc}") from exc
    pts = obj.get("points", obj.get("modes", obj)) if isinstance(obj, dict) \
        else obj
    data = np.asarray(pts, dtype=np.float64)
    if data.ndim != 2:
        raise IngestError(f"{path}: expected a 2-D point array")
    if not np.all(np.isfinite(data)):
        raise IngestError(f"{path}: points contain non-finite values")
    labels = None
    if isinstance(obj, dict) and obj.get("labels") is not None:
        labels = np.asarray(obj["labels"], dtype=np.int64)
    return data, labels


def ingest_samples(path: str | Path, fmt: str | None = None,
                   provenance: str = "real") -> SampleSet:
    """SampleSet from a CSV or JSON file; format inferred from the suffix."""
    path = Path(path)
    if fmt is None:
        fmt = "json" if path.suffix.lower() == ".json" else "csv"
    if fmt == "csv":
        points, labels = read_points_csv(path)
    elif fmt == "json":
        points, labels = read_points_json(path)
    else:
        raise IngestError(f"unknown sample format {fmt!r}")
    return SampleSet(points=points, labels=labels, provenance=provenance)


def read_modes(path: str | Path) -> ModeSet:
    """ModeSet from CSV (one row per mode) or JSON."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        points, _ = read_points_json(path)
    else:
        points, labels = read_points_csv(path)
        if labels is not None:
            raise IngestError(f"{path}: mode files must not carry labels")
    try:
        return ModeSet(modes=points)
    except ValueError as exc:
        raise IngestError(f"{path}: {exc}") from exc


def write_samples_csv(samples: SampleSet, path: str | Path,
                      sidecar: dict | None = None) -> None:
    """Samples to CSV plus a JSON sidecar describing their origin."""
    path = Path(path)
    cols = [f"x{i}" for i in range(samples.ambient_dim)]
    lines = []
    if samples.labels is not None:
        cols.append("label")
    lines.append(",".join(cols))
    for i in range(samples.size):
        cells = [repr(v) for v in samples.points[i]]
        if samples.labels is not None:
            cells.append(str(int(samples.labels[i])))
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n")
    if sidecar is not None:
        write_report(sidecar, path.with_suffix(path.suffix + ".json"))


def write_report(obj: dict, path: str | Path) -> None:
    """Deterministic JSON: sorted keys, no volatile fields."""
    Path(path).write_text(json.dumps(obj, sort_keys=True, indent=1,
                                     allow_nan=False) + "\n")


def write_run_meta(path: str | Path) -> None:
    """Volatile metadata sidecar (wall-clock time), kept out of reports."""
    meta = {"written_at_unix": time.time()}
    Path(path).write_text(json.dumps(meta) + "\n")


def write_table_csv(header: str, rows: list[str], path: str | Path) -> None:
    Path(path).write_text("\n".join([header, *rows]) + "\n")
