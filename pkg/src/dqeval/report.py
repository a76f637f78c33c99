"""Dataset ingestion from descriptor files and quality-report emission.

A descriptor is one JSON document naming the table file, its column
specs, optional per-record signal payloads and per-column dictionaries.
Reports pair the selection rationale with the computed metric results;
JSON keeps full precision, the Markdown table rounds to two decimals.
"""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Iterable, Mapping

import numpy as np

from . import registry as _registry
from .datamodel import (
    MISSING,
    ColumnSpec,
    DataModelError,
    Dataset,
    SignalBlock,
)

SIGNAL_FORMATS = ("f32le", "csv")


class DataLoadError(Exception):
    """A descriptor or its referenced files could not be loaded."""


@dataclass(frozen=True)
class SignalSource:
    dir: str
    format: str
    file_column: str
    pattern: str = "{value}"
    sampling_hz: float | None = None
    channels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.format not in SIGNAL_FORMATS:
            raise DataLoadError(f"unknown signal format {self.format!r}; expected one of {SIGNAL_FORMATS}")


@dataclass(frozen=True)
class DatasetDescriptor:
    table_path: str
    columns: tuple[ColumnSpec, ...]
    delimiter: str = ","
    dataset_id: str = "dataset"
    signals: SignalSource | None = None
    dictionaries: Mapping[str, Any] = field(default_factory=dict)
    evaluation_time: float | None = None
    row_index: str | None = None


def _parse_timestamp(value: Any) -> float:
    if value is None or value is MISSING:
        return None
    if isinstance(value, (int, float)):
        return float(value)
    text = str(value).strip()
    try:
        return float(text)
    except ValueError:
        pass
    try:
        dt = datetime.fromisoformat(text)
    except ValueError as exc:
        raise DataLoadError(f"cannot parse timestamp {value!r}") from exc
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.timestamp()


def _column_spec_from_dict(raw: Mapping[str, Any]) -> ColumnSpec:
    return ColumnSpec(
        name=raw["name"],
        vtype=raw.get("vtype", "numerical"),
        role=raw.get("role", "feature"),
        ordinal_order=tuple(raw["ordinal_order"]) if raw.get("ordinal_order") else None,
        missing_tokens=frozenset(raw["missing_tokens"]) if "missing_tokens" in raw else ColumnSpec.__dataclass_fields__["missing_tokens"].default,
    )


def parse_descriptor(doc: Mapping[str, Any], base_dir: str = ".") -> DatasetDescriptor:
    try:
        table = doc["table"]
        columns = tuple(_column_spec_from_dict(c) for c in doc["columns"])
    except KeyError as exc:
        raise DataLoadError(f"descriptor misses required field {exc}") from exc
    signals = None
    if doc.get("signals"):
        s = doc["signals"]
        signals = SignalSource(
            dir=os.path.join(base_dir, s["dir"]),
            format=s.get("format", "f32le"),
            file_column=s["file_column"],
            pattern=s.get("pattern", "{value}"),
            sampling_hz=s.get("sampling_hz"),
            channels=tuple(s.get("channels", ())),
        )
    eval_time = doc.get("evaluation_time")
    return DatasetDescriptor(
        table_path=os.path.join(base_dir, table["path"]),
        delimiter=table.get("delimiter", ","),
        columns=columns,
        dataset_id=doc.get("dataset_id", "dataset"),
        signals=signals,
        dictionaries=dict(doc.get("dictionaries", {})),
        evaluation_time=_parse_timestamp(eval_time) if eval_time is not None else None,
        row_index=os.path.join(base_dir, doc["row_index"]) if doc.get("row_index") else None,
    )


def read_descriptor(path: str) -> DatasetDescriptor:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DataLoadError(f"cannot read descriptor {path}: {exc}") from exc
    return parse_descriptor(doc, base_dir=os.path.dirname(os.path.abspath(path)))


def _read_signal_f32le(path: str) -> tuple[tuple[tuple[float, ...], ...], float, tuple[str, ...]]:
    with open(path, "rb") as fh:
        header = json.loads(fh.readline().decode("utf-8"))
        payload = np.frombuffer(fh.read(), dtype="<f4")
    channels = int(header["channels"])
    n_samples = int(header["n_samples"])
    if payload.size != channels * n_samples:
        raise DataLoadError(
            f"{path}: payload holds {payload.size} floats, header promises {channels}x{n_samples}"
        )
    grid = payload.reshape(n_samples, channels).T.astype(float)
    names = tuple(header.get("channel_names", ()) or (f"ch{i}" for i in range(channels)))
    return tuple(tuple(row) for row in grid), float(header["sampling_hz"]), names


def _read_signal_csv(path: str, sampling_hz: float, delimiter: str = ",") -> tuple[tuple[tuple[float, ...], ...], float, tuple[str, ...]]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh, delimiter=delimiter))
    if not rows:
        raise DataLoadError(f"{path}: empty signal file")
    names = tuple(rows[0])
    data = np.array([[float(v) for v in row] for row in rows[1:]], dtype=float)
    return tuple(tuple(col) for col in data.T), float(sampling_hz), names


def load_dataset(desc: DatasetDescriptor) -> Dataset:
    """Materialize a Dataset from its descriptor.

    Datetime columns accept epoch seconds or ISO-8601 strings. Signal
    files that are listed but absent yield records without a signal;
    a missing signal directory is an error.
    """
    try:
        with open(desc.table_path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh, delimiter=desc.delimiter)
            rows = list(reader)
    except OSError as exc:
        raise DataLoadError(f"cannot read table {desc.table_path}: {exc}") from exc
    if not rows:
        raise DataLoadError(f"{desc.table_path}: empty table")
    header = rows[0]
    positions = {}
    for spec in desc.columns:
        if spec.name not in header:
            raise DataLoadError(f"column {spec.name!r} not found in table header")
        positions[spec.name] = header.index(spec.name)
    records = rows[1:]
    if desc.row_index is not None:
        try:
            with open(desc.row_index, "r", encoding="utf-8") as fh:
                keep = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise DataLoadError(f"cannot read row index {desc.row_index}: {exc}") from exc
        try:
            records = [records[int(i)] for i in keep]
        except IndexError as exc:
            raise DataLoadError(f"row index out of range: {exc}") from exc

    cells: dict[str, list] = {}
    for spec in desc.columns:
        pos = positions[spec.name]
        raw = [row[pos] if pos < len(row) else "" for row in records]
        if spec.vtype == "datetime":
            parsed = []
            for v in raw:
                if v in spec.missing_tokens:
                    parsed.append(MISSING)
                else:
                    parsed.append(_parse_timestamp(v))
            cells[spec.name] = parsed
        else:
            cells[spec.name] = raw

    dictionaries = {}
    for col, source in desc.dictionaries.items():
        if isinstance(source, str):
            path = source if os.path.isabs(source) else os.path.join(os.path.dirname(desc.table_path), source)
            try:
                with open(path, "r", encoding="utf-8") as fh:
                    words = [line.rstrip("\n") for line in fh if line.strip()]
            except OSError as exc:
                raise DataLoadError(f"cannot read dictionary {path}: {exc}") from exc
        else:
            words = list(source)
        dictionaries[col] = words

    signals = None
    if desc.signals is not None:
        src = desc.signals
        if not os.path.isdir(src.dir):
            raise DataLoadError(f"signal directory {src.dir} does not exist")
        if src.file_column not in cells:
            raise DataLoadError(f"signal file column {src.file_column!r} is not a loaded column")
        blocks = []
        for value in cells[src.file_column]:
            if value in ("", None):
                blocks.append(None)
                continue
            path = os.path.join(src.dir, src.pattern.format(value=value))
            if not os.path.isfile(path):
                blocks.append(None)
                continue
            try:
                if src.format == "f32le":
                    samples, hz, names = _read_signal_f32le(path)
                else:
                    if src.sampling_hz is None:
                        raise DataLoadError("csv signal format requires sampling_hz in the descriptor")
                    samples, hz, names = _read_signal_csv(path, src.sampling_hz)
            except (OSError, ValueError, json.JSONDecodeError) as exc:
                raise DataLoadError(f"cannot read signal {path}: {exc}") from exc
            blocks.append(SignalBlock(samples=samples, sampling_hz=hz, channel_names=names))
        signals = tuple(blocks)

    try:
        return Dataset(
            columns=desc.columns,
            cells=cells,
            signals=signals,
            dataset_id=desc.dataset_id,
            dictionaries={k: frozenset(map(str, v)) for k, v in dictionaries.items()},
        )
    except DataModelError as exc:
        raise DataLoadError(str(exc)) from exc


# --- report assembly ---------------------------------------------------------


def _json_safe(value: Any) -> Any:
    if isinstance(value, Mapping):
        return {str(k): _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, np.ndarray):
        return [_json_safe(v) for v in value.tolist()]
    return value


def result_entry(
    metric_id: str,
    dimension: str,
    scope: str,
    params: Mapping[str, Any],
    value: Any = None,
    warnings: Iterable[str] = (),
    error: str | None = None,
) -> dict[str, Any]:
    entry = {
        "metric_id": metric_id,
        "dimension": dimension,
        "scope": scope,
        "params": _json_safe(dict(params)),
        "value": _json_safe(value),
        "warnings": list(warnings),
    }
    if error is not None:
        entry["error"] = error
    return entry


def evaluate_row(
    ds: Dataset,
    metric_id: str,
    dimension: str,
    params: Mapping[str, Any] | None = None,
    ds_b: Dataset | None = None,
    seed: int | None = None,
) -> dict[str, Any]:
    """One report row; evaluation failures are recorded, not raised."""
    try:
        res = _registry.evaluate(metric_id, ds, params=params, ds_b=ds_b, seed=seed)
    except _registry.EvaluationError as exc:
        return result_entry(
            metric_id, dimension, scope="unresolved", params=params or {}, error=str(exc)
        )
    return result_entry(
        metric_id, dimension, res.scope, res.params, res.value, res.warnings
    )


def build_report(
    dataset_id: str,
    profile: Mapping[str, Any],
    selection_doc: Mapping[str, Any],
    results: list[dict[str, Any]],
    seed: int | None = None,
) -> dict[str, Any]:
    from .selection import _library_version

    return {
        "dataset_id": dataset_id,
        "profile": _json_safe(dict(profile)),
        "selection": _json_safe(dict(selection_doc)),
        "results": results,
        "environment": {"library_version": _library_version(), "seed": seed},
    }


def report_json(report: Mapping[str, Any]) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False, sort_keys=False) + "\n"


def _round2(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if float(value).is_integer() and abs(value) >= 100:
            return str(int(value))
        return f"{value:.2f}"
    if isinstance(value, Mapping):
        return ", ".join(f"{k}={_round2(v)}" for k, v in value.items())
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_round2(v) for v in value) + "]"
    return str(value)


def render_report_markdown(report: Mapping[str, Any], title: str | None = None) -> str:
    """Dimension-grouped result table, values rounded to two decimals."""
    lines = [f"# {title or 'Data quality report: ' + report['dataset_id']}", ""]
    lines.append("| Dimension | Metric | Scope | Value |")
    lines.append("| --- | --- | --- | --- |")
    for row in report["results"]:
        if "error" in row:
            value = f"error: {row['error']}"
        else:
            value = _round2(row["value"])
            if row.get("warnings"):
                value += " (*)"
        lines.append(
            f"| {row['dimension']} | {row['metric_id']} | {row['scope']} | {value} |"
        )
    if any(r.get("warnings") for r in report["results"]):
        lines.append("")
        lines.append("(*) result carries warnings; see the JSON report.")
    seed = report.get("environment", {}).get("seed")
    lines.append("")
    lines.append(f"Seed: {seed}")
    return "\n".join(lines) + "\n"


def check_same_schema(a: Dataset, b: Dataset) -> None:
    """Error on the first column whose name or type differs between datasets."""
    for i in range(max(len(a.columns), len(b.columns))):
        if i >= len(a.columns):
            raise DataLoadError(f"schema mismatch: column {b.columns[i].name!r} only in second dataset")
        if i >= len(b.columns):
            raise DataLoadError(f"schema mismatch: column {a.columns[i].name!r} only in first dataset")
        ca, cb = a.columns[i], b.columns[i]
        if ca.name != cb.name or ca.vtype != cb.vtype:
            raise DataLoadError(
                f"schema mismatch at column {ca.name!r}: "
                f"({ca.name}, {ca.vtype}) vs ({cb.name}, {cb.vtype})"
            )


def _numeric(value: Any) -> float | None:
    if isinstance(value, bool):
        return None
    if isinstance(value, (int, float)):
        return float(value)
    return None


def compare_results(rows_a: list[dict], rows_b: list[dict]) -> list[dict[str, Any]]:
    """Pair result rows by (metric_id, scope) and attach numeric deltas."""
    out = []
    index_b = {(r["metric_id"], r["scope"]): r for r in rows_b}
    for ra in rows_a:
        rb = index_b.get((ra["metric_id"], ra["scope"]))
        entry = {
            "metric_id": ra["metric_id"],
            "dimension": ra["dimension"],
            "scope": ra["scope"],
            "value_a": ra.get("value"),
            "value_b": rb.get("value") if rb else None,
        }
        va = _numeric(ra.get("value"))
        vb = _numeric(rb.get("value")) if rb else None
        if va is not None and vb is not None:
            entry["delta"] = vb - va
        out.append(entry)
    return out


def render_comparison_markdown(pairs: list[dict], id_a: str, id_b: str) -> str:
    lines = [
        f"| Dimension | Metric | Scope | {id_a} | {id_b} | Delta |",
        "| --- | --- | --- | --- | --- | --- |",
    ]
    for p in pairs:
        delta = _round2(p["delta"]) if "delta" in p else ""
        lines.append(
            f"| {p['dimension']} | {p['metric_id']} | {p['scope']} "
            f"| {_round2(p['value_a'])} | {_round2(p['value_b'])} | {delta} |"
        )
    return "\n".join(lines) + "\n"
