"""Descriptor parsing, dataset loading and report emission."""

from __future__ import annotations

import json

import numpy as np
import pytest

from dqeval.datamodel import MISSING, Dataset, ColumnSpec
from dqeval.report import (
    DataLoadError,
    _round2,
    build_report,
    check_same_schema,
    compare_results,
    evaluate_row,
    load_dataset,
    parse_descriptor,
    read_descriptor,
    render_comparison_markdown,
    render_report_markdown,
    report_json,
    result_entry,
)

TABLE = (
    "rid,age,sex,visit,code\n"
    "r1,30,m,2021-01-02T00:00:00+00:00,I21\n"
    "r2,NA,f,1609545600,I50\n"
    "r3,50,m,,Z99\n"
)

COLUMNS = [
    {"name": "rid", "vtype": "identifier"},
    {"name": "age", "vtype": "numerical"},
    {"name": "sex", "vtype": "categorical"},
    {"name": "visit", "vtype": "datetime", "role": "timestamp"},
    {"name": "code", "vtype": "categorical"},
]


def _write_descriptor(tmp_path, doc):
    path = tmp_path / "descriptor.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


def _basic_doc(**overrides):
    doc = {
        "table": {"path": "table.csv"},
        "columns": [dict(c) for c in COLUMNS],
        "dataset_id": "demo",
    }
    doc.update(overrides)
    return doc


@pytest.fixture
def table_dir(tmp_path):
    (tmp_path / "table.csv").write_text(TABLE, encoding="utf-8")
    return tmp_path


def test_descriptor_paths_resolve_against_the_descriptor_location(table_dir):
    path = _write_descriptor(table_dir, _basic_doc())
    desc = read_descriptor(path)
    assert desc.table_path == str(table_dir / "table.csv")
    assert desc.dataset_id == "demo"
    assert desc.delimiter == ","


def test_descriptor_requires_table_and_columns(tmp_path):
    with pytest.raises(DataLoadError, match="misses required field"):
        parse_descriptor({"columns": []})
    with pytest.raises(DataLoadError, match="misses required field"):
        parse_descriptor({"table": {"path": "t.csv"}})


def test_descriptor_rejects_unknown_signal_format(tmp_path):
    doc = _basic_doc(signals={"dir": "sig", "format": "wav", "file_column": "rid"})
    with pytest.raises(DataLoadError, match="unknown signal format"):
        parse_descriptor(doc)


def test_descriptor_parses_evaluation_time_formats():
    assert parse_descriptor(_basic_doc(evaluation_time=12.5)).evaluation_time == 12.5
    iso = parse_descriptor(_basic_doc(evaluation_time="1970-01-01T00:01:00+00:00"))
    assert iso.evaluation_time == 60.0
    with pytest.raises(DataLoadError, match="cannot parse timestamp"):
        parse_descriptor(_basic_doc(evaluation_time="yesterday"))


def test_unreadable_descriptor_is_a_load_error(tmp_path):
    with pytest.raises(DataLoadError, match="cannot read descriptor"):
        read_descriptor(str(tmp_path / "none.json"))
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(DataLoadError, match="cannot read descriptor"):
        read_descriptor(str(bad))


def test_load_dataset_parses_cells_and_timestamps(table_dir):
    ds = load_dataset(read_descriptor(_write_descriptor(table_dir, _basic_doc())))
    assert ds.n_records == 3
    assert ds.column("age") == (30.0, MISSING, 50.0)
    assert ds.column("visit")[0] == 1609545600.0
    assert ds.column("visit")[1] == 1609545600.0
    assert ds.column("visit")[2] is MISSING


def test_load_dataset_requires_declared_columns_in_header(table_dir):
    doc = _basic_doc(columns=[{"name": "ghost"}])
    with pytest.raises(DataLoadError, match="'ghost' not found"):
        load_dataset(read_descriptor(_write_descriptor(table_dir, doc)))


def test_load_dataset_rejects_missing_table(tmp_path):
    with pytest.raises(DataLoadError, match="cannot read table"):
        load_dataset(read_descriptor(_write_descriptor(tmp_path, _basic_doc())))


def test_load_dataset_rejects_empty_table(tmp_path):
    (tmp_path / "table.csv").write_text("", encoding="utf-8")
    with pytest.raises(DataLoadError, match="empty table"):
        load_dataset(read_descriptor(_write_descriptor(tmp_path, _basic_doc())))


def test_row_index_selects_and_orders_records(table_dir):
    (table_dir / "keep.json").write_text("[2, 0]", encoding="utf-8")
    doc = _basic_doc(row_index="keep.json")
    ds = load_dataset(read_descriptor(_write_descriptor(table_dir, doc)))
    assert ds.column("rid") == ("r3", "r1")


def test_row_index_out_of_range_is_a_load_error(table_dir):
    (table_dir / "keep.json").write_text("[7]", encoding="utf-8")
    doc = _basic_doc(row_index="keep.json")
    with pytest.raises(DataLoadError, match="row index out of range"):
        load_dataset(read_descriptor(_write_descriptor(table_dir, doc)))


def test_dictionaries_load_inline_and_from_files(table_dir):
    (table_dir / "codes.txt").write_text("I21\nI50\n\nZ99\n", encoding="utf-8")
    doc = _basic_doc(dictionaries={"code": "codes.txt", "sex": ["m", "f"]})
    ds = load_dataset(read_descriptor(_write_descriptor(table_dir, doc)))
    assert ds.dictionaries["code"] == frozenset({"I21", "I50", "Z99"})
    assert ds.dictionaries["sex"] == frozenset({"m", "f"})
    doc = _basic_doc(dictionaries={"code": "absent.txt"})
    with pytest.raises(DataLoadError, match="cannot read dictionary"):
        load_dataset(read_descriptor(_write_descriptor(table_dir, doc)))


def test_dataset_validation_failures_surface_as_load_errors(table_dir):
    doc = _basic_doc()
    doc["columns"][1]["role"] = "timestamp"
    with pytest.raises(DataLoadError, match="at most one column"):
        load_dataset(read_descriptor(_write_descriptor(table_dir, doc)))


def _write_f32(path, matrix, sampling_hz=100.0, names=("x", "y"), n_samples=None):
    arr = np.asarray(matrix, dtype="<f4")
    header = {
        "channels": arr.shape[1],
        "n_samples": n_samples if n_samples is not None else arr.shape[0],
        "sampling_hz": sampling_hz,
        "channel_names": list(names),
    }
    with open(path, "wb") as fh:
        fh.write((json.dumps(header) + "\n").encode("utf-8"))
        fh.write(arr.tobytes())


def test_f32_signals_round_trip(table_dir):
    sig_dir = table_dir / "sig"
    sig_dir.mkdir()
    _write_f32(sig_dir / "r1.f32", [[1.0, 10.0], [2.0, 20.0], [3.0, 30.0]])
    _write_f32(sig_dir / "r3.f32", [[5.0, 50.0]])
    doc = _basic_doc(
        signals={"dir": "sig", "format": "f32le", "file_column": "rid", "pattern": "{value}.f32"}
    )
    ds = load_dataset(read_descriptor(_write_descriptor(table_dir, doc)))
    assert ds.signals[0].samples == ((1.0, 2.0, 3.0), (10.0, 20.0, 30.0))
    assert ds.signals[0].sampling_hz == 100.0
    assert ds.signals[0].channel_names == ("x", "y")
    assert ds.signals[1] is None
    assert ds.signals[2].samples == ((5.0,), (50.0,))


def test_f32_truncated_payload_is_rejected(table_dir):
    sig_dir = table_dir / "sig"
    sig_dir.mkdir()
    _write_f32(sig_dir / "r1.f32", [[1.0, 10.0]], n_samples=4)
    doc = _basic_doc(
        signals={"dir": "sig", "format": "f32le", "file_column": "rid", "pattern": "{value}.f32"}
    )
    with pytest.raises(DataLoadError, match="header promises"):
        load_dataset(read_descriptor(_write_descriptor(table_dir, doc)))


def test_csv_signals_need_a_declared_rate(table_dir):
    sig_dir = table_dir / "sig"
    sig_dir.mkdir()
    (sig_dir / "r1.csv").write_text("lead1,lead2\n0.1,0.5\n0.2,0.6\n", encoding="utf-8")
    doc = _basic_doc(
        signals={"dir": "sig", "format": "csv", "file_column": "rid", "pattern": "{value}.csv", "sampling_hz": 250}
    )
    ds = load_dataset(read_descriptor(_write_descriptor(table_dir, doc)))
    assert ds.signals[0].samples == ((0.1, 0.2), (0.5, 0.6))
    assert ds.signals[0].sampling_hz == 250.0
    assert ds.signals[0].channel_names == ("lead1", "lead2")
    doc["signals"].pop("sampling_hz")
    with pytest.raises(DataLoadError, match="requires sampling_hz"):
        load_dataset(read_descriptor(_write_descriptor(table_dir, doc)))


def test_missing_signal_directory_is_a_load_error(table_dir):
    doc = _basic_doc(signals={"dir": "nowhere", "format": "f32le", "file_column": "rid"})
    with pytest.raises(DataLoadError, match="does not exist"):
        load_dataset(read_descriptor(_write_descriptor(table_dir, doc)))


# --- report assembly ----------------------------------------------------------


def _tiny_dataset():
    return Dataset(
        columns=(ColumnSpec("x"), ColumnSpec("grp", vtype="categorical")),
        cells={"x": (1.0, 2.0, 3.0, 4.0), "grp": ("a", "a", "b", "b")},
        dataset_id="tiny",
    )


def test_evaluate_row_records_success():
    row = evaluate_row(_tiny_dataset(), "range", "variety", params={"column": "x"})
    assert row["value"] == 3.0
    assert row["scope"] == "column:x"
    assert row["dimension"] == "variety"
    assert "error" not in row


def test_evaluate_row_records_failure_instead_of_raising():
    row = evaluate_row(_tiny_dataset(), "pearson", "feature_importance")
    assert row["scope"] == "unresolved"
    assert "column_a" in row["error"]
    assert row["value"] is None


def test_result_entry_converts_numpy_scalars():
    entry = result_entry(
        "range", "variety", "column:x",
        params={"n": np.int64(4), "w": np.float32(0.5), "arr": np.array([1, 2])},
        value=np.float64(3.0),
    )
    text = json.dumps(entry)
    assert json.loads(text)["params"] == {"n": 4, "w": 0.5, "arr": [1, 2]}
    assert json.loads(text)["value"] == 3.0


def test_report_json_is_deterministic():
    rows = [evaluate_row(_tiny_dataset(), "range", "variety", params={"column": "x"})]
    a = build_report("tiny", {"q": "yes"}, {"selections": []}, rows, seed=3)
    b = build_report("tiny", {"q": "yes"}, {"selections": []}, rows, seed=3)
    assert report_json(a) == report_json(b)
    assert report_json(a).endswith("\n")
    assert a["environment"]["seed"] == 3


@pytest.mark.parametrize(
    "value, expected",
    [
        (None, ""),
        ("skipped", "skipped"),
        (True, "True"),
        (21837, "21837"),
        (1.4705, "1.47"),
        (21837.0, "21837"),
        (2.0, "2.00"),
        (float("nan"), "nan"),
        (float("inf"), "inf"),
        ({"mean": 1.234, "std": 0.5}, "mean=1.23, std=0.50"),
        ([100.0, 500.0], "[100, 500]"),
    ],
)
def test_two_decimal_rendering(value, expected):
    assert _round2(value) == expected


def test_render_report_markdown_rounds_and_footnotes():
    rows = [
        result_entry("range", "variety", "column:x", {}, 3.14159),
        result_entry("ks_test", "homogeneity", "pair:a,b", {}, 0.5, warnings=["small sample"]),
        result_entry("pearson", "feature_importance", "unresolved", {}, error="parameter 'column_a' is required"),
    ]
    report = build_report("tiny", {}, {}, rows, seed=1)
    md = render_report_markdown(report)
    assert "| variety | range | column:x | 3.14 |" in md
    assert "| homogeneity | ks_test | pair:a,b | 0.50 (*) |" in md
    assert "error: parameter 'column_a' is required" in md
    assert "(*) result carries warnings" in md
    assert md.rstrip().endswith("Seed: 1")


def test_render_report_markdown_omits_footnote_without_warnings():
    report = build_report("tiny", {}, {}, [result_entry("range", "variety", "s", {}, 1.0)])
    assert "(*)" not in render_report_markdown(report)


def test_check_same_schema_names_first_difference():
    a = _tiny_dataset()
    check_same_schema(a, a)
    b = Dataset(
        columns=(ColumnSpec("x"), ColumnSpec("grp")),
        cells={"x": (1.0,), "grp": (2.0,)},
        dataset_id="other",
    )
    with pytest.raises(DataLoadError, match="schema mismatch at column 'grp'"):
        check_same_schema(a, b)
    c = Dataset(columns=(ColumnSpec("x"),), cells={"x": (1.0,)}, dataset_id="short")
    with pytest.raises(DataLoadError, match="'grp' only in first dataset"):
        check_same_schema(a, c)


def test_compare_results_pairs_by_metric_and_scope():
    rows_a = [
        result_entry("range", "variety", "column:x", {}, 3.0),
        result_entry("hill_numbers", "variety", "column:grp", {}, 2.0),
        result_entry("dataset_size", "dataset_size", "global", {}, 4),
    ]
    rows_b = [
        result_entry("range", "variety", "column:x", {}, 5.5),
        result_entry("hill_numbers", "variety", "column:grp", {}, None, error="no categories"),
    ]
    pairs = compare_results(rows_a, rows_b)
    assert pairs[0]["delta"] == 2.5
    assert "delta" not in pairs[1]
    assert pairs[2]["value_b"] is None and "delta" not in pairs[2]
    md = render_comparison_markdown(pairs, "tiny", "other")
    assert "| tiny | other | Delta |" in md.splitlines()[0]
    assert "| variety | range | column:x | 3.00 | 5.50 | 2.50 |" in md
