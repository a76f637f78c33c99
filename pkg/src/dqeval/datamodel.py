"""Typed, immutable in-memory representation of datasets.

Tabular metadata plus optional per-record signal payloads, with explicit
missing-value markers. Missing cells are stored as ``None`` and never
participate in arithmetic; each metric decides its own deletion policy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterator, Mapping, Sequence

VTYPES = ("numerical", "categorical", "ordinal", "datetime", "identifier")
ROLES = ("feature", "target", "patient_id", "timestamp", "annotation", "weight")
UNIQUE_ROLES = ("target", "patient_id", "timestamp")

MISSING = None


class DataModelError(ValueError):
    """Raised for schema violations and invalid column access."""


@dataclass(frozen=True)
class ColumnSpec:
    name: str
    vtype: str = "numerical"
    role: str = "feature"
    ordinal_order: tuple[str, ...] | None = None
    missing_tokens: frozenset[str] = frozenset({"", "NA", "NaN", "nan", "null", "None"})

    def __post_init__(self) -> None:
        if self.vtype not in VTYPES:
            raise DataModelError(f"unknown vtype {self.vtype!r}; expected one of {VTYPES}")
        if self.role not in ROLES:
            raise DataModelError(f"unknown role {self.role!r}; expected one of {ROLES}")
        if self.ordinal_order is not None:
            object.__setattr__(self, "ordinal_order", tuple(self.ordinal_order))
        if not isinstance(self.missing_tokens, frozenset):
            object.__setattr__(self, "missing_tokens", frozenset(self.missing_tokens))


@dataclass(frozen=True)
class SignalBlock:
    """Per-record multichannel signal; all channels equal length."""

    samples: tuple[tuple[float, ...], ...]
    sampling_hz: float
    channel_names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        samples = tuple(tuple(float(v) for v in ch) for ch in self.samples)
        object.__setattr__(self, "samples", samples)
        if self.sampling_hz <= 0:
            raise DataModelError("sampling_hz must be > 0")
        lengths = {len(ch) for ch in samples}
        if len(lengths) > 1:
            raise DataModelError("all signal channels must have equal length")
        if self.channel_names and len(self.channel_names) != len(samples):
            raise DataModelError("channel_names length must match channel count")
        object.__setattr__(self, "channel_names", tuple(self.channel_names))

    @property
    def n_channels(self) -> int:
        return len(self.samples)

    @property
    def n_samples(self) -> int:
        return len(self.samples[0]) if self.samples else 0


@dataclass(frozen=True)
class Sample:
    """Ordered finite values with the count of dropped (missing) entries."""

    values: tuple[float, ...]
    dropped: int = 0

    def __post_init__(self) -> None:
        vals = tuple(float(v) for v in self.values)
        for v in vals:
            if not math.isfinite(v):
                raise DataModelError("Sample accepts finite values only")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[float]:
        return iter(self.values)


@dataclass(frozen=True)
class CategoricalCounts:
    """Category -> nonnegative count."""

    counts: tuple[tuple[Any, float], ...]

    def __post_init__(self) -> None:
        norm = []
        for cat, cnt in dict(self.counts).items():
            c = float(cnt)
            if c < 0:
                raise DataModelError(f"negative count for category {cat!r}")
            norm.append((cat, c))
        object.__setattr__(self, "counts", tuple(norm))

    @classmethod
    def from_mapping(cls, mapping: Mapping[Any, float]) -> "CategoricalCounts":
        return cls(tuple(mapping.items()))

    @classmethod
    def from_values(cls, values: Sequence[Any]) -> "CategoricalCounts":
        acc: dict[Any, float] = {}
        for v in values:
            if v is MISSING:
                continue
            acc[v] = acc.get(v, 0.0) + 1.0
        return cls.from_mapping(acc)

    def as_dict(self) -> dict[Any, float]:
        return dict(self.counts)

    @property
    def categories(self) -> tuple[Any, ...]:
        return tuple(c for c, _ in self.counts)

    @property
    def total(self) -> float:
        return sum(c for _, c in self.counts)

    def proportions(self) -> dict[Any, float]:
        t = self.total
        if t <= 0:
            raise DataModelError("CategoricalCounts total must be > 0")
        return {cat: cnt / t for cat, cnt in self.counts}

    def __len__(self) -> int:
        return len(self.counts)


@dataclass(frozen=True)
class RatingsMatrix:
    """Items x raters grid of labels; None marks a missing rating."""

    ratings: tuple[tuple[Any, ...], ...]
    rater_names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        rows = tuple(tuple(r) for r in self.ratings)
        if not rows:
            raise DataModelError("RatingsMatrix needs at least one item")
        widths = {len(r) for r in rows}
        if len(widths) > 1:
            raise DataModelError("all items must carry one slot per rater")
        if len(rows[0]) < 1:
            raise DataModelError("RatingsMatrix needs at least one rater")
        object.__setattr__(self, "ratings", rows)
        object.__setattr__(self, "rater_names", tuple(self.rater_names))

    @property
    def n_items(self) -> int:
        return len(self.ratings)

    @property
    def n_raters(self) -> int:
        return len(self.ratings[0])

    def column(self, j: int) -> tuple[Any, ...]:
        return tuple(row[j] for row in self.ratings)


def _normalize_cell(value: Any, spec: ColumnSpec) -> Any:
    if value is MISSING:
        return MISSING
    if isinstance(value, str) and value.strip() in spec.missing_tokens:
        return MISSING
    if isinstance(value, float) and math.isnan(value):
        return MISSING
    if spec.vtype in ("numerical", "datetime"):
        try:
            return float(value)
        except (TypeError, ValueError):
            raise DataModelError(
                f"column {spec.name!r} ({spec.vtype}) got non-numeric cell {value!r}"
            ) from None
    return value


@dataclass(frozen=True)
class Dataset:
    """Immutable column-major table plus optional per-record signals."""

    columns: tuple[ColumnSpec, ...]
    cells: Mapping[str, tuple[Any, ...]]
    signals: tuple[SignalBlock | None, ...] | None = None
    dataset_id: str = "dataset"
    dictionaries: Mapping[str, frozenset[str]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        cols = tuple(self.columns)
        names = [c.name for c in cols]
        if len(set(names)) != len(names):
            raise DataModelError("column names must be unique")
        for role in UNIQUE_ROLES:
            holders = [c.name for c in cols if c.role == role]
            if len(holders) > 1:
                raise DataModelError(f"at most one column may carry role {role!r}, got {holders}")
        if set(self.cells) != set(names):
            raise DataModelError("cells must provide exactly the declared columns")
        lengths = {len(v) for v in self.cells.values()}
        if len(lengths) > 1:
            raise DataModelError("all columns must have the same number of cells")
        n = lengths.pop() if lengths else 0
        normalized: dict[str, tuple[Any, ...]] = {}
        for spec in cols:
            normalized[spec.name] = tuple(
                _normalize_cell(v, spec) for v in self.cells[spec.name]
            )
        for spec in cols:
            if spec.vtype == "ordinal":
                observed = {v for v in normalized[spec.name] if v is not MISSING}
                if spec.ordinal_order is None:
                    raise DataModelError(f"ordinal column {spec.name!r} needs ordinal_order")
                uncovered = observed - set(spec.ordinal_order)
                if uncovered:
                    raise DataModelError(
                        f"ordinal_order of {spec.name!r} misses categories {sorted(map(str, uncovered))}"
                    )
        if self.signals is not None:
            sig = tuple(self.signals)
            if len(sig) != n:
                raise DataModelError("signals must provide one entry (or None) per record")
            object.__setattr__(self, "signals", sig)
        object.__setattr__(self, "columns", cols)
        object.__setattr__(self, "cells", normalized)
        object.__setattr__(
            self,
            "dictionaries",
            {k: frozenset(v) for k, v in dict(self.dictionaries).items()},
        )
        object.__setattr__(self, "_n_records", n)

    @property
    def n_records(self) -> int:
        return self._n_records  # type: ignore[attr-defined]

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)

    def spec(self, name: str) -> ColumnSpec:
        for c in self.columns:
            if c.name == name:
                return c
        raise DataModelError(f"unknown column {name!r}")

    def column(self, name: str) -> tuple[Any, ...]:
        self.spec(name)
        return self.cells[name]

    def role_column(self, role: str) -> str | None:
        for c in self.columns:
            if c.role == role:
                return c.name
        return None

    def feature_columns(self) -> tuple[str, ...]:
        # id columns carry no measurement detail, whatever their role says
        return tuple(
            c.name for c in self.columns if c.role == "feature" and c.vtype != "identifier"
        )


def column_sample(ds: Dataset, col: str) -> Sample:
    """Numeric values of a column in record order, missing dropped.

    Ordinal columns are encoded by their position in ordinal_order.
    """
    spec = ds.spec(col)
    raw = ds.cells[col]
    if spec.vtype in ("numerical", "datetime"):
        vals = [v for v in raw if v is not MISSING]
    elif spec.vtype == "ordinal":
        codes = {cat: float(i) for i, cat in enumerate(spec.ordinal_order or ())}
        vals = [codes[v] for v in raw if v is not MISSING]
    else:
        raise DataModelError(f"column {col!r} is {spec.vtype}; numeric or ordinal required")
    return Sample(tuple(vals), dropped=len(raw) - len(vals))


def group_by(ds: Dataset, col: str) -> tuple[dict[Any, list[int]], list[int]]:
    """Partition record indices by a categorical/ordinal column.

    Returns (groups, missing_indices); groups are disjoint and together with
    the missing set cover all records.
    """
    spec = ds.spec(col)
    if spec.vtype not in ("categorical", "ordinal", "identifier"):
        raise DataModelError(f"group_by needs a categorical column, {col!r} is {spec.vtype}")
    groups: dict[Any, list[int]] = {}
    missing: list[int] = []
    for i, v in enumerate(ds.cells[col]):
        if v is MISSING:
            missing.append(i)
        else:
            groups.setdefault(v, []).append(i)
    return groups, missing


@dataclass(frozen=True)
class Binning:
    """Discretization rule: equal_width(k), quantile(k) or explicit_edges."""

    kind: str
    k: int = 0
    edges: tuple[float, ...] = ()

    @classmethod
    def equal_width(cls, k: int) -> "Binning":
        return cls("equal_width", k=k)

    @classmethod
    def quantile(cls, k: int) -> "Binning":
        return cls("quantile", k=k)

    @classmethod
    def explicit_edges(cls, edges: Sequence[float]) -> "Binning":
        return cls("explicit_edges", edges=tuple(float(e) for e in edges))


DEFAULT_BINNING = Binning.equal_width(10)


@dataclass(frozen=True)
class Histogram:
    """Binned counts with the edges that produced them."""

    counts: CategoricalCounts
    edges: tuple[float, ...]
    warnings: tuple[str, ...] = ()


def _bin_edges(s: Sample, binning: Binning) -> tuple[tuple[float, ...], list[str]]:
    import numpy as np

    warnings: list[str] = []
    vals = np.asarray(s.values, dtype=float)
    if binning.kind == "explicit_edges":
        if len(binning.edges) < 2:
            raise DataModelError("explicit_edges needs at least two edges")
        return binning.edges, warnings
    if binning.k < 1:
        raise DataModelError("bin count must be >= 1")
    lo, hi = float(vals.min()), float(vals.max())
    if binning.kind == "equal_width":
        if lo == hi:
            warnings.append("degenerate range: all values equal, one occupied bin")
            return (lo, hi), warnings
        return tuple(np.linspace(lo, hi, binning.k + 1)), warnings
    if binning.kind == "quantile":
        qs = np.quantile(vals, np.linspace(0, 1, binning.k + 1))  # type 7
        return tuple(qs), warnings
    raise DataModelError(f"unknown binning kind {binning.kind!r}")


def histogram(s: Sample, binning: Binning = DEFAULT_BINNING) -> Histogram:
    """Bin a sample; counts always sum to the sample size."""
    import numpy as np

    if len(s) == 0:
        raise DataModelError("cannot bin an empty sample")
    edges, warns = _bin_edges(s, binning)
    vals = np.asarray(s.values, dtype=float)
    if len(edges) == 2 and edges[0] == edges[1]:
        counts = CategoricalCounts.from_mapping({"bin0": float(len(s))})
        return Histogram(counts, edges, tuple(warns))
    idx = np.clip(np.searchsorted(edges, vals, side="right") - 1, 0, len(edges) - 2)
    acc: dict[str, float] = {f"bin{i}": 0.0 for i in range(len(edges) - 1)}
    for i in idx:
        acc[f"bin{int(i)}"] += 1.0
    counts = CategoricalCounts.from_mapping(acc)
    return Histogram(counts, tuple(float(e) for e in edges), tuple(warns))


def pooled_histograms(
    a: Sample, b: Sample, binning: Binning = DEFAULT_BINNING
) -> tuple[Histogram, Histogram]:
    """Bin two samples over shared edges from their pooled min-max range.

    Shared edges are required by the divergence ops, whose bins must match.
    """
    if binning.kind == "explicit_edges":
        edges = binning.edges
    else:
        pooled = Sample(tuple(a.values) + tuple(b.values))
        edges, _ = _bin_edges(pooled, binning)
    shared = Binning.explicit_edges(edges) if len(edges) >= 2 else binning
    if len(edges) == 2 and edges[0] == edges[1]:
        # constant pooled sample: both histograms collapse to one bin
        ha = Histogram(CategoricalCounts.from_mapping({"bin0": float(len(a))}), tuple(edges),
                       ("degenerate range: all values equal, one occupied bin",))
        hb = Histogram(CategoricalCounts.from_mapping({"bin0": float(len(b))}), tuple(edges),
                       ("degenerate range: all values equal, one occupied bin",))
        return ha, hb
    return histogram(a, shared), histogram(b, shared)


def take_records(ds: Dataset, indices: Sequence[int], dataset_id: str | None = None) -> Dataset:
    """Row-subset a dataset, keeping records in the given order."""
    n = ds.n_records
    idx = []
    for i in indices:
        j = int(i)
        if not 0 <= j < n:
            raise DataModelError(f"record index {i} out of range 0..{n - 1}")
        idx.append(j)
    cells = {c.name: [ds.column(c.name)[j] for j in idx] for c in ds.columns}
    signals = tuple(ds.signals[j] for j in idx) if ds.signals is not None else None
    return Dataset(
        columns=ds.columns,
        cells=cells,
        signals=signals,
        dataset_id=dataset_id or f"{ds.dataset_id}[subset]",
        dictionaries=ds.dictionaries,
    )
