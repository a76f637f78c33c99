"""Metric-card registry: lookup, filtering, rendering and evaluation dispatch.

The registry is the single source of truth for the 60 metrics, their
dimension and group mapping, applicability and pitfalls. Cards are data
(cards.py); this module holds the types and the evaluator wiring.
"""

from __future__ import annotations

import json
import math
import warnings as _pywarnings
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Sequence

import numpy as np

from . import cards as _cards
from . import correlation as _corr
from . import distribution as _dist
from . import measurement as _meas
from . import structure as _struct
from .datamodel import (
    MISSING,
    Binning,
    CategoricalCounts,
    Dataset,
    RatingsMatrix,
    Sample,
    column_sample,
    group_by,
    pooled_histograms,
)
from .distribution import MetricInputError, MetricWarning

DIMENSIONS = _cards.DIMENSIONS
GROUPS = _cards.GROUPS
PITFALL_TAGS = _cards.PITFALL_TAGS
MODALITIES = _cards.MODALITIES
VARIABLE_TYPES = _cards.VARIABLE_TYPES


class RegistryError(ValueError):
    """Unknown ids or invalid filter values."""


class EvaluationError(ValueError):
    """A metric could not be evaluated on the given dataset."""


class PrerequisiteError(EvaluationError):
    """The dataset lacks something the metric requires."""


class ApplicabilityError(EvaluationError):
    """The metric does not apply to the referenced column types."""


class EvaluatorUnavailable(EvaluationError):
    """The card exists but no evaluator is implemented."""


@dataclass(frozen=True)
class Applicability:
    modalities: tuple[str, ...]
    variable_types: tuple[str, ...]

    def __post_init__(self) -> None:
        for m in self.modalities:
            if m not in MODALITIES:
                raise RegistryError(f"unknown modality {m!r}")
        for v in self.variable_types:
            if v not in VARIABLE_TYPES:
                raise RegistryError(f"unknown variable type {v!r}")


@dataclass(frozen=True)
class MetricCard:
    id: str
    name: str
    synonyms: tuple[str, ...]
    summary: str
    definition: str
    value_range: str
    interpretation: str
    dimensions: tuple[str, ...]
    group: str
    references: tuple[str, ...]
    example: str
    relations: tuple[str, ...]
    applicability: Applicability
    prerequisites: tuple[str, ...]
    pitfall_tags: tuple[str, ...]
    pitfalls: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.group not in GROUPS:
            raise RegistryError(f"{self.id}: unknown group {self.group!r}")
        if not self.dimensions:
            raise RegistryError(f"{self.id}: dimensions must be nonempty")
        for d in self.dimensions:
            if d not in DIMENSIONS:
                raise RegistryError(f"{self.id}: unknown dimension {d!r}")
        for t in self.pitfall_tags:
            if t not in PITFALL_TAGS:
                raise RegistryError(f"{self.id}: unknown pitfall tag {t!r}")

    def as_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "name": self.name,
            "synonyms": list(self.synonyms),
            "summary": self.summary,
            "definition": self.definition,
            "value_range": self.value_range,
            "interpretation": self.interpretation,
            "dimensions": list(self.dimensions),
            "group": self.group,
            "references": list(self.references),
            "example": self.example,
            "relations": list(self.relations),
            "applicability": {
                "modalities": list(self.applicability.modalities),
                "variable_types": list(self.applicability.variable_types),
            },
            "prerequisites": list(self.prerequisites),
            "pitfall_tags": list(self.pitfall_tags),
            "pitfalls": list(self.pitfalls),
        }


@dataclass(frozen=True)
class MetricResult:
    metric_id: str
    scope: str
    params: Mapping[str, Any] = field(default_factory=dict)
    value: Any = None
    warnings: tuple[str, ...] = ()


def _build_cards() -> tuple[MetricCard, ...]:
    built = []
    seen = set()
    for raw in _cards.CARDS:
        card = MetricCard(
            id=raw["id"],
            name=raw["name"],
            synonyms=tuple(raw["synonyms"]),
            summary=raw["summary"],
            definition=raw["definition"],
            value_range=raw["value_range"],
            interpretation=raw["interpretation"],
            dimensions=tuple(raw["dimensions"]),
            group=raw["group"],
            references=tuple(raw["references"]),
            example=raw["example"],
            relations=tuple(raw["relations"]),
            applicability=Applicability(
                tuple(raw["applicability"]["modalities"]),
                tuple(raw["applicability"]["variable_types"]),
            ),
            prerequisites=tuple(raw["prerequisites"]),
            pitfall_tags=tuple(raw["pitfall_tags"]),
            pitfalls=tuple(raw["pitfalls"]),
        )
        if card.id in seen:
            raise RegistryError(f"duplicate card id {card.id!r}")
        seen.add(card.id)
        built.append(card)
    return tuple(built)


_CARDS: tuple[MetricCard, ...] = _build_cards()
_BY_ID: dict[str, MetricCard] = {c.id: c for c in _CARDS}
_SYNONYMS: dict[str, str] = {}
for _c in _CARDS:
    for _s in _c.synonyms:
        _SYNONYMS.setdefault(_s.lower().replace(" ", "_").replace("-", "_"), _c.id)


def all_cards() -> tuple[MetricCard, ...]:
    """The full built-in registry in stable order."""
    return _CARDS


def resolve_id(name: str) -> str:
    """Map an id or synonym (case/space tolerant) to the canonical id."""
    key = name.strip().lower().replace(" ", "_").replace("-", "_")
    if key in _BY_ID:
        return key
    if key in _SYNONYMS:
        return _SYNONYMS[key]
    raise RegistryError(f"unknown metric {name!r}")


def card(metric_id: str) -> MetricCard:
    return _BY_ID[resolve_id(metric_id)]


def filter_cards(
    dim: str | None = None,
    modality: str | None = None,
    vtype: str | None = None,
    group: str | None = None,
) -> tuple[MetricCard, ...]:
    """Conjunctive filter over dimension, modality, variable type and group."""
    if dim is not None and dim not in DIMENSIONS:
        raise RegistryError(f"unknown dimension {dim!r}; expected one of {DIMENSIONS}")
    if modality is not None and modality not in MODALITIES:
        raise RegistryError(f"unknown modality {modality!r}")
    if vtype is not None and vtype not in VARIABLE_TYPES:
        raise RegistryError(f"unknown variable type {vtype!r}")
    if group is not None and group not in GROUPS:
        raise RegistryError(f"unknown group {group!r}")
    out = []
    for c in _CARDS:
        if dim is not None and dim not in c.dimensions:
            continue
        if modality is not None and modality not in c.applicability.modalities:
            continue
        if vtype is not None and vtype not in c.applicability.variable_types:
            continue
        if group is not None and c.group != group:
            continue
        out.append(c)
    return tuple(out)


def _md_list(items: Sequence[str]) -> str:
    if not items:
        return "none\n"
    return "".join(f"- {i}\n" for i in items)


def render_card(metric_id: str, format: str = "markdown") -> str:
    """Deterministic card rendering with the populated sections in fixed order.

    Markdown shows the name as title, the summary as lead text, then nine
    sections; an empty Example section is omitted. JSON is the card dict
    verbatim.
    """
    c = card(metric_id)
    if format == "json":
        return json.dumps(c.as_dict(), indent=2, ensure_ascii=False) + "\n"
    if format != "markdown":
        raise RegistryError(f"unknown render format {format!r}")
    lines = [f"# {c.name}\n"]
    if c.synonyms:
        lines.append(f"*Synonyms: {', '.join(c.synonyms)}*\n")
    lines.append(f"\n{c.summary}\n")
    lines.append(f"\n## Definition\n\n{c.definition}\n")
    lines.append(f"\n## Value range\n\n{c.value_range}. {c.interpretation}\n")
    lines.append("\n## Use in METRIC-framework\n\n")
    lines.append(f"Dimensions: {', '.join(c.dimensions)}\n")
    lines.append(f"Group: {c.group}\n")
    lines.append("\n## References\n\n" + _md_list(c.references))
    if c.example:
        lines.append(f"\n## Example\n\n{c.example}\n")
    lines.append("\n## Relation to other metrics\n\n" + _md_list(c.relations))
    lines.append("\n## Applicability\n\n")
    lines.append(f"Modalities: {', '.join(c.applicability.modalities)}\n")
    lines.append(f"Variable types: {', '.join(c.applicability.variable_types)}\n")
    lines.append("\n## Prerequisites and recommendations\n\n" + _md_list(c.prerequisites))
    pitfall_lines = list(c.pitfalls)
    if c.pitfall_tags:
        pitfall_lines.append(f"tagged: {', '.join(c.pitfall_tags)}")
    lines.append("\n## Pitfalls and limitations\n\n" + _md_list(pitfall_lines))
    return "".join(lines)


# --- evaluation dispatch -----------------------------------------------------

Evaluator = Callable[[Dataset, dict, Dataset | None, int | None], tuple[Any, str, dict]]


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise PrerequisiteError(msg)


def _require_vtype(ds: Dataset, col: str, allowed: tuple[str, ...], metric: str) -> None:
    spec = ds.spec(col)
    if spec.vtype not in allowed:
        raise ApplicabilityError(
            f"{metric} does not apply to {spec.vtype} column {col!r}; needs one of {allowed}"
        )


def _param_column(ds: Dataset, params: dict, key: str = "column", role: str | None = None) -> str:
    col = params.get(key)
    if col is None and role is not None:
        col = ds.role_column(role)
    if col is None:
        raise PrerequisiteError(f"parameter {key!r} is required (no default column found)")
    ds.spec(col)
    return col


def _annotation_columns(ds: Dataset, params: dict) -> list[str]:
    cols = params.get("rater_columns")
    if cols is None:
        cols = [c.name for c in ds.columns if c.role == "annotation"]
    for c in cols:
        ds.spec(c)
    return list(cols)


def _ratings(ds: Dataset, cols: Sequence[str]) -> RatingsMatrix:
    rows = tuple(
        tuple(ds.column(c)[i] for c in cols) for i in range(ds.n_records)
    )
    return RatingsMatrix(rows, rater_names=tuple(cols))


def _numeric_pair(
    ds: Dataset, params: dict, metric: str
) -> tuple[tuple, tuple, str, dict]:
    a_col = _param_column(ds, params, "column_a")
    b_col = _param_column(ds, params, "column_b")
    _require_vtype(ds, a_col, ("numerical", "ordinal", "datetime"), metric)
    _require_vtype(ds, b_col, ("numerical", "ordinal", "datetime"), metric)
    return (
        ds.column(a_col),
        ds.column(b_col),
        f"pair:{a_col},{b_col}",
        {"column_a": a_col, "column_b": b_col},
    )


def _two_numeric_samples(
    ds: Dataset, params: dict, ds_b: Dataset | None, metric: str, allow_k: bool = False
) -> tuple[list[Sample], str, dict]:
    """Resolve two (or k) numeric samples to compare.

    Three routes: a second dataset (same column), a grouping column inside
    one dataset, or two columns of one dataset.
    """
    if ds_b is not None:
        col = _param_column(ds, params, "column")
        _require_vtype(ds, col, ("numerical", "ordinal", "datetime"), metric)
        _require_vtype(ds_b, col, ("numerical", "ordinal", "datetime"), metric)
        scope = f"pair:{ds.dataset_id},{ds_b.dataset_id}"
        return (
            [column_sample(ds, col), column_sample(ds_b, col)],
            scope,
            {"column": col},
        )
    if params.get("group_column"):
        value_col = _param_column(ds, params, "column")
        group_col = params["group_column"]
        _require_vtype(ds, value_col, ("numerical", "ordinal", "datetime"), metric)
        groups, _ = group_by(ds, group_col)
        keys = sorted(groups, key=str)
        if len(keys) < 2:
            raise PrerequisiteError(f"group column {group_col!r} has fewer than 2 groups")
        if len(keys) > 2 and not allow_k:
            raise PrerequisiteError(
                f"group column {group_col!r} has {len(keys)} groups; this metric compares exactly 2"
            )
        vals = ds.column(value_col)
        samples = []
        for key in keys:
            picked = [vals[i] for i in groups[key] if vals[i] is not MISSING]
            dropped = len(groups[key]) - len(picked)
            samples.append(Sample(tuple(picked), dropped=dropped))
        return (
            samples,
            f"groups:{group_col}",
            {"column": value_col, "group_column": group_col, "groups": [str(k) for k in keys]},
        )
    if params.get("column_a") and params.get("column_b"):
        a, b, scope, used = _numeric_pair(ds, params, metric)
        sa = Sample(tuple(v for v in a if v is not MISSING), dropped=sum(v is MISSING for v in a))
        sb = Sample(tuple(v for v in b if v is not MISSING), dropped=sum(v is MISSING for v in b))
        return [sa, sb], scope, used
    raise PrerequisiteError(
        "two-sample metric needs a second dataset, a group_column, or column_a/column_b"
    )


def _counts_pair(
    ds: Dataset, params: dict, ds_b: Dataset | None, metric: str
) -> tuple[CategoricalCounts, CategoricalCounts, str, dict]:
    """Two categorical/binned distributions for divergences and chi-squared."""
    col = params.get("column")
    if col is not None and ds.spec(col).vtype in ("categorical", "ordinal", "identifier"):
        if ds_b is not None:
            ca = CategoricalCounts.from_values(ds.column(col))
            cb = CategoricalCounts.from_values(ds_b.column(col))
            return ca, cb, f"pair:{ds.dataset_id},{ds_b.dataset_id}", {"column": col}
        if params.get("group_column"):
            groups, _ = group_by(ds, params["group_column"])
            keys = sorted(groups, key=str)
            if len(keys) != 2:
                raise PrerequisiteError("divergences compare exactly 2 groups")
            vals = ds.column(col)
            ca = CategoricalCounts.from_values([vals[i] for i in groups[keys[0]]])
            cb = CategoricalCounts.from_values([vals[i] for i in groups[keys[1]]])
            used = {"column": col, "group_column": params["group_column"], "groups": [str(k) for k in keys]}
            return ca, cb, f"groups:{params['group_column']}", used
        raise PrerequisiteError("categorical comparison needs ds_b or a group_column")
    bins = int(params.get("bins", 10))
    samples, scope, used = _two_numeric_samples(ds, params, ds_b, metric)
    ha, hb = pooled_histograms(samples[0], samples[1], Binning.equal_width(bins))
    used["bins"] = bins
    used["binning"] = "equal_width"
    return ha.counts, hb.counts, scope, used


# individual evaluators: (ds, params, ds_b, seed) -> (value, scope, params_used)


def _ev_entropy(ds: Dataset, params: dict, ds_b: Dataset | None, seed: int | None):
    if params.get("column") and ds.spec(params["column"]).vtype in ("categorical", "ordinal"):
        col = params["column"]
        counts = CategoricalCounts.from_values(ds.column(col))
        value = _meas.shannon_entropy(counts)
        return value, f"column:{col}", {"column": col, "form": "shannon", "base": "e"}
    _require(ds.signals is not None, "entropy needs signals or a categorical column")
    p = _meas.SampleEntropyParams(
        m=int(params.get("m", 2)), r=float(params.get("r", 0.2))
    )
    max_records = params.get("max_records")
    max_samples = params.get("max_samples")
    indices = [i for i, blk in enumerate(ds.signals) if blk is not None]
    _require(bool(indices), "entropy: no records carry a signal")
    used: dict[str, Any] = {
        "form": "sample_entropy",
        "m": p.m,
        "r": p.r,
        "aggregation": "mean over channels then records",
    }
    if max_records is not None and len(indices) > int(max_records):
        rng = np.random.default_rng(seed)
        indices = sorted(rng.choice(indices, size=int(max_records), replace=False))
        used["max_records"] = int(max_records)
        used["seed"] = seed
    if max_samples is not None:
        used["max_samples"] = int(max_samples)
    per_record = []
    for i in indices:
        blk = ds.signals[i]
        chans = []
        for ch in blk.samples:
            series = ch[: int(max_samples)] if max_samples is not None else ch
            if len(series) < p.m + 2:
                continue
            v = _meas.sample_entropy(Sample(series), p)
            if not math.isnan(v):
                chans.append(v)
        if chans:
            per_record.append(float(np.mean(chans)))
    _require(bool(per_record), "entropy: no channel yielded a defined sample entropy")
    return float(np.mean(per_record)), "global", used


def _ev_lod(ds, params, ds_b, seed):
    col = _param_column(ds, params, "column")
    _require_vtype(ds, col, ("numerical",), "limit_of_detection")
    mult = float(params.get("multiplier", 3.3))
    value = _meas.lod_loq(column_sample(ds, col), lod_multiplier=mult)["lod"]
    return value, f"column:{col}", {"column": col, "multiplier": mult}


def _ev_loq(ds, params, ds_b, seed):
    col = _param_column(ds, params, "column")
    _require_vtype(ds, col, ("numerical",), "limit_of_quantification")
    mult = float(params.get("multiplier", 10.0))
    value = _meas.lod_loq(column_sample(ds, col), loq_multiplier=mult)["loq"]
    return value, f"column:{col}", {"column": col, "multiplier": mult}


def _instrument_pairs(ds: Dataset, params: dict, metric: str):
    m_col = _param_column(ds, params, "measured_column")
    r_col = _param_column(ds, params, "reference_column")
    _require_vtype(ds, m_col, ("numerical",), metric)
    _require_vtype(ds, r_col, ("numerical",), metric)
    mv, rv = ds.column(m_col), ds.column(r_col)
    rows = [(a, b) for a, b in zip(mv, rv) if a is not MISSING and b is not MISSING]
    _require(len(rows) >= 2, f"{metric} needs >= 2 complete measurement pairs")
    measured = Sample(tuple(a for a, _ in rows))
    reference = Sample(tuple(b for _, b in rows))
    return measured, reference, f"pair:{m_col},{r_col}", {
        "measured_column": m_col,
        "reference_column": r_col,
    }


def _ev_systematic(ds, params, ds_b, seed):
    m, r, scope, used = _instrument_pairs(ds, params, "systematic_error")
    return _meas.instrument_error(m, r)["systematic"], scope, used


def _ev_random(ds, params, ds_b, seed):
    m, r, scope, used = _instrument_pairs(ds, params, "random_error")
    return _meas.instrument_error(m, r)["random"], scope, used


def _ev_bland_altman(ds, params, ds_b, seed):
    a_col = _param_column(ds, params, "column_a")
    b_col = _param_column(ds, params, "column_b")
    _require_vtype(ds, a_col, ("numerical",), "bland_altman_cr")
    _require_vtype(ds, b_col, ("numerical",), "bland_altman_cr")
    av, bv = ds.column(a_col), ds.column(b_col)
    pairs = [(x, y) for x, y in zip(av, bv) if x is not MISSING and y is not MISSING]
    return (
        _meas.bland_altman_cr(pairs),
        f"pair:{a_col},{b_col}",
        {"column_a": a_col, "column_b": b_col, "factor": 1.96},
    )


def _repeated_measures(ds: Dataset, params: dict, with_conditions: bool, metric: str):
    v_col = _param_column(ds, params, "value_column")
    _require_vtype(ds, v_col, ("numerical",), metric)
    used = {"value_column": v_col}
    vals = ds.column(v_col)
    if with_conditions:
        c_col = _param_column(ds, params, "condition_column")
        used["condition_column"] = c_col
        rows = [
            (v, c)
            for v, c in zip(vals, ds.column(c_col))
            if v is not MISSING and c is not MISSING
        ]
        _require(bool(rows), f"{metric}: no complete (value, condition) rows")
        rm = _meas.RepeatedMeasures(
            subjects=(("all", tuple(v for v, _ in rows)),),
            conditions=(tuple(c for _, c in rows),),
        )
        return rm, used
    s_col = _param_column(ds, params, "subject_column")
    used["subject_column"] = s_col
    groups: dict[Any, list[float]] = {}
    for v, s in zip(vals, ds.column(s_col)):
        if v is not MISSING and s is not MISSING:
            groups.setdefault(s, []).append(v)
    _require(bool(groups), f"{metric}: no complete (value, subject) rows")
    rm = _meas.RepeatedMeasures(
        subjects=tuple((s, tuple(g)) for s, g in sorted(groups.items(), key=lambda kv: str(kv[0])))
    )
    return rm, used


def _ev_repeatability_cv(ds, params, ds_b, seed):
    rm, used = _repeated_measures(ds, params, False, "repeatability_cv")
    return _meas.repeatability_cv(rm), "global", used


def _ev_reproducibility(ds, params, ds_b, seed):
    rm, used = _repeated_measures(ds, params, True, "reproducibility_variance")
    return _meas.reproducibility_variance(rm), "global", used


def _ev_cohens_kappa(ds, params, ds_b, seed):
    cols = _annotation_columns(ds, params)
    _require(
        len(cols) == 2,
        f"cohens_kappa needs exactly 2 rater columns, found {len(cols)}",
    )
    weights = params.get("weights", "none")
    value = _meas.cohens_kappa(_ratings(ds, cols), weights=weights)
    return value, f"pair:{cols[0]},{cols[1]}", {"rater_columns": cols, "weights": weights}


def _ev_fleiss_kappa(ds, params, ds_b, seed):
    cols = _annotation_columns(ds, params)
    _require(len(cols) >= 2, "fleiss_kappa needs >= 2 rater columns")
    value = _meas.fleiss_kappa(_ratings(ds, cols))
    return value, f"columns:{','.join(cols)}", {"rater_columns": cols}


def _ev_kendalls_w(ds, params, ds_b, seed):
    cols = _annotation_columns(ds, params)
    _require(len(cols) >= 2, "kendalls_w needs >= 2 rater columns")
    value = _meas.kendalls_w(_ratings(ds, cols))
    return value, f"columns:{','.join(cols)}", {"rater_columns": cols}


def _ev_krippendorff(ds, params, ds_b, seed):
    cols = _annotation_columns(ds, params)
    _require(len(cols) >= 2, "krippendorff_alpha needs >= 2 rater columns")
    level = params.get("level", "nominal")
    value = _meas.krippendorff_alpha(_ratings(ds, cols), level=level)
    return value, f"columns:{','.join(cols)}", {"rater_columns": cols, "level": level}


def _mask_columns(ds: Dataset, params: dict, metric: str):
    a_col = _param_column(ds, params, "column_a")
    b_col = _param_column(ds, params, "column_b")
    av, bv = ds.column(a_col), ds.column(b_col)
    if any(v is MISSING for v in av) or any(v is MISSING for v in bv):
        raise PrerequisiteError(f"{metric}: mask columns must be complete")
    mask_a = np.array([bool(v) for v in av])
    mask_b = np.array([bool(v) for v in bv])
    return mask_a, mask_b, f"pair:{a_col},{b_col}", {"column_a": a_col, "column_b": b_col}


def _ev_dice(ds, params, ds_b, seed):
    a, b, scope, used = _mask_columns(ds, params, "dice_score")
    return _meas.overlap(a, b, "dice"), scope, used


def _ev_iou(ds, params, ds_b, seed):
    a, b, scope, used = _mask_columns(ds, params, "intersection_over_union")
    return _meas.overlap(a, b, "iou"), scope, used


def _scoped_columns(ds: Dataset, params: dict) -> tuple[list[str] | None, str]:
    cols = params.get("columns")
    label = params.get("scope_label")
    if cols is None:
        return None, (f"columns:{label}" if label else "global")
    for c in cols:
        ds.spec(c)
    return list(cols), f"columns:{label or ','.join(cols)}"


def _ev_completeness(ds, params, ds_b, seed):
    if params.get("target") == "signals":
        _require(ds.signals is not None, "completeness of signals needs a signal payload")
        present = sum(1 for blk in ds.signals if blk is not None and blk.n_samples > 0)
        label = params.get("scope_label")
        scope = f"columns:{label}" if label else "signals"
        return present / ds.n_records, scope, {"target": "signals"}
    cols, scope = _scoped_columns(ds, params)
    used: dict[str, Any] = {"target": "cells"}
    if cols is not None:
        used["columns"] = cols
    return _meas.completeness(ds, cols), scope, used


def _ev_patient_completeness(ds, params, ds_b, seed):
    variable = params.get("variable")
    pid = params.get("patient_column") or ds.role_column("patient_id")
    _require(pid is not None, "patient_level_completeness needs a patient_id column")
    value = _meas.patient_level_completeness(ds, pid, variable)
    used = {"patient_column": pid, "variable": variable or "signals"}
    label = params.get("scope_label")
    scope = f"columns:{label}" if label else (f"column:{variable}" if variable else "signals")
    return value, scope, used


def _ev_record_completeness(ds, params, ds_b, seed):
    required = params.get("required", [])
    value = _meas.record_completeness(ds, required)
    return value, "global", {"required": list(required)}


def _ev_syntactic(ds, params, ds_b, seed):
    col = _param_column(ds, params, "column")
    words = params.get("dictionary")
    if words is None and params.get("dictionary_file"):
        with open(params["dictionary_file"], "r", encoding="utf-8") as fh:
            words = [line.strip() for line in fh if line.strip()]
    if words is None:
        words = ds.dictionaries.get(col)
    _require(words is not None, f"syntactic_accuracy needs a dictionary for column {col!r}")
    value = _struct.syntactic_accuracy(ds.column(col), words)
    return value, f"column:{col}", {"column": col, "dictionary_size": len(set(map(str, words)))}


def _ev_page_hinkley(ds, params, ds_b, seed):
    col = _param_column(ds, params, "column")
    _require_vtype(ds, col, ("numerical", "datetime"), "page_hinkley")
    p = _struct.PageHinkleyParams(
        delta=float(params.get("delta", 0.005)),
        lam=float(params.get("lam", 50.0)),
        direction=params.get("direction", "increase"),
        alpha=float(params.get("alpha", 0.99)),
    )
    value = _struct.page_hinkley(column_sample(ds, col), p)
    used = {"column": col, "delta": p.delta, "lam": p.lam, "direction": p.direction, "alpha": p.alpha}
    return value, f"column:{col}", used


def _ev_dataset_size(ds, params, ds_b, seed):
    return _struct.dataset_size(ds), "global", {}


def _ev_granularity(ds, params, ds_b, seed):
    return _struct.granularity(ds), "global", {"role": "feature"}


def _ev_sampling_frequency(ds, params, ds_b, seed):
    value = _struct.sampling_frequency(ds)
    if isinstance(value, tuple):
        value = list(value)
    return value, "signals", {}


def _ev_resolution(ds, params, ds_b, seed):
    w_col = _param_column(ds, params, "width_column")
    h_col = _param_column(ds, params, "height_column")
    sizes = [
        (w, h)
        for w, h in zip(ds.column(w_col), ds.column(h_col))
        if w is not MISSING and h is not MISSING
    ]
    value = _struct.resolution(sizes)
    value = {
        "per_image": [list(s) for s in value["per_image"]],
        "min": list(value["min"]),
        "median": list(value["median"]),
    }
    return value, f"pair:{w_col},{h_col}", {"width_column": w_col, "height_column": h_col}


def _ev_label_granularity(ds, params, ds_b, seed):
    hierarchy = params.get("hierarchy")
    if hierarchy is not None:
        return _struct.label_granularity(hierarchy), "global", {"source": "hierarchy"}
    col = _param_column(ds, params, "column", role="target")
    labels = [v for v in ds.column(col) if v is not MISSING]
    _require(bool(labels), "label_granularity: no labels present")
    return _struct.label_granularity(labels), f"column:{col}", {"column": col, "source": "flat"}


def _target_counts(ds: Dataset, params: dict, metric: str):
    col = _param_column(ds, params, "column", role="target")
    _require_vtype(ds, col, ("categorical", "ordinal", "identifier"), metric)
    counts = CategoricalCounts.from_values(ds.column(col))
    _require(len(counts) >= 1, f"{metric}: no class labels present")
    return col, counts


def _ev_imbalance_ratio(ds, params, ds_b, seed):
    col, counts = _target_counts(ds, params, "generalized_imbalance_ratio")
    return _struct.imbalance_ratio(counts), f"column:{col}", {"column": col}


def _ev_imbalance_degree(ds, params, ds_b, seed):
    col, counts = _target_counts(ds, params, "imbalance_degree")
    distance = params.get("distance", "total_variation")
    return (
        _struct.imbalance_degree(counts, distance),
        f"column:{col}",
        {"column": col, "distance": distance},
    )


def _ev_lrid(ds, params, ds_b, seed):
    col, counts = _target_counts(ds, params, "lr_imbalance_degree")
    return _struct.lrid(counts), f"column:{col}", {"column": col}


def _currency_eval(variant: str):
    def ev(ds: Dataset, params: dict, ds_b: Dataset | None, seed: int | None):
        col = _param_column(ds, params, "timestamp_column", role="timestamp")
        _require_vtype(ds, col, ("datetime", "numerical"), f"currency_{variant}")
        stamps = [v for v in ds.column(col) if v is not MISSING]
        _require(bool(stamps), "currency: no timestamps present")
        now = params.get("now")
        used: dict[str, Any] = {"timestamp_column": col, "variant": variant, "aggregate": "mean"}
        if now is None:
            now = max(stamps)
            used["now"] = now
            used["now_default"] = "newest timestamp"
        else:
            now = float(now)
            used["now"] = now
        kwargs: dict[str, Any] = {}
        if variant == "li":
            kwargs["shelf_life"] = float(params["shelf_life"]) if "shelf_life" in params else None
            used["shelf_life"] = kwargs["shelf_life"]
        elif variant == "ballou":
            kwargs["volatility"] = float(params["volatility"]) if "volatility" in params else None
            kwargs["s"] = float(params.get("s", 1.0))
            used["volatility"] = kwargs["volatility"]
            used["s"] = kwargs["s"]
        elif variant == "hinrichs":
            kwargs["update_rate"] = float(params["update_rate"]) if "update_rate" in params else None
            used["update_rate"] = kwargs["update_rate"]
        else:
            kwargs["decline"] = float(params.get("decline", 1e-9))
            used["decline"] = kwargs["decline"]
        p = _struct.CurrencyParams(variant=variant, now=now, **kwargs)
        values = [_struct.currency(ts, p) for ts in stamps]
        return float(np.mean(values)), f"column:{col}", used

    return ev


def _ev_duplicates(ds, params, ds_b, seed):
    keys = params.get("keys")
    value = _struct.prevalence_of_duplicates(ds, keys)
    used = {"keys": list(keys) if keys is not None else "all columns"}
    return value, "global", used


def _ev_ess(ds, params, ds_b, seed):
    if "n" in params or "cluster_size" in params or "icc" in params:
        value = _struct.effective_sample_size(
            n=params.get("n", ds.n_records),
            cluster_size=params.get("cluster_size"),
            icc=params.get("icc"),
        )
        used = {
            "form": "cluster",
            "n": params.get("n", ds.n_records),
            "cluster_size": params.get("cluster_size"),
            "icc": params.get("icc"),
        }
        return value, "global", used
    w_col = params.get("weight_column") or ds.role_column("weight")
    _require(
        w_col is not None,
        "effective_sample_size needs a weight column or (n, cluster_size, icc)",
    )
    weights = [v for v in ds.column(w_col) if v is not MISSING]
    value = _struct.effective_sample_size(weights=weights)
    return value, f"column:{w_col}", {"form": "weighted", "weight_column": w_col}


def _ev_littles(ds, params, ds_b, seed):
    cols = params.get("columns")
    if cols is None:
        cols = [c.name for c in ds.columns if c.vtype == "numerical"]
    _require(len(cols) >= 2, "littles_test needs >= 2 numerical columns")
    for c in cols:
        _require_vtype(ds, c, ("numerical",), "littles_test")
    x = [[ds.column(c)[i] for c in cols] for i in range(ds.n_records)]
    res = _struct.littles_mcar_test(
        x, tol=float(params.get("tol", 1e-6)), max_iter=int(params.get("max_iter", 200))
    )
    for w in res.warnings:
        _pywarnings.warn(w, MetricWarning, stacklevel=2)
    value = {"statistic": res.statistic, "df": res.df, "p_value": res.p_value}
    used = {"columns": list(cols), "tol": float(params.get("tol", 1e-6)), "max_iter": int(params.get("max_iter", 200))}
    return value, f"columns:{','.join(cols)}", used


def _stat_evaluator(key: str):
    def ev(ds: Dataset, params: dict, ds_b: Dataset | None, seed: int | None):
        col = _param_column(ds, params, "column")
        _require_vtype(ds, col, ("numerical", "ordinal", "datetime"), key)
        stats = _dist.summary_stats(column_sample(ds, col))
        used = {"column": col, "quantile_rule": "linear interpolation"}
        if key == "range":
            return stats["range"], f"column:{col}", {"column": col}
        if key == "iqr":
            return stats["iqr"], f"column:{col}", used
        return {"mean": stats["mean"], "std": stats["std"]}, f"column:{col}", {"column": col, "std_ddof": 1}

    return ev


def _ev_hill(ds, params, ds_b, seed):
    col = _param_column(ds, params, "column")
    _require_vtype(ds, col, ("categorical", "ordinal", "identifier"), "hill_numbers")
    q = float(params.get("q", 2))
    counts = CategoricalCounts.from_values(ds.column(col))
    _require(len(counts) >= 1, "hill_numbers: no categories present")
    return _dist.hill_number(counts, q), f"column:{col}", {"column": col, "q": q}


def _ev_mmd(ds, params, ds_b, seed):
    samples, scope, used = _two_numeric_samples(ds, params, ds_b, "maximum_mean_discrepancy")
    kernel = params.get("kernel", "rbf")
    subsample = params.get("subsample")
    rng = np.random.default_rng(seed)
    mats = [
        _dist._maybe_subsample(np.asarray(s.values, float).reshape(-1, 1), subsample, rng)
        for s in samples
    ]
    used.update({"kernel": kernel})
    if subsample is not None:
        used["subsample"] = int(subsample)
        used["seed"] = seed
    if kernel == "rbf":
        bandwidth = params.get("bandwidth")
        if bandwidth is None:
            bandwidth = _dist.median_heuristic_bandwidth(mats[0], mats[1])
            used["bandwidth_rule"] = "median_heuristic"
        used["bandwidth"] = float(bandwidth)
        value = _dist.mmd(mats[0], mats[1], kernel="rbf", bandwidth=float(bandwidth))
    else:
        degree = int(params.get("degree", 3))
        coef = float(params.get("coef", 1.0))
        used.update({"degree": degree, "coef": coef})
        value = _dist.mmd(mats[0], mats[1], kernel="polynomial", degree=degree, coef=coef)
    return value, scope, used


def _ev_cohens_d(ds, params, ds_b, seed):
    samples, scope, used = _two_numeric_samples(ds, params, ds_b, "cohens_d")
    return _dist.cohens_d(samples[0], samples[1]), scope, used


def _ev_energy(ds, params, ds_b, seed):
    samples, scope, used = _two_numeric_samples(ds, params, ds_b, "energy_distance")
    subsample = params.get("subsample")
    if subsample is not None:
        used["subsample"] = int(subsample)
        used["seed"] = seed
    value = _dist.energy_distance(samples[0], samples[1], subsample=subsample, seed=seed)
    return value, scope, used


def _divergence_evaluator(kind: str):
    def ev(ds: Dataset, params: dict, ds_b: Dataset | None, seed: int | None):
        ca, cb, scope, used = _counts_pair(ds, params, ds_b, kind)
        smoothing = params.get("smoothing", "default")
        value = _dist.divergence(kind, ca, cb, smoothing=smoothing)
        used.update({"smoothing": smoothing, "eps": _dist.SMOOTH_EPS})
        return value, scope, used

    return ev


def _test_evaluator(kind: str):
    def ev(ds: Dataset, params: dict, ds_b: Dataset | None, seed: int | None):
        if kind == "chi_squared":
            ca, cb, scope, used = _counts_pair(ds, params, ds_b, kind)
            outcome = _dist.two_sample_test("chi_squared", ca, cb)
        else:
            samples, scope, used = _two_numeric_samples(
                ds, params, ds_b, kind, allow_k=(kind == "anderson_darling_k")
            )
            outcome = _dist.two_sample_test(kind, samples[0], samples[1], others=samples[2:])
        for w in outcome.warnings:
            _pywarnings.warn(w, MetricWarning, stacklevel=2)
        used.update({"method": outcome.method, "n_a": outcome.n_a, "n_b": outcome.n_b})
        value = {
            "statistic": outcome.statistic,
            "p_value": outcome.p_value if outcome.p_value is not None else "unavailable",
        }
        return value, scope, used

    return ev


def _embeddings_pair(ds, params, ds_b, metric):
    if params.get("embeddings_a") and params.get("embeddings_b"):
        ea = _dist.load_embeddings(params["embeddings_a"])
        eb = _dist.load_embeddings(params["embeddings_b"])
        scope = f"pair:{params['embeddings_a']},{params['embeddings_b']}"
        used = {"embeddings_a": params["embeddings_a"], "embeddings_b": params["embeddings_b"]}
        return ea, eb, scope, used
    cols = params.get("columns")
    if cols and ds_b is not None:
        for c in cols:
            _require_vtype(ds, c, ("numerical",), metric)
            _require_vtype(ds_b, c, ("numerical",), metric)

        def matrix(d: Dataset):
            rows = []
            for i in range(d.n_records):
                row = [d.column(c)[i] for c in cols]
                if all(v is not MISSING for v in row):
                    rows.append(tuple(float(v) for v in row))
            _require(len(rows) >= 2, f"{metric}: fewer than 2 complete rows")
            return _dist.EmbeddingSet(tuple(rows))

        used = {"columns": list(cols)}
        return matrix(ds), matrix(ds_b), f"pair:{ds.dataset_id},{ds_b.dataset_id}", used
    raise PrerequisiteError(
        f"{metric} needs embeddings_a/embeddings_b files, or columns plus a second dataset"
    )


def _ev_frechet(ds, params, ds_b, seed):
    ea, eb, scope, used = _embeddings_pair(ds, params, ds_b, "frechet_inception_distance")
    return _dist.frechet_gaussian(ea, eb), scope, used


def _ev_kid(ds, params, ds_b, seed):
    ea, eb, scope, used = _embeddings_pair(ds, params, ds_b, "kernel_inception_distance")
    degree = int(params.get("degree", 3))
    coef = float(params.get("coef", 1.0))
    subsample = params.get("subsample")
    used.update({"degree": degree, "coef": coef})
    if subsample is not None:
        used.update({"subsample": int(subsample), "seed": seed})
    value = _dist.kid(ea, eb, degree=degree, coef=coef, subsample=subsample, seed=seed)
    return value, scope, used


def _ev_wasserstein(ds, params, ds_b, seed):
    samples, scope, used = _two_numeric_samples(ds, params, ds_b, "wasserstein_distance")
    order = float(params.get("order", 1.0))
    used["order"] = order
    return _dist.wasserstein_1d(samples[0], samples[1], order=order), scope, used


def _correlation_evaluator(kind: str):
    numeric_only = kind == "pearson"

    def ev(ds: Dataset, params: dict, ds_b: Dataset | None, seed: int | None):
        a_col = _param_column(ds, params, "column_a")
        b_col = _param_column(ds, params, "column_b")
        allowed = ("numerical", "datetime") if numeric_only else ("numerical", "ordinal", "datetime")
        _require_vtype(ds, a_col, allowed, kind)
        _require_vtype(ds, b_col, allowed, kind)

        def series(col: str):
            spec = ds.spec(col)
            if spec.vtype == "ordinal":
                codes = {cat: float(i) for i, cat in enumerate(spec.ordinal_order or ())}
                return [codes[v] if v is not MISSING else None for v in ds.column(col)]
            return list(ds.column(col))

        value = _corr.correlation(kind, series(a_col), series(b_col))
        return value, f"pair:{a_col},{b_col}", {"column_a": a_col, "column_b": b_col}

    return ev


def _ev_ccc(ds, params, ds_b, seed):
    a, b, scope, used = _numeric_pair(ds, params, "concordance_cc")
    value = _corr.concordance_cc(list(a), list(b))
    used["moments"] = "population (1/n)"
    return value, scope, used


def _ev_icc(ds, params, ds_b, seed):
    cols = _annotation_columns(ds, params)
    _require(len(cols) >= 2, "icc needs >= 2 rater columns")
    for c in cols:
        _require_vtype(ds, c, ("numerical", "ordinal"), "icc")
    value = _corr.icc(_ratings(ds, cols))
    return value, f"columns:{','.join(cols)}", {"rater_columns": cols, "form": "two_way_random_single"}


def _ev_cramers_v(ds, params, ds_b, seed):
    a_col = _param_column(ds, params, "column_a")
    b_col = _param_column(ds, params, "column_b")
    _require_vtype(ds, a_col, ("categorical", "ordinal", "identifier"), "cramers_v")
    _require_vtype(ds, b_col, ("categorical", "ordinal", "identifier"), "cramers_v")
    bias = bool(params.get("bias_correction", False))
    value = _corr.cramers_v(ds.column(a_col), ds.column(b_col), bias_correction=bias)
    return value, f"pair:{a_col},{b_col}", {"column_a": a_col, "column_b": b_col, "bias_correction": bias}


_EVALUATORS: dict[str, Evaluator] = {
    "entropy": _ev_entropy,
    "limit_of_detection": _ev_lod,
    "limit_of_quantification": _ev_loq,
    "systematic_error": _ev_systematic,
    "random_error": _ev_random,
    "bland_altman_cr": _ev_bland_altman,
    "repeatability_cv": _ev_repeatability_cv,
    "reproducibility_variance": _ev_reproducibility,
    "cohens_kappa": _ev_cohens_kappa,
    "fleiss_kappa": _ev_fleiss_kappa,
    "kendalls_w": _ev_kendalls_w,
    "krippendorff_alpha": _ev_krippendorff,
    "dice_score": _ev_dice,
    "intersection_over_union": _ev_iou,
    "completeness": _ev_completeness,
    "patient_level_completeness": _ev_patient_completeness,
    "record_completeness": _ev_record_completeness,
    "syntactic_accuracy": _ev_syntactic,
    "page_hinkley": _ev_page_hinkley,
    "dataset_size": _ev_dataset_size,
    "granularity": _ev_granularity,
    "sampling_frequency": _ev_sampling_frequency,
    "resolution": _ev_resolution,
    "label_granularity": _ev_label_granularity,
    "generalized_imbalance_ratio": _ev_imbalance_ratio,
    "imbalance_degree": _ev_imbalance_degree,
    "lr_imbalance_degree": _ev_lrid,
    "currency_ballou": _currency_eval("ballou"),
    "currency_li": _currency_eval("li"),
    "currency_hinrichs": _currency_eval("hinrichs"),
    "currency_heinrich": _currency_eval("heinrich"),
    "prevalence_of_duplicates": _ev_duplicates,
    "effective_sample_size": _ev_ess,
    "littles_test": _ev_littles,
    # informative_dropout intentionally has no evaluator
    "range": _stat_evaluator("range"),
    "interquartile_range": _stat_evaluator("iqr"),
    "mean_std": _stat_evaluator("mean_std"),
    "hill_numbers": _ev_hill,
    "maximum_mean_discrepancy": _ev_mmd,
    "cohens_d": _ev_cohens_d,
    "energy_distance": _ev_energy,
    "kl_divergence": _divergence_evaluator("kl"),
    "population_stability_index": _divergence_evaluator("psi"),
    "jensen_shannon_divergence": _divergence_evaluator("js"),
    "ks_test": _test_evaluator("ks"),
    "epps_singleton": _test_evaluator("epps_singleton"),
    "anderson_darling_k": _test_evaluator("anderson_darling_k"),
    "chi_squared": _test_evaluator("chi_squared"),
    "frechet_inception_distance": _ev_frechet,
    "kernel_inception_distance": _ev_kid,
    "mann_whitney_u": _test_evaluator("mann_whitney_u"),
    "wasserstein_distance": _ev_wasserstein,
    "pearson": _correlation_evaluator("pearson"),
    "concordance_cc": _ev_ccc,
    "goodman_kruskal_gamma": _correlation_evaluator("goodman_kruskal_gamma"),
    "kendall_tau": _correlation_evaluator("kendall_tau"),
    "spearman": _correlation_evaluator("spearman"),
    "icc": _ev_icc,
    "cramers_v": _ev_cramers_v,
}


def evaluate(
    metric_id: str,
    ds: Dataset,
    params: Mapping[str, Any] | None = None,
    ds_b: Dataset | None = None,
    seed: int | None = None,
) -> MetricResult:
    """Run a metric on a dataset, filling defaulted parameters.

    Pure in (dataset, params, seed): repeated calls return identical
    results. Warnings raised by the underlying metric are collected into
    MetricResult.warnings.
    """
    c = card(metric_id)
    fn = _EVALUATORS.get(c.id)
    if fn is None:
        raise EvaluatorUnavailable("not implemented: no formula in source")
    merged = dict(params or {})
    with _pywarnings.catch_warnings(record=True) as caught:
        _pywarnings.simplefilter("always")
        try:
            value, scope, used = fn(ds, merged, ds_b, seed)
        except MetricInputError as exc:
            raise EvaluationError(str(exc)) from exc
    warns = tuple(
        str(w.message) for w in caught if issubclass(w.category, MetricWarning)
    )
    return MetricResult(metric_id=c.id, scope=scope, params=used, value=value, warnings=warns)
