"""Measurement-process metrics.

Signal noise and detection limits, repeatability and reproducibility of
repeated measurements, inter-rater agreement, mask overlap, and the three
completeness variants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np
from scipy.spatial.distance import cdist
from scipy.stats import rankdata

from .datamodel import (
    MISSING,
    CategoricalCounts,
    Dataset,
    Histogram,
    RatingsMatrix,
    Sample,
)
from .distribution import MetricInputError, _values, _warn


@dataclass(frozen=True)
class RepeatedMeasures:
    """Per-subject repeated measurements, optionally labeled by condition.

    conditions, when given, parallels measurements: conditions[i][j] is the
    lab/condition of subject i's j-th repeat.
    """

    subjects: tuple[tuple[Any, tuple[float, ...]], ...]
    conditions: tuple[tuple[Any, ...], ...] | None = None

    def __post_init__(self) -> None:
        subs = tuple((s, tuple(float(v) for v in vals)) for s, vals in self.subjects)
        if not subs:
            raise MetricInputError("RepeatedMeasures needs at least one subject")
        if self.conditions is not None:
            conds = tuple(tuple(c) for c in self.conditions)
            if len(conds) != len(subs) or any(
                len(c) != len(v) for c, (_, v) in zip(conds, subs)
            ):
                raise MetricInputError("conditions must parallel the measurements")
            object.__setattr__(self, "conditions", conds)
        object.__setattr__(self, "subjects", subs)

    def all_values(self) -> list[float]:
        return [v for _, vals in self.subjects for v in vals]


@dataclass(frozen=True)
class SampleEntropyParams:
    m: int = 2
    r: float = 0.2

    def __post_init__(self) -> None:
        if self.m < 1:
            raise MetricInputError("sample entropy embedding length m must be >= 1")
        if self.r <= 0:
            raise MetricInputError("sample entropy tolerance fraction r must be > 0")


# --- noise and detection -----------------------------------------------------


def shannon_entropy(c: CategoricalCounts | Histogram, base: float = math.e) -> float:
    """Shannon entropy of a categorical or binned distribution."""
    counts = c.counts if isinstance(c, Histogram) else c
    props = [p for p in counts.proportions().values() if p > 0]
    h = -sum(p * math.log(p) for p in props)
    return float(h / math.log(base))


def sample_entropy(
    series: Sample | Sequence[float], p: SampleEntropyParams = SampleEntropyParams()
) -> float:
    """Sample entropy -ln(A/B) of a univariate series.

    Templates of length m and m+1 are compared under the Chebyshev distance
    with tolerance r * std; self-matches are excluded. A constant series
    returns 0; too few template matches return NaN with a warning.
    """
    u = _values(series)
    n = u.size
    if n < p.m + 2:
        raise MetricInputError(f"sample_entropy needs at least m+2={p.m + 2} points")
    sd = float(u.std())
    if sd == 0:
        _warn("sample_entropy: constant series, entropy 0 by convention")
        return 0.0
    tol = p.r * sd

    def matches(length: int) -> int:
        # only the first n-m templates so both lengths pair up consistently
        t = np.lib.stride_tricks.sliding_window_view(u, length)[: n - p.m]
        d = cdist(t, t, "chebyshev")
        within = d <= tol
        return int((within.sum() - len(t)) // 2)

    b = matches(p.m)
    a = matches(p.m + 1)
    if b == 0 or a == 0:
        _warn("sample_entropy undefined: insufficient template matches")
        return float("nan")
    return float(-math.log(a / b))


def lod_loq(
    blanks: Sample | Sequence[float],
    lod_multiplier: float = 3.3,
    loq_multiplier: float = 10.0,
) -> dict[str, float]:
    """Detection and quantification limits from blank measurements.

    mean + 3.3 sd and mean + 10 sd by default; multipliers are configurable
    and should be recorded alongside the result.
    """
    v = _values(blanks)
    if v.size < 3:
        raise MetricInputError("lod_loq requires at least 3 blank measurements")
    sd = float(v.std(ddof=1))
    mean = float(v.mean())
    if sd == 0:
        _warn("lod_loq: zero blank spread, both limits collapse to the mean")
        return {"lod": mean, "loq": mean}
    return {"lod": mean + lod_multiplier * sd, "loq": mean + loq_multiplier * sd}


# --- repeatability -----------------------------------------------------------


def bland_altman_cr(pairs: Sequence[tuple[float, float]]) -> float:
    """Coefficient of repeatability: 1.96 sd of within-pair differences."""
    if len(pairs) < 2:
        raise MetricInputError("bland_altman_cr requires at least 2 pairs")
    diffs = np.array([float(x1) - float(x2) for x1, x2 in pairs])
    return float(1.96 * diffs.std(ddof=1))


def repeatability_cv(rm: RepeatedMeasures) -> float:
    """Within-subject sd (root mean of per-subject variances) over grand mean."""
    variances = []
    for subject, vals in rm.subjects:
        if len(vals) < 2:
            raise MetricInputError(f"subject {subject!r} has fewer than 2 repeats")
        variances.append(np.var(vals, ddof=1))
    grand = float(np.mean(rm.all_values()))
    if grand <= 0:
        raise MetricInputError("repeatability_cv requires a positive grand mean")
    return float(math.sqrt(float(np.mean(variances))) / grand)


def reproducibility_variance(rm: RepeatedMeasures) -> dict[str, float]:
    """One-way ANOVA variance components across conditions.

    Returns repeatability s_r^2, between-condition s_L^2 (clipped at 0) and
    reproducibility s_R^2 = s_r^2 + s_L^2. Unbalanced designs fall back to
    the standard average-group-size approximation and are flagged.
    """
    if rm.conditions is None:
        raise MetricInputError("reproducibility_variance needs condition labels")
    groups: dict[Any, list[float]] = {}
    for (_, vals), conds in zip(rm.subjects, rm.conditions):
        for v, c in zip(vals, conds):
            groups.setdefault(c, []).append(v)
    if len(groups) < 2:
        raise MetricInputError("reproducibility_variance requires >= 2 conditions")
    sizes = [len(g) for g in groups.values()]
    if min(sizes) < 2:
        raise MetricInputError("each condition needs >= 2 repeats")
    total = float(sum(sizes))
    k = len(groups)
    grand = float(np.mean([v for g in groups.values() for v in g]))
    ssw = sum(float(np.sum((np.asarray(g) - np.mean(g)) ** 2)) for g in groups.values())
    ssb = sum(len(g) * (float(np.mean(g)) - grand) ** 2 for g in groups.values())
    ms_within = ssw / (total - k)
    ms_between = ssb / (k - 1)
    if len(set(sizes)) == 1:
        n0 = float(sizes[0])
    else:
        n0 = (total - sum(s * s for s in sizes) / total) / (k - 1)
        _warn("unbalanced design: between-condition component uses average group size")
    s_l2 = max(0.0, (ms_between - ms_within) / n0)
    return {"s_r2": float(ms_within), "s_L2": float(s_l2), "s_R2": float(ms_within + s_l2)}


def instrument_error(
    measured: Sample | Sequence[float], reference: Sample | Sequence[float]
) -> dict[str, float]:
    """Mean bias and residual sd of measurements against a gold standard."""
    vm, vr = _values(measured), _values(reference)
    if vm.size != vr.size:
        raise MetricInputError("instrument_error requires paired samples of equal length")
    if vm.size < 2:
        raise MetricInputError("instrument_error requires at least 2 pairs")
    resid = vm - vr
    return {"systematic": float(resid.mean()), "random": float(resid.std(ddof=1))}


# --- inter-rater agreement ---------------------------------------------------


def _category_order(values: set[Any]) -> list[Any]:
    try:
        return sorted(values)
    except TypeError:
        return sorted(values, key=str)


def cohens_kappa(m: RatingsMatrix, weights: str = "none") -> float:
    """Cohen's kappa for two raters, optionally linear/quadratic weighted.

    Weighted variants score disagreement by the distance between category
    positions, so they presume an ordinal category order.
    """
    if m.n_raters != 2:
        raise MetricInputError("cohens_kappa requires exactly 2 raters")
    pairs = [
        (a, b) for a, b in m.ratings if a is not MISSING and b is not MISSING
    ]
    if not pairs:
        raise MetricInputError("cohens_kappa: no complete rating pairs")
    cats = _category_order({a for a, _ in pairs} | {b for _, b in pairs})
    idx = {c: i for i, c in enumerate(cats)}
    k = len(cats)
    table = np.zeros((k, k))
    for a, b in pairs:
        table[idx[a], idx[b]] += 1
    n = table.sum()
    obs = table / n
    marg_a = obs.sum(axis=1)
    marg_b = obs.sum(axis=0)
    expected = np.outer(marg_a, marg_b)
    if weights == "none":
        w = 1.0 - np.eye(k)
    elif weights == "linear":
        i, j = np.indices((k, k))
        w = np.abs(i - j).astype(float)
    elif weights == "quadratic":
        i, j = np.indices((k, k))
        w = ((i - j) ** 2).astype(float)
    else:
        raise MetricInputError(f"unknown kappa weights {weights!r}")
    expected_disagreement = float((w * expected).sum())
    if expected_disagreement == 0:
        raise MetricInputError("cohens_kappa undefined: chance agreement is 1")
    return float(1.0 - (w * obs).sum() / expected_disagreement)


def fleiss_kappa(m: RatingsMatrix) -> float:
    """Fleiss' kappa for a fixed number of raters per item."""
    if m.n_raters < 2:
        raise MetricInputError("fleiss_kappa requires >= 2 raters")
    for row in m.ratings:
        if any(v is MISSING for v in row):
            raise MetricInputError("fleiss_kappa requires every item rated by every rater")
    cats = _category_order({v for row in m.ratings for v in row})
    idx = {c: i for i, c in enumerate(cats)}
    counts = np.zeros((m.n_items, len(cats)))
    for i, row in enumerate(m.ratings):
        for v in row:
            counts[i, idx[v]] += 1
    n = m.n_raters
    p_i = (np.sum(counts**2, axis=1) - n) / (n * (n - 1))
    p_bar = float(p_i.mean())
    p_j = counts.sum(axis=0) / counts.sum()
    p_e = float(np.sum(p_j**2))
    if p_e == 1:
        raise MetricInputError("fleiss_kappa undefined: a single category was ever used")
    return float((p_bar - p_e) / (1.0 - p_e))


def kendalls_w(m: RatingsMatrix) -> float:
    """Kendall's coefficient of concordance with tie correction.

    Each rater column is converted to average ranks over the items;
    W = 12 S / (k^2 (n^3 - n) - k T) with T the per-rater tie correction.
    """
    n, k = m.n_items, m.n_raters
    if n < 2:
        raise MetricInputError("kendalls_w requires at least 2 items")
    ranks = np.zeros((n, k))
    tie_term = 0.0
    for j in range(k):
        col = m.column(j)
        if any(v is MISSING for v in col):
            raise MetricInputError("kendalls_w requires complete rankings")
        vals = np.asarray([float(v) for v in col])
        ranks[:, j] = rankdata(vals)
        _, counts = np.unique(vals, return_counts=True)
        tie_term += float(sum(t**3 - t for t in counts))
    totals = ranks.sum(axis=1)
    s = float(np.sum((totals - totals.mean()) ** 2))
    denom = k * k * (n**3 - n) - k * tie_term
    if denom == 0:
        raise MetricInputError("kendalls_w undefined: all rankings fully tied")
    return float(12.0 * s / denom)


def _krippendorff_delta(level: str, cats: list[Any], marginals: np.ndarray) -> np.ndarray:
    k = len(cats)
    delta = np.zeros((k, k))
    if level == "nominal":
        delta = 1.0 - np.eye(k)
        return delta
    if level == "ordinal":
        # cats are assumed sorted; distance spans the marginal mass between ranks
        for i in range(k):
            for j in range(k):
                if i == j:
                    continue
                lo, hi = min(i, j), max(i, j)
                span = marginals[lo : hi + 1].sum() - (marginals[lo] + marginals[hi]) / 2.0
                delta[i, j] = span**2
        return delta
    vals = np.asarray([float(c) for c in cats])
    if level == "interval":
        return (vals[:, None] - vals[None, :]) ** 2
    if level == "ratio":
        s = vals[:, None] + vals[None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            d = np.where(s != 0, (vals[:, None] - vals[None, :]) / s, 0.0)
        return d**2
    raise MetricInputError(f"unknown level {level!r}")


def krippendorff_alpha(m: RatingsMatrix, level: str = "nominal") -> float:
    """Krippendorff's alpha via the coincidence matrix.

    Missing ratings are allowed; items with fewer than two ratings do not
    contribute. level selects the difference function (nominal, ordinal,
    interval, ratio).
    """
    units = [
        [v for v in row if v is not MISSING] for row in m.ratings
    ]
    units = [u for u in units if len(u) >= 2]
    if not units:
        raise MetricInputError("krippendorff_alpha: no item has two pairable ratings")
    cats = _category_order({v for u in units for v in u})
    idx = {c: i for i, c in enumerate(cats)}
    k = len(cats)
    coin = np.zeros((k, k))
    for u in units:
        mu = len(u)
        for a in range(mu):
            for b in range(mu):
                if a != b:
                    coin[idx[u[a]], idx[u[b]]] += 1.0 / (mu - 1)
    marginals = coin.sum(axis=1)
    n = marginals.sum()
    delta = _krippendorff_delta(level, cats, marginals)
    d_o = float((coin * delta).sum())
    d_e = float((np.outer(marginals, marginals) * delta).sum())
    if d_e == 0:
        _warn("krippendorff_alpha: no expected disagreement, alpha 1 by convention")
        return 1.0
    return float(1.0 - (n - 1.0) * d_o / d_e)


# --- overlap -----------------------------------------------------------------


def _as_mask_set(mask: Any) -> tuple[set[Any], int | None]:
    if isinstance(mask, (set, frozenset)):
        return set(mask), None
    arr = np.asarray(mask)
    flat = arr.reshape(-1)
    positions = {i for i, v in enumerate(flat) if bool(v)}
    return positions, flat.size


def overlap(mask_a: Any, mask_b: Any, kind: str = "dice") -> float:
    """Dice or IoU overlap of two binary masks over the same domain.

    Masks may be boolean/0-1 arrays of identical shape or sets of positions.
    Two empty masks agree perfectly by convention (flagged).
    """
    set_a, dom_a = _as_mask_set(mask_a)
    set_b, dom_b = _as_mask_set(mask_b)
    if (dom_a is None) != (dom_b is None):
        raise MetricInputError("overlap masks must both be arrays or both be sets")
    if dom_a is not None and dom_a != dom_b:
        raise MetricInputError("overlap masks must share their domain")
    inter = len(set_a & set_b)
    if not set_a and not set_b:
        _warn("overlap: both masks empty, score 1 by convention")
        return 1.0
    if kind == "dice":
        return float(2.0 * inter / (len(set_a) + len(set_b)))
    if kind == "iou":
        return float(inter / len(set_a | set_b))
    raise MetricInputError(f"unknown overlap kind {kind!r}")


# --- completeness ------------------------------------------------------------


def completeness(ds: Dataset, scope: Sequence[str] | None = None) -> float:
    """Fraction of non-missing cells over the scoped columns."""
    cols = list(scope) if scope is not None else list(ds.column_names)
    if not cols:
        raise MetricInputError("completeness scope is empty")
    total = 0
    present = 0
    for c in cols:
        for v in ds.column(c):
            total += 1
            if v is not MISSING:
                present += 1
    if total == 0:
        raise MetricInputError("completeness requires at least one cell")
    return present / total


def patient_level_completeness(
    ds: Dataset, patient_col: str | None = None, variable: str | None = None
) -> float:
    """Fraction of patients with at least one complete entry of a variable.

    variable None asks about the signal payload instead of a column. Records
    without a patient identifier are excluded (flagged).
    """
    pid_col = patient_col or ds.role_column("patient_id")
    if pid_col is None:
        raise MetricInputError("patient_level_completeness needs a patient_id column")
    pids = ds.column(pid_col)
    covered: dict[Any, bool] = {}
    skipped = 0
    for i, pid in enumerate(pids):
        if pid is MISSING:
            skipped += 1
            continue
        if variable is None:
            has = ds.signals is not None and ds.signals[i] is not None
        else:
            has = ds.column(variable)[i] is not MISSING
        covered[pid] = covered.get(pid, False) or has
    if skipped:
        _warn(f"{skipped} records lack a patient identifier and were excluded")
    if not covered:
        raise MetricInputError("no identifiable patients")
    return sum(covered.values()) / len(covered)


def record_completeness(ds: Dataset, required: Sequence[str]) -> float:
    """Fraction of records whose required fields are all present."""
    req = list(required)
    for c in req:
        ds.spec(c)
    if not req:
        _warn("record_completeness with empty requirement is vacuously 1")
        return 1.0
    if ds.n_records == 0:
        raise MetricInputError("record_completeness requires at least one record")
    complete = 0
    for i in range(ds.n_records):
        if all(ds.column(c)[i] is not MISSING for c in req):
            complete += 1
    return complete / ds.n_records
