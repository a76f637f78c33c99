"""Correlation coefficients for numerical, ordinal and categorical pairs."""

from __future__ import annotations

import math
from typing import Any, Sequence

import numpy as np
from scipy import stats as _st

from .datamodel import MISSING, RatingsMatrix, Sample
from .distribution import MetricInputError


def _pairwise_complete(
    x: Sample | Sequence[Any], y: Sample | Sequence[Any]
) -> tuple[np.ndarray, np.ndarray]:
    xs = list(x.values) if isinstance(x, Sample) else list(x)
    ys = list(y.values) if isinstance(y, Sample) else list(y)
    if len(xs) != len(ys):
        raise MetricInputError("correlation inputs must have equal length")
    pairs = [
        (float(a), float(b))
        for a, b in zip(xs, ys)
        if a is not MISSING and b is not MISSING
    ]
    if not pairs:
        raise MetricInputError("no complete pairs after pairwise deletion")
    arr = np.asarray(pairs, dtype=float)
    return arr[:, 0], arr[:, 1]


def _pearson(vx: np.ndarray, vy: np.ndarray) -> float:
    sx, sy = vx.std(ddof=1), vy.std(ddof=1)
    if sx == 0 or sy == 0:
        raise MetricInputError("pearson undefined for zero-variance input")
    cov = float(np.cov(vx, vy, ddof=1)[0, 1])
    return cov / (sx * sy)


def _merge_count(ys: list[float]) -> int:
    """Number of inversions in ys, counted by merge sort."""
    n = len(ys)
    if n < 2:
        return 0
    mid = n // 2
    left, right = ys[:mid], ys[mid:]
    inv = _merge_count(left) + _merge_count(right)
    merged = []
    i = j = 0
    while i < len(left) and j < len(right):
        if left[i] <= right[j]:
            merged.append(left[i])
            i += 1
        else:
            merged.append(right[j])
            j += 1
            inv += len(left) - i
    merged.extend(left[i:])
    merged.extend(right[j:])
    ys[:] = merged
    return inv


def _tie_count(values: np.ndarray) -> float:
    _, counts = np.unique(values, return_counts=True)
    return float(sum(c * (c - 1) / 2 for c in counts))


def _concordance_counts(
    vx: np.ndarray, vy: np.ndarray
) -> tuple[float, float, float, float, float]:
    """(C - D, ties_x, ties_y, ties_both, n0) via Knight's sort-and-merge counting."""
    n = len(vx)
    n0 = n * (n - 1) / 2
    order = np.lexsort((vy, vx))
    sx, sy = vx[order], vy[order]
    ties_x = _tie_count(vx)
    ties_y = _tie_count(vy)
    # pairs tied on both coordinates
    both = 0.0
    i = 0
    while i < n:
        j = i
        while j < n and sx[j] == sx[i] and sy[j] == sy[i]:
            j += 1
        run = j - i
        both += run * (run - 1) / 2
        i = j
    swaps = _merge_count(list(sy))
    c_minus_d = n0 - ties_x - ties_y + both - 2.0 * swaps
    return c_minus_d, ties_x, ties_y, both, n0


def correlation(
    kind: str, x: Sample | Sequence[Any], y: Sample | Sequence[Any]
) -> float:
    """Pearson, Spearman, Kendall tau-b or Goodman-Kruskal gamma.

    Incomplete pairs are deleted first; at least three complete pairs are
    required. Spearman ranks with average ranks for ties; kendall_tau is the
    tie-corrected tau-b.
    """
    vx, vy = _pairwise_complete(x, y)
    if len(vx) < 3:
        raise MetricInputError("correlation requires at least 3 complete pairs")
    if kind == "pearson":
        return _pearson(vx, vy)
    if kind == "spearman":
        return _pearson(_st.rankdata(vx), _st.rankdata(vy))
    if kind in ("kendall_tau", "goodman_kruskal_gamma"):
        c_minus_d, tx, ty, both, n0 = _concordance_counts(vx, vy)
        if kind == "kendall_tau":
            denom = math.sqrt((n0 - tx) * (n0 - ty))
            if denom == 0:
                raise MetricInputError("kendall_tau undefined: one input fully tied")
            return float(c_minus_d / denom)
        # gamma: C + D is the number of pairs untied on both coordinates
        c_plus_d = n0 - tx - ty + both
        if c_plus_d == 0:
            raise MetricInputError("gamma undefined: all pairs tied")
        return float(c_minus_d / c_plus_d)
    raise MetricInputError(f"unknown correlation kind {kind!r}")


def concordance_cc(x: Sample | Sequence[float], y: Sample | Sequence[float]) -> float:
    """Concordance correlation: 2 cov / (var_x + var_y + (mean gap)^2).

    Population (1/n) moments throughout; 1 only when y equals x elementwise.
    """
    vx, vy = _pairwise_complete(x, y)
    if len(vx) < 2:
        raise MetricInputError("concordance_cc requires at least 2 complete pairs")
    var_x = float(np.var(vx))
    var_y = float(np.var(vy))
    cov = float(np.mean((vx - vx.mean()) * (vy - vy.mean())))
    denom = var_x + var_y + (vx.mean() - vy.mean()) ** 2
    if denom == 0:
        raise MetricInputError("concordance_cc undefined: no variance and no mean gap")
    return float(2.0 * cov / denom)


def icc(m: RatingsMatrix, form: str = "two_way_random_single") -> float:
    """Intraclass correlation, two-way random effects, single measure,
    absolute agreement. Items with any missing rating are dropped."""
    if form != "two_way_random_single":
        raise MetricInputError(f"unsupported ICC form {form!r}")
    if m.n_raters < 2:
        raise MetricInputError("icc requires at least 2 raters")
    rows = [
        [float(v) for v in row]
        for row in m.ratings
        if all(v is not MISSING for v in row)
    ]
    if len(rows) < 2:
        raise MetricInputError("icc requires at least 2 complete items")
    data = np.asarray(rows, dtype=float)
    n, k = data.shape
    grand = data.mean()
    row_means = data.mean(axis=1)
    col_means = data.mean(axis=0)
    ss_rows = k * float(np.sum((row_means - grand) ** 2))
    ss_cols = n * float(np.sum((col_means - grand) ** 2))
    ss_total = float(np.sum((data - grand) ** 2))
    ss_err = ss_total - ss_rows - ss_cols
    msr = ss_rows / (n - 1)
    msc = ss_cols / (k - 1)
    mse = ss_err / ((n - 1) * (k - 1))
    denom = msr + (k - 1) * mse + k * (msc - mse) / n
    if denom == 0:
        raise MetricInputError("icc undefined: zero between-item variance")
    return float((msr - mse) / denom)


def cramers_v(
    a: Sequence[Any], b: Sequence[Any], bias_correction: bool = False
) -> float:
    """Cramér's V from the pairwise-complete contingency table."""
    pairs = [
        (x, y) for x, y in zip(a, b) if x is not MISSING and y is not MISSING
    ]
    if len(a) != len(b):
        raise MetricInputError("cramers_v inputs must have equal length")
    if not pairs:
        raise MetricInputError("no complete pairs after pairwise deletion")
    cats_a = sorted({x for x, _ in pairs}, key=str)
    cats_b = sorted({y for _, y in pairs}, key=str)
    if len(cats_a) < 2 or len(cats_b) < 2:
        raise MetricInputError("cramers_v requires >= 2 categories per variable")
    table = np.zeros((len(cats_a), len(cats_b)))
    ia = {c: i for i, c in enumerate(cats_a)}
    ib = {c: i for i, c in enumerate(cats_b)}
    for x, y in pairs:
        table[ia[x], ib[y]] += 1
    chi2, _, _, _ = _st.chi2_contingency(table, correction=False)
    n = table.sum()
    r, c = table.shape
    if bias_correction:
        phi2 = max(0.0, chi2 / n - (r - 1) * (c - 1) / (n - 1))
        r_adj = r - (r - 1) ** 2 / (n - 1)
        c_adj = c - (c - 1) ** 2 / (n - 1)
        denom = min(r_adj, c_adj) - 1
        return float(math.sqrt(phi2 / denom)) if denom > 0 else 0.0
    return float(math.sqrt(chi2 / (n * (min(r, c) - 1))))
