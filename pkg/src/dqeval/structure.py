"""Consistency, representativeness, timeliness and informativeness metrics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Sequence

import numpy as np
from scipy.stats import chi2

from .datamodel import MISSING, CategoricalCounts, Dataset, Sample
from .distribution import MetricInputError, _values, _warn


@dataclass(frozen=True)
class PageHinkleyParams:
    """Drift detector knobs.

    alpha is a fading factor on the cumulative statistic; 1.0 recovers the
    plain cumulative form, which false-alarms heavily on long stationary
    noise, so the default forgets old deviations slowly.
    """

    delta: float = 0.005
    lam: float = 50.0
    direction: str = "increase"
    alpha: float = 0.99

    def __post_init__(self) -> None:
        if self.lam <= 0:
            raise MetricInputError("page_hinkley lambda must be > 0")
        if self.direction not in ("increase", "decrease", "both"):
            raise MetricInputError(f"unknown direction {self.direction!r}")
        if not 0 < self.alpha <= 1:
            raise MetricInputError("page_hinkley alpha must be in (0, 1]")


@dataclass(frozen=True)
class CurrencyParams:
    """Decay model selection and its per-variant parameters.

    All times are Unix seconds; rates are per second.
    """

    variant: str
    now: float
    volatility: float | None = None
    s: float = 1.0
    shelf_life: float | None = None
    update_rate: float | None = None
    decline: float | None = None

    def __post_init__(self) -> None:
        if self.variant not in ("ballou", "li", "hinrichs", "heinrich"):
            raise MetricInputError(f"unknown currency variant {self.variant!r}")


# --- consistency -------------------------------------------------------------


def syntactic_accuracy(col: Sequence[Any], dictionary: Iterable[str]) -> float:
    """Share of non-missing entries found in the dictionary."""
    words = {str(w) for w in dictionary}
    if not words:
        raise MetricInputError("syntactic_accuracy requires a nonempty dictionary")
    present = [v for v in col if v is not MISSING]
    if not present:
        _warn("syntactic_accuracy undefined: all entries missing")
        return float("nan")
    return sum(1 for v in present if str(v) in words) / len(present)


def _ph_one_direction(x: np.ndarray, p: PageHinkleyParams, sign: float) -> tuple[list[int], float]:
    alarms: list[int] = []
    ph = 0.0
    ph_min = 0.0
    mean = 0.0
    count = 0
    max_stat = 0.0
    for t, xt in enumerate(x):
        count += 1
        mean += (xt - mean) / count
        ph = p.alpha * ph + sign * (xt - mean) - p.delta
        ph_min = min(ph_min, ph)
        stat = ph - ph_min
        max_stat = max(max_stat, stat)
        if stat >= p.lam:
            alarms.append(t)
            ph = 0.0
            ph_min = 0.0
            mean = 0.0
            count = 0
    return alarms, max_stat


def page_hinkley(
    series: Sample | Sequence[float], p: PageHinkleyParams = PageHinkleyParams()
) -> dict[str, Any]:
    """Page-Hinkley change detection over a sequential series.

    Tracks the faded cumulative deviation from the running mean and raises
    an alarm whenever it climbs lambda above its running minimum; the
    detector restarts after each alarm. Returns alarm indices (0-based) and
    the largest statistic observed.
    """
    x = _values(series)
    if x.size < 2:
        raise MetricInputError("page_hinkley requires at least 2 points")
    if p.direction == "both":
        up_alarms, up_max = _ph_one_direction(x, p, 1.0)
        down_alarms, down_max = _ph_one_direction(x, p, -1.0)
        return {
            "alarm_indices": sorted(set(up_alarms) | set(down_alarms)),
            "max_statistic": max(up_max, down_max),
        }
    sign = 1.0 if p.direction == "increase" else -1.0
    alarms, max_stat = _ph_one_direction(x, p, sign)
    return {"alarm_indices": alarms, "max_statistic": max_stat}


# --- representativeness ------------------------------------------------------


def dataset_size(ds: Dataset) -> int:
    return ds.n_records


def granularity(ds: Dataset) -> int:
    """Number of feature columns."""
    n = len(ds.feature_columns())
    if n == 0:
        _warn("dataset declares no feature columns")
    return n


def sampling_frequency(ds: Dataset) -> float | tuple[float, ...]:
    """Declared signal rate, or the sorted set of rates when heterogeneous."""
    if ds.signals is None:
        raise MetricInputError("dataset carries no signals")
    rates = sorted({blk.sampling_hz for blk in ds.signals if blk is not None})
    if not rates:
        raise MetricInputError("dataset carries no signals")
    if len(rates) > 1:
        _warn(f"heterogeneous sampling rates: {rates}")
        return tuple(rates)
    return rates[0]


def resolution(image_meta: Sequence[tuple[int, int]]) -> dict[str, Any]:
    """Pixel dimensions per image with min and median by area."""
    sizes = [(int(w), int(h)) for w, h in image_meta]
    if not sizes:
        raise MetricInputError("resolution requires at least one image")
    by_area = sorted(sizes, key=lambda wh: (wh[0] * wh[1], wh))
    return {
        "per_image": sizes,
        "min": by_area[0],
        "median": by_area[(len(by_area) - 1) // 2],
    }


def label_granularity(hierarchy: Mapping[Any, Sequence[Any]] | Iterable[Any]) -> int:
    """Maximum depth of a rooted label hierarchy (flat set of labels: 1)."""
    if not isinstance(hierarchy, Mapping):
        labels = list(hierarchy)
        if not labels:
            raise MetricInputError("label_granularity requires at least one label")
        return 1
    children = {k: list(v) for k, v in hierarchy.items()}
    nodes = set(children)
    for v in children.values():
        nodes.update(v)
    if not nodes:
        raise MetricInputError("label_granularity requires at least one label")
    child_set = {c for v in children.values() for c in v}
    roots = nodes - child_set
    if not roots:
        raise MetricInputError("label hierarchy has no root (cycle)")

    depths: dict[Any, int] = {}

    def depth(node: Any, path: set[Any]) -> int:
        if node in path:
            raise MetricInputError("label hierarchy contains a cycle")
        if node in depths:
            return depths[node]
        kids = children.get(node, [])
        d = 1 if not kids else 1 + max(depth(c, path | {node}) for c in kids)
        depths[node] = d
        return d

    return max(depth(r, set()) for r in roots)


def imbalance_ratio(c: CategoricalCounts) -> float:
    """Majority class count over minority class count."""
    counts = [cnt for _, cnt in c.counts]
    if not counts:
        raise MetricInputError("imbalance_ratio requires at least one class")
    if min(counts) == 0:
        _warn("a declared class has zero count; ratio is infinite")
        return float("inf")
    return float(max(counts) / min(counts))


_ID_DISTANCES = ("total_variation", "hellinger", "euclidean")


def _dist(p: np.ndarray, q: np.ndarray, kind: str) -> float:
    if kind == "total_variation":
        return float(0.5 * np.abs(p - q).sum())
    if kind == "hellinger":
        return float(math.sqrt(0.5 * np.sum((np.sqrt(p) - np.sqrt(q)) ** 2)))
    if kind == "euclidean":
        return float(math.sqrt(np.sum((p - q) ** 2)))
    raise MetricInputError(f"unknown distance {kind!r}; expected one of {_ID_DISTANCES}")


def imbalance_degree(c: CategoricalCounts, distance: str = "total_variation") -> float:
    """Distance to uniform, normalized by the worst case with the same
    number of minority classes: d(p, u)/d(iota_m, u) + (m - 1)."""
    k = len(c)
    if k < 2:
        raise MetricInputError("imbalance_degree requires >= 2 classes")
    p = np.array([v for v in c.proportions().values()])
    u = np.full(k, 1.0 / k)
    m = int(np.sum(p < 1.0 / k))
    if m == 0:
        return 0.0
    # extreme distribution: m empty classes, one taking their mass
    iota = np.full(k, 1.0 / k)
    iota[:m] = 0.0
    iota[m] = (m + 1.0) / k
    return float(_dist(p, u, distance) / _dist(iota, u, distance) + (m - 1))


def lrid(c: CategoricalCounts) -> float:
    """Likelihood-ratio statistic of the multinomial uniformity test."""
    counts = np.array([cnt for _, cnt in c.counts])
    k = len(counts)
    if k < 2:
        raise MetricInputError("lrid requires >= 2 classes")
    n = counts.sum()
    if n <= 0:
        raise MetricInputError("lrid requires a positive total count")
    nz = counts[counts > 0]
    return float(2.0 * np.sum(nz * np.log(nz * k / n)))


# --- timeliness --------------------------------------------------------------


def currency(ts: float, p: CurrencyParams) -> float:
    """Timeliness of a record timestamp under the selected decay model."""
    age = p.now - ts
    if age < 0:
        raise MetricInputError("currency: timestamp lies in the future")
    if p.variant == "li":
        if p.shelf_life is None or p.shelf_life <= 0:
            raise MetricInputError("li variant needs shelf_life > 0")
        return max(0.0, 1.0 - age / p.shelf_life)
    if p.variant == "ballou":
        if p.volatility is None or p.volatility <= 0:
            raise MetricInputError("ballou variant needs volatility > 0")
        return max(0.0, 1.0 - age / p.volatility) ** p.s
    if p.variant == "hinrichs":
        if p.update_rate is None or p.update_rate <= 0:
            raise MetricInputError("hinrichs variant needs update_rate > 0")
        return 1.0 / (p.update_rate * age + 1.0)
    if p.decline is None or p.decline < 0:
        raise MetricInputError("heinrich variant needs decline >= 0")
    return math.exp(-p.decline * age)


# --- informativeness ---------------------------------------------------------


def prevalence_of_duplicates(
    ds: Dataset, keys: Sequence[str] | None = None
) -> dict[str, float]:
    """Duplicate record count and ratio over the chosen key columns.

    Missing compares equal to missing, so two half-empty twins count as
    duplicates.
    """
    cols = list(keys) if keys is not None else list(ds.column_names)
    for c in cols:
        ds.spec(c)
    if ds.n_records == 0 or not cols:
        return {"count": 0, "ratio": 0.0}
    seen = set()
    for i in range(ds.n_records):
        seen.add(tuple(ds.column(c)[i] for c in cols))
    dup = ds.n_records - len(seen)
    return {"count": dup, "ratio": dup / ds.n_records}


def effective_sample_size(
    weights: Sequence[float] | None = None,
    n: float | None = None,
    cluster_size: float | None = None,
    icc: float | None = None,
) -> float:
    """ESS from importance weights, or from a cluster design (n, m, rho)."""
    if weights is not None:
        w = np.asarray(list(weights), dtype=float)
        if (w < 0).any():
            raise MetricInputError("weights must be nonnegative")
        if w.sum() <= 0:
            raise MetricInputError("weights must have a positive sum")
        return float(w.sum() ** 2 / np.sum(w**2))
    if n is None or cluster_size is None or icc is None:
        raise MetricInputError("provide either weights or (n, cluster_size, icc)")
    if not 0 <= icc <= 1:
        raise MetricInputError("icc must lie in [0, 1]")
    if n <= 0 or cluster_size < 1:
        raise MetricInputError("n must be > 0 and cluster_size >= 1")
    return float(n / (1.0 + (cluster_size - 1.0) * icc))


@dataclass(frozen=True)
class McarTestResult:
    statistic: float
    df: int
    p_value: float
    n_patterns: int
    converged: bool
    warnings: tuple[str, ...] = ()


def _em_normal(x: np.ndarray, tol: float, max_iter: int) -> tuple[np.ndarray, np.ndarray, bool, bool]:
    """ML mean/covariance of incomplete rows under normality."""
    n, p = x.shape
    mu = np.nanmean(x, axis=0)
    var = np.nanvar(x, axis=0)
    if np.any(~np.isfinite(mu)) or np.any(~np.isfinite(var)):
        raise MetricInputError("a column is entirely missing")
    sigma = np.diag(np.maximum(var, 1e-12))
    masks = ~np.isnan(x)
    patterns: dict[tuple[bool, ...], np.ndarray] = {}
    for key in {tuple(row) for row in masks}:
        patterns[key] = x[(masks == np.array(key)).all(axis=1)]
    ridged = False
    converged = False
    for _ in range(max_iter):
        sx = np.zeros(p)
        sxx = np.zeros((p, p))
        for key, rows in patterns.items():
            obs = np.array(key)
            k = rows.shape[0]
            if obs.all():
                sx += rows.sum(axis=0)
                sxx += rows.T @ rows
                continue
            o, mi = np.where(obs)[0], np.where(~obs)[0]
            soo = sigma[np.ix_(o, o)]
            som = sigma[np.ix_(o, mi)]
            smm = sigma[np.ix_(mi, mi)]
            try:
                coef = np.linalg.solve(soo, som)
            except np.linalg.LinAlgError:
                coef = np.linalg.solve(soo + 1e-8 * np.eye(len(o)), som)
                ridged = True
            cond_cov = smm - som.T @ coef
            filled = np.empty((k, p))
            filled[:, o] = rows[:, o]
            filled[:, mi] = mu[mi] + (rows[:, o] - mu[o]) @ coef
            sx += filled.sum(axis=0)
            sxx += filled.T @ filled
            sxx[np.ix_(mi, mi)] += k * cond_cov
        mu_new = sx / n
        sigma_new = sxx / n - np.outer(mu_new, mu_new)
        scale = 1.0 + max(np.abs(mu_new).max(), np.abs(sigma_new).max())
        step = max(np.abs(mu_new - mu).max(), np.abs(sigma_new - sigma).max())
        mu, sigma = mu_new, sigma_new
        if step / scale < tol:
            converged = True
            break
    return mu, sigma, converged, ridged


def littles_mcar_test(
    data: Dataset | np.ndarray | Sequence[Sequence[float | None]],
    tol: float = 1e-6,
    max_iter: int = 200,
) -> McarTestResult:
    """Little's test of the missing-completely-at-random hypothesis.

    Fits mean and covariance by EM under normality, then compares each
    missingness pattern's observed means against the fit: d2 is chi-squared
    with sum(p_j) - p degrees of freedom when MCAR holds.
    """
    if isinstance(data, Dataset):
        cols = [c.name for c in data.columns if c.vtype == "numerical"]
        if len(cols) < 2:
            raise MetricInputError("littles_mcar_test needs >= 2 numerical columns")
        x = np.array(
            [[np.nan if v is MISSING else float(v) for v in data.column(c)] for c in cols]
        ).T
    else:
        x = np.array(
            [[np.nan if v is None else float(v) for v in row] for row in data], dtype=float
        )
    if x.ndim != 2 or x.shape[1] < 2:
        raise MetricInputError("littles_mcar_test needs >= 2 numerical columns")
    keep = ~np.all(np.isnan(x), axis=1)
    warns: list[str] = ["assumes multivariate normality of the observed data"]
    if not keep.all():
        warns.append(f"{int((~keep).sum())} fully missing rows dropped")
        x = x[keep]
    n, p = x.shape
    masks = ~np.isnan(x)
    pattern_keys = sorted({tuple(row) for row in masks}, reverse=True)
    if len(pattern_keys) < 2:
        if masks.all():
            raise MetricInputError("data is complete: nothing to test")
        raise MetricInputError("littles_mcar_test needs >= 2 missingness patterns")
    mu, sigma, converged, ridged = _em_normal(x, tol, max_iter)
    if not converged:
        warns.append(f"EM did not converge within {max_iter} iterations")
    if ridged:
        warns.append("singular observed covariance ridged by 1e-8")
    d2 = 0.0
    df = -p
    for key in pattern_keys:
        obs = np.array(key)
        rows = x[(masks == obs).all(axis=1)]
        o = np.where(obs)[0]
        ybar = rows[:, o].mean(axis=0)
        diff = ybar - mu[o]
        soo = sigma[np.ix_(o, o)]
        try:
            sol = np.linalg.solve(soo, diff)
        except np.linalg.LinAlgError:
            sol = np.linalg.solve(soo + 1e-8 * np.eye(len(o)), diff)
            if "singular observed covariance ridged by 1e-8" not in warns:
                warns.append("singular observed covariance ridged by 1e-8")
        d2 += rows.shape[0] * float(diff @ sol)
        df += len(o)
    if df <= 0:
        raise MetricInputError("littles_mcar_test has no degrees of freedom")
    return McarTestResult(
        statistic=float(d2),
        df=int(df),
        p_value=float(chi2.sf(d2, df)),
        n_patterns=len(pattern_keys),
        converged=converged,
        warnings=tuple(warns),
    )
