"""Single-distribution descriptors and two-distribution comparisons.

Distances, divergences, and hypothesis tests between empirical
distributions, plus summary statistics and Hill numbers. Inputs are
univariate samples unless a function documents embedding support.
"""

from __future__ import annotations

import json
import math
import warnings as _pywarnings
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy import stats as _st
from scipy.spatial.distance import cdist

from .datamodel import CategoricalCounts, Histogram, Sample

SMOOTH_EPS = 1e-6


class MetricWarning(UserWarning):
    """Non-fatal condition a metric wants surfaced next to its value."""


class MetricInputError(ValueError):
    """Raised when inputs violate a metric's preconditions."""


def _warn(msg: str) -> None:
    _pywarnings.warn(msg, MetricWarning, stacklevel=3)


def _values(x: Sample | Sequence[float]) -> np.ndarray:
    if isinstance(x, Sample):
        return np.asarray(x.values, dtype=float)
    return np.asarray(list(x), dtype=float)


@dataclass(frozen=True)
class EmbeddingSet:
    """n x d matrix of real feature vectors, no missing entries."""

    vectors: tuple[tuple[float, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(float(v) for v in r) for r in self.vectors)
        if len(rows) < 2:
            raise MetricInputError("EmbeddingSet needs n >= 2 vectors")
        widths = {len(r) for r in rows}
        if len(widths) != 1 or widths.pop() < 1:
            raise MetricInputError("EmbeddingSet vectors must share a dimension d >= 1")
        for r in rows:
            for v in r:
                if not math.isfinite(v):
                    raise MetricInputError("EmbeddingSet entries must be finite")
        object.__setattr__(self, "vectors", rows)

    @property
    def n(self) -> int:
        return len(self.vectors)

    @property
    def d(self) -> int:
        return len(self.vectors[0])

    def as_array(self) -> np.ndarray:
        return np.asarray(self.vectors, dtype=float)


def load_embeddings(path: str | Path) -> EmbeddingSet:
    """Read an embedding file.

    Two layouts are accepted: delimited text with one vector per row, or a
    JSON header line {"n": ..., "d": ...} followed by n*d little-endian
    32-bit floats.
    """
    p = Path(path)
    with p.open("rb") as fh:
        first = fh.read(1)
        if first == b"{":
            header_line = first + fh.readline()
            header = json.loads(header_line.decode("utf-8"))
            n, d = int(header["n"]), int(header["d"])
            raw = np.frombuffer(fh.read(n * d * 4), dtype="<f4")
            if raw.size != n * d:
                raise MetricInputError(f"{p}: expected {n * d} float32 values, got {raw.size}")
            mat = raw.astype(float).reshape(n, d)
        else:
            mat = np.atleast_2d(np.loadtxt(p, dtype=float))
    return EmbeddingSet(tuple(tuple(row) for row in mat))


@dataclass(frozen=True)
class TestOutcome:
    """Result of a two-sample hypothesis test."""

    statistic: float
    p_value: float | None
    method: str
    n_a: int
    n_b: int
    warnings: tuple[str, ...] = ()


# --- single-distribution descriptors ---------------------------------------


def summary_stats(s: Sample | Sequence[float]) -> dict[str, float]:
    """Order and moment summary of a sample.

    Quantiles interpolate linearly between closest ranks; std uses the n-1
    denominator and is NaN for a single observation.
    """
    v = _values(s)
    if v.size == 0:
        raise MetricInputError("summary_stats requires a non-empty sample")
    q1, med, q3 = (float(q) for q in np.quantile(v, [0.25, 0.5, 0.75]))
    std = float(np.std(v, ddof=1)) if v.size >= 2 else float("nan")
    return {
        "min": float(v.min()),
        "max": float(v.max()),
        "range": float(v.max() - v.min()),
        "q1": q1,
        "median": med,
        "q3": q3,
        "iqr": q3 - q1,
        "mean": float(v.mean()),
        "std": std,
    }


def hill_number(c: CategoricalCounts, q: float) -> float:
    """Effective number of categories of order q.

    D_q = (sum p_i^q)^(1/(1-q)); the q=1 limit is exp of the Shannon
    entropy, q=0 is the richness.
    """
    if q < 0:
        raise MetricInputError("hill_number requires q >= 0")
    props = [p for p in c.proportions().values() if p > 0]
    if q == 0:
        return float(len(props))
    if q == 1:
        return float(math.exp(-sum(p * math.log(p) for p in props)))
    return float(sum(p**q for p in props) ** (1.0 / (1.0 - q)))


# --- distances ---------------------------------------------------------------


def cohens_d(a: Sample | Sequence[float], b: Sample | Sequence[float]) -> float:
    """Standardized mean difference with pooled (n-1)-weighted variance."""
    va, vb = _values(a), _values(b)
    if va.size < 2 or vb.size < 2:
        raise MetricInputError("cohens_d requires at least two values per sample")
    pooled_var = (
        (va.size - 1) * np.var(va, ddof=1) + (vb.size - 1) * np.var(vb, ddof=1)
    ) / (va.size + vb.size - 2)
    if pooled_var <= 0:
        raise MetricInputError("cohens_d is undefined for zero pooled variance")
    return float((va.mean() - vb.mean()) / math.sqrt(pooled_var))


def _as_matrix(x: Sample | Sequence[float] | EmbeddingSet | np.ndarray) -> np.ndarray:
    if isinstance(x, EmbeddingSet):
        return x.as_array()
    if isinstance(x, np.ndarray) and x.ndim == 2:
        return x.astype(float)
    return _values(x).reshape(-1, 1)


def _maybe_subsample(m: np.ndarray, subsample: int | None, rng: np.random.Generator) -> np.ndarray:
    if subsample is not None and m.shape[0] > subsample:
        idx = rng.choice(m.shape[0], size=subsample, replace=False)
        return m[np.sort(idx)]
    return m


def median_heuristic_bandwidth(
    a: Sample | Sequence[float] | EmbeddingSet,
    b: Sample | Sequence[float] | EmbeddingSet,
) -> float:
    """Median of the nonzero pairwise distances over the pooled inputs."""
    pooled = np.vstack([_as_matrix(a), _as_matrix(b)])
    d = cdist(pooled, pooled)
    upper = d[np.triu_indices_from(d, k=1)]
    med = float(np.median(upper))
    if med <= 0:
        nonzero = upper[upper > 0]
        med = float(np.median(nonzero)) if nonzero.size else 1.0
        _warn("median heuristic degenerate (identical points); bandwidth fallback used")
    return med


def mmd(
    a: Sample | Sequence[float] | EmbeddingSet,
    b: Sample | Sequence[float] | EmbeddingSet,
    kernel: str = "rbf",
    bandwidth: float | None = None,
    degree: int = 3,
    coef: float = 1.0,
    subsample: int | None = None,
    seed: int | None = None,
) -> float:
    """Biased maximum mean discrepancy estimate (square root scale).

    kernel "rbf" uses exp(-||x-y||^2 / (2 bandwidth^2)) with the median
    heuristic when bandwidth is None; "polynomial" uses (x.y/d + coef)^degree.
    Large inputs may be subsampled (seed recorded by the caller).
    """
    rng = np.random.default_rng(seed)
    ma = _maybe_subsample(_as_matrix(a), subsample, rng)
    mb = _maybe_subsample(_as_matrix(b), subsample, rng)
    if ma.shape[0] < 2 or mb.shape[0] < 2:
        raise MetricInputError("mmd requires at least two points per sample")
    if ma.shape[1] != mb.shape[1]:
        raise MetricInputError("mmd inputs must share their dimension")
    if kernel == "rbf":
        if bandwidth is None:
            bandwidth = median_heuristic_bandwidth(ma, mb)
        if bandwidth <= 0:
            raise MetricInputError("rbf bandwidth must be > 0")

        def k(x: np.ndarray, y: np.ndarray) -> np.ndarray:
            sq = cdist(x, y, "sqeuclidean")
            return np.exp(-sq / (2.0 * bandwidth * bandwidth))

    elif kernel == "polynomial":

        def k(x: np.ndarray, y: np.ndarray) -> np.ndarray:
            return (x @ y.T / x.shape[1] + coef) ** degree

    else:
        raise MetricInputError(f"unknown kernel {kernel!r}")
    mmd2 = float(k(ma, ma).mean() + k(mb, mb).mean() - 2.0 * k(ma, mb).mean())
    return math.sqrt(max(mmd2, 0.0))


def energy_distance(
    a: Sample | Sequence[float] | EmbeddingSet,
    b: Sample | Sequence[float] | EmbeddingSet,
    subsample: int | None = None,
    seed: int | None = None,
) -> float:
    """2 E|X-Y| - E|X-X'| - E|Y-Y'| by full pairwise sums."""
    rng = np.random.default_rng(seed)
    ma = _maybe_subsample(_as_matrix(a), subsample, rng)
    mb = _maybe_subsample(_as_matrix(b), subsample, rng)
    if ma.shape[0] < 1 or mb.shape[0] < 1:
        raise MetricInputError("energy_distance requires non-empty samples")
    if ma.shape[1] != mb.shape[1]:
        raise MetricInputError("energy_distance inputs must share their dimension")
    e_ab = cdist(ma, mb).mean()
    e_aa = cdist(ma, ma).mean()
    e_bb = cdist(mb, mb).mean()
    return float(max(2.0 * e_ab - e_aa - e_bb, 0.0))


# --- divergences -------------------------------------------------------------


def _aligned_props(
    p: CategoricalCounts | Histogram, q: CategoricalCounts | Histogram
) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(p, Histogram) != isinstance(q, Histogram):
        raise MetricInputError("divergence inputs must both be counts or both histograms")
    if isinstance(p, Histogram) and isinstance(q, Histogram):
        if p.edges != q.edges:
            raise MetricInputError("histogram inputs must share bin edges")
        p, q = p.counts, q.counts
    keys = list(dict.fromkeys(list(p.categories) + list(q.categories)))
    pd_, qd = p.as_dict(), q.as_dict()
    pv = np.array([pd_.get(k, 0.0) for k in keys], dtype=float)
    qv = np.array([qd.get(k, 0.0) for k in keys], dtype=float)
    if pv.sum() <= 0 or qv.sum() <= 0:
        raise MetricInputError("divergence inputs must have positive total mass")
    return pv / pv.sum(), qv / qv.sum()


def smoothing_engaged(p: CategoricalCounts | Histogram, q: CategoricalCounts | Histogram) -> bool:
    """True when either side has a zero bin, so default-mode smoothing bites."""
    pv, qv = _aligned_props(p, q)
    return bool((pv == 0).any() or (qv == 0).any())


def divergence(
    kind: str,
    p: CategoricalCounts | Histogram,
    q: CategoricalCounts | Histogram,
    smoothing: str = "default",
) -> float:
    """KL, Jensen-Shannon (nats) or population stability index.

    Default mode adds 1e-6 to every bin and renormalizes when a zero bin
    would blow up a log ratio; strict mode raises instead.
    """
    pv, qv = _aligned_props(p, q)
    zeros = (pv == 0).any() or (qv == 0).any()
    if zeros:
        if smoothing == "strict":
            raise MetricInputError("zero bin encountered in strict mode")
        _warn(f"zero bins smoothed with eps={SMOOTH_EPS} and renormalized")
        pv = pv + SMOOTH_EPS
        qv = qv + SMOOTH_EPS
        pv, qv = pv / pv.sum(), qv / qv.sum()
    if kind == "kl":
        mask = pv > 0
        return float(np.sum(pv[mask] * np.log(pv[mask] / qv[mask])))
    if kind == "js":
        m = 0.5 * (pv + qv)
        def _kl(x: np.ndarray, y: np.ndarray) -> float:
            mask = x > 0
            return float(np.sum(x[mask] * np.log(x[mask] / y[mask])))
        return 0.5 * _kl(pv, m) + 0.5 * _kl(qv, m)
    if kind == "psi":
        return float(np.sum((pv - qv) * np.log(pv / qv)))
    raise MetricInputError(f"unknown divergence kind {kind!r}")


# --- hypothesis tests --------------------------------------------------------


def _mwu_exact(va: np.ndarray, vb: np.ndarray) -> tuple[float, float]:
    """U of the first sample and its exact two-sided permutation p-value.

    All C(n+m, n) splits of the pooled multiset are enumerated; ties count
    one half. Feasible only for small n+m (callers gate on that).
    """
    pooled = np.concatenate([va, vb])
    n, m = len(va), len(vb)

    def u_of(first: np.ndarray, second: np.ndarray) -> float:
        diff = first[:, None] - second[None, :]
        return float((diff > 0).sum() + 0.5 * (diff == 0).sum())

    u_obs = u_of(va, vb)
    total = 0
    le = 0
    ge = 0
    for choice in combinations(range(n + m), n):
        mask = np.zeros(n + m, dtype=bool)
        mask[list(choice)] = True
        u = u_of(pooled[mask], pooled[~mask])
        total += 1
        if u <= u_obs + 1e-12:
            le += 1
        if u >= u_obs - 1e-12:
            ge += 1
    p = min(1.0, 2.0 * min(le / total, ge / total))
    return u_obs, p


def two_sample_test(
    kind: str,
    a: Sample | Sequence[float] | CategoricalCounts,
    b: Sample | Sequence[float] | CategoricalCounts,
    others: Sequence[Sample | Sequence[float]] = (),
) -> TestOutcome:
    """Two-sample hypothesis test selected by kind.

    kinds: ks, epps_singleton, anderson_darling_k (accepts extra samples via
    others), mann_whitney_u, chi_squared (categorical counts). p-values come
    from the standard asymptotics, except the small Mann-Whitney case which
    is enumerated exactly.
    """
    warns: list[str] = []
    if kind == "chi_squared":
        if not isinstance(a, CategoricalCounts) or not isinstance(b, CategoricalCounts):
            raise MetricInputError("chi_squared expects CategoricalCounts on both sides")
        keys = list(dict.fromkeys(list(a.categories) + list(b.categories)))
        obs = np.array(
            [[a.as_dict().get(k, 0.0) for k in keys], [b.as_dict().get(k, 0.0) for k in keys]]
        )
        col_tot = obs.sum(axis=0)
        if (col_tot == 0).any():
            raise MetricInputError("chi_squared: category with expected count 0")
        stat, p, _, _ = _st.chi2_contingency(obs, correction=False)
        return TestOutcome(float(stat), float(p), "chi_squared", int(obs[0].sum()), int(obs[1].sum()))

    va, vb = _values(a), _values(b)
    if va.size < 1 or vb.size < 1:
        raise MetricInputError("two_sample_test requires non-empty samples")

    if kind == "ks":
        res = _st.ks_2samp(va, vb, method="asymp")
        return TestOutcome(float(res.statistic), float(res.pvalue), "ks", va.size, vb.size)

    if kind == "mann_whitney_u":
        if va.size + vb.size <= 16:
            u, p = _mwu_exact(va, vb)
            return TestOutcome(u, p, "mann_whitney_u(exact)", va.size, vb.size)
        res = _st.mannwhitneyu(va, vb, alternative="two-sided", method="asymptotic")
        return TestOutcome(
            float(res.statistic), float(res.pvalue), "mann_whitney_u(asymptotic)", va.size, vb.size
        )

    if kind == "epps_singleton":
        if va.size < 25 or vb.size < 25:
            warns.append("epps_singleton asymptotic p-value unreliable below 25 points per sample")
        with _pywarnings.catch_warnings():
            _pywarnings.simplefilter("ignore")
            try:
                res = _st.epps_singleton_2samp(va, vb)
                stat, p = float(res.statistic), float(res.pvalue)
            except (ValueError, np.linalg.LinAlgError) as exc:
                warns.append(f"epps_singleton inapplicable: {exc}")
                stat, p = float("nan"), None
        if p is not None and math.isnan(p):
            warns.append("epps_singleton p-value unavailable for this input")
            p = None
        return TestOutcome(stat, p, "epps_singleton", va.size, vb.size, tuple(warns))

    if kind == "anderson_darling_k":
        samples = [va, vb] + [_values(o) for o in others]
        with _pywarnings.catch_warnings(record=True) as caught:
            _pywarnings.simplefilter("always")
            res = _st.anderson_ksamp(samples)
        for w in caught:
            if "p-value" in str(w.message):
                warns.append("anderson_darling_k p-value clamped to its tabulated range [0.001, 0.25]")
                break
        return TestOutcome(
            float(res.statistic),
            float(res.pvalue),
            f"anderson_darling_k(k={len(samples)})",
            va.size,
            vb.size,
            tuple(warns),
        )

    raise MetricInputError(f"unknown test kind {kind!r}")


# --- transport and embedding distances --------------------------------------


def wasserstein_1d(
    a: Sample | Sequence[float], b: Sample | Sequence[float], order: float = 1.0
) -> float:
    """Order-p Wasserstein distance between empirical distributions.

    Computed as the L^p norm of the quantile-function difference; for equal
    sizes and order 1 this is the mean absolute difference of the sorted
    samples.
    """
    if order < 1:
        raise MetricInputError("wasserstein order must be >= 1")
    va, vb = np.sort(_values(a)), np.sort(_values(b))
    if va.size == 0 or vb.size == 0:
        raise MetricInputError("wasserstein requires non-empty samples")
    # merged grid of both empirical CDF jump probabilities; the quantile
    # functions are constant on each segment between consecutive grid points
    grid = np.union1d(
        np.arange(1, va.size + 1) / va.size, np.arange(1, vb.size + 1) / vb.size
    )
    widths = np.diff(np.concatenate([[0.0], grid]))
    # smallest i with i/n >= u, guarded against float noise at the jumps
    ia = np.ceil(grid * va.size - 1e-9).astype(int) - 1
    ib = np.ceil(grid * vb.size - 1e-9).astype(int) - 1
    diffs = np.abs(va[ia] - vb[ib]) ** order
    return float(np.sum(diffs * widths) ** (1.0 / order))


def _cov_mean(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    mu = m.mean(axis=0)
    cov = np.cov(m, rowvar=False, ddof=1)
    cov = np.atleast_2d(cov)
    return mu, cov


def _psd_sqrt(mat: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh((mat + mat.T) / 2.0)
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.T


def frechet_gaussian(e_a: EmbeddingSet, e_b: EmbeddingSet) -> float:
    """Fréchet distance between Gaussian fits of two embedding sets.

    ||mu_a - mu_b||^2 + tr(S_a + S_b - 2 (S_a S_b)^{1/2}), with the matrix
    square root taken through an eigendecomposition whose negative
    eigenvalues (numerical noise) are clipped at zero.
    """
    ma, mb = e_a.as_array(), e_b.as_array()
    if ma.shape[1] != mb.shape[1]:
        raise MetricInputError("embedding sets must share their dimension")
    if ma.shape[0] <= ma.shape[1] or mb.shape[0] <= mb.shape[1]:
        _warn("n <= d: Gaussian fit is rank deficient, distance may be unstable")
    mu_a, cov_a = _cov_mean(ma)
    mu_b, cov_b = _cov_mean(mb)
    sqrt_a = _psd_sqrt(cov_a)
    inner = _psd_sqrt(sqrt_a @ cov_b @ sqrt_a)
    diff = mu_a - mu_b
    fid = float(diff @ diff + np.trace(cov_a) + np.trace(cov_b) - 2.0 * np.trace(inner))
    return max(fid, 0.0)


def kid(
    e_a: EmbeddingSet,
    e_b: EmbeddingSet,
    degree: int = 3,
    coef: float = 1.0,
    subsample: int | None = None,
    seed: int | None = None,
) -> float:
    """Unbiased squared MMD with the kernel (x.y/d + coef)^degree.

    Unbiasedness allows slightly negative values near zero.
    """
    rng = np.random.default_rng(seed)
    ma = _maybe_subsample(e_a.as_array(), subsample, rng)
    mb = _maybe_subsample(e_b.as_array(), subsample, rng)
    if ma.shape[1] != mb.shape[1]:
        raise MetricInputError("embedding sets must share their dimension")
    d = ma.shape[1]
    n, m = ma.shape[0], mb.shape[0]
    if n < 2 or m < 2:
        raise MetricInputError("kid requires at least two vectors per set")
    k_aa = (ma @ ma.T / d + coef) ** degree
    k_bb = (mb @ mb.T / d + coef) ** degree
    k_ab = (ma @ mb.T / d + coef) ** degree
    term_a = (k_aa.sum() - np.trace(k_aa)) / (n * (n - 1))
    term_b = (k_bb.sum() - np.trace(k_bb)) / (m * (m - 1))
    return float(term_a + term_b - 2.0 * k_ab.mean())
