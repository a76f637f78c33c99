from __future__ import annotations

import itertools
import json
import math
import struct
import warnings

import numpy as np
import pytest
import scipy.linalg
import scipy.stats
from hypothesis import given, settings
from hypothesis import strategies as st

from dqeval.datamodel import Binning, CategoricalCounts, Sample, pooled_histograms
from dqeval.distribution import (
    EmbeddingSet,
    MetricInputError,
    MetricWarning,
    cohens_d,
    divergence,
    energy_distance,
    frechet_gaussian,
    hill_number,
    kid,
    load_embeddings,
    median_heuristic_bandwidth,
    mmd,
    summary_stats,
    two_sample_test,
    wasserstein_1d,
)

finite_floats = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)
samples = st.lists(finite_floats, min_size=2, max_size=30).map(tuple)


# --- summary statistics ------------------------------------------------------


def test_summary_stats_frozen_values():
    st_ = summary_stats([1.0, 2.0, 3.0, 4.0])
    assert st_["mean"] == 2.5
    assert st_["range"] == 3.0
    assert st_["q1"] == 1.75  # linear interpolation between closest ranks
    assert st_["q3"] == 3.25
    assert st_["iqr"] == 1.5
    assert st_["std"] == pytest.approx(np.std([1, 2, 3, 4], ddof=1))


def test_summary_stats_single_point_std_nan():
    assert math.isnan(summary_stats([5.0])["std"])


def test_summary_stats_empty_rejected():
    with pytest.raises(MetricInputError):
        summary_stats([])


# --- Hill numbers ------------------------------------------------------------


def test_hill_frozen_values():
    c = CategoricalCounts.from_mapping({"a": 80, "b": 20})
    assert hill_number(c, 2) == pytest.approx(1 / (0.8**2 + 0.2**2))
    assert hill_number(c, 2) == pytest.approx(1.4706, abs=5e-4)
    assert hill_number(c, 0) == 2.0
    assert hill_number(c, 1) == pytest.approx(math.exp(0.5004), abs=5e-4)


def test_hill_uniform_is_category_count():
    c = CategoricalCounts.from_mapping({k: 7 for k in "abcd"})
    for q in (0, 0.5, 1, 2, 5):
        assert hill_number(c, q) == pytest.approx(4.0)


@given(
    st.lists(st.floats(min_value=0.01, max_value=100), min_size=1, max_size=8),
    st.floats(min_value=0, max_value=6),
)
def test_hill_bounded_by_richness(counts, q):
    c = CategoricalCounts.from_mapping({i: v for i, v in enumerate(counts)})
    d = hill_number(c, q)
    assert 1.0 - 1e-9 <= d <= len(counts) + 1e-9


@given(st.lists(st.floats(min_value=0.01, max_value=100), min_size=2, max_size=8))
def test_hill_decreasing_in_q(counts):
    c = CategoricalCounts.from_mapping({i: v for i, v in enumerate(counts)})
    values = [hill_number(c, q) for q in (0, 0.5, 1, 2, 4)]
    for lo, hi in zip(values[1:], values):
        assert lo <= hi + 1e-9


# --- effect size and kernel distances ---------------------------------------


def test_cohens_d_unit_shift():
    assert cohens_d([1.0, 2.0, 3.0], [2.0, 3.0, 4.0]) == pytest.approx(-1.0)


def test_mmd_identity_zero():
    x = [1.0, 2.0, 3.0, 4.0]
    assert mmd(x, x, bandwidth=1.0) == pytest.approx(0.0, abs=1e-12)


def test_mmd_matches_direct_kernel_sums():
    rng = np.random.default_rng(0)
    a = rng.normal(size=8)
    b = rng.normal(1.0, size=9)
    bw = 1.3

    def k(x, y):
        return math.exp(-((x - y) ** 2) / (2 * bw * bw))

    kaa = np.mean([[k(x, y) for y in a] for x in a])
    kbb = np.mean([[k(x, y) for y in b] for x in b])
    kab = np.mean([[k(x, y) for y in b] for x in a])
    expected = math.sqrt(max(kaa + kbb - 2 * kab, 0.0))
    assert mmd(list(a), list(b), bandwidth=bw) == pytest.approx(expected)


def test_mmd_median_heuristic_used_when_bandwidth_absent():
    a, b = [0.0, 1.0, 2.0], [5.0, 6.0, 7.0]
    bw = median_heuristic_bandwidth(a, b)
    assert mmd(a, b) == pytest.approx(mmd(a, b, bandwidth=bw))


def test_mmd_subsample_deterministic_under_seed():
    rng = np.random.default_rng(3)
    a, b = rng.normal(size=50), rng.normal(0.5, size=50)
    v1 = mmd(list(a), list(b), subsample=20, seed=11)
    v2 = mmd(list(a), list(b), subsample=20, seed=11)
    assert v1 == v2


@given(samples, samples)
@settings(max_examples=50, deadline=None)
def test_mmd_symmetric_nonnegative(a, b):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        d_ab = mmd(a, b, bandwidth=1.0)
        d_ba = mmd(b, a, bandwidth=1.0)
    assert d_ab >= 0
    assert d_ab == pytest.approx(d_ba, abs=1e-9)


def test_energy_distance_point_masses():
    # 2 E|X-Y| - E|X-X'| - E|Y-Y'| for degenerate samples at 0 and 1
    assert energy_distance([0.0], [1.0]) == pytest.approx(2.0)


def test_energy_distance_is_squared_scipy_convention():
    rng = np.random.default_rng(1)
    a, b = rng.normal(size=20), rng.normal(1.0, size=25)
    ours = energy_distance(list(a), list(b))
    assert ours == pytest.approx(scipy.stats.energy_distance(a, b) ** 2)


@given(samples, samples)
@settings(max_examples=50, deadline=None)
def test_energy_symmetric_identity(a, b):
    assert energy_distance(a, b) == pytest.approx(energy_distance(b, a), abs=1e-9)
    assert energy_distance(a, a) == pytest.approx(0.0, abs=1e-9)


# --- divergences -------------------------------------------------------------


def _counts(props, n=1000):
    return CategoricalCounts.from_mapping({i: p * n for i, p in enumerate(props)})


def test_kl_frozen_value():
    v = divergence("kl", _counts([0.5, 0.5]), _counts([0.75, 0.25]))
    expected = 0.5 * math.log(0.5 / 0.75) + 0.5 * math.log(0.5 / 0.25)
    assert v == pytest.approx(expected)
    assert v == pytest.approx(0.1438, abs=5e-5)


def test_js_bounded_and_symmetric():
    p, q = _counts([0.9, 0.1]), _counts([0.1, 0.9])
    assert divergence("js", p, q) == pytest.approx(divergence("js", q, p))
    assert 0 <= divergence("js", p, q) <= math.log(2) + 1e-12


def test_psi_zero_on_identical():
    p = _counts([0.3, 0.7])
    assert divergence("psi", p, p) == pytest.approx(0.0)


def test_divergence_smooths_zero_bins_with_warning():
    p = CategoricalCounts.from_mapping({"a": 10, "b": 0})
    q = CategoricalCounts.from_mapping({"a": 5, "b": 5})
    with pytest.warns(MetricWarning, match="smoothed"):
        v = divergence("kl", p, q)
    assert math.isfinite(v)


def test_divergence_strict_mode_raises_on_zero_bins():
    p = CategoricalCounts.from_mapping({"a": 10, "b": 0})
    q = CategoricalCounts.from_mapping({"a": 5, "b": 5})
    with pytest.raises(MetricInputError):
        divergence("kl", p, q, smoothing="strict")


def test_divergence_aligns_union_of_categories():
    p = CategoricalCounts.from_mapping({"a": 10})
    q = CategoricalCounts.from_mapping({"b": 10})
    with pytest.warns(MetricWarning):
        v = divergence("js", p, q)
    assert v == pytest.approx(math.log(2), abs=1e-3)


def test_divergence_on_pooled_histograms():
    a = Sample(tuple(np.linspace(0, 1, 50)))
    b = Sample(tuple(np.linspace(0.5, 1.5, 50)))
    ha, hb = pooled_histograms(a, b, Binning.equal_width(6))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        assert divergence("kl", ha, hb) > 0


@given(
    st.lists(st.floats(min_value=0.05, max_value=1), min_size=2, max_size=6),
    st.lists(st.floats(min_value=0.05, max_value=1), min_size=2, max_size=6),
)
@settings(max_examples=80, deadline=None)
def test_kl_js_nonnegative(p_raw, q_raw):
    k = min(len(p_raw), len(q_raw))
    p, q = _counts(p_raw[:k]), _counts(q_raw[:k])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        assert divergence("kl", p, q) >= -1e-12
        assert divergence("js", p, q) >= -1e-12


# --- hypothesis tests --------------------------------------------------------


def test_ks_matches_scipy():
    rng = np.random.default_rng(2)
    a, b = rng.normal(size=40), rng.normal(0.3, size=35)
    out = two_sample_test("ks", list(a), list(b))
    ref = scipy.stats.ks_2samp(a, b, method="asymp")
    assert out.statistic == pytest.approx(ref.statistic)
    assert out.p_value == pytest.approx(ref.pvalue)


def test_mwu_exact_frozen_case():
    out = two_sample_test("mann_whitney_u", [1.0, 2.0, 3.0], [4.0, 5.0, 6.0])
    assert out.statistic == 0.0
    assert out.p_value == pytest.approx(0.1)
    assert "exact" in out.method


def _mwu_bruteforce(a, b):
    """Doubled one-tail permutation p-value of U over all group assignments."""
    pooled = list(a) + list(b)
    n = len(a)

    def u_of(sample_a, sample_b):
        u = 0.0
        for x in sample_a:
            for y in sample_b:
                if x > y:
                    u += 1.0
                elif x == y:
                    u += 0.5
        return u

    observed = u_of(a, b)
    low = high = total = 0
    for idx in itertools.combinations(range(len(pooled)), n):
        grp_a = [pooled[i] for i in idx]
        grp_b = [pooled[i] for i in range(len(pooled)) if i not in set(idx)]
        u = u_of(grp_a, grp_b)
        low += u <= observed + 1e-12
        high += u >= observed - 1e-12
        total += 1
    return observed, min(1.0, 2.0 * min(low, high) / total)


@pytest.mark.parametrize("seed", range(6))
def test_mwu_exact_matches_enumeration(seed):
    rng = np.random.default_rng(seed)
    n, m = rng.integers(2, 7), rng.integers(2, 7)
    a = list(rng.integers(0, 5, size=n).astype(float))  # integer draws force ties
    b = list(rng.integers(0, 5, size=m).astype(float))
    out = two_sample_test("mann_whitney_u", a, b)
    u_ref, p_ref = _mwu_bruteforce(a, b)
    assert out.statistic == pytest.approx(u_ref)
    assert out.p_value == pytest.approx(p_ref)


def test_mwu_large_samples_use_scipy_asymptotics():
    rng = np.random.default_rng(4)
    a, b = rng.normal(size=30), rng.normal(0.5, size=30)
    out = two_sample_test("mann_whitney_u", list(a), list(b))
    ref = scipy.stats.mannwhitneyu(a, b, alternative="two-sided", method="asymptotic")
    assert out.statistic == pytest.approx(ref.statistic)
    assert out.p_value == pytest.approx(ref.pvalue)


def test_chi_squared_matches_scipy_without_correction():
    p = CategoricalCounts.from_mapping({"a": 10, "b": 20})
    q = CategoricalCounts.from_mapping({"a": 20, "b": 10})
    out = two_sample_test("chi_squared", p, q)
    ref = scipy.stats.chi2_contingency([[10, 20], [20, 10]], correction=False)
    assert out.statistic == pytest.approx(ref.statistic)
    assert out.p_value == pytest.approx(ref.pvalue)


def test_anderson_darling_k_clamped_p_warns():
    rng = np.random.default_rng(5)
    a, b = rng.normal(size=30), rng.normal(5.0, size=30)
    out = two_sample_test("anderson_darling_k", list(a), list(b))
    assert out.p_value == pytest.approx(0.001)
    assert any("clamp" in w or "floored" in w or "capped" in w for w in out.warnings)


def test_anderson_darling_k_accepts_extra_samples():
    rng = np.random.default_rng(6)
    groups = [rng.normal(size=20) for _ in range(3)]
    out = two_sample_test(
        "anderson_darling_k", list(groups[0]), list(groups[1]), others=[list(groups[2])]
    )
    ref = scipy.stats.anderson_ksamp([g for g in groups])
    assert out.statistic == pytest.approx(ref.statistic)


def test_epps_singleton_small_sample_unavailable():
    out = two_sample_test("epps_singleton", [1.0, 2.0, 1.5], [2.0, 3.0, 2.5])
    assert out.p_value is None or math.isnan(out.statistic)
    assert any("inapplicable" in w or "unavailable" in w for w in out.warnings)


def test_epps_singleton_warns_below_25():
    rng = np.random.default_rng(7)
    a, b = rng.normal(size=20), rng.normal(size=20)
    out = two_sample_test("epps_singleton", list(a), list(b))
    assert any("25" in w for w in out.warnings)


def test_unknown_test_kind_rejected():
    with pytest.raises(MetricInputError):
        two_sample_test("t_test", [1.0, 2.0], [3.0, 4.0])


# --- Wasserstein -------------------------------------------------------------


def test_wasserstein_frozen_shift():
    assert wasserstein_1d([1.0, 2.0, 3.0], [2.0, 3.0, 4.0]) == pytest.approx(1.0)


def test_wasserstein_identity_zero():
    assert wasserstein_1d([1.0, 5.0, 2.0], [5.0, 1.0, 2.0]) == pytest.approx(0.0)


def test_wasserstein_matches_scipy_order_one():
    rng = np.random.default_rng(8)
    a, b = rng.normal(size=23), rng.normal(1.0, size=31)
    assert wasserstein_1d(list(a), list(b)) == pytest.approx(
        scipy.stats.wasserstein_distance(a, b)
    )


def test_wasserstein_equal_sizes_sorted_difference_oracle():
    rng = np.random.default_rng(9)
    a, b = rng.normal(size=40), rng.normal(2.0, size=40)
    oracle = np.mean(np.abs(np.sort(a) - np.sort(b)))
    assert wasserstein_1d(list(a), list(b)) == pytest.approx(oracle)


def test_wasserstein_order_two_sorted_oracle():
    rng = np.random.default_rng(10)
    a, b = rng.normal(size=25), rng.normal(1.0, size=25)
    oracle = np.mean(np.abs(np.sort(a) - np.sort(b)) ** 2) ** 0.5
    assert wasserstein_1d(list(a), list(b), order=2) == pytest.approx(oracle)


def test_wasserstein_rejects_order_below_one():
    with pytest.raises(MetricInputError):
        wasserstein_1d([1.0], [2.0], order=0.5)


@given(samples, samples)
@settings(max_examples=60, deadline=None)
def test_wasserstein_symmetric_triangle(a, b):
    d_ab = wasserstein_1d(a, b)
    assert d_ab >= 0
    assert d_ab == pytest.approx(wasserstein_1d(b, a), rel=1e-9, abs=1e-9)


# --- embedding-space distances ----------------------------------------------


def _gauss_embeddings(rng, n, d, shift=0.0, scale=1.0):
    return EmbeddingSet(tuple(map(tuple, rng.normal(shift, scale, size=(n, d)))))


def test_frechet_identity_zero():
    rng = np.random.default_rng(11)
    e = _gauss_embeddings(rng, 30, 4)
    assert frechet_gaussian(e, e) == pytest.approx(0.0, abs=1e-8)


def test_frechet_matches_sqrtm_oracle():
    rng = np.random.default_rng(12)
    e_a = _gauss_embeddings(rng, 40, 3)
    e_b = _gauss_embeddings(rng, 45, 3, shift=1.0, scale=1.5)
    ma, mb = e_a.as_array(), e_b.as_array()
    mu_a, mu_b = ma.mean(axis=0), mb.mean(axis=0)
    ca, cb = np.cov(ma, rowvar=False), np.cov(mb, rowvar=False)
    covmean = scipy.linalg.sqrtm(ca @ cb).real
    oracle = float(np.sum((mu_a - mu_b) ** 2) + np.trace(ca + cb - 2 * covmean))
    assert frechet_gaussian(e_a, e_b) == pytest.approx(oracle, rel=1e-6)


def test_frechet_univariate_closed_form():
    rng = np.random.default_rng(13)
    a = rng.normal(0.0, 1.0, size=200)
    b = rng.normal(3.0, 2.0, size=200)
    e_a = EmbeddingSet(tuple((float(v),) for v in a))
    e_b = EmbeddingSet(tuple((float(v),) for v in b))
    sa, sb = np.std(a, ddof=1), np.std(b, ddof=1)
    oracle = (a.mean() - b.mean()) ** 2 + (sa - sb) ** 2
    assert frechet_gaussian(e_a, e_b) == pytest.approx(oracle, rel=1e-9)


def test_kid_matches_loop_oracle():
    rng = np.random.default_rng(14)
    ma = rng.normal(size=(6, 3))
    mb = rng.normal(0.5, size=(7, 3))
    d = 3

    def k(x, y):
        return (float(x @ y) / d + 1.0) ** 3

    n, m = len(ma), len(mb)
    t_a = sum(k(ma[i], ma[j]) for i in range(n) for j in range(n) if i != j) / (n * (n - 1))
    t_b = sum(k(mb[i], mb[j]) for i in range(m) for j in range(m) if i != j) / (m * (m - 1))
    t_ab = sum(k(x, y) for x in ma for y in mb) / (n * m)
    oracle = t_a + t_b - 2 * t_ab
    e_a = EmbeddingSet(tuple(map(tuple, ma)))
    e_b = EmbeddingSet(tuple(map(tuple, mb)))
    assert kid(e_a, e_b) == pytest.approx(oracle)
    assert kid(e_b, e_a) == pytest.approx(oracle)


def test_kid_unbiased_near_zero_on_matched_distributions():
    rng = np.random.default_rng(15)
    same = [
        kid(_gauss_embeddings(rng, 50, 4), _gauss_embeddings(rng, 50, 4))
        for _ in range(20)
    ]
    shifted = kid(_gauss_embeddings(rng, 50, 4), _gauss_embeddings(rng, 50, 4, shift=2.0))
    assert abs(np.mean(same)) < 0.5
    assert shifted > 10 * abs(np.mean(same))


def test_embedding_file_roundtrip_binary_and_text(tmp_path):
    mat = np.arange(12, dtype="<f4").reshape(4, 3)
    binary = tmp_path / "e.bin"
    with binary.open("wb") as fh:
        fh.write(json.dumps({"n": 4, "d": 3}).encode() + b"\n")
        fh.write(mat.tobytes())
    text = tmp_path / "e.txt"
    np.savetxt(text, mat)
    assert load_embeddings(binary).as_array() == pytest.approx(mat.astype(float))
    assert load_embeddings(text).as_array() == pytest.approx(mat.astype(float))


def test_embedding_truncated_payload_rejected(tmp_path):
    bad = tmp_path / "e.bin"
    with bad.open("wb") as fh:
        fh.write(json.dumps({"n": 4, "d": 3}).encode() + b"\n")
        fh.write(struct.pack("<5f", *range(5)))
    with pytest.raises(MetricInputError):
        load_embeddings(bad)
