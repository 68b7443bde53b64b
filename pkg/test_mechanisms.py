"""
稳定选择器与编码论证的测试
"""
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from source.chernoff.divergence import kl_binary
from source.chernoff.mechanisms import (
    accuracy_gap,
    encoding_log_ratio,
    encoding_ratio,
    encoding_weights,
    sample_selector,
    selector_distribution,
    stability_audit,
)
from source.chernoff.schema import EncodingScheme, ScoreMatrix, SelectorDistribution
from source.chernoff.utils.errors import DomainError, ResourceError, ShapeError

TWO_ROWS = ScoreMatrix(entries=[[1.0], [0.0]])

matrices = st.integers(1, 16).flatmap(
    lambda m: st.integers(1, 16).flatmap(
        lambda n: st.lists(
            st.lists(st.floats(0.0, 1.0), min_size=n, max_size=n),
            min_size=m,
            max_size=m,
        )
    )
)


def test_selector_examples():
    two = selector_distribution(TWO_ROWS, 2.0)
    np.testing.assert_allclose(two.probabilities, [2 / 3, 1 / 3], rtol=0, atol=1e-15)
    three = ScoreMatrix(entries=[[1.0, 1.0], [0.5, 0.5], [0.0, 0.0]])
    dist = selector_distribution(three, 2.0)
    np.testing.assert_allclose(dist.probabilities, [4 / 7, 2 / 7, 1 / 7], rtol=0, atol=1e-15)
    assert dist.log_normalizer == pytest.approx(math.log(7.0), rel=1e-14)
    uniform = selector_distribution(ScoreMatrix(entries=[[0.3, 0.9]] * 5), 10.0)
    np.testing.assert_allclose(uniform.probabilities, np.full(5, 0.2), rtol=0, atol=1e-15)


@pytest.mark.parametrize("gamma", [1.0, 0.5, -2.0])
def test_selector_rejects_small_gamma(gamma):
    with pytest.raises(DomainError):
        selector_distribution(TWO_ROWS, gamma)


def test_selector_large_scores_do_not_overflow():
    dist = selector_distribution(ScoreMatrix(entries=[[1.0] * 2000, [0.0] * 2000]), 10.0)
    assert dist.probabilities[0] == pytest.approx(1.0, abs=1e-15)
    assert math.isfinite(dist.log_normalizer)


def test_score_matrix_validation():
    with pytest.raises(ValueError):
        ScoreMatrix(entries=[[0.1, 0.2], [0.3]])
    with pytest.raises(ValueError):
        ScoreMatrix(entries=[[1.5]])
    assert ScoreMatrix.from_array(np.eye(3)).row_sums.tolist() == [1.0, 1.0, 1.0]


@settings(max_examples=200)
@given(matrices, st.sampled_from([1.1, 2.0, 10.0]))
def test_selector_normalized_and_ordered(entries, gamma):
    A = ScoreMatrix(entries=entries)
    dist = selector_distribution(A, gamma)
    probabilities = np.asarray(dist.probabilities)
    assert math.fsum(dist.probabilities) == pytest.approx(1.0, abs=1e-12)
    assert np.all(probabilities >= 0.0)
    row_sums = A.row_sums
    assert row_sums[int(np.argmax(probabilities))] == pytest.approx(row_sums.max(), abs=1e-9)


def test_sample_selector_edges():
    dist = selector_distribution(TWO_ROWS, 2.0)
    assert sample_selector(dist, seed=1, count=0) == []
    with pytest.raises(DomainError):
        sample_selector(dist, seed=1, count=-1)
    degenerate = SelectorDistribution(gamma=2.0, probabilities=[1.0, 0.0, 0.0], log_normalizer=0.0)
    assert set(sample_selector(degenerate, seed=99, count=1000)) == {0}


def test_sample_selector_frequency_and_determinism():
    dist = selector_distribution(TWO_ROWS, 2.0)
    draws = sample_selector(dist, seed=42, count=100_000)
    assert draws == sample_selector(dist, seed=42, count=100_000)
    frequency = draws.count(0) / len(draws)
    assert abs(frequency - 2 / 3) <= 4 * math.sqrt(2 / 9 / 100_000)


def test_stability_examples():
    report = stability_audit(TWO_ROWS, 0, [0.0, 0.0], 2.0)
    np.testing.assert_allclose(report.ratios, [4 / 3, 2 / 3], rtol=1e-12)
    assert report.holds and report.normalizer_holds
    assert (report.lower, report.upper) == (0.25, 4.0)

    swapped = stability_audit(TWO_ROWS, 0, [0.0, 1.0], 2.0)
    np.testing.assert_allclose(swapped.ratios, [2.0, 0.5], rtol=1e-12)
    assert swapped.holds

    same = stability_audit(TWO_ROWS, 0, [1.0, 0.0], 2.0)
    assert same.ratios == pytest.approx([1.0, 1.0], abs=1e-15)
    assert same.normalizer_log_ratio == pytest.approx(0.0, abs=1e-15)


def test_stability_errors():
    with pytest.raises(ShapeError):
        stability_audit(TWO_ROWS, 0, [0.0, 0.0, 0.0], 2.0)
    with pytest.raises(ShapeError):
        stability_audit(TWO_ROWS, 1, [0.0, 0.0], 2.0)
    with pytest.raises(DomainError):
        stability_audit(TWO_ROWS, 0, [0.0, 1.5], 2.0)


@settings(max_examples=200)
@given(matrices, st.sampled_from([1.1, 2.0, 10.0]), st.data())
def test_stability_and_accuracy_hold(entries, gamma, data):
    A = ScoreMatrix(entries=entries)
    column = data.draw(st.integers(0, A.n - 1))
    replacement = data.draw(st.lists(st.floats(0.0, 1.0), min_size=A.m, max_size=A.m))
    assert stability_audit(A, column, replacement, gamma).holds
    assert accuracy_gap(A, gamma).holds


def test_accuracy_examples():
    report = accuracy_gap(TWO_ROWS, 2.0)
    assert report.expected_score == pytest.approx(2 / 3, abs=1e-15)
    assert report.gap == pytest.approx(1 / 3, abs=1e-15)
    assert report.limit == pytest.approx(1.0, abs=1e-15)
    single = accuracy_gap(ScoreMatrix(entries=[[0.4, 0.6]]), 3.0)
    assert single.gap == 0.0 and single.limit == 0.0 and single.holds
    flat = accuracy_gap(ScoreMatrix(entries=[[0.5]] * 4), 1.5)
    assert flat.gap == pytest.approx(0.0, abs=1e-15)


def test_encoding_examples():
    assert encoding_ratio(EncodingScheme(n=5, p=0.3, t=0.0), 4) == 1.0
    assert encoding_ratio(EncodingScheme(n=2, p=0.5, t=0.25), 2) == pytest.approx(2.25, rel=1e-12)
    scheme = EncodingScheme(n=10, p=0.5, t=0.3)
    assert encoding_log_ratio(scheme, 8) == pytest.approx(10 * kl_binary(0.8, 0.5), abs=1e-12)
    assert encoding_log_ratio(scheme, 8) == pytest.approx(1.92745, abs=1e-5)
    with pytest.raises(DomainError):
        encoding_ratio(scheme, 11)
    with pytest.raises(ValueError):
        EncodingScheme(n=3, p=0.8, t=0.3)


def test_encoding_boundaries():
    full = EncodingScheme(n=3, p=0.5, t=0.5)
    assert encoding_ratio(full, 2) == 0.0
    assert encoding_ratio(full, 3) == pytest.approx(8.0, rel=1e-12)
    from_zero = EncodingScheme(n=3, p=0.0, t=0.5)
    assert encoding_ratio(from_zero, 1) == math.inf
    assert encoding_ratio(from_zero, 0) == pytest.approx(0.125, rel=1e-12)


@pytest.mark.parametrize("n, p, t", [(5, 0.2, 0.4), (10, 0.5, 0.3), (12, 0.7, 0.25), (8, 0.05, 0.9)])
def test_encoding_ratio_increasing(n, p, t):
    scheme = EncodingScheme(n=n, p=p, t=t)
    log_ratios = [encoding_log_ratio(scheme, k) for k in range(n + 1)]
    assert all(a < b for a, b in zip(log_ratios, log_ratios[1:]))
    floor = n * kl_binary(p + t, p)
    first = math.ceil((p + t) * n - 1e-9)
    assert all(value >= floor - 1e-9 * max(1.0, floor) for value in log_ratios[first:])


@pytest.mark.parametrize("n", [1, 6, 12])
def test_encoding_weights_compose_to_kl_bound(n):
    p, t = 0.3, 0.4
    scheme = EncodingScheme(n=n, p=p, t=t)
    weights = encoding_weights(scheme)
    assert math.fsum(weights.tolist()) == pytest.approx(1.0, abs=1e-12)
    ones = np.array([index.bit_count() for index in range(1 << n)])
    k = math.ceil((p + t) * n - 1e-9)
    product_law = np.power(p, ones) * np.power(1.0 - p, n - ones)
    tail = math.fsum(product_law[ones >= k].tolist())
    assert tail <= math.exp(-n * kl_binary(p + t, p)) + 1e-12


def test_encoding_weights_cap():
    with pytest.raises(ResourceError):
        encoding_weights(EncodingScheme(n=13, p=0.5, t=0.1))
