"""
精确参照值的测试
"""
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from source.chernoff.bounds import expected_max_bound, kl_tail_bound, threshold_index
from source.chernoff.oracles import (
    binomial_log_pmf,
    exact_binomial_tail,
    exact_hypergeometric_tail,
    exact_joint_tail,
    exact_poisson_binomial_tail,
    expected_max_with_floor,
    ik_product_expectation,
    lemma1_tail_check,
    verify_hypergeometric_claims,
    verify_negative_correlation,
    weak_bound_pipeline,
)
from source.chernoff.schema import BinomialSpec, JointDistribution, TailQuery, UrnSpec
from source.chernoff.schema.oracle_specs import bits_to_index, index_to_bits
from source.chernoff.utils.errors import DomainError, ResourceError, ShapeError

UNIFORM_2 = {"00": 0.25, "01": 0.25, "10": 0.25, "11": 0.25}


def test_binomial_tail_examples():
    spec = BinomialSpec(n=10, p=0.5)
    assert exact_binomial_tail(spec, 5) == pytest.approx(638 / 1024, abs=1e-15)
    assert exact_binomial_tail(spec, 0) == pytest.approx(1.0, abs=1e-15)
    assert exact_binomial_tail(spec, 8) == pytest.approx(56 / 1024, abs=1e-15)
    assert exact_binomial_tail(spec, 11) == 0.0
    assert exact_binomial_tail(spec, -1, "lower") == 0.0
    with pytest.raises(DomainError):
        exact_binomial_tail(spec, 12)


def test_binomial_log_pmf_degenerate():
    assert np.exp(binomial_log_pmf(4, 0.0)).tolist() == [1.0, 0.0, 0.0, 0.0, 0.0]
    assert np.exp(binomial_log_pmf(4, 1.0))[-1] == 1.0


@given(st.integers(1, 400), st.floats(0.0, 1.0))
def test_binomial_tails_are_complementary(n, p):
    spec = BinomialSpec(n=n, p=p)
    for k in {0, n // 3, n // 2, n}:
        total = exact_binomial_tail(spec, k, "upper") + exact_binomial_tail(spec, k - 1, "lower")
        assert total == pytest.approx(1.0, abs=1e-12)


def test_large_n_tail_does_not_underflow_to_nan():
    tail = exact_binomial_tail(BinomialSpec(n=1000, p=0.5), 900)
    assert 0.0 <= tail < 1e-100
    assert not math.isnan(tail)


def test_hypergeometric_tail_examples():
    spec = UrnSpec(N=10, P=5, n=4)
    assert exact_hypergeometric_tail(spec, 3) == pytest.approx(55 / 210, abs=1e-13)
    assert exact_hypergeometric_tail(spec, 0) == 1.0
    assert exact_hypergeometric_tail(spec, 5) == 0.0


def test_tails_at_lowest_support_are_exactly_one():
    assert exact_hypergeometric_tail(UrnSpec(N=10, P=5, n=4), 0) == 1.0
    # 支撑集为 {2}：N=4, P=2 时抽完全部球
    assert exact_hypergeometric_tail(UrnSpec(N=4, P=2, n=4), 2) == 1.0
    assert exact_hypergeometric_tail(UrnSpec(N=12, P=9, n=6), 3) == 1.0
    assert exact_binomial_tail(BinomialSpec(n=37, p=0.41), 0) == 1.0
    assert exact_binomial_tail(BinomialSpec(n=37, p=0.41), 37, "lower") == 1.0
    assert exact_poisson_binomial_tail([0.3, 0.6, 0.9], 0) == 1.0


def test_poisson_binomial_matches_binomial():
    assert exact_poisson_binomial_tail([0.5] * 10, 8) == pytest.approx(56 / 1024, abs=1e-15)
    assert exact_poisson_binomial_tail([0.2, 0.4], 2) == pytest.approx(0.08, abs=1e-15)


def test_hypergeometric_claims_examples():
    report = verify_hypergeometric_claims(UrnSpec(N=10, P=5, n=4), tau=2.0)
    assert report.holds
    assert report.claim1_margins[0] == 0.0
    assert report.claim1_margins[4] == pytest.approx(0.0625 - 5 / 210, abs=1e-15)
    lhs = Fraction(5 + 100 + 400 + 400 + 80, 210)
    assert report.claim2_margin == pytest.approx(float(Fraction(81, 16) - lhs), abs=1e-15)


@pytest.mark.parametrize("tau", [1.0, 1.5, 2.0, 4.0])
@pytest.mark.parametrize("N, P, n", [(1, 0, 1), (7, 3, 5), (20, 20, 20), (60, 17, 33)])
def test_hypergeometric_claims_hold(N, P, n, tau):
    assert verify_hypergeometric_claims(UrnSpec(N=N, P=P, n=n), tau).holds


def test_hypergeometric_claims_cap():
    with pytest.raises(ResourceError):
        verify_hypergeometric_claims(UrnSpec(N=61, P=3, n=4))


def test_ik_product_expectation():
    assert ik_product_expectation(3, 0.5, 0.5) == pytest.approx(0.421875, abs=1e-15)
    assert ik_product_expectation(6, 0.37, 0.0) == pytest.approx(1.0, abs=1e-15)
    assert ik_product_expectation(2, 0.3, 1.0) == pytest.approx(0.09, abs=1e-15)
    with pytest.raises(ResourceError):
        ik_product_expectation(11, 0.5, 0.5)


@pytest.mark.parametrize("n", [1, 4, 10])
def test_ik_product_expectation_identity(n):
    for p in (0.0, 0.3, 0.8, 1.0):
        for lam in (0.0, 0.2, 0.9, 1.0):
            assert ik_product_expectation(n, p, lam) == pytest.approx((lam * p + 1 - lam) ** n, abs=1e-12)


def test_bit_index_convention():
    assert bits_to_index("100") == 1
    assert index_to_bits(1, 3) == "100"
    assert all(bits_to_index(index_to_bits(i, 5)) == i for i in range(32))


def test_joint_distribution_constructors():
    urn = JointDistribution.urn(4, 2, 2)
    assert urn.mass["11"] == pytest.approx(1 / 6, abs=1e-15)
    assert urn.mass["10"] == pytest.approx(1 / 3, abs=1e-15)
    product = JointDistribution.product([0.2, 0.7])
    assert product.mass["01"] == pytest.approx(0.8 * 0.7, abs=1e-15)
    with pytest.raises(ValueError):
        JointDistribution(n=2, mass={"00": 0.5, "1": 0.5})
    with pytest.raises(ValueError):
        JointDistribution(n=2, mass={"00": 0.5, "11": 0.4})


def test_negative_correlation_examples():
    urn = verify_negative_correlation(JointDistribution.urn(4, 2, 2), [0.5, 0.5])
    assert urn.holds
    assert urn.checked == 4
    assert abs(urn.worst_slack) <= 1e-12

    independent = verify_negative_correlation(JointDistribution.product([0.3, 0.6, 0.5]), [0.3, 0.6, 0.5])
    assert independent.holds
    assert independent.checked == 8
    assert abs(independent.worst_slack) <= 1e-12

    correlated = verify_negative_correlation(JointDistribution(n=2, mass={"00": 0.5, "11": 0.5}), [0.5, 0.5])
    assert not correlated.holds
    assert correlated.worst_slack == pytest.approx(-0.25, abs=1e-15)

    with pytest.raises(ShapeError):
        verify_negative_correlation(JointDistribution.urn(4, 2, 2), [0.5])


@pytest.mark.parametrize("N, P, n", [(8, 3, 5), (12, 6, 6), (20, 7, 8)])
def test_urn_joint_tail_is_dominated(N, P, n):
    joint = JointDistribution.urn(N, P, n)
    p = P / N
    assert verify_negative_correlation(joint, [p] * n).holds
    for t in np.linspace(0.0, 1.0 - p, 7):
        k = threshold_index(n, p, float(t))
        exact = exact_joint_tail(joint, k) if k <= n else 0.0
        assert exact <= kl_tail_bound(TailQuery(n=n, p=p, t=float(t))).value + 1e-12
        assert exact == pytest.approx(exact_hypergeometric_tail(UrnSpec(N=N, P=P, n=n), min(k, n + 1)), abs=1e-12)


def test_exact_joint_tail_examples():
    assert exact_joint_tail(JointDistribution(n=2, mass=UNIFORM_2), 0) == 1.0
    product = JointDistribution.product([0.5] * 10)
    assert exact_joint_tail(product, 8) == pytest.approx(56 / 1024, abs=1e-15)
    assert exact_joint_tail(JointDistribution.urn(4, 2, 2), 2) == pytest.approx(1 / 6, abs=1e-15)


def test_expected_max_examples():
    spec = BinomialSpec(n=4, p=0.5)
    assert expected_max_with_floor(spec, 2) == pytest.approx(2.375, abs=1e-12)
    assert expected_max_with_floor(spec, 1) == 2.0
    assert expected_max_with_floor(spec, 3) == pytest.approx(678 / 256, abs=1e-12)
    with pytest.raises(DomainError):
        expected_max_with_floor(spec, 0)


def test_expected_max_non_integer_floor():
    # c = 1.2：E[max(X, 1.2)] = 1.2·Pr[X ≤ 1] + Σ_{k≥2} k·Pr[X = k]
    spec = BinomialSpec(n=3, p=0.4)
    pmf = [0.216, 0.432, 0.288, 0.064]
    expected = 1.2 * (pmf[0] + pmf[1]) + 2 * pmf[2] + 3 * pmf[3]
    assert expected_max_with_floor(spec, 2) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("n", [1, 10, 150, 300])
def test_expected_max_below_lemma_bound(n):
    for p in (0.1, 0.5, 0.9):
        for m in (2, 4, 16, 256):
            if math.log(m) > n:
                continue
            assert expected_max_with_floor(BinomialSpec(n=n, p=p), m) <= expected_max_bound(n, p, m) + 1e-12


def test_lemma1_examples():
    uniform = JointDistribution(n=2, mass=UNIFORM_2)
    assert lemma1_tail_check(uniform, UNIFORM_2, 2.0).probability == 0.0
    edge = lemma1_tail_check(uniform, {"00": 1.0}, 4.0)
    assert edge.probability == 0.25 and edge.bound == 0.25 and edge.holds
    assert lemma1_tail_check(uniform, {"01": 0.3, "10": 0.3}, 1.0).holds


def test_lemma1_errors():
    uniform = JointDistribution(n=2, mass=UNIFORM_2)
    with pytest.raises(DomainError):
        lemma1_tail_check(uniform, {"00": 0.7, "11": 0.7}, 2.0)
    with pytest.raises(DomainError):
        lemma1_tail_check(uniform, {"00": -0.1}, 2.0)
    with pytest.raises(ShapeError):
        lemma1_tail_check(uniform, np.ones(3) / 3, 2.0)


def test_lemma1_random_weights():
    rng = np.random.default_rng(11)
    for n in (2, 5, 9):
        joint = JointDistribution.product(rng.random(n).tolist())
        for _ in range(20):
            raw = rng.exponential(size=1 << n)
            weights = raw / raw.sum() * rng.random()
            for s in (1.0, 2.0, 10.0, 100.0):
                assert lemma1_tail_check(joint, weights, s).holds


def test_weak_bound_pipeline():
    report = weak_bound_pipeline(400, 0.3, 0.5)
    assert report.applicable
    assert report.m == math.ceil(math.exp(((math.e - 1) / (5 * math.e)) ** 2 * 0.25 * 400))
    assert report.holds
    assert 0.0 < report.alpha < 1.0
    assert report.markov_bound <= report.lemma_bound

    vacuous = weak_bound_pipeline(100, 0.5, 0.3)
    assert not vacuous.applicable
    assert vacuous.holds
