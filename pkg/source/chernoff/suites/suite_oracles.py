"""
精确参照值自身的验证：超几何引理、乘积期望恒等式、有效权函数、期望最大值、负相关。
"""
import math

import numpy as np

from source.chernoff.bounds import (
    expected_max_bound,
    expected_max_gamma_bound,
    hypergeometric_bound,
    kl_tail_bound,
    selector_gamma,
    threshold_index,
)
from source.chernoff.oracles import (
    MAX_PAIR_ENUM_N,
    MAX_SINGLE_ENUM_N,
    exact_hypergeometric_tail,
    exact_joint_tail,
    expected_max_with_floor,
    ik_product_expectation,
    lemma1_tail_check,
    verify_hypergeometric_claims,
    verify_negative_correlation,
)
from source.chernoff.schema.oracle_specs import BinomialSpec, JointDistribution, UrnSpec
from source.chernoff.schema.query import TailQuery
from source.chernoff.schema.suite import SuiteOptions
from source.chernoff.suites.base import Tally, register, suite_rng

CLAIM_TAUS = (1.0, 1.5, 2.0, 4.0)
LEMMA1_SCALES = (1.0, 2.0, 10.0, 100.0)
LEMMA3_MS = (2, 4, 16, 256)
TENTHS = [i / 10 for i in range(11)]
MAX_CLAIM_N = 60
TAIL_URN_SIZES = (10, 50, 100, 300)
MAX_JOINT_URN_N = 20


def _strided(upper: int, points: int) -> list[int]:
    """0..upper 上大约 points 个均匀整数，含两端"""
    return sorted({round(upper * i / (points - 1)) for i in range(points)})


@register("hypergeometric")
def hypergeometric_suite(tally: Tally, options: SuiteOptions) -> None:
    # 两条引理：N ≤ 20 全部 (P, n)，更大的 N 取等距网格
    max_N = min(options.max_n or MAX_CLAIM_N, MAX_CLAIM_N)
    for N in range(1, max_N + 1):
        values = range(N + 1) if N <= 20 else _strided(N, 5)
        for P in values:
            for n in values:
                for tau in CLAIM_TAUS:
                    report = verify_hypergeometric_claims(UrnSpec(N=N, P=P, n=n), tau)
                    worst = min([*report.claim1_margins, report.claim2_margin])
                    tally.record(report.holds, f"claims N={N}, P={P}, n={n}, τ={tau}", worst)

    # 无放回抽样的尾概率 ≤ p = P/N 时的 KL 界
    sizes = [size for size in TAIL_URN_SIZES if options.max_n is None or size <= options.max_n]
    for N in sizes or TAIL_URN_SIZES[:1]:
        for P in _strided(N, 6):
            for n in _strided(N, 6)[1:]:
                p = P / N
                for t in np.linspace(0.0, 1.0 - p, 10):
                    t = float(t)
                    k = threshold_index(n, p, t)
                    exact = exact_hypergeometric_tail(UrnSpec(N=N, P=P, n=n), k) if k <= n else 0.0
                    tally.check_le(exact, hypergeometric_bound(N, P, n, t).value,
                                   f"hypergeometric N={N}, P={P}, n={n}, t={t:.6g}")

    spot = exact_hypergeometric_tail(UrnSpec(N=10, P=5, n=4), 3)
    tally.check_close(spot, 55 / 210, "Pr[H(10,5,4) ≥ 3]", abs_tol=1e-13)


@register("eq2")
def eq2_suite(tally: Tally, options: SuiteOptions) -> None:
    max_n = min(options.max_n or MAX_PAIR_ENUM_N, MAX_PAIR_ENUM_N)
    for n in range(1, max_n + 1):
        for p in TENTHS:
            for lam in TENTHS:
                enumerated = ik_product_expectation(n, p, lam)
                closed = (lam * p + 1.0 - lam) ** n
                tally.check_close(enumerated, closed, f"E[∏X_i] at n={n}, p={p}, λ={lam}", abs_tol=1e-12)


def _random_weights(rng: np.random.Generator, size: int) -> np.ndarray:
    """非负随机值，归一化到 [0,1] 上均匀抽取的总权重"""
    raw = rng.exponential(size=size)
    # 一部分权函数集中在少数比特串上
    if rng.random() < 0.5:
        raw *= rng.random(size) < 0.1
    if raw.sum() == 0.0:
        raw[rng.integers(size)] = 1.0
    return raw / raw.sum() * rng.random()


@register("lemma1", randomized=True)
def lemma1_suite(tally: Tally, options: SuiteOptions) -> None:
    rng = suite_rng(options, 1)
    max_n = min(options.max_n or MAX_SINGLE_ENUM_N, MAX_SINGLE_ENUM_N)
    for n in range(2, max_n + 1):
        for trial in range(100):
            if trial % 2 == 0:
                joint = JointDistribution.product(rng.random(n).tolist())
            else:
                dense = rng.dirichlet(np.ones(1 << n))
                dense /= math.fsum(dense.tolist())
                joint = JointDistribution.from_dense(n, dense)
            weights = _random_weights(rng, 1 << n)
            for s in LEMMA1_SCALES:
                report = lemma1_tail_check(joint, weights, s)
                tally.check_le(report.probability, report.bound, f"n={n}, trial={trial}, s={s}")

    # 取等号的情形：均匀分布，w 把全部权重放在一个比特串上，s = 4
    uniform = JointDistribution(n=2, mass={"00": 0.25, "01": 0.25, "10": 0.25, "11": 0.25})
    edge = lemma1_tail_check(uniform, {"11": 1.0}, 4.0)
    tally.check_close(edge.probability, 0.25, "equality edge probability", abs_tol=1e-15)
    tally.check_le(edge.probability, edge.bound, "equality edge holds")


@register("lemma3")
def lemma3_suite(tally: Tally, options: SuiteOptions) -> None:
    max_n = min(options.max_n or 300, 300)
    for n in range(1, max_n + 1):
        for p in TENTHS[1:-1]:
            spec = BinomialSpec(n=n, p=p)
            for m in LEMMA3_MS:
                if math.log(m) > n:
                    continue
                value = expected_max_with_floor(spec, m)
                label = f"n={n}, p={p}, m={m}"
                tally.check_le(value, expected_max_bound(n, p, m), f"E[max] ≤ pn + 5√(n ln m) {label}")
                for gamma in (1.1, 1.5, 2.0, selector_gamma(n, m)):
                    tally.check_le(value, expected_max_gamma_bound(n, p, m, gamma),
                                   f"E[max] ≤ γ²pn + log_γ m {label}, γ={gamma:.6g}")
    spot = expected_max_with_floor(BinomialSpec(n=4, p=0.5), 2)
    tally.check_close(spot, 2.375, "E[max(B(4,1/2), 2)]", abs_tol=1e-12)


@register("negative-correlation")
def negative_correlation_suite(tally: Tally, options: SuiteOptions) -> None:
    max_N = min(options.max_n or MAX_JOINT_URN_N, MAX_JOINT_URN_N)
    for N in range(1, max_N + 1):
        for n in range(1, min(N, 8) + 1):
            for P in range(N + 1):
                p = P / N
                joint = JointDistribution.urn(N, P, n)
                report = verify_negative_correlation(joint, [p] * n)
                tally.record(report.holds, f"urn N={N}, P={P}, n={n} worst set {report.worst_index_set}",
                             report.worst_slack)
                for t in np.linspace(0.0, 1.0 - p, 5):
                    t = float(t)
                    k = threshold_index(n, p, t)
                    exact = exact_joint_tail(joint, k) if k <= n else 0.0
                    bound = kl_tail_bound(TailQuery(n=n, p=p, t=t)).value
                    tally.check_le(exact, bound, f"joint tail N={N}, P={P}, n={n}, t={t:.6g}")

    independent = JointDistribution.product([0.3, 0.6, 0.5])
    tally.record(verify_negative_correlation(independent, [0.3, 0.6, 0.5]).holds, "independent family passes")
    correlated = JointDistribution(n=2, mass={"00": 0.5, "11": 0.5})
    tally.record(not verify_negative_correlation(correlated, [0.5, 0.5]).holds,
                 "perfectly correlated family is rejected")
