"""
精确的参照值 (oracle)

精确分布尾概率、对 {0,1}^n 的穷举、以及期望最大值的精确计算。所有尾部求和都在对数域
按最大值平移后累加。
"""
import math
from fractions import Fraction
from functools import lru_cache
from typing import Literal, Mapping, Sequence

import numpy as np
from scipy.special import gammaln, logsumexp, xlogy

from source.chernoff.bounds import threshold_index
from source.chernoff.schema.oracle_specs import (
    BinomialSpec,
    HypergeometricClaimsReport,
    JointDistribution,
    Lemma1Report,
    NegativeCorrelationReport,
    UrnSpec,
    WeakBoundPipelineReport,
    bits_to_index,
)
from source.chernoff.utils.errors import DomainError, ResourceError, ShapeError
from source.chernoff.utils.log_utils import log
from source.chernoff.utils.logspace import log1mexp

# 枚举规模上限
MAX_PAIR_ENUM_N = 10
MAX_SINGLE_ENUM_N = 12
MAX_JOINT_N = 20
MAX_CLAIMS_N = 60
MAX_EXPECTED_MAX_N = 1000
MAX_EXPECTED_MAX_M = 10**6

SLACK_TOL = 1e-12


def binomial_log_pmf(n: int, p: float) -> np.ndarray:
    """ln Pr[B(n,p) = l]，l = 0..n；p ∈ {0,1} 时不可能的取值为 -inf"""
    support = np.arange(n + 1, dtype=float)
    log_choose = gammaln(n + 1.0) - gammaln(support + 1.0) - gammaln(n - support + 1.0)
    return log_choose + xlogy(support, p) + xlogy(n - support, 1.0 - p)


def _log_tail(log_terms: np.ndarray) -> float:
    if log_terms.size == 0 or np.all(np.isneginf(log_terms)):
        return -math.inf
    return float(logsumexp(log_terms))


def exact_binomial_tail(spec: BinomialSpec, k: int, direction: Literal["upper", "lower"] = "upper") -> float:
    """upper: Pr[B ≥ k]；lower: Pr[B ≤ k]"""
    n = spec.n
    if direction == "upper":
        if not (0 <= k <= n + 1):
            raise DomainError(f"上尾阈值 k={k} 不在 [0, {n + 1}] 内")
        if k == 0:
            return 1.0
        terms = binomial_log_pmf(n, spec.p)[k:]
    elif direction == "lower":
        if not (-1 <= k <= n + 1):
            raise DomainError(f"下尾阈值 k={k} 不在 [-1, {n + 1}] 内")
        if k >= n:
            return 1.0
        terms = binomial_log_pmf(n, spec.p)[:max(k + 1, 0)]
    else:
        raise DomainError(f"未知方向 {direction!r}")
    return min(math.exp(_log_tail(terms)), 1.0)


@lru_cache(maxsize=64)
def _log_factorials(size: int) -> np.ndarray:
    """ln 0!, ln 1!, ..., ln size!"""
    return gammaln(np.arange(size + 1, dtype=float) + 1.0)


def _log_choose(log_fact: np.ndarray, top, bottom):
    return log_fact[top] - log_fact[bottom] - log_fact[top - bottom]


def exact_hypergeometric_tail(spec: UrnSpec, k: int) -> float:
    """Pr[H(N,P,n) ≥ k] = Σ_{i≥k} C(P,i)C(N-P,n-i)/C(N,n)"""
    N, P, n = spec.N, spec.P, spec.n
    if not (0 <= k <= n + 1):
        raise DomainError(f"阈值 k={k} 不在 [0, {n + 1}] 内")
    # k 不超过支撑集下端时尾概率恰为 1
    if k <= max(n - (N - P), 0):
        return 1.0
    lo = max(k, n - (N - P), 0)
    hi = min(n, P)
    if lo > hi:
        return 0.0
    log_fact = _log_factorials(N)
    reds = np.arange(lo, hi + 1)
    log_terms = (_log_choose(log_fact, P, reds)
                 + _log_choose(log_fact, N - P, n - reds)
                 - _log_choose(log_fact, N, n))
    return min(math.exp(_log_tail(log_terms)), 1.0)


def exact_poisson_binomial_tail(p_list: Sequence[float], k: int) -> float:
    """成功概率各异的独立伯努利变量之和的上尾 Pr[X ≥ k]，逐个卷积得到精确分布"""
    n = len(p_list)
    if not (0 <= k <= n + 1):
        raise DomainError(f"阈值 k={k} 不在 [0, {n + 1}] 内")
    if k == 0:
        return 1.0
    pmf = np.ones(1)
    for p in p_list:
        pmf = np.convolve(pmf, [1.0 - p, p])
    return min(math.fsum(pmf[k:].tolist()), 1.0)


def verify_hypergeometric_claims(spec: UrnSpec, tau: float = 2.0) -> HypergeometricClaimsReport:
    """用有理数精确检查超几何证明中的两条引理

    引理一：C(N,n)^{-1} Σ_{i≥j} C(P,i)C(N-P,n-i)C(i,j) ≤ C(n,j) p^j，对每个 j
    引理二：C(N,n)^{-1} Σ_i C(P,i)C(N-P,n-i) τ^i ≤ (1+(τ-1)p)^n
    """
    N, P, n = spec.N, spec.P, spec.n
    if N > MAX_CLAIMS_N:
        raise ResourceError(f"精确有理数检查要求 N ≤ {MAX_CLAIMS_N}，实际 N={N}")
    if not tau >= 1.0:
        raise DomainError(f"τ 必须 ≥ 1，实际 τ={tau}")
    total = math.comb(N, n)
    weights = [math.comb(P, i) * math.comb(N - P, n - i) for i in range(n + 1)]

    claim1 = []
    for j in range(n + 1):
        numerator = sum(weights[i] * math.comb(i, j) for i in range(j, n + 1))
        lhs = Fraction(numerator, total)
        rhs = math.comb(n, j) * Fraction(P, N) ** j
        claim1.append(rhs - lhs)

    tau_q = Fraction(tau)
    p_q = Fraction(P, N)
    lhs2 = Fraction(sum(w * tau_q ** i for i, w in enumerate(weights)), total)
    rhs2 = (1 + (tau_q - 1) * p_q) ** n
    claim2 = rhs2 - lhs2

    holds = all(margin >= 0 for margin in claim1) and claim2 >= 0
    return HypergeometricClaimsReport(
        spec=spec,
        tau=tau,
        claim1_margins=[float(m) for m in claim1],
        claim2_margin=float(claim2),
        holds=holds,
    )


@lru_cache(maxsize=16)
def _subset_containment(n: int) -> np.ndarray:
    """contain[x, S] = 1 当且仅当 S ⊆ x (按位)"""
    masks = np.arange(1 << n)
    return ((masks[None, :] & ~masks[:, None]) == 0).astype(float)


@lru_cache(maxsize=32)
def _popcounts(n: int) -> np.ndarray:
    masks = np.arange(1 << n)
    counts = np.zeros(1 << n, dtype=np.int64)
    for bit in range(n):
        counts += (masks >> bit) & 1
    return counts


def ik_product_expectation(n: int, p: float, lam: float) -> float:
    """穷举 (X_1..X_n) 与随机下标集合 I 的全部 4^n 种组合，计算 E[∏_{i∈I} X_i]

    I 以概率 λ 独立包含每个下标；结果应等于 (λp + 1 - λ)^n。
    """
    if n > MAX_PAIR_ENUM_N:
        raise ResourceError(f"双重枚举要求 n ≤ {MAX_PAIR_ENUM_N}，实际 n={n}")
    if n < 0:
        raise DomainError(f"n 必须非负，实际 n={n}")
    if not (0.0 <= p <= 1.0 and 0.0 <= lam <= 1.0):
        raise DomainError(f"p={p}, λ={lam} 必须在 [0,1] 内")
    ones = _popcounts(n)
    outcome_mass = np.power(p, ones) * np.power(1.0 - p, n - ones)
    index_set_mass = np.power(lam, ones) * np.power(1.0 - lam, n - ones)
    log.debug(f"枚举 {4 ** n} 个 (x, S) 组合")
    return float(outcome_mass @ _subset_containment(n) @ index_set_mass)


def _superset_sums(n: int, dense: np.ndarray) -> np.ndarray:
    """f(I) = Σ_{x ⊇ I} mass(x)，即 E[∏_{i∈I} X_i]"""
    table = dense.reshape([2] * n).copy()
    for axis in range(n):
        lower = [slice(None)] * n
        upper = [slice(None)] * n
        lower[axis] = 0
        upper[axis] = 1
        table[tuple(lower)] += table[tuple(upper)]
    return table.reshape(-1)


def _subset_products(p_list: Sequence[float]) -> np.ndarray:
    """g(I) = ∏_{i∈I} p_i，下标的第 i 位对应 p_{i+1}"""
    table = np.ones(1)
    for p in p_list:
        table = np.concatenate([table, table * p])
    return table


def verify_negative_correlation(joint: JointDistribution, p_list: Sequence[float]) -> NegativeCorrelationReport:
    """枚举全部 2^n 个下标集合 I，检查 E[∏_{i∈I} X_i] ≤ ∏_{i∈I} p_i"""
    if len(p_list) != joint.n:
        raise ShapeError(f"p_list 长度 {len(p_list)} 与变量个数 {joint.n} 不一致")
    slack = _subset_products(p_list) - _superset_sums(joint.n, joint.dense)
    worst = int(np.argmin(slack))
    worst_slack = float(slack[worst])
    return NegativeCorrelationReport(
        holds=worst_slack >= -SLACK_TOL,
        worst_index_set=[bit + 1 for bit in range(joint.n) if worst >> bit & 1],
        worst_slack=worst_slack,
        checked=1 << joint.n,
    )


def exact_joint_tail(joint: JointDistribution, k: int) -> float:
    """Σ_{k_x ≥ k} mass(x)"""
    ones = _popcounts(joint.n)
    return min(math.fsum(joint.dense[ones >= k].tolist()), 1.0)


def _binomial_log_survival(n: int, p: float) -> tuple[np.ndarray, np.ndarray]:
    """(ln Pr[B ≥ k], ln Pr[B ≤ k])，k = 0..n"""
    log_pmf = binomial_log_pmf(n, p)
    with np.errstate(invalid="ignore"):
        log_sf = np.logaddexp.accumulate(log_pmf[::-1])[::-1]
        log_cdf = np.logaddexp.accumulate(log_pmf)
    return log_sf, log_cdf


def expected_max_with_floor(spec: BinomialSpec, m: int) -> float:
    """E[max{X^(1), ..., X^(m-1), pn}]，X^(i) 为独立的 B(n,p)

    记 c = pn、M = max X^(i)，则 E[max(M,c)] = c + (⌈c⌉-c)·Pr[M ≥ ⌈c⌉] + Σ_{k>⌈c⌉} Pr[M ≥ k]，
    其中 Pr[M ≥ k] = 1 - F(k-1)^{m-1}。
    """
    if m < 1:
        raise DomainError(f"m 必须 ≥ 1，实际 m={m}")
    n, p = spec.n, spec.p
    if n > MAX_EXPECTED_MAX_N or m > MAX_EXPECTED_MAX_M:
        raise ResourceError(f"要求 n ≤ {MAX_EXPECTED_MAX_N} 且 m ≤ {MAX_EXPECTED_MAX_M}，实际 n={n}, m={m}")
    floor_value = p * n
    if m == 1:
        return floor_value
    start = math.ceil(floor_value)
    if start > n:
        return floor_value
    log_sf, log_cdf = _binomial_log_survival(n, p)

    total = 0.0
    for k in range(max(start, 1), n + 1):
        # ln F(k-1)：上尾小时用 log1p(-sf) 保留精度
        if log_sf[k] < -math.log(2.0):
            log_cdf_below = log1mexp(float(log_sf[k]))
        else:
            log_cdf_below = float(log_cdf[k - 1])
        exceed = -math.expm1((m - 1) * log_cdf_below)
        weight = (start - floor_value) if k == start else 1.0
        total += weight * exceed
    return floor_value + total


def lemma1_tail_check(joint: JointDistribution, weights: Mapping[str, float] | np.ndarray,
                      s: float) -> Lemma1Report:
    """Pr_{x~joint}[w(x) ≥ s·p_x] ≤ 1/s，w 为有效权函数 (总权重 ≤ 1)"""
    if joint.n > MAX_SINGLE_ENUM_N:
        raise ResourceError(f"枚举要求 n ≤ {MAX_SINGLE_ENUM_N}，实际 n={joint.n}")
    if not s >= 1.0:
        raise DomainError(f"s 必须 ≥ 1，实际 s={s}")
    if isinstance(weights, np.ndarray):
        w = np.asarray(weights, dtype=float)
        if w.shape != (1 << joint.n,):
            raise ShapeError(f"权函数需要 2^{joint.n} 个值，实际形状 {w.shape}")
    else:
        w = np.zeros(1 << joint.n)
        for bits, value in weights.items():
            if len(bits) != joint.n:
                raise ShapeError(f"比特串 {bits!r} 长度与 n={joint.n} 不一致")
            w[bits_to_index(bits)] = float(value)
    if np.any(w < 0.0):
        raise DomainError("权函数必须非负")
    total = math.fsum(w.tolist())
    if total > 1.0 + SLACK_TOL:
        raise DomainError(f"权函数总和为 {total}，不是有效权函数")

    mass = joint.dense
    exceeding = (mass > 0.0) & (w >= s * mass)
    probability = math.fsum(mass[exceeding].tolist())
    bound = 1.0 / s
    return Lemma1Report(probability=probability, bound=bound, holds=probability <= bound + SLACK_TOL)


def weak_bound_pipeline(n: int, p: float, t: float) -> WeakBoundPipelineReport:
    """按弱化界的证明逐步核对：取 m = ⌈exp(((e-1)/(5e))² t² n)⌉，

    1 - (1-α)^{m-1} ≤ (E[max] - pn)/(tn) ≤ 5√(ln m)/(t√n)，α 为精确尾概率。
    """
    base = dict(n=n, p=p, t=t)
    if t <= 0.0 or t < 8.0 / math.sqrt(n):
        return WeakBoundPipelineReport(**base, applicable=False, reason="t < 8/√n，界本身为 vacuous")
    exponent = ((math.e - 1.0) / (5.0 * math.e)) ** 2 * t * t * n
    if exponent > n:
        return WeakBoundPipelineReport(**base, applicable=False, reason="m > e^n")
    if exponent > math.log(MAX_EXPECTED_MAX_M):
        return WeakBoundPipelineReport(**base, applicable=False, reason=f"m 超过 {MAX_EXPECTED_MAX_M}")
    m = math.ceil(math.exp(exponent))
    if math.log(m) > n:
        return WeakBoundPipelineReport(**base, applicable=False, reason="⌈m⌉ > e^n")

    spec = BinomialSpec(n=n, p=p)
    k = threshold_index(n, p, t)
    alpha = exact_binomial_tail(spec, k, "upper") if k <= n else 0.0
    max_exceed = -math.expm1((m - 1) * math.log1p(-alpha)) if alpha < 1.0 else 1.0
    markov = (expected_max_with_floor(spec, m) - p * n) / (t * n)
    lemma = 5.0 * math.sqrt(math.log(m)) / (t * math.sqrt(n))
    holds = max_exceed <= markov + SLACK_TOL and markov <= lemma + SLACK_TOL
    return WeakBoundPipelineReport(
        **base, applicable=True, m=m, alpha=alpha,
        max_exceed_probability=max_exceed, markov_bound=markov, lemma_bound=lemma, holds=holds,
    )
