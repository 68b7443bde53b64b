"""
证明中用到的两类构造

稳定选择器 S_γ(A)：Pr[S_γ(A) = i] = γ^{b_i} / C_γ(A)，b_i 为第 i 行之和；
编码论证：权函数 w(x) = (p+t)^{k_x}(1-p-t)^{n-k_x} 及似然比 w(x)/p_x。
"""
import math
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from source.chernoff.schema.selector import (
    AccuracyReport,
    EncodingScheme,
    ScoreMatrix,
    SelectorDistribution,
    StabilityReport,
)
from source.chernoff.utils.errors import DomainError, ResourceError, ShapeError
from source.chernoff.utils.log_utils import log

RATIO_TOL = 1e-12
MAX_WEIGHT_ENUM_N = 12


def _check_gamma(gamma: float) -> float:
    gamma = float(gamma)
    if gamma == 1.0:
        # m = 1 时 γ = 1 + √(ln m)/√n 恰好为 1
        raise DomainError("γ = 1 时 log_γ 没有定义 (m = 1 会得到这个 γ)，选择器要求 γ > 1")
    if not gamma > 1.0:
        raise DomainError(f"选择器要求 γ > 1，实际 γ={gamma}")
    return gamma


def _selector_log_probabilities(row_sums: np.ndarray, gamma: float) -> tuple[np.ndarray, float]:
    log_weights = row_sums * math.log(gamma)
    log_normalizer = float(logsumexp(log_weights))
    return log_weights - log_normalizer, log_normalizer


def selector_distribution(A: ScoreMatrix, gamma: float) -> SelectorDistribution:
    """在对数域做 softmax 得到 S_γ(A) 的分布"""
    gamma = _check_gamma(gamma)
    row_sums = A.row_sums
    log_probs, log_normalizer = _selector_log_probabilities(row_sums, gamma)
    probabilities = np.exp(log_probs)
    return SelectorDistribution(
        gamma=gamma,
        probabilities=probabilities.tolist(),
        log_normalizer=log_normalizer,
        row_sums=row_sums.tolist(),
    )


def sample_selector(dist: SelectorDistribution, seed: int, count: int) -> list[int]:
    """按给定种子做逆 CDF 抽样；累积值相同时取较小的下标"""
    if count < 0:
        raise DomainError(f"抽样次数必须非负，实际 {count}")
    if count == 0:
        return []
    cumulative = np.cumsum(dist.probabilities)
    cumulative[-1] = 1.0
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    uniforms = rng.random(count)
    indices = np.searchsorted(cumulative, uniforms, side="right")
    return np.minimum(indices, dist.m - 1).tolist()


def stability_audit(A: ScoreMatrix, column_index: int, replacement: Sequence[float],
                    gamma: float) -> StabilityReport:
    """替换第 column_index 列 (从 0 开始) 后，逐行比较选择概率"""
    gamma = _check_gamma(gamma)
    column = np.asarray(replacement, dtype=float)
    if column.shape != (A.m,):
        raise ShapeError(f"替换列需要 {A.m} 个元素，实际形状 {column.shape}")
    if not (0 <= column_index < A.n):
        raise ShapeError(f"列下标 {column_index} 不在 [0, {A.n}) 内")
    if np.any((column < 0.0) | (column > 1.0)):
        raise DomainError("替换列的元素必须在 [0,1] 内")

    neighbour = A.with_column(column_index, column)
    log_probs, log_c = _selector_log_probabilities(A.row_sums, gamma)
    log_probs_neighbour, log_c_neighbour = _selector_log_probabilities(neighbour.row_sums, gamma)
    ratios = np.exp(log_probs - log_probs_neighbour)

    lower, upper = gamma ** -2, gamma ** 2
    normalizer_log_ratio = log_c - log_c_neighbour
    normalizer_holds = abs(normalizer_log_ratio) <= math.log(gamma) + RATIO_TOL
    holds = bool(np.all(ratios >= lower - RATIO_TOL) and np.all(ratios <= upper + RATIO_TOL))
    return StabilityReport(
        gamma=gamma,
        column_index=column_index,
        ratios=ratios.tolist(),
        lower=lower,
        upper=upper,
        normalizer_log_ratio=normalizer_log_ratio,
        normalizer_holds=normalizer_holds,
        holds=holds and normalizer_holds,
    )


def accuracy_gap(A: ScoreMatrix, gamma: float) -> AccuracyReport:
    """max b_i - E_{i~S_γ(A)}[b_i]，应落在 [0, log_γ m] 内"""
    dist = selector_distribution(A, gamma)
    row_sums = np.asarray(dist.row_sums)
    expected = float(np.dot(dist.probabilities, row_sums))
    max_score = float(row_sums.max())
    gap = max_score - expected
    limit = math.log(A.m) / math.log(dist.gamma)
    return AccuracyReport(
        expected_score=expected,
        max_score=max_score,
        gap=gap,
        limit=limit,
        holds=-RATIO_TOL <= gap <= limit + RATIO_TOL,
    )


def encoding_log_ratio(scheme: EncodingScheme, k: int) -> float:
    """ln(w(x)/p_x) = k ln((p+t)/p) + (n-k) ln((1-p-t)/(1-p))，k 为 x 中 1 的个数"""
    n, p = scheme.n, scheme.p
    if not (0 <= k <= n):
        raise DomainError(f"k={k} 不在 [0, {n}] 内")
    if scheme.t == 0.0:
        return 0.0
    shifted = scheme.shifted
    ones_term = 0.0
    if k > 0:
        ones_term = math.inf if p == 0.0 else k * (math.log(shifted) - math.log(p))
    zeros_term = 0.0
    if n - k > 0:
        zeros_term = -math.inf if shifted >= 1.0 else (n - k) * (math.log1p(-shifted) - math.log1p(-p))
    total = ones_term + zeros_term
    if math.isnan(total):
        raise DomainError(f"k={k} 时 w(x) 与 p_x 同为 0，似然比没有定义")
    return total


def encoding_ratio(scheme: EncodingScheme, k: int) -> float:
    log_ratio = encoding_log_ratio(scheme, k)
    return math.inf if log_ratio > 709.0 else math.exp(log_ratio)


def encoding_weights(scheme: EncodingScheme) -> np.ndarray:
    """在 {0,1}^n 上枚举 w(x)，下标的第 i 位对应第 i+1 个比特"""
    if scheme.n > MAX_WEIGHT_ENUM_N:
        raise ResourceError(f"枚举要求 n ≤ {MAX_WEIGHT_ENUM_N}，实际 n={scheme.n}")
    shifted = scheme.shifted
    table = np.ones(1)
    for _ in range(scheme.n):
        table = np.concatenate([table * (1.0 - shifted), table * shifted])
    log.debug(f"编码权函数共 {table.size} 个值")
    return table
