"""
Kullback-Leibler 散度

约定：0·ln(0/q) = 0；x·ln(x/0) = +∞ (x > 0)。
散度为 +∞ 时直接返回 math.inf，由调用方 (bounds) 转成概率为 0 的界。
"""
import math
from typing import Sequence

import numpy as np
from scipy.special import xlogy

from source.chernoff.schema.distribution import BinaryKLQuery, DiscreteDistribution
from source.chernoff.utils.errors import DomainError, ShapeError
from source.chernoff.utils.log_utils import log


def _check_probability(name: str, value: float) -> float:
    value = float(value)
    if not (0.0 <= value <= 1.0):
        raise DomainError(f"{name}={value} 不在 [0,1] 内")
    return value


def _relative_term(x, y):
    # x·ln(x) - x·ln(y)，两项都在 x = 0 时取 0
    return xlogy(x, x) - xlogy(x, y)


def kl_binary(a: float, p: float) -> float:
    """D(a‖p) = a ln(a/p) + (1-a) ln((1-a)/(1-p))"""
    a = _check_probability("a", a)
    p = _check_probability("p", p)
    if a == p:
        return 0.0
    total = float(_relative_term(a, p) + _relative_term(1.0 - a, 1.0 - p))
    if math.isinf(total):
        return math.inf
    # 相减带来的舍入误差不能让结果变负
    return max(total, 0.0)


def kl_binary_query(query: BinaryKLQuery) -> float:
    return kl_binary(query.a, query.p)


def _as_distribution(value) -> DiscreteDistribution:
    if isinstance(value, DiscreteDistribution):
        return value
    try:
        return DiscreteDistribution(weights=[float(w) for w in value])
    except ValueError as e:
        raise DomainError(f"非法分布: {e}") from e


def kl_general(P: DiscreteDistribution | Sequence[float], Q: DiscreteDistribution | Sequence[float]) -> float:
    """D(P‖Q) = Σ p_i ln(p_i/q_i)"""
    P = _as_distribution(P)
    Q = _as_distribution(Q)
    if P.m != Q.m:
        raise ShapeError(f"分布长度不一致: {P.m} != {Q.m}")
    p = np.asarray(P.weights, dtype=float)
    q = np.asarray(Q.weights, dtype=float)
    if np.array_equal(p, q):
        return 0.0
    terms = _relative_term(p, q)
    if np.isinf(terms).any():
        log.debug(f"D(P‖Q) 为 +inf: 存在 p_i > 0 而 q_i = 0 (m={P.m})")
        return math.inf
    return max(math.fsum(terms.tolist()), 0.0)
