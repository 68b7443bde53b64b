"""
对数域算术的小工具
"""
import math

# 超过该值时 math.exp 溢出
_MAX_LOG = 709.0


def safe_exp(log_value: float) -> float:
    """exp，溢出时返回 +inf"""
    if log_value > _MAX_LOG:
        return math.inf
    return math.exp(log_value)


def log1mexp(log_value: float) -> float:
    """ln(1 - e^{log_value})，log_value ≤ 0"""
    if log_value >= 0.0:
        return -math.inf
    if log_value > -math.log(2.0):
        return math.log(-math.expm1(log_value))
    return math.log1p(-math.exp(log_value))
