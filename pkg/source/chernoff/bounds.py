"""
尾概率界的闭式计算

所有界先在对数域计算，再取指数得到线性值。value ≥ 1 的界原样返回并标记 vacuous，不做截断。
"""
import math
from typing import Literal, Sequence

import numpy as np
from scipy.special import logsumexp, xlogy

from source.chernoff.divergence import kl_binary
from source.chernoff.schema.query import ADMISSIBLE_TOL, BoundResult, MultiplicativeQuery, TailQuery
from source.chernoff.utils.errors import DomainError, UnsupportedError
from source.chernoff.utils.log_utils import log

ParametricMethod = Literal["moment", "ik"]

# 离散化阈值时，与整数相差不超过这么多个 ulp 的乘积视为整数
_SNAP_ULPS = 8


def threshold_index(n: int, p: float, t: float) -> int:
    """事件 X ≥ (p+t)n 对应的整数阈值 k = ⌈(p+t)n⌉"""
    x = (p + t) * n
    nearest = round(x)
    # p、t 的舍入误差经乘以 n 放大，容差按 max(x, n) 的 ulp 计
    if abs(x - nearest) <= _SNAP_ULPS * math.ulp(max(abs(x), float(n))):
        return int(nearest)
    return int(math.ceil(x))


def _query_inputs(q: TailQuery) -> dict:
    return {"n": q.n, "p": q.p, "t": q.t, "direction": q.direction}


def kl_tail_bound(q: TailQuery, name: str | None = None) -> BoundResult:
    """e^{-n·D(p±t‖p)}

    下尾按 X' = n - X 改写成 1-p 上的上尾计算，两者逐位相同。
    """
    if q.direction == "lower":
        mirrored = kl_tail_bound(q.mirrored())
        return BoundResult.from_log(name or "kl-lower", mirrored.log_value, _query_inputs(q))
    shifted = min(q.p + q.t, 1.0)
    divergence = kl_binary(shifted, q.p)
    log_value = -math.inf if math.isinf(divergence) else -q.n * divergence
    return BoundResult.from_log(name or "kl-upper", log_value, _query_inputs(q))


def parametric_bound(q: TailQuery, lam: float, method: ParametricMethod = "moment") -> BoundResult:
    """对任意 λ 成立的参数形式

    moment: (p e^λ + 1 - p)^n / e^{λ(p+t)n}
    ik:     (λp + 1 - λ)^n / (1-λ)^{(1-p-t)n}，λ ∈ (0,1]
    """
    if q.direction != "upper":
        raise UnsupportedError(f"参数形式只支持上尾，收到 {q.direction}")
    lam = float(lam)
    inputs = {**_query_inputs(q), "lambda": lam, "method": method}
    if method == "moment":
        if not lam > 0.0:
            raise DomainError(f"矩方法要求 λ > 0，实际 λ={lam}")
        # ln(p e^λ + 1 - p)，p ∈ {0,1} 时权重为 0 的项自动消去
        log_mgf = float(logsumexp([lam, 0.0], b=[q.p, 1.0 - q.p]))
        log_value = q.n * (log_mgf - lam * (q.p + q.t))
    elif method == "ik":
        if not (0.0 < lam <= 1.0):
            raise DomainError(f"IK 方法要求 λ ∈ (0,1]，实际 λ={lam}")
        rest = max(1.0 - q.p - q.t, 0.0)
        log_numerator = float(np.log(lam * q.p + 1.0 - lam)) if lam * q.p + 1.0 - lam > 0.0 else -math.inf
        log_value = q.n * (log_numerator - float(xlogy(rest, 1.0 - lam)))
        if math.isnan(log_value):
            raise DomainError(f"λ={lam}, p={q.p}, t={q.t} 时 IK 形式为 0/0，没有定义")
    else:
        raise DomainError(f"未知方法 {method!r}")
    return BoundResult.from_log(method, log_value, inputs)


def optimal_lambda(p: float, t: float, method: ParametricMethod = "moment") -> float:
    """使参数形式取最小值的 λ"""
    if not (0.0 < p < 1.0):
        raise DomainError(f"最优 λ 要求 0 < p < 1，实际 p={p}")
    if method == "moment":
        if not (0.0 < t < 1.0 - p):
            raise DomainError(f"矩方法的最优 λ 要求 0 < t < 1-p，实际 t={t}, p={p}")
        return math.log((1.0 - p) * (p + t) / (p * (1.0 - p - t)))
    if method == "ik":
        if not (0.0 < t <= 1.0 - p + ADMISSIBLE_TOL):
            raise DomainError(f"IK 方法的最优 λ 要求 0 < t ≤ 1-p，实际 t={t}, p={p}")
        return min(t / ((1.0 - p) * (p + t)), 1.0)
    raise DomainError(f"未知方法 {method!r}")


def chvatal_bound(q: TailQuery, tau: float) -> BoundResult:
    """(pτ + 1 - p)^n / τ^{(p+t)n}，τ ≥ 1；即 λ = ln τ 时的矩方法形式"""
    tau = float(tau)
    if not tau >= 1.0:
        raise DomainError(f"τ 必须 ≥ 1，实际 τ={tau}")
    if tau == 1.0:
        return BoundResult.from_log("chvatal", 0.0, {**_query_inputs(q), "tau": tau})
    result = parametric_bound(q, math.log(tau), "moment")
    return BoundResult.from_log("chvatal", result.log_value, {**_query_inputs(q), "tau": tau})


def chvatal_integer_bound(n: int, p: float, k: int, tau: float) -> BoundResult:
    """整数阈值形式 (pτ + 1 - p)^n / τ^k，超几何情形的证明用的就是这个形式"""
    tau = float(tau)
    if not tau >= 1.0:
        raise DomainError(f"τ 必须 ≥ 1，实际 τ={tau}")
    if not (0 <= k <= n):
        raise DomainError(f"k={k} 不在 [0, n] 内")
    log_value = n * math.log(p * tau + 1.0 - p) - k * math.log(tau)
    return BoundResult.from_log("chvatal-integer", log_value, {"n": n, "p": p, "k": k, "tau": tau})


def multiplicative_bound(q: MultiplicativeQuery) -> BoundResult:
    """(e^δ / (1+δ)^{1+δ})^μ 与 (e^{-δ} / (1-δ)^{1-δ})^μ，0^0 取 1"""
    inputs = q.model_dump()
    if q.direction == "upper":
        log_value = q.mu * (q.delta - float(xlogy(1.0 + q.delta, 1.0 + q.delta)))
        return BoundResult.from_log("mult-upper", log_value, inputs)
    if q.direction == "lower":
        if q.delta > 1.0:
            raise DomainError(f"下尾要求 δ ≤ 1，实际 δ={q.delta}")
        log_value = q.mu * (-q.delta - float(xlogy(1.0 - q.delta, 1.0 - q.delta)))
        return BoundResult.from_log("mult-lower", log_value, inputs)
    raise UnsupportedError("乘法形式没有双侧版本，请使用 simplified_bound")


def simplified_bound(q: MultiplicativeQuery) -> BoundResult:
    """下尾 e^{-δ²μ/2}，上尾 e^{-min{δ²,δ}μ/4}，双侧 2e^{-min{δ²,δ}μ/4}"""
    inputs = q.model_dump()
    if q.direction == "lower":
        if not (0.0 < q.delta < 1.0):
            raise DomainError(f"简化下尾界要求 δ ∈ (0,1)，实际 δ={q.delta}")
        return BoundResult.from_log("simple-lower", -q.delta ** 2 * q.mu / 2.0, inputs)

    exponent = -min(q.delta ** 2, q.delta) * q.mu / 4.0
    note = None
    if q.n is not None and (1.0 + q.delta) * q.mu > q.n * (1.0 + ADMISSIBLE_TOL):
        # (1+δ)p > 1：阈值超过 n，真实概率为 0，仍返回公式值
        note = f"(1+δ)μ = {(1.0 + q.delta) * q.mu} > n = {q.n}; the event is empty"
        log.warning(f"简化上尾界的前提 (1+δ)p ≤ 1 不成立: {note}")
    if q.direction == "upper":
        return BoundResult.from_log("simple-upper", exponent, inputs, note=note)
    return BoundResult.from_log("two-sided", math.log(2.0) + exponent, inputs, note=note)


def absolute_threshold_bound(mu: float, t_abs: float) -> BoundResult:
    """t ≥ 2eμ 时 Pr[X ≥ t] ≤ 2^{-t}"""
    mu = float(mu)
    t_abs = float(t_abs)
    if mu < 0.0:
        raise DomainError(f"μ 必须非负，实际 μ={mu}")
    floor = 2.0 * math.e * mu
    if t_abs < floor * (1.0 - ADMISSIBLE_TOL):
        raise DomainError(f"需要 t ≥ 2eμ = {floor}，实际 t={t_abs}")
    return BoundResult.from_log("threshold", -t_abs * math.log(2.0), {"mu": mu, "t_abs": t_abs})


def steinke_ullman_bound(n: int, t: float) -> BoundResult:
    """弱化版本 e^{1 - t²n/64}；t < 8/√n 时必然 vacuous"""
    if n < 1:
        raise DomainError(f"n 必须 ≥ 1，实际 n={n}")
    if not (0.0 <= t <= 1.0):
        raise DomainError(f"t={t} 不在 [0,1] 内")
    return BoundResult.from_log("su-weak", 1.0 - t * t * n / 64.0, {"n": n, "t": t})


def mean_parameter(p_list: Sequence[float]) -> float:
    """p = (1/n) Σ p_i"""
    values = [float(p) for p in p_list]
    if not values:
        raise DomainError("概率列表为空")
    for p in values:
        if not (0.0 <= p <= 1.0):
            raise DomainError(f"概率 {p} 不在 [0,1] 内")
    return min(max(math.fsum(values) / len(values), 0.0), 1.0)


def hoeffding_bound(p_list: Sequence[float], t: float) -> BoundResult:
    """成功概率各异 (或负相关) 时，用均值参数代入 KL 形式"""
    p = mean_parameter(p_list)
    result = kl_tail_bound(TailQuery(n=len(p_list), p=p, t=t, direction="upper"), name="hoeffding")
    return result.model_copy(update={"inputs": {**result.inputs, "p_list": list(p_list)}})


def hypergeometric_bound(N: int, P: int, n: int, t: float) -> BoundResult:
    """无放回抽样：p = P/N 代入同一个 KL 形式"""
    if not (0 <= P <= N and 1 <= n <= N):
        raise DomainError(f"需要 0 ≤ P ≤ N 且 1 ≤ n ≤ N，实际 N={N}, P={P}, n={n}")
    result = kl_tail_bound(TailQuery(n=n, p=P / N, t=t, direction="upper"), name="hypergeometric")
    return result.model_copy(update={"inputs": {**result.inputs, "N": N, "P": P}})


def product_form_bound(p_list: Sequence[float], t: float, lam: float,
                       method: ParametricMethod = "moment") -> BoundResult:
    """算术-几何平均放缩之前的乘积形式，不会比均值参数下的 parametric_bound 更大"""
    p_values = np.asarray([float(p) for p in p_list], dtype=float)
    p = mean_parameter(p_values)
    q = TailQuery(n=len(p_values), p=p, t=t, direction="upper")
    lam = float(lam)
    inputs = {"p_list": p_values.tolist(), "t": t, "lambda": lam, "method": method}
    if method == "moment":
        if not lam > 0.0:
            raise DomainError(f"矩方法要求 λ > 0，实际 λ={lam}")
        log_mgf = logsumexp(np.stack([np.full_like(p_values, lam), np.zeros_like(p_values)]),
                            b=np.stack([p_values, 1.0 - p_values]), axis=0)
        log_value = math.fsum(log_mgf.tolist()) - lam * (q.p + q.t) * q.n
    elif method == "ik":
        if not (0.0 < lam <= 1.0):
            raise DomainError(f"IK 方法要求 λ ∈ (0,1]，实际 λ={lam}")
        with np.errstate(divide="ignore"):
            log_terms = np.log(1.0 - lam + lam * p_values)
        rest = max(1.0 - q.p - q.t, 0.0)
        log_value = math.fsum(log_terms.tolist()) - q.n * float(xlogy(rest, 1.0 - lam))
        if math.isnan(log_value):
            raise DomainError(f"λ={lam} 时乘积形式为 0/0，没有定义")
    else:
        raise DomainError(f"未知方法 {method!r}")
    return BoundResult.from_log(f"product-{method}", log_value, inputs)


def selector_gamma(n: int, m: int) -> float:
    """γ = 1 + √(ln m)/√n；m = 1 时 γ = 1，选择器无定义"""
    return 1.0 + math.sqrt(math.log(m)) / math.sqrt(n)


def expected_max_bound(n: int, p: float, m: int) -> float:
    """E[max{X^(1..m-1), pn}] ≤ pn + 5√(n ln m)，要求 m ≤ e^n"""
    if m < 1:
        raise DomainError(f"m 必须 ≥ 1，实际 m={m}")
    if math.log(m) > n:
        raise DomainError(f"要求 m ≤ e^n，实际 m={m}, n={n}")
    return p * n + 5.0 * math.sqrt(n * math.log(m))


def expected_max_gamma_bound(n: int, p: float, m: int, gamma: float) -> float:
    """E[max{X^(1..m-1), pn}] ≤ γ²pn + log_γ m，对任意 γ > 1"""
    if m < 1:
        raise DomainError(f"m 必须 ≥ 1，实际 m={m}")
    if not gamma > 1.0:
        raise DomainError(f"要求 γ > 1，实际 γ={gamma}")
    return gamma * gamma * p * n + math.log(m) / math.log(gamma)
