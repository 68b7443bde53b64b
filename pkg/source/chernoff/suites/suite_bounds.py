"""
尾概率界的验证套件：精确值 ≤ KL ≤ 乘法形式 ≤ 简化形式，参数形式的最优性，下尾化归，
弱化界与其证明链。
"""
import math

import numpy as np

from source.chernoff.bounds import (
    absolute_threshold_bound,
    kl_tail_bound,
    multiplicative_bound,
    optimal_lambda,
    parametric_bound,
    simplified_bound,
    steinke_ullman_bound,
    threshold_index,
)
from source.chernoff.oracles import exact_binomial_tail, weak_bound_pipeline
from source.chernoff.schema.oracle_specs import BinomialSpec
from source.chernoff.schema.query import MultiplicativeQuery, TailQuery
from source.chernoff.schema.suite import SuiteOptions
from source.chernoff.suites.base import Tally, probability_grid, register, suite_rng

DOMINATION_NS = (1, 2, 5, 10, 20, 50, 100, 200)
T_STEPS = 20
OPTIMALITY_N = 50
# 每个 (p, t, 形式) 抽取的扰动个数：一半在 [1/2, 2] 上对数均匀，一半贴近 1
LAMBDA_DRAWS = 20
NEAR_SPREAD = 1e-2


def _ns(options: SuiteOptions) -> list[int]:
    return [n for n in DOMINATION_NS if options.max_n is None or n <= options.max_n] or [1]


def _upper_grid(options: SuiteOptions):
    """(n, p, t)：n 取固定集合，p = 0.05..0.95，t 为 [0, 1-p] 上的 20 个等分点"""
    for n in _ns(options):
        for p in probability_grid():
            for t in np.linspace(0.0, 1.0 - p, T_STEPS):
                yield n, p, float(t)


def _lower_index(n: int, p: float, t: float) -> int:
    """⌊(p-t)n⌋，借助 n - X 的上尾阈值计算"""
    return n - threshold_index(n, 1.0 - p, t)


@register("domination")
def domination_suite(tally: Tally, options: SuiteOptions) -> None:
    for n, p, t in _upper_grid(options):
        label = f"n={n}, p={p}, t={t:.6g}"
        k = threshold_index(n, p, t)
        exact = exact_binomial_tail(BinomialSpec(n=n, p=p), k, "upper") if k <= n else 0.0
        kl = kl_tail_bound(TailQuery(n=n, p=p, t=t)).value
        relative = MultiplicativeQuery(mu=p * n, delta=t / p, direction="upper", n=n)
        multiplicative = multiplicative_bound(relative).value
        simplified = simplified_bound(relative).value
        tally.check_le(exact, kl, f"exact ≤ kl at {label}")
        tally.check_le(kl, multiplicative, f"kl ≤ multiplicative at {label}")
        tally.check_le(multiplicative, simplified, f"multiplicative ≤ simplified at {label}")

    # 上尾与下尾互补
    for n in _ns(options):
        for p in probability_grid():
            spec = BinomialSpec(n=n, p=p)
            for k in range(n + 1):
                total = exact_binomial_tail(spec, k, "upper") + exact_binomial_tail(spec, k - 1, "lower")
                tally.check_close(total, 1.0, f"upper(k) + lower(k-1) at n={n}, p={p}, k={k}", abs_tol=1e-12)


def _lambda_factors(rng: np.random.Generator) -> np.ndarray:
    half = LAMBDA_DRAWS // 2
    wide = rng.uniform(-math.log(2.0), math.log(2.0), half)
    near = rng.uniform(-NEAR_SPREAD, NEAR_SPREAD, LAMBDA_DRAWS - half)
    return np.exp(np.concatenate([wide, near]))


@register("optimality", randomized=True)
def optimality_suite(tally: Tally, options: SuiteOptions) -> None:
    rng = suite_rng(options, 4)
    n = min(options.max_n or OPTIMALITY_N, OPTIMALITY_N)
    for p in probability_grid():
        # 开区间 (0, 1-p) 内的 12 个点
        for t in np.linspace(0.0, 1.0 - p, 14)[1:-1]:
            t = float(t)
            q = TailQuery(n=n, p=p, t=t)
            kl = kl_tail_bound(q).value
            for method in ("moment", "ik"):
                lam = optimal_lambda(p, t, method)
                best = parametric_bound(q, lam, method).value
                label = f"{method} p={p}, t={t:.6g}"
                tally.check_close(best, kl, f"optimum equals kl for {label}", rel_tol=1e-10)
                for factor in _lambda_factors(rng):
                    other = lam * float(factor)
                    if method == "ik":
                        other = min(other, 1.0)
                    tally.check_le(best, parametric_bound(q, other, method).value,
                                   f"λ*={lam:.6g} beats λ'={other:.6g} for {label}")


@register("lower-tail")
def lower_tail_suite(tally: Tally, options: SuiteOptions) -> None:
    for n in _ns(options):
        for p in probability_grid():
            for t in np.linspace(0.0, p, T_STEPS):
                t = float(t)
                label = f"n={n}, p={p}, t={t:.6g}"
                lower = kl_tail_bound(TailQuery(n=n, p=p, t=t, direction="lower"))
                mirrored = kl_tail_bound(TailQuery(n=n, p=1.0 - p, t=t, direction="upper"))
                tally.record(lower.log_value == mirrored.log_value, f"lower = mirrored upper at {label}")
                k = _lower_index(n, p, t)
                exact = exact_binomial_tail(BinomialSpec(n=n, p=p), k, "lower") if k >= 0 else 0.0
                tally.check_le(exact, lower.value, f"exact lower ≤ kl at {label}")


@register("multiplicative")
def multiplicative_suite(tally: Tally, options: SuiteOptions) -> None:
    for n in _ns(options):
        for p in probability_grid():
            mu = p * n
            for delta in np.linspace(0.0, 1.0 / p - 1.0, T_STEPS):
                delta = float(delta)
                t = min(delta * p, 1.0 - p)
                kl = kl_tail_bound(TailQuery(n=n, p=p, t=t)).value
                upper = multiplicative_bound(MultiplicativeQuery(mu=mu, delta=delta, direction="upper"))
                tally.check_le(kl, upper.value, f"kl ≤ mult-upper n={n}, p={p}, δ={delta:.6g}")
            for delta in np.linspace(0.0, 1.0, T_STEPS):
                delta = float(delta)
                t = min(delta * p, p)
                kl = kl_tail_bound(TailQuery(n=n, p=p, t=t, direction="lower")).value
                lower = multiplicative_bound(MultiplicativeQuery(mu=mu, delta=delta, direction="lower"))
                label = f"n={n}, p={p}, δ={delta:.6g}"
                tally.check_le(kl, lower.value, f"kl ≤ mult-lower {label}")
                if 0.0 < delta < 1.0:
                    simple = simplified_bound(MultiplicativeQuery(mu=mu, delta=delta, direction="lower"))
                    tally.check_le(lower.value, simple.value, f"mult-lower ≤ simple-lower {label}")

            # t ≥ 2eμ 时 Pr[X ≥ t] ≤ 2^{-t}
            spec = BinomialSpec(n=n, p=p)
            for t_abs in range(math.ceil(2.0 * math.e * mu), n + 1):
                bound = absolute_threshold_bound(mu, t_abs).value
                tally.check_le(exact_binomial_tail(spec, t_abs, "upper"), bound,
                               f"threshold n={n}, p={p}, t={t_abs}")


@register("weak-bound")
def weak_bound_suite(tally: Tally, options: SuiteOptions) -> None:
    for n, p, t in _upper_grid(options):
        k = threshold_index(n, p, t)
        exact = exact_binomial_tail(BinomialSpec(n=n, p=p), k, "upper") if k <= n else 0.0
        tally.check_le(exact, steinke_ullman_bound(n, t).value, f"exact ≤ su-weak at n={n}, p={p}, t={t:.6g}")
    spot = steinke_ullman_bound(400, 0.5)
    tally.check_close(spot.value, math.exp(-0.5625), "su-weak(400, 0.5)", abs_tol=1e-12)


@register("pipeline")
def pipeline_suite(tally: Tally, options: SuiteOptions) -> None:
    applicable = 0
    for n in (100, 200, 400, 800):
        if options.max_n is not None and n > options.max_n:
            continue
        for p in (0.1, 0.3, 0.5):
            if 8.0 / math.sqrt(n) > 1.0 - p:
                continue
            for t in np.linspace(8.0 / math.sqrt(n), 1.0 - p, 6):
                report = weak_bound_pipeline(n, p, float(t))
                if not report.applicable:
                    continue
                applicable += 1
                label = f"n={n}, p={p}, t={float(t):.6g}, m={report.m}"
                tally.check_le(report.max_exceed_probability, report.markov_bound, f"max exceed ≤ markov {label}")
                tally.check_le(report.markov_bound, report.lemma_bound, f"markov ≤ lemma {label}")
    tally.record(applicable > 0 or options.max_n is not None, "pipeline has applicable instances")
