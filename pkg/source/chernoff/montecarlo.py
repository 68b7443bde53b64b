"""
可复现的 Monte Carlo 模拟

试验按固定大小分块，第 b 块的随机数流由 SeedSequence(seed, spawn_key=(b,)) 决定，
与线程调度无关；块大小只取决于模型规模，所以任意线程数下结果逐位相同。
"""
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import numpy as np

from source.chernoff import config
from source.chernoff.bounds import (
    kl_tail_bound,
    multiplicative_bound,
    simplified_bound,
    steinke_ullman_bound,
    threshold_index,
)
from source.chernoff.oracles import exact_binomial_tail, exact_hypergeometric_tail, exact_poisson_binomial_tail
from source.chernoff.schema.oracle_specs import BinomialSpec, UrnSpec
from source.chernoff.schema.query import MultiplicativeQuery, TailQuery
from source.chernoff.schema.simulation import (
    EmpiricalTail,
    HeterogeneousModel,
    IidModel,
    ScorecardRow,
    SimulationSpec,
    UrnModel,
)
from source.chernoff.utils.errors import DomainError, ResourceError
from source.chernoff.utils.log_utils import log

# 每块大约包含的随机比特数
BLOCK_BITS = 1 << 20


def _block_trials(spec: SimulationSpec) -> int:
    model = spec.generator
    width = model.N if isinstance(model, UrnModel) else model.size
    return max(1, BLOCK_BITS // max(width, 1))


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block,))))


def _draw_block(model, rng: np.random.Generator, size: int) -> np.ndarray:
    """返回 size × n 的 0/1 指示矩阵"""
    if isinstance(model, IidModel):
        return rng.random((size, model.n)) < model.p
    if isinstance(model, HeterogeneousModel):
        # 每个变量用一个均匀随机数
        return rng.random((size, model.size)) < np.asarray(model.p_list)
    if isinstance(model, UrnModel):
        # 只对前 n 个位置做 Fisher-Yates 洗牌
        balls = np.zeros((size, model.N), dtype=np.int8)
        balls[:, :model.P] = 1
        rows = np.arange(size)
        for i in range(model.n):
            j = i + rng.integers(0, model.N - i, size=size)
            picked = balls[rows, j].copy()
            balls[rows, j] = balls[rows, i]
            balls[rows, i] = picked
        return balls[:, :model.n].astype(bool)
    raise DomainError(f"未知模型 {type(model).__name__}")


def _check_resources(spec: SimulationSpec) -> None:
    draws = spec.trials * spec.generator.size
    if draws > config.MAX_BIT_DRAWS:
        raise ResourceError(f"trials·n = {draws} 超过上限 {config.MAX_BIT_DRAWS}")


def _run_blocks(spec: SimulationSpec, reducer, workers: int | None):
    block_size = _block_trials(spec)
    blocks = math.ceil(spec.trials / block_size)
    workers = workers or config.WORKERS
    log.debug(f"模拟 {spec.trials} 次试验，共 {blocks} 块，每块 {block_size} 次，线程数 {workers}")

    def run(block: int):
        size = min(block_size, spec.trials - block * block_size)
        return reducer(_draw_block(spec.generator, _block_rng(spec.seed, block), size))

    if workers == 1 or blocks == 1:
        return [run(b) for b in range(blocks)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        # map 按块号顺序返回
        return list(pool.map(run, range(blocks)))


def simulate_sum(spec: SimulationSpec, workers: int | None = None) -> np.ndarray:
    """每次试验的和 X = Σ X_i"""
    _check_resources(spec)
    parts = _run_blocks(spec, lambda draws: draws.sum(axis=1, dtype=np.int64), workers)
    return np.concatenate(parts)


def simulate_indicators(spec: SimulationSpec, workers: int | None = None) -> np.ndarray:
    """trials × n 的指示矩阵，与 simulate_sum 使用同样的随机数流"""
    _check_resources(spec)
    return np.concatenate(_run_blocks(spec, lambda draws: draws, workers))


def _empirical_from_sums(sums: np.ndarray, spec: SimulationSpec, k: int) -> EmpiricalTail:
    hits = int(np.count_nonzero(sums >= k))
    estimate = hits / spec.trials
    return EmpiricalTail(
        threshold=k,
        estimate=estimate,
        standard_error=math.sqrt(estimate * (1.0 - estimate) / spec.trials),
        trials=spec.trials,
        seed=spec.seed,
    )


def empirical_tail(spec: SimulationSpec, k: int, workers: int | None = None) -> EmpiricalTail:
    """Pr[X ≥ k] 的经验估计及其标准误"""
    return _empirical_from_sums(simulate_sum(spec, workers), spec, k)


def exact_model_tail(model, k: int) -> float:
    """与模型对应的精确尾概率"""
    if isinstance(model, IidModel):
        return exact_binomial_tail(BinomialSpec(n=model.n, p=model.p), k, "upper")
    if isinstance(model, HeterogeneousModel):
        return exact_poisson_binomial_tail(model.p_list, k)
    if isinstance(model, UrnModel):
        return exact_hypergeometric_tail(UrnSpec(N=model.N, P=model.P, n=model.n), k)
    raise DomainError(f"未知模型 {type(model).__name__}")


def bound_scorecard(spec: SimulationSpec, deviations: Sequence[float],
                    workers: int | None = None) -> list[ScorecardRow]:
    """对每个 t 给出精确值、经验值和各个上尾界"""
    model = spec.generator
    n = model.size
    p = model.mean_parameter
    sums = simulate_sum(spec, workers)
    rows = []
    for t in deviations:
        t = float(t)
        query = TailQuery(n=n, p=p, t=t, direction="upper")
        k = min(threshold_index(n, p, t), n)
        if p > 0.0:
            relative = MultiplicativeQuery(mu=p * n, delta=t / p, direction="upper", n=n)
            multiplicative = multiplicative_bound(relative).value
            simplified = simplified_bound(relative).value
        else:
            # μ = 0 时两个乘法形式的指数都是 0
            multiplicative = simplified = 1.0
        rows.append(ScorecardRow(
            t=t,
            k=k,
            exact=exact_model_tail(model, k),
            empirical=_empirical_from_sums(sums, spec, k).estimate,
            kl=kl_tail_bound(query).value,
            multiplicative=multiplicative,
            simplified=simplified,
            steinke_ullman=steinke_ullman_bound(n, t).value,
        ))
    log.info(f"生成对比表 {len(rows)} 行 (model={model.kind}, n={n}, p={p})")
    return rows
