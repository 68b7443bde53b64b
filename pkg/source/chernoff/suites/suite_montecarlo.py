import math

import numpy as np

from source.chernoff.montecarlo import (
    bound_scorecard,
    empirical_tail,
    exact_model_tail,
    simulate_indicators,
    simulate_sum,
)
from source.chernoff.schema.simulation import HeterogeneousModel, IidModel, SimulationSpec, UrnModel
from source.chernoff.schema.suite import SuiteOptions
from source.chernoff.suites.base import Tally, register, suite_rng

CASES = 50
CASE_TRIALS = 100_000
# 50 个样例中至少 49 个落在 4 倍标准误内
REQUIRED_HITS = 49
SIGMAS = 4.0


def _random_model(rng: np.random.Generator):
    kind = int(rng.integers(3))
    if kind == 0:
        return IidModel(n=int(rng.integers(1, 41)), p=float(rng.random()))
    if kind == 1:
        return HeterogeneousModel(p_list=rng.random(int(rng.integers(1, 21))).tolist())
    N = int(rng.integers(2, 41))
    return UrnModel(N=N, P=int(rng.integers(0, N + 1)), n=int(rng.integers(1, N + 1)))


def _seed(rng: np.random.Generator) -> int:
    return int(rng.integers(0, 2**63))


@register("montecarlo", randomized=True)
def montecarlo_suite(tally: Tally, options: SuiteOptions) -> None:
    rng = suite_rng(options, 3)

    hits = 0
    for case in range(CASES):
        model = _random_model(rng)
        spec = SimulationSpec(generator=model, trials=CASE_TRIALS, seed=_seed(rng))
        k = int(rng.integers(0, model.size + 1))
        tail = empirical_tail(spec, k)
        exact = exact_model_tail(model, k)
        # 估计值为 0 或 1 时插值标准误为 0，改用精确概率的标准误
        error = max(tail.standard_error, math.sqrt(exact * (1.0 - exact) / spec.trials))
        inside = abs(tail.estimate - exact) <= SIGMAS * error + 1e-15
        hits += inside
    tally.record(hits >= REQUIRED_HITS, f"{hits}/{CASES} cases within {SIGMAS}σ", float(hits - REQUIRED_HITS))

    # 与线程数无关
    for model in (IidModel(n=30, p=0.3), HeterogeneousModel(p_list=[0.1, 0.5, 0.9]), UrnModel(N=20, P=7, n=6)):
        spec = SimulationSpec(generator=model, trials=300_000, seed=_seed(rng))
        single = simulate_sum(spec, workers=1)
        parallel = simulate_sum(spec, workers=4)
        tally.record(np.array_equal(single, parallel), f"determinism {model.kind}")
        tally.record(np.array_equal(single, simulate_sum(spec, workers=3)), f"repeatability {model.kind}")

    # 经验值减 4 倍标准误不超过任何一个界
    spec = SimulationSpec(generator=IidModel(n=100, p=0.5), trials=CASE_TRIALS, seed=_seed(rng))
    for row in bound_scorecard(spec, [0.0, 0.05, 0.1, 0.15, 0.2, 0.3]):
        se = math.sqrt(row.empirical * (1.0 - row.empirical) / spec.trials)
        floor = row.empirical - SIGMAS * se
        for column in ("kl", "multiplicative", "simplified", "steinke_ullman"):
            tally.check_le(floor, getattr(row, column), f"empirical ≤ {column} at t={row.t}", tol=0.0)

    # 无放回抽样的各个位置同分布
    urn = UrnModel(N=12, P=5, n=6)
    spec = SimulationSpec(generator=urn, trials=CASE_TRIALS, seed=_seed(rng))
    frequencies = simulate_indicators(spec).mean(axis=0)
    p = urn.P / urn.N
    se = math.sqrt(p * (1.0 - p) / spec.trials)
    for position, frequency in enumerate(frequencies, start=1):
        tally.record(abs(frequency - p) <= SIGMAS * se, f"urn marginal position {position}: {frequency:.6f}",
                     SIGMAS * se - abs(frequency - p))
