import math

import numpy as np

from source.chernoff.divergence import kl_binary, kl_general
from source.chernoff.schema.suite import SuiteOptions
from source.chernoff.suites.base import Tally, register

GRID = [i / 20 for i in range(21)]


@register("divergence")
def divergence_suite(tally: Tally, options: SuiteOptions) -> None:
    # 对称性 D(1-a‖1-p) = D(a‖p)
    for a in GRID:
        for p in GRID:
            forward = kl_binary(a, p)
            mirrored = kl_binary(1.0 - a, 1.0 - p)
            if math.isinf(forward) or math.isinf(mirrored):
                tally.record(forward == mirrored, f"symmetry a={a}, p={p}")
            else:
                tally.check_close(forward, mirrored, f"symmetry a={a}, p={p}", abs_tol=1e-12)
            tally.record(forward >= 0.0, f"nonnegative a={a}, p={p}")
            tally.record((forward == 0.0) == (a == p), f"zero iff a = p, a={a}, p={p}")

    # a ≥ p 时关于 a 单调不减
    for p in (0.1, 0.3, 0.5, 0.7, 0.9):
        values = [kl_binary(a, p) for a in np.linspace(p, 1.0, 1000)]
        for i in range(1, len(values)):
            tally.check_le(values[i - 1], values[i], f"monotone p={p}, step {i}")

    # 端点
    for p in (0.01, 0.25, 0.5, 0.75, 0.99):
        tally.check_close(kl_binary(0.0, p), -math.log1p(-p), f"D(0‖{p})", rel_tol=1e-12)
        tally.check_close(kl_binary(1.0, p), -math.log(p), f"D(1‖{p})", rel_tol=1e-12)
    for a in (0.1, 0.5, 1.0):
        tally.record(kl_binary(a, 0.0) == math.inf, f"D({a}‖0) = inf")
        tally.record(kl_binary(1.0 - a, 1.0) == math.inf, f"D({1.0 - a}‖1) = inf")
    tally.check_close(kl_binary(0.6, 0.5), 0.020135513550688863, "D(0.6‖0.5)", rel_tol=1e-9)

    # 一般分布：非负，P = Q 时为 0
    P = [0.1, 0.2, 0.3, 0.4]
    for Q in ([0.25] * 4, [0.4, 0.3, 0.2, 0.1], P):
        value = kl_general(P, Q)
        tally.record(value >= 0.0, f"kl_general nonnegative Q={Q}")
    tally.record(kl_general(P, P) == 0.0, "kl_general(P, P) = 0")
    tally.record(kl_general([0.5, 0.5], [1.0, 0.0]) == math.inf, "kl_general support mismatch")
    for a in GRID:
        for p in GRID[1:-1]:
            tally.check_close(kl_general([a, 1.0 - a], [p, 1.0 - p]), kl_binary(a, p),
                              f"binary agreement a={a}, p={p}", abs_tol=1e-12)
