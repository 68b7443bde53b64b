"""
套件注册表与断言计数
"""
import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from source.chernoff.schema.suite import SuiteOptions, SuiteReport
from source.chernoff.utils.log_utils import log

MAX_FAILURE_EXAMPLES = 5


class Tally:
    """累计断言结果，保留最小余量与前几个失败样例"""

    def __init__(self, name: str):
        self.name = name
        self.checks = 0
        self.failures = 0
        self.worst_slack = math.inf
        self.examples: list[str] = []

    def record(self, ok: bool, label: str, slack: float | None = None) -> bool:
        self.checks += 1
        if slack is not None and not math.isnan(slack):
            self.worst_slack = min(self.worst_slack, slack)
        if not ok:
            self.failures += 1
            if len(self.examples) < MAX_FAILURE_EXAMPLES:
                self.examples.append(label if slack is None else f"{label} (slack={slack:.3e})")
        return ok

    def check_le(self, lhs: float, rhs: float, label: str, tol: float = 1e-12) -> bool:
        """lhs ≤ rhs + tol；两边同为 +inf 视为成立"""
        if math.isinf(rhs) and rhs > 0:
            return self.record(True, label, None)
        slack = rhs - lhs
        return self.record(slack >= -tol, label, slack)

    def check_close(self, actual: float, expected: float, label: str,
                    abs_tol: float = 0.0, rel_tol: float = 0.0) -> bool:
        ok = math.isclose(actual, expected, abs_tol=abs_tol, rel_tol=rel_tol)
        return self.record(ok, f"{label}: {actual!r} vs {expected!r}")

    def report(self) -> SuiteReport:
        return SuiteReport(
            name=self.name,
            checks=self.checks,
            failures=self.failures,
            worst_slack=None if math.isinf(self.worst_slack) else self.worst_slack,
            failure_examples=self.examples,
        )


@dataclass(frozen=True)
class SuiteDefinition:
    name: str
    randomized: bool
    runner: Callable[[SuiteOptions], SuiteReport]


SUITES: dict[str, SuiteDefinition] = {}


def register(name: str, randomized: bool = False):
    """把 runner(tally, options) 注册为名为 name 的套件"""

    def decorator(func: Callable[[Tally, SuiteOptions], None]):
        def runner(options: SuiteOptions) -> SuiteReport:
            tally = Tally(name)
            started = time.perf_counter()
            log.info(f"开始验证套件 {name}")
            func(tally, options)
            report = tally.report()
            log.info(f"套件 {name} 完成: {report.checks} 项检查, {report.failures} 项失败, "
                     f"耗时 {time.perf_counter() - started:.2f}s")
            return report

        SUITES[name] = SuiteDefinition(name=name, randomized=randomized, runner=runner)
        return func

    return decorator


def suite_rng(options: SuiteOptions, stream: int) -> np.random.Generator:
    """随机套件的生成器；不同套件使用不同的 stream 保证互不相关"""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(options.seed, spawn_key=(stream,))))


def probability_grid(step: float = 0.05, lo: float = 0.05, hi: float = 0.95) -> list[float]:
    """[lo, hi] 上步长为 step 的十进制网格，取整避免累积误差"""
    count = int(round((hi - lo) / step)) + 1
    return [round(lo + i * step, 10) for i in range(count)]
