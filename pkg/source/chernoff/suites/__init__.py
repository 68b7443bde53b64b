"""
命名的验证套件

每个套件把若干不变式在网格或随机样本上逐条检查，返回 SuiteReport。
"""
from source.chernoff.schema.suite import SuiteOptions, SuiteReport
from source.chernoff.suites.base import SUITES, SuiteDefinition
# 导入顺序即注册顺序
from source.chernoff.suites import suite_divergence  # noqa: F401
from source.chernoff.suites import suite_bounds  # noqa: F401
from source.chernoff.suites import suite_oracles  # noqa: F401
from source.chernoff.suites import suite_mechanisms  # noqa: F401
from source.chernoff.suites import suite_montecarlo  # noqa: F401
from source.chernoff.utils.errors import DomainError, UsageError

ALL = "all"


def suite_names() -> list[str]:
    return list(SUITES)


def resolve_suites(names: list[str]) -> list[SuiteDefinition]:
    """展开 all，去重并保持注册顺序"""
    selected = set()
    for name in names:
        if name == ALL:
            selected.update(SUITES)
        elif name in SUITES:
            selected.add(name)
        else:
            raise DomainError(f"未知套件 {name!r}，可选: {', '.join([*SUITES, ALL])}")
    return [definition for name, definition in SUITES.items() if name in selected]


def run_suites(names: list[str], options: SuiteOptions) -> list[SuiteReport]:
    definitions = resolve_suites(names)
    randomized = [d.name for d in definitions if d.randomized]
    if randomized and options.seed is None:
        raise UsageError(f"随机套件 {', '.join(randomized)} 需要显式的 --seed")
    return [definition.runner(options) for definition in definitions]


__all__ = ["ALL", "SUITES", "resolve_suites", "run_suites", "suite_names"]
