"""
验证套件的测试
"""
import pytest

from source.chernoff.schema import SuiteOptions
from source.chernoff.suites import ALL, resolve_suites, run_suites, suite_names
from source.chernoff.suites.base import Tally
from source.chernoff.utils.errors import DomainError, UsageError

EXPECTED_SUITES = [
    "divergence", "domination", "optimality", "lower-tail", "multiplicative", "weak-bound", "pipeline",
    "hypergeometric", "eq2", "lemma1", "lemma3", "negative-correlation",
    "encoding", "selector", "montecarlo",
]


def test_registry_order():
    assert suite_names() == EXPECTED_SUITES


def test_resolve_all_and_duplicates():
    assert [d.name for d in resolve_suites([ALL])] == EXPECTED_SUITES
    assert [d.name for d in resolve_suites(["eq2", "divergence", "eq2"])] == ["divergence", "eq2"]
    with pytest.raises(DomainError):
        resolve_suites(["nonsense"])


def test_randomized_suites_need_seed():
    with pytest.raises(UsageError):
        run_suites(["eq2", "selector"], SuiteOptions(max_n=3))
    with pytest.raises(UsageError):
        run_suites(["optimality"], SuiteOptions(max_n=3))


@pytest.mark.parametrize("name, max_n", [
    ("divergence", 6),
    ("eq2", 6),
    ("encoding", 6),
    ("weak-bound", 6),
    ("multiplicative", 6),
    ("domination", 10),
    ("lower-tail", 10),
    ("pipeline", 100),
    ("hypergeometric", 10),
    ("lemma3", 20),
    ("negative-correlation", 6),
])
def test_small_suites_pass(name, max_n):
    (report,) = run_suites([name], SuiteOptions(max_n=max_n))
    assert report.name == name
    assert report.checks > 0
    assert report.passed, report.failure_examples


@pytest.mark.parametrize("name", ["lemma1", "optimality", "selector", "montecarlo"])
def test_seeded_suites_pass(name):
    (report,) = run_suites([name], SuiteOptions(seed=2024, max_n=4))
    assert report.checks > 0
    assert report.passed, report.failure_examples


def test_seeded_suites_are_repeatable():
    options = SuiteOptions(seed=7, max_n=10)
    assert run_suites(["optimality"], options) == run_suites(["optimality"], options)


def test_randomized_flags():
    randomized = [d.name for d in resolve_suites([ALL]) if d.randomized]
    assert randomized == ["optimality", "lemma1", "selector", "montecarlo"]


def test_tally_records_worst_slack():
    tally = Tally("demo")
    assert tally.check_le(0.5, 1.0, "fine")
    assert tally.check_le(2.0, float("inf"), "infinite bound")
    assert not tally.check_le(1.0, 0.5, "broken")
    assert tally.check_close(0.1 + 0.2, 0.3, "sum", abs_tol=1e-15)
    report = tally.report()
    assert (report.checks, report.failures) == (4, 1)
    assert report.worst_slack == -0.5
    assert report.failure_examples == ["broken (slack=-5.000e-01)"]
    assert not report.passed
