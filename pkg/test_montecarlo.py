"""
Monte Carlo 模拟的测试
"""
import math

import numpy as np
import pytest

from source.chernoff import config
from source.chernoff.bounds import kl_tail_bound
from source.chernoff.divergence import kl_binary
from source.chernoff.montecarlo import (
    bound_scorecard,
    empirical_tail,
    exact_model_tail,
    simulate_indicators,
    simulate_sum,
)
from source.chernoff.oracles import exact_binomial_tail, exact_poisson_binomial_tail
from source.chernoff.schema import (
    BinomialSpec,
    HeterogeneousModel,
    IidModel,
    SimulationSpec,
    TailQuery,
    UrnModel,
)
from source.chernoff.utils.errors import ResourceError


def make_spec(model, trials=100_000, seed=7):
    return SimulationSpec(generator=model, trials=trials, seed=seed)


@pytest.mark.parametrize("model, value", [
    (IidModel(n=5, p=1.0), 5),
    (IidModel(n=5, p=0.0), 0),
    (UrnModel(N=4, P=2, n=4), 2),
    (HeterogeneousModel(p_list=[1.0, 0.0, 1.0]), 2),
])
def test_degenerate_sums(model, value):
    sums = simulate_sum(make_spec(model, trials=500, seed=3))
    assert sums.shape == (500,)
    assert np.all(sums == value)


def test_spec_accepts_plain_dicts():
    spec = SimulationSpec(generator={"kind": "urn", "N": 10, "P": 5, "n": 4}, trials=10, seed=0)
    assert isinstance(spec.generator, UrnModel)
    with pytest.raises(ValueError):
        SimulationSpec(generator={"kind": "iid", "n": 3, "p": 0.5}, trials=0, seed=0)
    with pytest.raises(ValueError):
        SimulationSpec(generator={"kind": "iid", "n": 3, "p": 0.5}, trials=1, seed=-1)


def test_empirical_tail_at_zero_is_one():
    tail = empirical_tail(make_spec(IidModel(n=10, p=0.5), trials=1000), 0)
    assert tail.estimate == 1.0
    assert tail.standard_error == 0.0


@pytest.mark.parametrize("model, k, exact", [
    (IidModel(n=10, p=0.5), 8, 56 / 1024),
    (UrnModel(N=10, P=5, n=4), 3, 55 / 210),
])
def test_empirical_tail_close_to_exact(model, k, exact):
    tail = empirical_tail(make_spec(model), k)
    assert tail.trials == 100_000 and tail.seed == 7
    assert tail.standard_error == pytest.approx(
        math.sqrt(tail.estimate * (1 - tail.estimate) / tail.trials), rel=1e-12)
    assert abs(tail.estimate - exact) <= 4 * tail.standard_error


def test_same_seed_same_estimate():
    spec = make_spec(HeterogeneousModel(p_list=[0.1, 0.5, 0.9, 0.3]), trials=20_000, seed=11)
    assert empirical_tail(spec, 2) == empirical_tail(spec, 2)


def test_determinism_across_worker_counts():
    spec = make_spec(IidModel(n=64, p=0.3), trials=50_000, seed=2024)
    baseline = simulate_sum(spec, workers=1)
    for workers in (3, 4):
        np.testing.assert_array_equal(simulate_sum(spec, workers=workers), baseline)
    other = simulate_sum(make_spec(IidModel(n=64, p=0.3), trials=50_000, seed=2025), workers=1)
    assert not np.array_equal(other, baseline)


def test_indicators_match_sums():
    spec = make_spec(UrnModel(N=9, P=4, n=5), trials=3000, seed=5)
    indicators = simulate_indicators(spec)
    assert indicators.shape == (3000, 5)
    np.testing.assert_array_equal(indicators.sum(axis=1), simulate_sum(spec))


def test_urn_marginals_are_exchangeable():
    spec = make_spec(UrnModel(N=12, P=5, n=6), trials=40_000, seed=13)
    frequencies = simulate_indicators(spec).mean(axis=0)
    p = 5 / 12
    standard_error = math.sqrt(p * (1 - p) / spec.trials)
    assert np.all(np.abs(frequencies - p) <= 4 * standard_error)


def test_resource_cap(monkeypatch):
    monkeypatch.setattr(config, "MAX_BIT_DRAWS", 1000)
    with pytest.raises(ResourceError):
        simulate_sum(make_spec(IidModel(n=10, p=0.5), trials=101))
    assert simulate_sum(make_spec(IidModel(n=10, p=0.5), trials=100)).shape == (100,)


def test_exact_model_tail_dispatch():
    assert exact_model_tail(IidModel(n=10, p=0.5), 8) == pytest.approx(56 / 1024, abs=1e-15)
    assert exact_model_tail(UrnModel(N=10, P=5, n=4), 3) == pytest.approx(55 / 210, abs=1e-13)
    assert exact_model_tail(HeterogeneousModel(p_list=[0.2, 0.4]), 2) == pytest.approx(0.08, abs=1e-15)


def test_scorecard_vacuous_row():
    spec = make_spec(IidModel(n=100, p=0.5), trials=10_000)
    (row,) = bound_scorecard(spec, [0.0])
    assert row.k == 50
    assert row.exact == pytest.approx(exact_binomial_tail(BinomialSpec(n=100, p=0.5), 50), abs=1e-15)
    for column in ("kl", "multiplicative", "simplified", "steinke_ullman"):
        assert getattr(row, column) >= 1.0


def test_scorecard_iid_row():
    spec = make_spec(IidModel(n=100, p=0.5), trials=100_000)
    first, second = bound_scorecard(spec, [0.05, 0.1])
    assert second.k == 60
    assert second.exact == pytest.approx(0.0284, abs=5e-5)
    assert second.kl == pytest.approx(0.13351, abs=5e-6)
    assert first.kl > second.kl
    assert second.tightness()["kl"] == pytest.approx(second.kl / second.exact, rel=1e-12)


def test_scorecard_heterogeneous_uses_mean_parameter():
    model = HeterogeneousModel(p_list=[0.2, 0.4, 0.6, 0.8])
    (row,) = bound_scorecard(make_spec(model, trials=20_000), [0.25])
    assert row.k == 3
    assert row.kl == pytest.approx(math.exp(-4 * kl_binary(0.75, 0.5)), rel=1e-12)
    assert row.kl == pytest.approx(kl_tail_bound(TailQuery(n=4, p=0.5, t=0.25)).value, rel=1e-15)
    assert row.exact == pytest.approx(exact_poisson_binomial_tail(model.p_list, 3), abs=1e-15)


@pytest.mark.parametrize("model", [
    IidModel(n=40, p=0.3),
    HeterogeneousModel(p_list=[0.1, 0.9, 0.5, 0.5, 0.2, 0.7]),
    UrnModel(N=30, P=12, n=15),
])
def test_scorecard_bounds_dominate_empirical(model):
    spec = make_spec(model, trials=50_000, seed=17)
    p = model.mean_parameter
    rows = bound_scorecard(spec, np.linspace(0.0, 1.0 - p, 9).tolist())
    for row in rows:
        standard_error = math.sqrt(row.empirical * (1 - row.empirical) / spec.trials)
        floor = row.empirical - 4 * standard_error
        for column in ("kl", "multiplicative", "simplified", "steinke_ullman"):
            assert floor <= getattr(row, column) + 1e-12
        assert row.exact <= row.kl + 1e-12
