"""
Tests del optimizador con presupuesto.
"""
import numpy as np
import pytest

from src.optimize import COBYLA, NELDER_MEAD, minimize
from src.utils.errors import ConfigurationError, OptimizationError


class CountingQuadratic:
    def __init__(self, center):
        self.center = np.asarray(center, dtype=float)
        self.calls = 0

    def __call__(self, params):
        self.calls += 1
        return float(np.sum((np.asarray(params) - self.center) ** 2))


@pytest.mark.parametrize("method", [COBYLA, NELDER_MEAD])
def test_minimizes_quadratic_within_budget(method):
    cost = CountingQuadratic([0.3, -0.7])
    result = minimize(cost, [0.0, 0.0], budget=200, seed=1, method=method)
    assert result.best_cost < 1e-4
    assert np.allclose(result.best_params, [0.3, -0.7], atol=1e-2)
    assert result.evals_used == cost.calls <= 200
    assert result.method == method


@pytest.mark.parametrize("budget", [1, 2, 5, 13])
def test_budget_counts_every_evaluation(budget):
    cost = CountingQuadratic([2.0, 2.0, 2.0])
    result = minimize(cost, np.zeros(3), budget=budget)
    assert cost.calls == result.evals_used <= budget


def test_never_worse_than_initial_point():
    cost = CountingQuadratic([0.0])
    result = minimize(cost, [0.0], budget=10)
    assert result.best_cost == 0.0


def test_zero_parameters_uses_one_evaluation():
    result = minimize(lambda params: 1.5, [], budget=50)
    assert result.evals_used == 1
    assert result.best_cost == 1.5


def test_non_finite_cost_raises():
    with pytest.raises(OptimizationError) as excinfo:
        minimize(lambda params: float("nan"), [0.1], budget=5)
    assert excinfo.value.params == [0.1]


def test_invalid_arguments():
    with pytest.raises(ConfigurationError):
        minimize(lambda params: 0.0, [0.0], budget=0)
    with pytest.raises(ConfigurationError):
        minimize(lambda params: 0.0, [0.0], budget=5, method="BFGS")


def test_cobyla_failure_falls_back_to_nelder_mead(failing_cobyla):
    cost = CountingQuadratic([0.4, 0.1])
    result = minimize(cost, [0.0, 0.0], budget=80, method=COBYLA)
    assert result.method == NELDER_MEAD
    assert result.evals_used == cost.calls <= 80
    assert result.best_cost < cost.center @ cost.center
