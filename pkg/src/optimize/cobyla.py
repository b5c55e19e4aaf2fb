"""
Optimizador interno de ángulos con presupuesto de evaluaciones.

El presupuesto cuenta evaluaciones de la función de costo (incluida la del
punto inicial). Se usa COBYLA de scipy; si falla, Nelder-Mead con el mismo
presupuesto.
"""
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import optimize as sp_optimize

from ..utils.errors import ConfigurationError, OptimizationError
from ..utils.logger import setup_logger

logger = setup_logger(__name__)

COBYLA = "COBYLA"
NELDER_MEAD = "Nelder-Mead"
COBYLA_RHOBEG = 1.0
COBYLA_TOL = 1e-8


@dataclass
class OptimizeResult:
    """Resultado de una optimización."""

    best_params: np.ndarray
    best_cost: float
    evals_used: int
    method: str

    def to_dict(self):
        return {
            "best_params": self.best_params.tolist(),
            "best_cost": self.best_cost,
            "evals_used": self.evals_used,
            "method": self.method,
        }


class _BudgetExhausted(Exception):
    pass


class _TrackedCost:
    """Envuelve la función de costo: cuenta evaluaciones y guarda el mejor punto."""

    def __init__(self, cost_fn: Callable[[np.ndarray], float], budget: int):
        self.cost_fn = cost_fn
        self.budget = budget
        self.evals = 0
        self.best_cost = math.inf
        self.best_params = None

    def __call__(self, params: np.ndarray) -> float:
        if self.evals >= self.budget:
            raise _BudgetExhausted()
        params = np.array(params, dtype=float, copy=True)
        value = float(self.cost_fn(params))
        self.evals += 1
        if not math.isfinite(value):
            raise OptimizationError(f"Costo no finito ({value}) en los ángulos {params.tolist()}", params)
        if value < self.best_cost:
            self.best_cost = value
            self.best_params = params
        return value

    def result(self, method: str) -> OptimizeResult:
        return OptimizeResult(self.best_params, self.best_cost, self.evals, method)


def _initial_simplex(x0: np.ndarray, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    steps = rng.uniform(0.5, 1.0, size=len(x0)) * rng.choice([-1.0, 1.0], size=len(x0))
    simplex = np.tile(x0, (len(x0) + 1, 1))
    simplex[1:] += np.diag(steps)
    return simplex


def minimize(
    cost_fn: Callable[[np.ndarray], float],
    initial: Sequence[float],
    budget: int,
    seed: int = 0,
    method: str = COBYLA,
) -> OptimizeResult:
    """
    Minimiza cost_fn sin derivadas respetando un presupuesto de evaluaciones.

    Nunca devuelve un costo peor que el del punto inicial: el resultado es el
    mejor punto evaluado.

    Args:
        cost_fn: Función determinista ángulos -> costo real
        initial: Ángulos iniciales
        budget: Máximo de evaluaciones (≥ 1)
        seed: Semilla (solo afecta al simplex inicial de Nelder-Mead)
        method: "COBYLA" o "Nelder-Mead"

    Returns:
        OptimizeResult con el mejor punto, su costo y las evaluaciones usadas
    """
    if budget < 1:
        raise ConfigurationError(f"El presupuesto debe ser ≥ 1, recibió {budget}")
    if method not in (COBYLA, NELDER_MEAD):
        raise ConfigurationError(f"Método desconocido: {method}")

    x0 = np.asarray(initial, dtype=float).reshape(-1)
    tracked = _TrackedCost(cost_fn, budget)
    tracked(x0)
    if x0.size == 0 or budget == 1:
        return tracked.result(method)

    if method == COBYLA:
        try:
            sp_optimize.minimize(
                tracked,
                x0,
                method=COBYLA,
                tol=COBYLA_TOL,
                options={"maxiter": budget - 1, "rhobeg": COBYLA_RHOBEG},
            )
            return tracked.result(COBYLA)
        except _BudgetExhausted:
            return tracked.result(COBYLA)
        except OptimizationError:
            raise
        except (ValueError, RuntimeError) as e:
            logger.warning(f"COBYLA falló ({e}); se usa {NELDER_MEAD}")

    try:
        sp_optimize.minimize(
            tracked,
            x0,
            method=NELDER_MEAD,
            options={
                "maxfev": budget - tracked.evals,
                "initial_simplex": _initial_simplex(x0, seed),
                "xatol": 1e-10,
                "fatol": 1e-12,
            },
        )
    except _BudgetExhausted:
        pass
    return tracked.result(NELDER_MEAD)
