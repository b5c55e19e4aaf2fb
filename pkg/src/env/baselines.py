"""
Ansatz eficiente en hardware (HEA) como referencia fija.
"""
import math
from dataclasses import asdict, dataclass
from typing import Dict, Optional

import numpy as np

from ..optimize import minimize
from ..problems.tasks import TaskKind, TaskSpec
from ..qsim.circuit import CircuitProgram
from ..qsim.gates import Gate, GateKind
from ..utils.errors import ConfigurationError
from .costs import CostEvaluator


def hardware_efficient_ansatz(n_qubits: int, layers: int) -> CircuitProgram:
    """
    Capas de RY en cada qubit seguidas de una cadena CX entre vecinos.

    Args:
        n_qubits: Número de qubits
        layers: Número de capas (≥ 1)

    Returns:
        CircuitProgram con ángulos en 0
    """
    if layers < 1:
        raise ConfigurationError(f"layers debe ser ≥ 1: {layers}")
    program = CircuitProgram(n_qubits)
    for _ in range(layers):
        for q in range(n_qubits):
            program.append(Gate(GateKind.RY, (q,), 0.0))
        for q in range(n_qubits - 1):
            program.append(Gate(GateKind.CX, (q, q + 1)))
    return program


@dataclass
class BaselineResult:
    """Resultado del HEA optimizado."""

    task_id: str
    layers: int
    cost: float
    error: float
    gate_count: int
    depth: int
    evals_used: int
    train_accuracy: Optional[float] = None
    test_accuracy: Optional[float] = None

    def to_dict(self) -> Dict:
        return asdict(self)


def evaluate_baseline(
    task: TaskSpec, layers: int, budget: Optional[int] = None, seed: int = 0
) -> BaselineResult:
    """
    Optimiza un HEA sobre una tarea con el mismo optimizador del entorno.

    Args:
        task: Tarea parametrizada (VQE, VQSD o VQC)
        layers: Capas del ansatz
        budget: Evaluaciones (por defecto el presupuesto de la tarea)
        seed: Semilla de los ángulos iniciales

    Returns:
        BaselineResult
    """
    if not task.kind.parameterized:
        raise ConfigurationError("El HEA solo aplica a tareas parametrizadas")
    program = hardware_efficient_ansatz(task.n_qubits, layers)
    evaluator = CostEvaluator(task)
    rng = np.random.default_rng(seed)
    initial = rng.uniform(-math.pi, math.pi, size=program.parameter_count)
    result = minimize(
        evaluator.cost_fn(program), initial, budget=budget or task.optimizer_budget, seed=seed
    )
    program = program.with_params(result.best_params)

    train_acc = test_acc = None
    if task.kind is TaskKind.VQC:
        train_acc, test_acc = evaluator.accuracies(program)
    return BaselineResult(
        task_id=task.task_id,
        layers=layers,
        cost=result.best_cost,
        error=evaluator.error(result.best_cost, program),
        gate_count=len(program),
        depth=program.depth,
        evals_used=result.evals_used,
        train_accuracy=train_acc,
        test_accuracy=test_acc,
    )
