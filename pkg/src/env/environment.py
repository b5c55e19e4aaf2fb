"""
Entorno de búsqueda de arquitecturas: cada paso agrega una compuerta,
re-optimiza los ángulos y devuelve la recompensa.
"""
import time
from dataclasses import asdict, dataclass
from typing import Dict, Optional, Tuple, Union

import numpy as np

from ..optimize import COBYLA, minimize
from ..problems.tasks import TaskKind, TaskSpec
from ..qsim.circuit import CircuitProgram
from ..utils.errors import ContractViolation
from ..utils.logger import setup_logger
from .actions import ActionSpace, GateAction
from .costs import CostEvaluator
from .curriculum import CurriculumTracker
from .encoding import QasObservation, cost_feature, encode_observation, observation_size
from .rewards import SUCCESS_REWARD, cost_reward, fidelity_reward


@dataclass
class StepInfo:
    """Métricas de un paso."""

    cost: float
    error: float
    depth: int
    gate_count: int
    optimizer_evals: int
    success: bool
    step_time: float = 0.0
    optimizer_method: Optional[str] = None

    def to_dict(self) -> Dict:
        return asdict(self)


@dataclass
class StepOutcome:
    """Resultado de step()."""

    observation: QasObservation
    reward: float
    done: bool
    info: StepInfo


class QasEnvironment:
    """Proceso de decisión de construcción de circuitos para una tarea."""

    def __init__(
        self,
        task: TaskSpec,
        seed: int = 0,
        curriculum: Optional[CurriculumTracker] = None,
        r_big: float = SUCCESS_REWARD,
        optimizer_method: str = COBYLA,
        log_level: Optional[str] = None,
    ):
        """
        Inicializa el entorno.

        Args:
            task: Tarea a resolver
            seed: Semilla de la secuencia de semillas del optimizador
            curriculum: Currículo sobre ζ (por defecto deshabilitado)
            r_big: Recompensa de éxito en preparación de estados
            optimizer_method: "COBYLA" o "Nelder-Mead"
            log_level: Nivel de logging
        """
        self.task = task
        self.seed = seed
        self.r_big = r_big
        self.optimizer_method = optimizer_method
        self.curriculum = curriculum or CurriculumTracker(zeta_final=task.zeta)
        self.parameterized = task.kind.parameterized
        self.action_space = ActionSpace(task.n_qubits, self.parameterized)
        self.evaluator = CostEvaluator(task)
        self.logger = setup_logger(__name__, level=log_level)

        self._rng = np.random.default_rng(seed)
        self.program = CircuitProgram(task.n_qubits)
        self.t = 0
        self.initial_cost = 0.0
        self.prev_cost = 0.0
        self.done = False
        self._observation: Optional[QasObservation] = None

    @property
    def n_actions(self) -> int:
        return self.action_space.size

    @property
    def observation_size(self) -> int:
        return observation_size(self.task.n_qubits, self.task.d_max)

    @property
    def zeta(self) -> float:
        return self.curriculum.zeta

    def reset(self, seed: Optional[int] = None) -> QasObservation:
        """
        Reinicia con un circuito vacío.

        Args:
            seed: Nueva semilla (opcional)

        Returns:
            Observación inicial (estructura en ceros)
        """
        if seed is not None:
            self.seed = seed
            self._rng = np.random.default_rng(seed)
        self.program = CircuitProgram(self.task.n_qubits)
        self.t = 0
        self.done = False
        self.initial_cost = self.evaluator.cost(self.program)
        self.prev_cost = self.initial_cost
        self._observation = self._encode(self.initial_cost)
        return self._observation

    def observation(self) -> QasObservation:
        if self._observation is None:
            return self.reset()
        return self._observation

    def legal_action_mask(self) -> np.ndarray:
        """Máscara de acciones legales para el circuito actual."""
        return self.action_space.legal_mask(self.program)

    def _encode(self, cost: float) -> QasObservation:
        feature = cost_feature(cost, self.evaluator.e_min, self.initial_cost)
        return encode_observation(self.program, self.task.d_max, feature, self.parameterized)

    def _optimize(self) -> Tuple[float, int, Optional[str]]:
        """
        Re-optimiza todos los ángulos partiendo de los anteriores (nuevo ángulo en 0).

        Returns:
            (costo, evaluaciones, método usado o None si no hubo optimización)
        """
        program = self.program
        budget = self.task.optimizer_budget
        if program.parameter_count == 0 or budget == 0:
            return self.evaluator.cost(program), 1, None
        seed = int(self._rng.integers(0, 2**31 - 1))
        result = minimize(
            self.evaluator.cost_fn(program),
            program.params,
            budget=budget,
            seed=seed,
            method=self.optimizer_method,
        )
        self.program = program.with_params(result.best_params)
        return result.best_cost, result.evals_used, result.method

    def step(self, action: Union[int, GateAction]) -> StepOutcome:
        """
        Coloca una compuerta y evalúa el circuito.

        Args:
            action: Índice o GateAction legal bajo la máscara actual

        Returns:
            StepOutcome con observación, recompensa, done y métricas
        """
        if self._observation is None:
            self.reset()
        if self.done:
            raise ContractViolation("step() llamado sobre un episodio terminado")
        index = action.index if isinstance(action, GateAction) else int(action)
        mask = self.legal_action_mask()
        decoded = self.action_space.decode(index)
        if not mask[index]:
            raise ContractViolation(f"Acción ilegal {decoded} en el paso {self.t}")

        start = time.perf_counter()
        self.program.append(decoded.to_gate())
        self.t += 1
        cost, evals, method = self._optimize()

        if self.task.kind is TaskKind.STATE_PREP:
            reward, success = fidelity_reward(1.0 - cost, self.r_big)
            done = success or self.t >= self.task.d_max
        else:
            reward, done, success = cost_reward(
                self.prev_cost, cost, self.evaluator.e_min, self.zeta, self.t, self.task.d_max
            )

        self.prev_cost = cost
        self.done = done
        self._observation = self._encode(cost)
        info = StepInfo(
            cost=cost,
            error=abs(cost - self.evaluator.e_min),
            depth=self.program.depth,
            gate_count=len(self.program),
            optimizer_evals=evals,
            success=success,
            step_time=time.perf_counter() - start,
            optimizer_method=method,
        )
        self.logger.debug(
            f"t={self.t} {decoded} C={cost:.6g} r={reward:.4g} depth={info.depth} done={done}"
        )
        return StepOutcome(self._observation, float(reward), done, info)
