"""
Bucle de entrenamiento por episodios.
"""
import time
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

from ..env.environment import QasEnvironment
from ..qsim.circuit import CircuitProgram
from .base import Agent, Transition


@dataclass
class EpisodeResult:
    """Métricas de un episodio."""

    episode: int
    total_reward: float
    steps: int
    success: bool
    final_cost: float
    error: float
    gate_count: int
    depth: int
    cx_count: int
    single_qubit_count: int
    optimizer_evals: int
    duration: float
    program: CircuitProgram
    optimizer_methods: Tuple[str, ...] = ()

    def to_dict(self) -> Dict:
        return {
            "episode": self.episode,
            "total_reward": self.total_reward,
            "steps": self.steps,
            "success": self.success,
            "final_cost": self.final_cost,
            "error": self.error,
            "gate_count": self.gate_count,
            "depth": self.depth,
            "cx_count": self.cx_count,
            "single_qubit_count": self.single_qubit_count,
            "optimizer_evals": self.optimizer_evals,
            "duration": self.duration,
            "program": self.program.to_dict(),
            "optimizer_methods": list(self.optimizer_methods),
        }


def train_episode(
    agent: Agent, env: QasEnvironment, episode: int = 0, explore: bool = True
) -> EpisodeResult:
    """
    Ejecuta un episodio completo hasta done.

    Args:
        agent: Agente con el mismo espacio de acciones que el entorno
        env: Entorno
        episode: Número de episodio (para el registro)
        explore: False para una evaluación greedy sin aprendizaje

    Returns:
        EpisodeResult con el circuito final
    """
    start = time.perf_counter()
    observation = env.reset().flat()
    mask = env.legal_action_mask()
    total_reward = 0.0
    evals = 0
    methods: List[str] = []
    outcome = None
    while True:
        action = agent.select_action(observation, mask, explore=explore)
        outcome = env.step(action)
        next_observation = outcome.observation.flat()
        next_mask = env.legal_action_mask()
        if explore:
            agent.observe(
                Transition(observation, mask, action, outcome.reward, next_observation, next_mask, outcome.done)
            )
        total_reward += outcome.reward
        evals += outcome.info.optimizer_evals
        if outcome.info.optimizer_method and outcome.info.optimizer_method not in methods:
            methods.append(outcome.info.optimizer_method)
        observation, mask = next_observation, next_mask
        if outcome.done:
            break
    if explore:
        agent.end_episode()

    info = outcome.info
    env.curriculum.update(info.success)
    program = env.program.copy()
    return EpisodeResult(
        episode=episode,
        total_reward=total_reward,
        steps=env.t,
        success=info.success,
        final_cost=info.cost,
        error=env.evaluator.error(info.cost, program),
        gate_count=len(program),
        depth=program.depth,
        cx_count=program.cx_count,
        single_qubit_count=program.single_qubit_count,
        optimizer_evals=evals,
        duration=time.perf_counter() - start,
        program=program,
        optimizer_methods=tuple(methods),
    )


def train_agent(
    agent: Agent,
    env: QasEnvironment,
    episodes: int,
    callback: Optional[Callable[[EpisodeResult], None]] = None,
) -> List[EpisodeResult]:
    """
    Entrena durante un número fijo de episodios.

    Args:
        agent: Agente
        env: Entorno
        episodes: Número de episodios
        callback: Función llamada tras cada episodio

    Returns:
        Resultados por episodio
    """
    results = []
    for episode in range(episodes):
        result = train_episode(agent, env, episode)
        results.append(result)
        if result.success:
            agent.logger.info(
                f"{agent.name}: éxito en el episodio {episode} "
                f"(E={result.error:.3g}, G={result.gate_count}, D={result.depth})"
            )
        else:
            agent.logger.debug(f"{agent.name}: episodio {episode} E={result.error:.3g}")
        if callback:
            callback(result)
    return results
