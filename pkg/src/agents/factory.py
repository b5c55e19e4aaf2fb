"""
Construcción de agentes y entrenadores a partir de AgentConfig.
"""
from typing import Callable, List, Optional, Union

from ..env.environment import QasEnvironment
from ..utils.errors import ConfigurationError
from .a3c import A3CTrainer
from .base import Agent
from .config import AgentConfig, Algorithm
from .policy_agents import A2CAgent, PPOAgent
from .training import EpisodeResult, train_agent
from .value_agent import ValueAgent

_AGENT_CLASSES = {
    Algorithm.DQN: ValueAgent,
    Algorithm.DDQN: ValueAgent,
    Algorithm.DUELING_DQN: ValueAgent,
    Algorithm.DQN_PER: ValueAgent,
    Algorithm.DQN_RANK: ValueAgent,
    Algorithm.A2C: A2CAgent,
    Algorithm.PPO: PPOAgent,
    Algorithm.TPPO: PPOAgent,
}


def build_agent(
    config: AgentConfig,
    observation_size: int,
    n_actions: int,
    hidden_layers: int = 3,
    seed: int = 0,
    log_level: Optional[str] = None,
) -> Agent:
    """
    Instancia el agente de un solo entorno.

    Args:
        config: Hiperparámetros (define el algoritmo)
        observation_size: Dimensión de la observación
        n_actions: Tamaño del espacio de acciones
        hidden_layers: Capas ocultas por defecto de la tarea
        seed: Semilla
        log_level: Nivel de logging

    Returns:
        Agente listo para entrenar

    Raises:
        ConfigurationError: Para a3c, que necesita varios entornos
    """
    agent_cls = _AGENT_CLASSES.get(config.algorithm)
    if agent_cls is None:
        raise ConfigurationError(f"{config.algorithm.value} requiere build_trainer (varios entornos)")
    return agent_cls(observation_size, n_actions, config, hidden_layers, seed, log_level)


class SerialTrainer:
    """Un agente y un entorno, entrenados episodio a episodio."""

    def __init__(self, agent: Agent, env: QasEnvironment):
        self.agent = agent
        self.env = env
        self.logger = agent.logger

    @property
    def name(self) -> str:
        return self.agent.name

    def train(self, episodes: int, callback: Optional[Callable[[EpisodeResult], None]] = None) -> List[EpisodeResult]:
        return train_agent(self.agent, self.env, episodes, callback)


def build_trainer(
    config: AgentConfig,
    env_factory: Callable[[int], QasEnvironment],
    hidden_layers: int = 3,
    seed: int = 0,
    log_level: Optional[str] = None,
) -> Union[SerialTrainer, A3CTrainer]:
    """
    Entrenador con interfaz común train(episodes, callback).

    Args:
        config: Hiperparámetros
        env_factory: Función semilla -> entorno
        hidden_layers: Capas ocultas por defecto de la tarea
        seed: Semilla de la corrida
        log_level: Nivel de logging

    Returns:
        SerialTrainer o A3CTrainer
    """
    env = env_factory(seed)
    if config.algorithm is Algorithm.A3C:
        return A3CTrainer(
            env_factory, env.observation_size, env.n_actions, config, hidden_layers, seed, log_level
        )
    agent = build_agent(config, env.observation_size, env.n_actions, hidden_layers, seed, log_level)
    return SerialTrainer(agent, env)
