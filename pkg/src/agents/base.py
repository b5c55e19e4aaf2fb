"""
Interfaz común de los agentes.
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from ..utils.logger import setup_logger
from .config import AgentConfig


@dataclass
class Transition:
    """Una interacción con el entorno."""

    observation: np.ndarray
    mask: np.ndarray
    action: int
    reward: float
    next_observation: np.ndarray
    next_mask: np.ndarray
    done: bool


class Agent(ABC):
    """Agente que elige acciones legales y aprende de transiciones."""

    def __init__(
        self,
        observation_size: int,
        n_actions: int,
        config: AgentConfig,
        hidden_layers: int,
        seed: int = 0,
        log_level: Optional[str] = None,
    ):
        """
        Args:
            observation_size: Dimensión de la observación aplanada
            n_actions: Tamaño del espacio de acciones
            config: Hiperparámetros
            hidden_layers: Capas ocultas (si config.hidden_layers es None)
            seed: Semilla
            log_level: Nivel de logging
        """
        self.observation_size = observation_size
        self.n_actions = n_actions
        self.config = config
        self.hidden = [config.hidden_width] * (config.hidden_layers or hidden_layers)
        self.seed = seed
        self.rng = np.random.default_rng(seed)
        self.env_steps = 0
        self.updates = 0
        self.logger = setup_logger(__name__, level=log_level)

    @property
    def name(self) -> str:
        return self.config.algorithm.value

    @abstractmethod
    def select_action(self, observation: np.ndarray, mask: np.ndarray, explore: bool = True) -> int:
        """Elige una acción legal."""

    @abstractmethod
    def observe(self, transition: Transition):
        """Registra una transición y aprende según su calendario."""

    def end_episode(self):
        """Hook al terminar un episodio."""

    def stats(self) -> Dict:
        return {"env_steps": self.env_steps, "updates": self.updates}
