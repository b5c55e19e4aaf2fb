"""
Memoria de repetición con muestreo uniforme o priorizado (proporcional / por rango).

Las observaciones son binarias salvo la última componente (costo normalizado),
así que la estructura se guarda empaquetada en bits.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..utils.errors import ConfigurationError, ContractViolation

PRIORITY_EPS = 1e-6
REPLAY_MODES = ("uniform", "proportional", "rank")


@dataclass
class ReplayBatch:
    """Batch muestreado."""

    observations: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray
    next_observations: np.ndarray
    dones: np.ndarray
    next_masks: np.ndarray
    indices: np.ndarray
    weights: np.ndarray


class ReplayBuffer:
    """Buffer circular FIFO de transiciones (s, a, r, s', done, máscara de s')."""

    def __init__(
        self,
        capacity: int,
        observation_size: int,
        n_actions: int,
        mode: str = "uniform",
        alpha: float = 0.6,
        beta0: float = 0.4,
        beta_steps: int = 100000,
        seed: int = 0,
    ):
        """
        Inicializa el buffer.

        Args:
            capacity: Máximo de transiciones
            observation_size: Dimensión de la observación aplanada
            n_actions: Tamaño del espacio de acciones
            mode: "uniform", "proportional" o "rank"
            alpha: Exponente de prioridad
            beta0: Exponente inicial de los pesos de importancia (llega a 1 linealmente)
            beta_steps: Llamadas a sample() hasta β = 1
            seed: Semilla del muestreo
        """
        if mode not in REPLAY_MODES:
            raise ConfigurationError(f"Modo de replay desconocido: {mode}")
        if capacity < 1:
            raise ConfigurationError(f"capacity debe ser ≥ 1: {capacity}")
        self.capacity = capacity
        self.observation_size = observation_size
        self.n_actions = n_actions
        self.mode = mode
        self.alpha = alpha
        self.beta0 = beta0
        self.beta_steps = beta_steps
        self._rng = np.random.default_rng(seed)

        n_bits = observation_size - 1
        n_bytes = (n_bits + 7) // 8
        self._structure = np.zeros((capacity, n_bytes), dtype=np.uint8)
        self._feature = np.zeros(capacity, dtype=np.float32)
        self._next_structure = np.zeros((capacity, n_bytes), dtype=np.uint8)
        self._next_feature = np.zeros(capacity, dtype=np.float32)
        self._next_masks = np.zeros((capacity, (n_actions + 7) // 8), dtype=np.uint8)
        self._actions = np.zeros(capacity, dtype=np.int64)
        self._rewards = np.zeros(capacity, dtype=np.float32)
        self._dones = np.zeros(capacity, dtype=np.float32)
        self._priorities = np.zeros(capacity, dtype=np.float64)

        self._position = 0
        self._size = 0
        self._max_priority = 1.0
        self.sample_calls = 0
        self._last_indices: Optional[np.ndarray] = None

    def __len__(self) -> int:
        return self._size

    @property
    def beta(self) -> float:
        fraction = min(1.0, self.sample_calls / self.beta_steps)
        return self.beta0 + (1.0 - self.beta0) * fraction

    @property
    def priorities(self) -> np.ndarray:
        return self._priorities[: self._size].copy()

    def _pack(self, observation: np.ndarray):
        observation = np.asarray(observation, dtype=np.float32)
        if observation.shape != (self.observation_size,):
            raise ConfigurationError(
                f"Observación de forma {observation.shape}, se esperaba ({self.observation_size},)"
            )
        return np.packbits(observation[:-1] > 0.5), observation[-1]

    def _unpack(self, packed: np.ndarray, feature: np.ndarray) -> np.ndarray:
        bits = np.unpackbits(packed, axis=1, count=self.observation_size - 1).astype(np.float32)
        return np.concatenate([bits, feature[:, None]], axis=1)

    def add(
        self,
        observation: np.ndarray,
        action: int,
        reward: float,
        next_observation: np.ndarray,
        done: bool,
        next_mask: np.ndarray,
        priority: Optional[float] = None,
    ):
        """
        Agrega una transición (con la prioridad máxima vista si no se indica otra).
        """
        i = self._position
        self._structure[i], self._feature[i] = self._pack(observation)
        self._next_structure[i], self._next_feature[i] = self._pack(next_observation)
        self._next_masks[i] = np.packbits(np.asarray(next_mask, dtype=bool))
        self._actions[i] = int(action)
        self._rewards[i] = float(reward)
        self._dones[i] = float(done)
        self._priorities[i] = self._max_priority if priority is None else float(priority)
        self._max_priority = max(self._max_priority, self._priorities[i])

        self._position = (self._position + 1) % self.capacity
        self._size = min(self._size + 1, self.capacity)
        self._last_indices = None

    def sampling_probabilities(self) -> np.ndarray:
        """Ley de muestreo actual sobre las transiciones almacenadas."""
        n = self._size
        if self.mode == "uniform":
            return np.full(n, 1.0 / n)
        priorities = self._priorities[:n]
        if self.mode == "proportional":
            scaled = priorities ** self.alpha
        else:
            order = np.argsort(-priorities, kind="stable")
            ranks = np.empty(n, dtype=np.float64)
            ranks[order] = np.arange(1, n + 1)
            scaled = (1.0 / ranks) ** self.alpha
        return scaled / scaled.sum()

    def sample_indices(self, batch_size: int) -> np.ndarray:
        """Índices muestreados (con reemplazo) según la ley actual."""
        if self._size == 0:
            raise ContractViolation("sample() sobre un buffer vacío")
        return self._rng.choice(self._size, size=batch_size, p=self.sampling_probabilities())

    def importance_weights(self, indices: np.ndarray) -> np.ndarray:
        """w = (N·P(i))^(-β) / max w."""
        if self.mode == "uniform":
            return np.ones(len(indices), dtype=np.float32)
        probabilities = self.sampling_probabilities()[indices]
        weights = (self._size * probabilities) ** (-self.beta)
        return (weights / weights.max()).astype(np.float32)

    def sample(self, batch_size: int) -> ReplayBatch:
        """
        Muestrea un batch.

        Args:
            batch_size: Número de transiciones

        Returns:
            ReplayBatch con observaciones desempaquetadas y pesos de importancia
        """
        indices = self.sample_indices(batch_size)
        weights = self.importance_weights(indices)
        self.sample_calls += 1
        self._last_indices = indices
        masks = np.unpackbits(self._next_masks[indices], axis=1, count=self.n_actions).astype(bool)
        return ReplayBatch(
            observations=self._unpack(self._structure[indices], self._feature[indices]),
            actions=self._actions[indices],
            rewards=self._rewards[indices],
            next_observations=self._unpack(self._next_structure[indices], self._next_feature[indices]),
            dones=self._dones[indices],
            next_masks=masks,
            indices=indices,
            weights=weights,
        )

    def update_priorities(self, indices: np.ndarray, td_errors: np.ndarray) -> np.ndarray:
        """
        Actualiza prioridades con |δ| + 1e-6.

        Args:
            indices: Índices devueltos por el último sample()
            td_errors: Errores TD correspondientes

        Returns:
            Pesos de importancia de esos índices con las nuevas prioridades
        """
        indices = np.asarray(indices)
        if self._last_indices is None or not np.array_equal(indices, self._last_indices):
            raise ContractViolation("update_priorities con índices que no son del último sample()")
        priorities = np.abs(np.asarray(td_errors, dtype=np.float64)) + PRIORITY_EPS
        self._priorities[indices] = priorities
        self._max_priority = max(self._max_priority, float(priorities.max()))
        self._last_indices = None
        return self.importance_weights(indices)


def per_update(buffer: ReplayBuffer, indices: np.ndarray, td_errors: np.ndarray) -> np.ndarray:
    """Actualiza prioridades y devuelve los pesos de importancia."""
    return buffer.update_priorities(indices, td_errors)
