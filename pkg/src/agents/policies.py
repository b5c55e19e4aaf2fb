"""
Selección de acciones respetando la máscara de acciones legales.
"""
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import torch

from ..utils.errors import ContractViolation


def _check_mask(mask: np.ndarray) -> np.ndarray:
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        raise ContractViolation("Máscara sin acciones legales")
    return mask


def masked_values(values: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Valores con -inf en las acciones ilegales."""
    return np.where(_check_mask(mask), np.asarray(values, dtype=np.float64), -np.inf)


def greedy_action(q_values: np.ndarray, mask: np.ndarray) -> int:
    """argmax de Q sobre las acciones legales (empate: menor índice)."""
    return int(np.argmax(masked_values(q_values, mask)))


def epsilon_greedy(
    q_values: np.ndarray, mask: np.ndarray, epsilon: float, rng: np.random.Generator
) -> int:
    """
    Con probabilidad ε una acción legal uniforme; si no, la greedy.

    Args:
        q_values: Q(s, ·)
        mask: Acciones legales
        epsilon: Probabilidad de exploración
        rng: Generador

    Returns:
        Índice de acción
    """
    mask = _check_mask(mask)
    if rng.random() < epsilon:
        return int(rng.choice(np.flatnonzero(mask)))
    return greedy_action(q_values, mask)


def masked_softmax(logits: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Softmax sobre los logits legales (probabilidad 0 en los ilegales)."""
    masked = masked_values(logits, mask)
    shifted = np.exp(masked - masked.max())
    return shifted / shifted.sum()


def sample_masked(logits: np.ndarray, mask: np.ndarray, rng: np.random.Generator) -> int:
    """Muestrea de la política restringida a las acciones legales."""
    probabilities = masked_softmax(logits, mask)
    return int(rng.choice(len(probabilities), p=probabilities))


def masked_distribution(
    logits: torch.Tensor, masks: torch.Tensor
) -> Tuple[torch.Tensor, torch.Tensor]:
    """
    Log-probabilidades y probabilidades con -inf en los logits ilegales.

    Returns:
        (log_probs, probs); log_probs vale 0 en las acciones ilegales
    """
    masked = logits.masked_fill(~masks, float("-inf"))
    log_probs = torch.log_softmax(masked, dim=-1)
    probs = log_probs.exp()
    return log_probs.masked_fill(~masks, 0.0), probs


def masked_entropy(logits: torch.Tensor, masks: torch.Tensor) -> torch.Tensor:
    """Entropía de la distribución restringida (0 con una sola acción legal)."""
    log_probs, probs = masked_distribution(logits, masks)
    return -(probs * log_probs).sum(dim=-1)


@dataclass
class EpsilonSchedule:
    """ε_k = max(ε_min, ε_0 · decay^k)."""

    start: float = 1.0
    minimum: float = 0.05
    decay: float = 0.99995
    steps: int = 0

    @property
    def value(self) -> float:
        return max(self.minimum, self.start * self.decay ** self.steps)

    def step(self) -> float:
        """Avanza un paso y devuelve el nuevo ε."""
        self.steps += 1
        return self.value
