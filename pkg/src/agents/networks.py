"""
Redes feed-forward de los agentes (torch).

Los pesos se inicializan desde un generador de numpy con semilla para que la
inicialización sea reproducible independientemente del estado global de torch.
"""
import copy
import math
from typing import Callable, List, Sequence, Tuple

import numpy as np
import torch
import torch.nn as nn

from ..utils.errors import ConfigurationError


def _init_linear(layer: nn.Linear, rng: np.random.Generator):
    """U(-1/√fan_in, 1/√fan_in) para pesos y sesgos."""
    bound = 1.0 / math.sqrt(layer.in_features)
    with torch.no_grad():
        layer.weight.copy_(torch.from_numpy(rng.uniform(-bound, bound, size=tuple(layer.weight.shape))))
        layer.bias.copy_(torch.from_numpy(rng.uniform(-bound, bound, size=tuple(layer.bias.shape))))


def seed_linear_layers(net: nn.Module, seed: int):
    """Inicializa todas las capas lineales de net con un generador numpy sembrado."""
    rng = np.random.default_rng(seed)
    for module in net.modules():
        if isinstance(module, nn.Linear):
            _init_linear(module, rng)


def _build_body(input_size: int, sizes: Sequence[int]) -> Tuple[nn.Sequential, int]:
    layers = []
    previous = input_size
    for size in sizes:
        layers.append(nn.Linear(previous, size))
        layers.append(nn.ReLU())
        previous = size
    return nn.Sequential(*layers), previous


class MlpNetwork(nn.Module):
    """Perceptrón multicapa con activación ReLU en las capas ocultas."""

    def __init__(self, input_size: int, output_size: int, hidden: Sequence[int], seed: int = 0):
        """
        Args:
            input_size: Dimensión de la observación
            output_size: Número de salidas (acciones)
            hidden: Tamaños de las capas ocultas
            seed: Semilla de inicialización
        """
        super().__init__()
        self.input_size = input_size
        self.output_size = output_size
        self.body, last = _build_body(input_size, hidden)
        self.head = nn.Linear(last, output_size)
        seed_linear_layers(self, seed)

    @property
    def layer_sizes(self) -> List[int]:
        linear = [m for m in self.modules() if isinstance(m, nn.Linear)]
        return [self.input_size] + [m.out_features for m in linear]

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.head(self.body(x))


def dueling_aggregate(value: torch.Tensor, advantages: torch.Tensor) -> torch.Tensor:
    """Q(s, a) = V(s) + A(s, a) - mean_a A(s, a)."""
    value = torch.as_tensor(value)
    advantages = torch.as_tensor(advantages)
    if value.dim() == advantages.dim() - 1:
        value = value.unsqueeze(-1)
    return value + advantages - advantages.mean(dim=-1, keepdim=True)


class DuelingNetwork(nn.Module):
    """Cuerpo compartido con cabezas de valor y de ventaja."""

    def __init__(self, input_size: int, output_size: int, hidden: Sequence[int], seed: int = 0):
        super().__init__()
        self.input_size = input_size
        self.output_size = output_size
        self.body, last = _build_body(input_size, hidden)
        self.value_head = nn.Linear(last, 1)
        self.advantage_head = nn.Linear(last, output_size)
        seed_linear_layers(self, seed)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        features = self.body(x)
        return dueling_aggregate(self.value_head(features).squeeze(-1), self.advantage_head(features))


class ActorCriticNetwork(nn.Module):
    """Cuerpo compartido con cabeza de política (logits) y de valor."""

    def __init__(self, input_size: int, output_size: int, hidden: Sequence[int], seed: int = 0):
        super().__init__()
        self.input_size = input_size
        self.output_size = output_size
        self.body, last = _build_body(input_size, hidden)
        self.policy_head = nn.Linear(last, output_size)
        self.value_head = nn.Linear(last, 1)
        seed_linear_layers(self, seed)

    def forward(self, x: torch.Tensor) -> Tuple[torch.Tensor, torch.Tensor]:
        features = self.body(x)
        return self.policy_head(features), self.value_head(features).squeeze(-1)


def forward(net: nn.Module, observation) -> np.ndarray:
    """
    Evalúa la red sobre una observación aplanada.

    Args:
        net: MlpNetwork, DuelingNetwork o ActorCriticNetwork
        observation: Vector (o QasObservation)

    Returns:
        Salida como array (Q-valores, o logits seguidos del valor del estado)
    """
    if hasattr(observation, "flat"):
        observation = observation.flat()
    x = torch.as_tensor(np.asarray(observation, dtype=np.float32))
    if x.shape[-1] != net.input_size:
        raise ConfigurationError(
            f"Observación de dimensión {x.shape[-1]}, la red espera {net.input_size}"
        )
    with torch.no_grad():
        out = net(x)
    if isinstance(out, tuple):
        logits, value = out
        return np.concatenate([logits.numpy().reshape(-1), value.numpy().reshape(-1)])
    return out.numpy()


def copy_weights(source: nn.Module, target: nn.Module):
    """Copia los parámetros de source en target."""
    target.load_state_dict(source.state_dict())


def backward_check(
    net: nn.Module, loss_fn: Callable[[nn.Module], torch.Tensor], h: float = 1e-5
) -> float:
    """
    Compara gradientes analíticos con diferencias finitas centrales.

    Se trabaja sobre una copia en float64 de la red.

    Args:
        net: Red pequeña (≤ ~100 parámetros)
        loss_fn: Función red -> pérdida escalar
        h: Paso de las diferencias finitas

    Returns:
        Máximo error relativo |a - n| / max(|a|, |n|, 1)
    """
    model = copy.deepcopy(net).double()
    model.zero_grad()
    loss_fn(model).backward()
    worst = 0.0
    for param in model.parameters():
        # parámetros que la pérdida no usa tienen gradiente nulo
        grad = torch.zeros_like(param) if param.grad is None else param.grad
        analytic = grad.detach().clone().reshape(-1)
        flat = param.data.reshape(-1)
        for i in range(flat.numel()):
            original = flat[i].item()
            with torch.no_grad():
                flat[i] = original + h
                plus = loss_fn(model).item()
                flat[i] = original - h
                minus = loss_fn(model).item()
                flat[i] = original
            numeric = (plus - minus) / (2.0 * h)
            a = analytic[i].item()
            error = abs(a - numeric) / max(abs(a), abs(numeric), 1.0)
            worst = max(worst, error)
    return worst
