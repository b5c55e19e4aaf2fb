"""
Objetivos de aprendizaje: targets DQN/DDQN, ventajas, actor-crítico, PPO y PPO con rollback.
"""
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import torch


def dqn_targets(
    rewards: torch.Tensor,
    dones: torch.Tensor,
    next_q_target: torch.Tensor,
    next_masks: torch.Tensor,
    gamma: float,
    next_q_online: torch.Tensor = None,
) -> torch.Tensor:
    """
    Target de Q-learning respetando la máscara de s'.

    DQN:  y = r + γ · max_{a' legal} Q_target(s', a') · (1 - done)
    DDQN: y = r + γ · Q_target(s', argmax_{a' legal} Q_online(s', a')) · (1 - done)

    Args:
        rewards: (B,)
        dones: (B,) con 0/1
        next_q_target: (B, A) Q de la red target en s'
        next_masks: (B, A) acciones legales en s'
        gamma: Descuento
        next_q_online: (B, A) Q de la red online en s' (activa DDQN)

    Returns:
        Targets (B,)
    """
    neg_inf = torch.tensor(float("-inf"), dtype=next_q_target.dtype)
    if next_q_online is None:
        bootstrap = torch.where(next_masks, next_q_target, neg_inf).max(dim=-1).values
    else:
        best = torch.where(next_masks, next_q_online, neg_inf).argmax(dim=-1, keepdim=True)
        bootstrap = next_q_target.gather(-1, best).squeeze(-1)
    has_legal = next_masks.any(dim=-1)
    live = (dones < 0.5) & has_legal
    bootstrap = torch.where(live, bootstrap, torch.zeros_like(bootstrap))
    return rewards + gamma * bootstrap


def n_step_returns(
    rewards: np.ndarray, dones: np.ndarray, bootstrap: float, gamma: float
) -> np.ndarray:
    """
    Retornos descontados hacia atrás con bootstrap V(s_T) (cortado en done).
    """
    returns = np.zeros(len(rewards), dtype=np.float64)
    running = float(bootstrap)
    for t in reversed(range(len(rewards))):
        running = rewards[t] + gamma * running * (1.0 - dones[t])
        returns[t] = running
    return returns


def generalized_advantages(
    rewards: np.ndarray,
    values: np.ndarray,
    dones: np.ndarray,
    last_value: float,
    gamma: float,
    lam: float,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Estimación de ventajas generalizada (GAE).

    Args:
        rewards: r_t
        values: V(s_t)
        dones: 1 si s_{t+1} es terminal
        last_value: V(s_T) para el bootstrap final
        gamma: Descuento
        lam: λ de GAE

    Returns:
        (ventajas, retornos = ventajas + valores)
    """
    n = len(rewards)
    advantages = np.zeros(n, dtype=np.float64)
    running = 0.0
    for t in reversed(range(n)):
        next_value = last_value if t == n - 1 else values[t + 1]
        not_done = 1.0 - dones[t]
        delta = rewards[t] + gamma * next_value * not_done - values[t]
        running = delta + gamma * lam * not_done * running
        advantages[t] = running
    return advantages, advantages + np.asarray(values, dtype=np.float64)


def normalize_advantages(advantages: np.ndarray) -> np.ndarray:
    """Media cero y varianza unitaria (sin cambios si hay un solo elemento)."""
    advantages = np.asarray(advantages, dtype=np.float64)
    if len(advantages) < 2:
        return advantages - advantages.mean() if len(advantages) else advantages
    return (advantages - advantages.mean()) / (advantages.std() + 1e-8)


def clipped_surrogate(ratio: torch.Tensor, advantages: torch.Tensor, clip: float) -> torch.Tensor:
    """min(ρ·A, clip(ρ, 1-ε, 1+ε)·A) por muestra."""
    clipped = torch.clamp(ratio, 1.0 - clip, 1.0 + clip)
    return torch.minimum(ratio * advantages, clipped * advantages)


def rollback_surrogate(
    ratio: torch.Tensor, advantages: torch.Tensor, clip: float, rollback: float
) -> torch.Tensor:
    """
    Surrogate con rollback de pendiente negativa donde PPO recortaría.

    ρ > 1+ε y A > 0:  -α·ρ·A + (1+α)(1+ε)·A
    ρ < 1-ε y A < 0:  -α·ρ·A + (1+α)(1-ε)·A
    en otro caso:     igual que PPO

    Args:
        ratio: π_new / π_old
        advantages: Ventajas
        clip: ε
        rollback: α (pendiente del rollback)

    Returns:
        Surrogate por muestra (continuo en ρ = 1 ± ε)
    """
    upper = (ratio > 1.0 + clip) & (advantages > 0)
    lower = (ratio < 1.0 - clip) & (advantages < 0)
    above = -rollback * ratio * advantages + (1.0 + rollback) * (1.0 + clip) * advantages
    below = -rollback * ratio * advantages + (1.0 + rollback) * (1.0 - clip) * advantages
    base = clipped_surrogate(ratio, advantages, clip)
    return torch.where(upper, above, torch.where(lower, below, base))


@dataclass
class LossTerms:
    """Componentes de la pérdida de actor-crítico."""

    total: torch.Tensor
    policy: float
    value: float
    entropy: float

    def to_dict(self):
        return {"total": float(self.total.detach()), "policy": self.policy,
                "value": self.value, "entropy": self.entropy}


def actor_critic_loss(
    log_probs: torch.Tensor,
    values: torch.Tensor,
    returns: torch.Tensor,
    entropies: torch.Tensor,
    value_coef: float,
    entropy_coef: float,
) -> LossTerms:
    """
    Pérdida A2C/A3C: -E[A·log π] + c_v·E[(R - V)²] - c_H·E[H].

    La ventaja A = R - V se trata como constante en el término de política.
    """
    advantages = (returns - values).detach()
    policy_loss = -(advantages * log_probs).mean()
    value_loss = ((returns - values) ** 2).mean()
    entropy = entropies.mean()
    total = policy_loss + value_coef * value_loss - entropy_coef * entropy
    return LossTerms(total, float(policy_loss.detach()), float(value_loss.detach()), float(entropy.detach()))


def ppo_loss(
    log_probs: torch.Tensor,
    old_log_probs: torch.Tensor,
    advantages: torch.Tensor,
    values: torch.Tensor,
    returns: torch.Tensor,
    entropies: torch.Tensor,
    clip: float,
    value_coef: float,
    entropy_coef: float,
    rollback: float = None,
) -> LossTerms:
    """
    Pérdida PPO (o PPO con rollback si se indica α).

    loss = -E[surrogate] + c_v·E[(R - V)²] - c_H·E[H]
    """
    ratio = torch.exp(log_probs - old_log_probs)
    if rollback is None:
        surrogate = clipped_surrogate(ratio, advantages, clip)
    else:
        surrogate = rollback_surrogate(ratio, advantages, clip, rollback)
    policy_loss = -surrogate.mean()
    value_loss = ((returns - values) ** 2).mean()
    entropy = entropies.mean()
    total = policy_loss + value_coef * value_loss - entropy_coef * entropy
    return LossTerms(total, float(policy_loss.detach()), float(value_loss.detach()), float(entropy.detach()))
