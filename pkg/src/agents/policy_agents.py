"""
Agentes de política: A2C, PPO y PPO con rollback (TPPO).
"""
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
import torch

from .base import Agent, Transition
from .config import AgentConfig, Algorithm
from .losses import (
    LossTerms,
    actor_critic_loss,
    generalized_advantages,
    n_step_returns,
    normalize_advantages,
    ppo_loss,
)
from .networks import ActorCriticNetwork
from .policies import masked_distribution, masked_entropy, masked_softmax


@dataclass
class Trajectory:
    """Segmento de interacción con las máscaras de cada paso."""

    observations: List[np.ndarray] = field(default_factory=list)
    masks: List[np.ndarray] = field(default_factory=list)
    actions: List[int] = field(default_factory=list)
    rewards: List[float] = field(default_factory=list)
    dones: List[bool] = field(default_factory=list)
    log_probs: List[float] = field(default_factory=list)
    values: List[float] = field(default_factory=list)
    last_observation: Optional[np.ndarray] = None

    def __len__(self) -> int:
        return len(self.actions)

    def append(self, transition: Transition, log_prob: float = 0.0, value: float = 0.0):
        self.observations.append(transition.observation)
        self.masks.append(np.asarray(transition.mask, dtype=bool))
        self.actions.append(int(transition.action))
        self.rewards.append(float(transition.reward))
        self.dones.append(bool(transition.done))
        self.log_probs.append(float(log_prob))
        self.values.append(float(value))
        self.last_observation = transition.next_observation

    def tensors(self, indices=None) -> Tuple[torch.Tensor, torch.Tensor, torch.Tensor]:
        """(observaciones, máscaras, acciones) como tensores."""
        idx = range(len(self)) if indices is None else indices
        observations = torch.as_tensor(np.stack([self.observations[i] for i in idx]).astype(np.float32))
        masks = torch.as_tensor(np.stack([self.masks[i] for i in idx]))
        actions = torch.as_tensor(np.array([self.actions[i] for i in idx], dtype=np.int64))
        return observations, masks, actions


class ActorCriticAgent(Agent):
    """Base de los agentes con red actor-crítico compartida."""

    def __init__(
        self,
        observation_size: int,
        n_actions: int,
        config: AgentConfig,
        hidden_layers: int = 3,
        seed: int = 0,
        log_level: Optional[str] = None,
    ):
        super().__init__(observation_size, n_actions, config, hidden_layers, seed, log_level)
        self.network = ActorCriticNetwork(observation_size, n_actions, self.hidden, seed=seed)
        self.optimizer = torch.optim.Adam(self.network.parameters(), lr=config.lr)
        self.trajectory = Trajectory()
        self._pending: Tuple[float, float] = (0.0, 0.0)
        self.last_loss: Optional[LossTerms] = None

    def policy_step(self, observation: np.ndarray, mask: np.ndarray, explore: bool = True) -> Tuple[int, float, float]:
        """
        Muestrea de la política enmascarada.

        Returns:
            (acción, log π(a|s), V(s))
        """
        with torch.no_grad():
            logits, value = self.network(torch.as_tensor(np.asarray(observation, dtype=np.float32)))
        probabilities = masked_softmax(logits.numpy(), mask)
        if explore:
            action = int(self.rng.choice(len(probabilities), p=probabilities))
        else:
            action = int(np.argmax(probabilities))
        return action, float(np.log(probabilities[action])), float(value)

    def select_action(self, observation: np.ndarray, mask: np.ndarray, explore: bool = True) -> int:
        action, log_prob, value = self.policy_step(observation, mask, explore)
        self._pending = (log_prob, value)
        return action

    def evaluate(self, observations: torch.Tensor, masks: torch.Tensor, actions: torch.Tensor):
        """
        Log-probabilidades, valores y entropías para acciones dadas.
        """
        logits, values = self.network(observations)
        log_probs, _ = masked_distribution(logits, masks)
        chosen = log_probs.gather(-1, actions.unsqueeze(-1)).squeeze(-1)
        return chosen, values, masked_entropy(logits, masks)

    def bootstrap_value(self, trajectory: Trajectory) -> float:
        """V(s_T) del último estado, 0 si el segmento terminó en done."""
        if not len(trajectory) or trajectory.dones[-1] or trajectory.last_observation is None:
            return 0.0
        with torch.no_grad():
            _, value = self.network(torch.as_tensor(np.asarray(trajectory.last_observation, dtype=np.float32)))
        return float(value)


class A2CAgent(ActorCriticAgent):
    """Actor-crítico síncrono con retornos de n pasos."""

    def observe(self, transition: Transition):
        self.env_steps += 1
        self.trajectory.append(transition, *self._pending)
        if transition.done or len(self.trajectory) >= self.config.a2c_n_steps:
            self.update(self.trajectory)
            self.trajectory = Trajectory()

    def compute_loss(self, trajectory: Trajectory) -> LossTerms:
        """Pérdida actor-crítico del segmento (sin aplicar gradientes)."""
        returns = n_step_returns(
            np.array(trajectory.rewards),
            np.array(trajectory.dones, dtype=np.float64),
            self.bootstrap_value(trajectory),
            self.config.gamma,
        )
        observations, masks, actions = trajectory.tensors()
        log_probs, values, entropies = self.evaluate(observations, masks, actions)
        return actor_critic_loss(
            log_probs,
            values,
            torch.as_tensor(returns, dtype=values.dtype),
            entropies,
            self.config.value_coef,
            self.config.entropy_coef,
        )

    def update(self, trajectory: Trajectory) -> LossTerms:
        """
        Un paso de gradiente sobre el segmento.

        Returns:
            Componentes de la pérdida
        """
        terms = self.compute_loss(trajectory)
        self.optimizer.zero_grad()
        terms.total.backward()
        self.optimizer.step()
        self.updates += 1
        self.last_loss = terms
        return terms


class PPOAgent(ActorCriticAgent):
    """PPO con surrogate recortado; con rollback si el algoritmo es TPPO."""

    @property
    def rollback(self) -> Optional[float]:
        return self.config.tppo_rollback if self.config.algorithm is Algorithm.TPPO else None

    def observe(self, transition: Transition):
        self.env_steps += 1
        self.trajectory.append(transition, *self._pending)
        if len(self.trajectory) >= self.config.rollout_length:
            self.update(self.trajectory)
            self.trajectory = Trajectory()

    def update(self, rollout: Trajectory) -> LossTerms:
        """
        Varias épocas de minibatches sobre el rollout.

        Las ventajas se estiman con GAE y se normalizan por rollout.

        Returns:
            Componentes de la última pérdida calculada
        """
        config = self.config
        advantages, returns = generalized_advantages(
            np.array(rollout.rewards),
            np.array(rollout.values),
            np.array(rollout.dones, dtype=np.float64),
            self.bootstrap_value(rollout),
            config.gamma,
            config.gae_lambda,
        )
        advantages = normalize_advantages(advantages)
        old_log_probs = np.array(rollout.log_probs)

        n = len(rollout)
        terms = None
        for _ in range(config.ppo_epochs):
            order = self.rng.permutation(n)
            for start in range(0, n, config.minibatch_size):
                idx = order[start:start + config.minibatch_size]
                observations, masks, actions = rollout.tensors(idx)
                log_probs, values, entropies = self.evaluate(observations, masks, actions)
                terms = ppo_loss(
                    log_probs,
                    torch.as_tensor(old_log_probs[idx], dtype=log_probs.dtype),
                    torch.as_tensor(advantages[idx], dtype=log_probs.dtype),
                    values,
                    torch.as_tensor(returns[idx], dtype=values.dtype),
                    entropies,
                    config.ppo_clip,
                    config.value_coef,
                    config.entropy_coef,
                    self.rollback,
                )
                self.optimizer.zero_grad()
                terms.total.backward()
                self.optimizer.step()
                self.updates += 1
        self.last_loss = terms
        return terms
