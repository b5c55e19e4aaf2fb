"""
Agentes basados en valor: DQN, DDQN, Dueling DQN y DQN con replay priorizado.
"""
from typing import Dict, Optional

import numpy as np
import torch

from .base import Agent, Transition
from .config import AgentConfig, Algorithm
from .losses import dqn_targets
from .networks import DuelingNetwork, MlpNetwork, copy_weights
from .policies import EpsilonSchedule, epsilon_greedy, greedy_action
from .replay import ReplayBuffer


class ValueAgent(Agent):
    """
    Q-learning con red target, replay y exploración ε-greedy enmascarada.

    El aprendizaje empieza cuando el buffer tiene al menos batch_size
    transiciones; la red target se sincroniza cada target_sync actualizaciones.
    """

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
        algorithm = config.algorithm
        network_cls = DuelingNetwork if algorithm is Algorithm.DUELING_DQN else MlpNetwork
        self.online = network_cls(observation_size, n_actions, self.hidden, seed=seed)
        self.target = network_cls(observation_size, n_actions, self.hidden, seed=seed)
        copy_weights(self.online, self.target)
        self.target.eval()
        self.optimizer = torch.optim.Adam(self.online.parameters(), lr=config.lr)
        self.double = algorithm is Algorithm.DDQN
        self.prioritized = algorithm.replay_mode != "uniform"
        self.buffer = ReplayBuffer(
            config.replay_capacity,
            observation_size,
            n_actions,
            mode=algorithm.replay_mode,
            alpha=config.per_alpha,
            beta0=config.per_beta0,
            beta_steps=config.per_beta_steps,
            seed=seed + 1,
        )
        self.epsilon = EpsilonSchedule(config.epsilon_start, config.epsilon_min, config.epsilon_decay)
        self.last_loss: Optional[float] = None

    def q_values(self, observation: np.ndarray) -> np.ndarray:
        with torch.no_grad():
            x = torch.as_tensor(np.asarray(observation, dtype=np.float32))
            return self.online(x).numpy()

    def select_action(self, observation: np.ndarray, mask: np.ndarray, explore: bool = True) -> int:
        """
        ε-greedy sobre acciones legales; ε decae una vez por paso de entorno.
        """
        q = self.q_values(observation)
        if not explore:
            return greedy_action(q, mask)
        action = epsilon_greedy(q, mask, self.epsilon.value, self.rng)
        self.epsilon.step()
        return action

    def observe(self, transition: Transition):
        self.env_steps += 1
        self.buffer.add(
            transition.observation,
            transition.action,
            transition.reward,
            transition.next_observation,
            transition.done,
            transition.next_mask,
        )
        if len(self.buffer) >= self.config.batch_size:
            self.learn()

    def learn(self) -> float:
        """
        Una actualización de la red online sobre un batch del buffer.

        Returns:
            Pérdida (error cuadrático ponderado por importancia)
        """
        batch = self.buffer.sample(self.config.batch_size)
        observations = torch.as_tensor(batch.observations)
        next_observations = torch.as_tensor(batch.next_observations)
        actions = torch.as_tensor(batch.actions)
        next_masks = torch.as_tensor(batch.next_masks)

        with torch.no_grad():
            next_q_target = self.target(next_observations)
            next_q_online = self.online(next_observations) if self.double else None
            targets = dqn_targets(
                torch.as_tensor(batch.rewards),
                torch.as_tensor(batch.dones),
                next_q_target,
                next_masks,
                self.config.gamma,
                next_q_online,
            )

        q = self.online(observations).gather(-1, actions.unsqueeze(-1)).squeeze(-1)
        td = targets - q
        weights = torch.as_tensor(batch.weights)
        loss = (weights * td.pow(2)).mean()

        self.optimizer.zero_grad()
        loss.backward()
        self.optimizer.step()

        if self.prioritized:
            self.buffer.update_priorities(batch.indices, td.detach().numpy())

        self.updates += 1
        if self.updates % self.config.target_sync == 0:
            self.sync_target()
        self.last_loss = float(loss.detach())
        return self.last_loss

    def sync_target(self):
        """Copia la red online en la red target."""
        copy_weights(self.online, self.target)
        self.logger.debug(f"{self.name}: red target sincronizada en la actualización {self.updates}")

    def stats(self) -> Dict:
        return {**super().stats(), "epsilon": self.epsilon.value, "last_loss": self.last_loss}
