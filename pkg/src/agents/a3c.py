"""
A3C: varios workers con entorno propio que actualizan un almacén de
parámetros compartido de forma asíncrona.

Cada tensor del almacén tiene su propio lock y su propio optimizador Adam,
así una actualización es atómica por tensor sin un lock global.
"""
import threading
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Callable, List, Optional

import numpy as np
import torch

from ..env.environment import QasEnvironment
from .config import AgentConfig
from .losses import LossTerms
from .networks import ActorCriticNetwork
from .policies import masked_softmax
from .policy_agents import A2CAgent, Trajectory
from .training import EpisodeResult, train_episode


class SharedParameterStore:
    """Red actor-crítico compartida con locks por tensor."""

    def __init__(self, network: ActorCriticNetwork, lr: float):
        """
        Args:
            network: Red compartida
            lr: Tasa de aprendizaje de Adam
        """
        self.network = network
        self.params = list(network.parameters())
        self.locks = [threading.Lock() for _ in self.params]
        self.optimizers = [torch.optim.Adam([p], lr=lr) for p in self.params]
        self.applied = 0
        self._counter_lock = threading.Lock()

    def apply_gradients(self, gradients: List[torch.Tensor]):
        """Aplica un gradiente acumulado a cada tensor, uno a la vez."""
        for param, lock, optimizer, grad in zip(self.params, self.locks, self.optimizers, gradients):
            with lock:
                param.grad = grad.clone()
                optimizer.step()
                param.grad = None
        with self._counter_lock:
            self.applied += 1

    def refresh(self, local: ActorCriticNetwork):
        """Copia cada tensor compartido en la red local (lectura consistente por tensor)."""
        with torch.no_grad():
            for shared, lock, target in zip(self.params, self.locks, local.parameters()):
                with lock:
                    target.copy_(shared)


class A3CWorker(A2CAgent):
    """Worker: calcula gradientes en su copia local y los envía al almacén."""

    def __init__(self, store: SharedParameterStore, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.store = store
        store.refresh(self.network)

    def update(self, trajectory: Trajectory) -> LossTerms:
        terms = self.compute_loss(trajectory)
        self.network.zero_grad()
        terms.total.backward()
        gradients = [
            p.grad.detach().clone() if p.grad is not None else torch.zeros_like(p)
            for p in self.network.parameters()
        ]
        self.store.apply_gradients(gradients)
        self.store.refresh(self.network)
        self.updates += 1
        self.last_loss = terms
        return terms


class A3CTrainer:
    """Coordina los workers de A3C sobre un número total de episodios."""

    def __init__(
        self,
        env_factory: Callable[[int], QasEnvironment],
        observation_size: int,
        n_actions: int,
        config: AgentConfig,
        hidden_layers: int = 3,
        seed: int = 0,
        log_level: Optional[str] = None,
    ):
        """
        Args:
            env_factory: Función semilla -> entorno nuevo (uno por worker)
            observation_size: Dimensión de la observación
            n_actions: Tamaño del espacio de acciones
            config: Hiperparámetros (a3c_workers workers)
            hidden_layers: Capas ocultas por defecto
            seed: Semilla base
            log_level: Nivel de logging
        """
        self.config = config
        hidden = [config.hidden_width] * (config.hidden_layers or hidden_layers)
        self.store = SharedParameterStore(
            ActorCriticNetwork(observation_size, n_actions, hidden, seed=seed), config.lr
        )
        self.workers = []
        self.envs = []
        for k in range(config.a3c_workers):
            worker_seed = seed + 1000 * (k + 1)
            self.workers.append(
                A3CWorker(self.store, observation_size, n_actions, config, hidden_layers, worker_seed, log_level)
            )
            self.envs.append(env_factory(worker_seed))
        self.logger = self.workers[0].logger
        self._episode_lock = threading.Lock()
        self._next_episode = 0

    @property
    def name(self) -> str:
        return self.config.algorithm.value

    def _claim_episode(self, total: int) -> Optional[int]:
        with self._episode_lock:
            if self._next_episode >= total:
                return None
            episode = self._next_episode
            self._next_episode += 1
            return episode

    def _run_worker(self, index: int, total: int, callback) -> List[EpisodeResult]:
        worker, env = self.workers[index], self.envs[index]
        results = []
        while True:
            episode = self._claim_episode(total)
            if episode is None:
                return results
            result = train_episode(worker, env, episode)
            results.append(result)
            if callback:
                callback(result)

    def train(
        self, episodes: int, callback: Optional[Callable[[EpisodeResult], None]] = None
    ) -> List[EpisodeResult]:
        """
        Reparte los episodios entre los workers en paralelo.

        Args:
            episodes: Total de episodios (sumando todos los workers)
            callback: Llamada tras cada episodio (desde el hilo del worker)

        Returns:
            Resultados ordenados por número de episodio
        """
        self._next_episode = 0
        results: List[EpisodeResult] = []
        with ThreadPoolExecutor(max_workers=len(self.workers)) as executor:
            futures = [
                executor.submit(self._run_worker, i, episodes, callback)
                for i in range(len(self.workers))
            ]
            for future in as_completed(futures):
                results.extend(future.result())
        results.sort(key=lambda r: r.episode)
        return results

    def select_action(self, observation: np.ndarray, mask: np.ndarray, explore: bool = False) -> int:
        """Acción greedy de la red compartida."""
        with torch.no_grad():
            logits, _ = self.store.network(torch.as_tensor(np.asarray(observation, dtype=np.float32)))
        return int(np.argmax(masked_softmax(logits.numpy(), mask)))
