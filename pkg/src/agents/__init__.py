"""
Agentes de aprendizaje por refuerzo para construir circuitos.
"""
from .a3c import A3CTrainer, A3CWorker, SharedParameterStore
from .base import Agent, Transition
from .config import VALUE_BASED, AgentConfig, Algorithm, parse_algorithm
from .factory import SerialTrainer, build_agent, build_trainer
from .policy_agents import A2CAgent, PPOAgent, Trajectory
from .replay import ReplayBatch, ReplayBuffer, per_update
from .training import EpisodeResult, train_agent, train_episode
from .value_agent import ValueAgent

__all__ = [
    "A2CAgent",
    "A3CTrainer",
    "A3CWorker",
    "Agent",
    "AgentConfig",
    "Algorithm",
    "EpisodeResult",
    "PPOAgent",
    "ReplayBatch",
    "ReplayBuffer",
    "SerialTrainer",
    "SharedParameterStore",
    "Trajectory",
    "Transition",
    "VALUE_BASED",
    "ValueAgent",
    "build_agent",
    "build_trainer",
    "parse_algorithm",
    "per_update",
    "train_agent",
    "train_episode",
]
