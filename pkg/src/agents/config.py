"""
Hiperparámetros de los agentes.
"""
import enum
from dataclasses import asdict, dataclass, fields, replace
from typing import Dict, Optional

from ..utils.errors import ConfigurationError


class Algorithm(str, enum.Enum):
    """Los nueve agentes del benchmark."""

    DQN = "dqn"
    DDQN = "ddqn"
    DUELING_DQN = "dueling_dqn"
    DQN_PER = "dqn_per"
    DQN_RANK = "dqn_rank"
    A2C = "a2c"
    A3C = "a3c"
    PPO = "ppo"
    TPPO = "tppo"

    @property
    def value_based(self) -> bool:
        return self in VALUE_BASED

    @property
    def replay_mode(self) -> str:
        if self is Algorithm.DQN_PER:
            return "proportional"
        if self is Algorithm.DQN_RANK:
            return "rank"
        return "uniform"


VALUE_BASED = frozenset(
    {Algorithm.DQN, Algorithm.DDQN, Algorithm.DUELING_DQN, Algorithm.DQN_PER, Algorithm.DQN_RANK}
)


def parse_algorithm(name: str) -> Algorithm:
    """Convierte un id de agente a Algorithm."""
    try:
        return Algorithm(str(name).lower())
    except ValueError:
        valid = ", ".join(a.value for a in Algorithm)
        raise ConfigurationError(f"Agente desconocido: '{name}'. Ids válidos: {valid}") from None


@dataclass
class AgentConfig:
    """Configuración de un agente; los valores por defecto son los del benchmark."""

    algorithm: Algorithm = Algorithm.DQN
    gamma: float = 0.88
    lr: float = 3e-4
    batch_size: int = 1000
    target_sync: int = 500
    epsilon_start: float = 1.0
    epsilon_min: float = 0.05
    epsilon_decay: float = 0.99995
    replay_capacity: int = 20000
    hidden_width: int = 1000
    # None: se usa el número de capas de la tarea
    hidden_layers: Optional[int] = None
    per_alpha: float = 0.6
    per_beta0: float = 0.4
    per_beta_steps: int = 100000
    ppo_clip: float = 0.2
    ppo_epochs: int = 4
    gae_lambda: float = 0.95
    entropy_coef: float = 0.01
    value_coef: float = 0.5
    rollout_length: int = 1000
    minibatch_size: int = 250
    tppo_rollback: float = 0.3
    a2c_n_steps: int = 5
    a3c_workers: int = 3

    def __post_init__(self):
        if not isinstance(self.algorithm, Algorithm):
            self.algorithm = parse_algorithm(self.algorithm)
        if not 0.0 <= self.gamma <= 1.0:
            raise ConfigurationError(f"gamma fuera de [0, 1]: {self.gamma}")
        if self.lr <= 0:
            raise ConfigurationError(f"lr debe ser positivo: {self.lr}")
        for name in ("batch_size", "target_sync", "replay_capacity", "hidden_width",
                     "ppo_epochs", "rollout_length", "minibatch_size", "a2c_n_steps",
                     "a3c_workers", "per_beta_steps"):
            if getattr(self, name) < 1:
                raise ConfigurationError(f"{name} debe ser ≥ 1: {getattr(self, name)}")
        if self.hidden_layers is not None and self.hidden_layers < 1:
            raise ConfigurationError(f"hidden_layers debe ser ≥ 1: {self.hidden_layers}")
        if not 0.0 <= self.epsilon_min <= self.epsilon_start <= 1.0:
            raise ConfigurationError("Se requiere 0 ≤ epsilon_min ≤ epsilon_start ≤ 1")

    def with_overrides(self, **overrides) -> "AgentConfig":
        """Copia con campos sobrescritos."""
        return AgentConfig.from_dict({**self.to_dict(), **overrides})

    def to_dict(self) -> Dict:
        data = asdict(self)
        data["algorithm"] = self.algorithm.value
        return data

    @classmethod
    def from_dict(cls, data: Dict) -> "AgentConfig":
        """
        Construye la configuración validando las claves.

        Args:
            data: Diccionario (p. ej. sección "agent" del archivo de corrida)

        Returns:
            AgentConfig
        """
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigurationError(f"Claves de agente desconocidas: {sorted(unknown)}")
        return replace(cls(), **data)
