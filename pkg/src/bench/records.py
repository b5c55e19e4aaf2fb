"""
Registro de una corrida (tarea, agente, semilla).
"""
import math
from dataclasses import dataclass, field, fields
from typing import Callable, Dict, List, Optional

from ..agents.training import EpisodeResult
from ..qsim.circuit import CircuitProgram
from ..utils.errors import DataError

METRIC_FIELDS = ("error", "gates", "depth", "time_per_episode")


@dataclass
class RunRecord:
    """
    Resultado agregado de una corrida.

    error/gates/depth describen el mejor circuito de la corrida;
    time_per_episode es el promedio de segundos por episodio.
    """

    task: str
    agent: str
    seed: int
    episodes_run: int
    success: bool
    error: float
    gates: int
    depth: int
    time_per_episode: float
    best_circuit: CircuitProgram
    config: Dict = field(default_factory=dict)
    optimizer: str = "COBYLA"
    cx_count: int = 0
    single_qubit_count: int = 0
    derived_seed: int = 0
    noisy: bool = False
    best_episode: int = -1
    extras: Dict = field(default_factory=dict)

    @property
    def key(self) -> str:
        return run_key(self.task, self.agent, self.seed)

    def metric(self, name: str) -> float:
        """
        Valor de una métrica del ranking.

        Raises:
            DataError: Métrica faltante o no finita
        """
        if name not in METRIC_FIELDS:
            raise DataError(f"Métrica desconocida '{name}' en la corrida {self.key}")
        value = getattr(self, name)
        if value is None or not math.isfinite(float(value)):
            raise DataError(f"Métrica {name} inválida ({value}) en la corrida {self.key}")
        return float(value)

    def to_dict(self) -> Dict:
        data = {f.name: getattr(self, f.name) for f in fields(self)}
        data["best_circuit"] = self.best_circuit.to_dict()
        return data

    @classmethod
    def from_dict(cls, data: Dict) -> "RunRecord":
        """
        Reconstruye el registro desde una línea de runs.jsonl.

        Raises:
            DataError: Faltan campos obligatorios
        """
        known = {f.name for f in fields(cls)}
        missing = [name for name in ("task", "agent", "seed", *METRIC_FIELDS, "best_circuit") if name not in data]
        if missing:
            raise DataError(f"Registro incompleto, faltan: {missing}")
        values = {k: v for k, v in data.items() if k in known}
        values["best_circuit"] = CircuitProgram.from_dict(data["best_circuit"])
        values["error"] = float(values["error"])
        values["time_per_episode"] = float(values["time_per_episode"])
        return cls(**values)


def run_key(task: str, agent: str, seed: int) -> str:
    return f"{task}|{agent}|{seed}"


def select_best_episode(
    results: List[EpisodeResult], succeeded: Optional[Callable[[EpisodeResult], bool]] = None
) -> Optional[EpisodeResult]:
    """
    Mejor episodio de una corrida.

    Entre los exitosos gana el de menos compuertas (desempate: profundidad,
    luego error); si ninguno tuvo éxito, el de menor error.

    Args:
        results: Episodios de la corrida
        succeeded: Criterio de éxito (por defecto el flag del episodio)

    Returns:
        EpisodeResult elegido, o None si la lista está vacía
    """
    if not results:
        return None
    succeeded = succeeded or (lambda r: r.success)
    successful = [r for r in results if succeeded(r)]
    if successful:
        return min(successful, key=lambda r: (r.gate_count, r.depth, r.error, r.episode))
    return min(results, key=lambda r: (r.error, r.gate_count, r.episode))
