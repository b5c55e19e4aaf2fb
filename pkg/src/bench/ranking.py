"""
Ranking ponderado de agentes por tarea.

S = w_E·E_norm + w_G·G_norm + w_D·D_norm + w_T·T_norm, con normalización
min-max de cada columna dentro de la tarea; menor S es mejor.
"""
import math
from collections import defaultdict
from dataclasses import asdict, dataclass
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from ..utils.errors import ConfigurationError, DataError
from .records import METRIC_FIELDS, RunRecord

AGGREGATE_MEAN = "mean"
AGGREGATE_BEST = "best"
AGGREGATE_MODES = (AGGREGATE_MEAN, AGGREGATE_BEST)


@dataclass(frozen=True)
class RankingWeights:
    """Pesos de error, compuertas, profundidad y tiempo por episodio."""

    w_e: float
    w_g: float
    w_d: float
    w_t: float

    def __post_init__(self):
        values = self.as_tuple()
        if not all(math.isfinite(v) for v in values):
            raise ConfigurationError(f"Pesos no finitos: {values}")
        if any(v < 0 for v in values):
            raise ConfigurationError(f"Los pesos deben ser ≥ 0: {values}")
        if not any(v > 0 for v in values):
            raise ConfigurationError("Al menos un peso debe ser positivo")

    def as_tuple(self):
        return (self.w_e, self.w_g, self.w_d, self.w_t)

    def to_dict(self) -> Dict:
        return asdict(self)

    @classmethod
    def parse(cls, text: str) -> "RankingWeights":
        """
        Lee pesos "wE,wG,wD,wT".

        Raises:
            ConfigurationError: Formato o valores inválidos
        """
        parts = [p.strip() for p in str(text).split(",")]
        if len(parts) != 4:
            raise ConfigurationError(f"Se esperaban 4 pesos wE,wG,wD,wT: '{text}'")
        try:
            return cls(*(float(p) for p in parts))
        except ValueError as e:
            if isinstance(e, ConfigurationError):
                raise
            raise ConfigurationError(f"Peso no numérico en '{text}'") from None

    @classmethod
    def from_value(cls, value) -> "RankingWeights":
        """Acepta texto, lista de 4 números o diccionario con w_e..w_t."""
        if isinstance(value, RankingWeights):
            return value
        if isinstance(value, str):
            return cls.parse(value)
        if isinstance(value, dict):
            unknown = set(value) - {"w_e", "w_g", "w_d", "w_t"}
            if unknown:
                raise ConfigurationError(f"Claves de pesos desconocidas: {sorted(unknown)}")
            return cls(**{k: float(v) for k, v in value.items()})
        values = list(value)
        if len(values) != 4:
            raise ConfigurationError(f"Se esperaban 4 pesos: {values}")
        return cls(*(float(v) for v in values))


NOISELESS_WEIGHTS = RankingWeights(0.5, 0.2, 0.2, 0.1)
NOISY_WEIGHTS = RankingWeights(0.6, 0.1, 0.3, 0.0)


def default_weights(noisy: bool) -> RankingWeights:
    return NOISY_WEIGHTS if noisy else NOISELESS_WEIGHTS


def normalize_metric(values: Sequence[float], labels: Optional[Sequence[str]] = None) -> np.ndarray:
    """
    Normalización min-max a [0, 1].

    Si todos los valores son iguales el resultado es cero.

    Args:
        values: Valores de una columna
        labels: Nombre de cada valor para los mensajes de error

    Returns:
        Array normalizado

    Raises:
        DataError: Lista vacía o valor no finito
    """
    array = np.asarray(values, dtype=np.float64)
    if array.size == 0:
        raise DataError("normalize_metric requiere al menos un valor")
    bad = np.flatnonzero(~np.isfinite(array))
    if bad.size:
        i = int(bad[0])
        who = labels[i] if labels is not None else f"índice {i}"
        raise DataError(f"Valor no finito {array[i]} en {who}")
    low, high = array.min(), array.max()
    if high == low:
        return np.zeros_like(array)
    return (array - low) / (high - low)


@dataclass
class AgentSummary:
    """Métricas agregadas de un agente en una tarea."""

    task: str
    agent: str
    error: float
    gates: float
    depth: float
    time_per_episode: float
    n_seeds: int
    success_rate: float


@dataclass
class RankedAgent:
    """Fila de la tabla de ranking."""

    task: str
    agent: str
    E: float
    G: float
    D: float
    T: float
    S: float
    rank: int

    def to_row(self) -> Dict:
        return asdict(self)


def _best_seed(records: List[RunRecord]) -> RunRecord:
    return min(records, key=lambda r: (r.metric("error"), r.gates, r.depth, r.time_per_episode, r.seed))


def aggregate(records: Iterable[RunRecord], mode: str = AGGREGATE_MEAN) -> List[AgentSummary]:
    """
    Agrega las semillas de cada (tarea, agente).

    Args:
        records: Registros de corridas
        mode: "mean" (promedio sobre semillas) o "best" (semilla de menor error)

    Returns:
        Un AgentSummary por (tarea, agente), ordenados por tarea y agente

    Raises:
        ConfigurationError: Modo desconocido
        DataError: Métrica faltante o no finita
    """
    if mode not in AGGREGATE_MODES:
        raise ConfigurationError(f"Agregación desconocida '{mode}'. Válidas: {', '.join(AGGREGATE_MODES)}")
    groups: Dict = defaultdict(list)
    for record in records:
        groups[(record.task, record.agent)].append(record)

    summaries = []
    for (task, agent), group in sorted(groups.items()):
        success_rate = sum(r.success for r in group) / len(group)
        if mode == AGGREGATE_BEST:
            best = _best_seed(group)
            metrics = {name: best.metric(name) for name in METRIC_FIELDS}
        else:
            metrics = {
                name: float(np.mean([r.metric(name) for r in group])) for name in METRIC_FIELDS
            }
        summaries.append(AgentSummary(task, agent, n_seeds=len(group), success_rate=success_rate, **metrics))
    return summaries


def composite_score(summaries: Sequence[AgentSummary], weights: RankingWeights) -> List[RankedAgent]:
    """
    Puntaje compuesto y ranking de los agentes de una misma tarea.

    Empates en S se resuelven por menor error y luego por id de agente.

    Args:
        summaries: Métricas agregadas (una tarea)
        weights: Pesos del ranking

    Returns:
        Filas ordenadas por rank ascendente

    Raises:
        DataError: Métricas no finitas o tareas mezcladas
    """
    if not summaries:
        return []
    tasks = {s.task for s in summaries}
    if len(tasks) > 1:
        raise DataError(f"composite_score recibe una sola tarea, no {sorted(tasks)}")
    labels = [f"{s.task}|{s.agent}" for s in summaries]
    columns = [
        normalize_metric([getattr(s, name) for s in summaries], labels) for name in METRIC_FIELDS
    ]
    scores = sum(w * column for w, column in zip(weights.as_tuple(), columns))

    order = sorted(range(len(summaries)), key=lambda i: (scores[i], summaries[i].error, summaries[i].agent))
    ranked = []
    for rank, i in enumerate(order, start=1):
        s = summaries[i]
        ranked.append(RankedAgent(s.task, s.agent, s.error, s.gates, s.depth, s.time_per_episode, float(scores[i]), rank))
    return ranked


def rank_records(
    records: Iterable[RunRecord], weights: RankingWeights, mode: str = AGGREGATE_MEAN
) -> Dict[str, List[RankedAgent]]:
    """
    Ranking por tarea a partir de los registros crudos.

    Returns:
        Diccionario tarea -> filas de ranking
    """
    by_task: Dict[str, List[AgentSummary]] = defaultdict(list)
    for summary in aggregate(records, mode):
        by_task[summary.task].append(summary)
    return {task: composite_score(group, weights) for task, group in sorted(by_task.items())}
