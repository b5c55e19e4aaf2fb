"""
Benchmark: matriz de corridas, ranking ponderado y reportes.
"""
from .ranking import (
    NOISELESS_WEIGHTS,
    NOISY_WEIGHTS,
    AgentSummary,
    RankedAgent,
    RankingWeights,
    aggregate,
    composite_score,
    default_weights,
    normalize_metric,
    rank_records,
)
from .records import RunRecord, select_best_episode
from .report import emit_report
from .run_store import RunStore, load_records
from .runner import derive_seed, execute_run, run_matrix
from .settings import RunSettings, build_settings, load_run_config
from .validation import ValidationCheck, run_validation

__all__ = [
    "AgentSummary",
    "NOISELESS_WEIGHTS",
    "NOISY_WEIGHTS",
    "RankedAgent",
    "RankingWeights",
    "RunRecord",
    "RunSettings",
    "RunStore",
    "ValidationCheck",
    "aggregate",
    "build_settings",
    "composite_score",
    "default_weights",
    "derive_seed",
    "emit_report",
    "execute_run",
    "load_records",
    "load_run_config",
    "normalize_metric",
    "rank_records",
    "run_matrix",
    "run_validation",
    "select_best_episode",
]
