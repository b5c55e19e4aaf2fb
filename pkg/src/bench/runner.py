"""
Ejecución de la matriz (tarea × agente × semilla).
"""
import hashlib
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np
import torch

from config import Config

from ..agents.config import Algorithm
from ..agents.factory import build_trainer
from ..agents.training import EpisodeResult
from ..env.curriculum import CurriculumTracker
from ..env.costs import CostEvaluator
from ..env.environment import QasEnvironment
from ..problems.tasks import TaskKind, TaskSpec, build_task
from ..utils.errors import QasError
from ..utils.logger import setup_logger
from ..utils.serialization import stable_hash
from .records import RunRecord, run_key, select_best_episode
from .run_store import RunStore
from .settings import RunSettings

logger = setup_logger(__name__)

CURRICULUM_START_FACTOR = 4.0


def derive_seed(task_id: str, agent_id: str, seed: int) -> int:
    """Semilla independiente por corrida: sha256("task|agent|seed") mod 2^32."""
    digest = hashlib.sha256(run_key(task_id, agent_id, seed).encode("utf-8")).hexdigest()
    return int(digest, 16) % 2**32


@dataclass(frozen=True)
class RunSpec:
    """Una celda de la matriz."""

    task_id: str
    algorithm: Algorithm
    seed: int

    @property
    def key(self) -> str:
        return run_key(self.task_id, self.algorithm.value, self.seed)


def load_tasks(settings: RunSettings) -> Dict[str, TaskSpec]:
    """
    Resuelve todas las tareas antes de lanzar corridas.

    Raises:
        ConfigurationError: Id o sobrescritura inválida
        HamiltonianLoadError: Archivo de Hamiltoniano ausente o malformado
    """
    tasks = {}
    for task_id in settings.tasks:
        task = build_task(task_id, settings.noise, settings.hamiltonian_dir)
        if settings.task_overrides:
            task = task.with_overrides(**settings.task_overrides)
        tasks[task_id] = task
    return tasks


def run_config_hash(task: TaskSpec, settings: RunSettings, algorithm: Algorithm) -> str:
    return stable_hash(
        {
            "task": task.to_dict(),
            "agent": settings.agent_config_for(algorithm).to_dict(),
            "episodes": settings.episodes,
            "optimizer": settings.optimizer,
            "curriculum": settings.curriculum,
        }
    )


def _make_curriculum(task: TaskSpec, enabled: bool) -> CurriculumTracker:
    if not enabled:
        return CurriculumTracker(zeta_final=task.zeta)
    return CurriculumTracker(zeta_final=task.zeta, zeta_initial=task.zeta * CURRICULUM_START_FACTOR, enabled=True)


def meets_task_threshold(result: EpisodeResult, task: TaskSpec) -> bool:
    """
    Éxito contra el ζ de la tarea, no el del currículo: C - E_min ≤ ζ.

    En preparación de estados el currículo no interviene (umbral de fidelidad fijo).
    """
    if task.kind is TaskKind.STATE_PREP:
        return result.success
    return result.final_cost - task.e_min <= task.zeta


def used_optimizers(results: List[EpisodeResult], default: str) -> str:
    """Métodos que efectivamente optimizaron ángulos, unidos con "+"."""
    methods = sorted({m for r in results for m in r.optimizer_methods})
    return "+".join(methods) if methods else default


def execute_run(task: TaskSpec, spec: RunSpec, settings: RunSettings) -> RunRecord:
    """
    Entrena un agente sobre una tarea y resume la corrida.

    Args:
        task: Tarea resuelta
        spec: Celda de la matriz
        settings: Configuración de la matriz

    Returns:
        RunRecord con el mejor circuito
    """
    derived = derive_seed(spec.task_id, spec.algorithm.value, spec.seed)
    agent_config = settings.agent_config_for(spec.algorithm)

    def env_factory(env_seed: int) -> QasEnvironment:
        return QasEnvironment(
            task,
            seed=env_seed,
            curriculum=_make_curriculum(task, settings.curriculum),
            optimizer_method=settings.optimizer,
        )

    logger.info(f"Inicio {spec.key} (semilla derivada {derived})")
    start = time.perf_counter()
    trainer = build_trainer(agent_config, env_factory, task.network_layers, derived)
    results = trainer.train(settings.episodes)
    succeeded = [meets_task_threshold(r, task) for r in results]
    best = select_best_episode(results, lambda r: meets_task_threshold(r, task))

    extras = {
        "success_rate": float(np.mean(succeeded)),
        "wall_time": time.perf_counter() - start,
        "best_cost": best.final_cost,
    }
    if task.kind is TaskKind.VQC:
        train_accuracy, test_accuracy = CostEvaluator(task).accuracies(best.program)
        extras.update(train_accuracy=train_accuracy, test_accuracy=test_accuracy)

    record = RunRecord(
        task=spec.task_id,
        agent=spec.algorithm.value,
        seed=spec.seed,
        episodes_run=len(results),
        success=any(succeeded),
        error=float(best.error),
        gates=best.gate_count,
        depth=best.depth,
        time_per_episode=float(np.mean([r.duration for r in results])),
        best_circuit=best.program,
        config={"task": task.to_dict(), "agent": agent_config.to_dict()},
        optimizer=used_optimizers(results, settings.optimizer),
        cx_count=best.cx_count,
        single_qubit_count=best.single_qubit_count,
        derived_seed=derived,
        noisy=task.noise.enabled,
        best_episode=best.episode,
        extras=extras,
    )
    logger.info(
        f"Fin {spec.key}: éxito={record.success} E={record.error:.3g} "
        f"G={record.gates} D={record.depth} T={record.time_per_episode:.3g}s"
    )
    return record


def matrix_specs(settings: RunSettings) -> List[RunSpec]:
    return [
        RunSpec(task_id, algorithm, seed)
        for task_id in settings.tasks
        for algorithm in settings.agents
        for seed in range(settings.seeds)
    ]


def run_matrix(
    settings: RunSettings,
    store: Optional[RunStore] = None,
    on_complete: Optional[Callable[[RunRecord], None]] = None,
) -> List[RunRecord]:
    """
    Ejecuta todas las corridas, en paralelo si settings.parallel > 1.

    Cada registro se persiste en cuanto termina; con settings.resume las
    corridas ya completadas con la misma configuración se saltan y se
    devuelven desde el almacén.

    Args:
        settings: Configuración de la matriz
        store: Almacén de resultados (por defecto en settings.out_dir)
        on_complete: Llamada tras cada corrida terminada

    Returns:
        Registros ordenados por (tarea, agente, semilla)

    Raises:
        ConfigurationError: Ids inválidos (antes de lanzar corridas)
        QasError: Alguna corrida falló (las demás se completan y guardan)
    """
    tasks = load_tasks(settings)
    store = store or RunStore(settings.out_dir)
    torch.set_num_threads(Config.TORCH_THREADS)

    if settings.resume:
        existing = {r.key: r for r in store.load_records()}
    else:
        existing = {}
        if store.runs_file.exists():
            logger.warning(f"Se reemplazan los resultados previos de {store.out_dir} (usar --resume para conservarlos)")
            store.clear()
    records: Dict[str, RunRecord] = {}
    pending = []
    for spec in matrix_specs(settings):
        config_hash = run_config_hash(tasks[spec.task_id], settings, spec.algorithm)
        if settings.resume and store.is_completed(spec.key, config_hash) and spec.key in existing:
            logger.info(f"Corrida ya completada, se salta: {spec.key}")
            records[spec.key] = existing[spec.key]
        else:
            pending.append((spec, config_hash))

    failures = []

    def finish(record: RunRecord, config_hash: str):
        store.append(record, config_hash)
        records[record.key] = record
        if on_complete:
            on_complete(record)

    if settings.parallel == 1:
        for spec, config_hash in pending:
            try:
                finish(execute_run(tasks[spec.task_id], spec, settings), config_hash)
            except QasError as e:
                logger.error(f"Falló {spec.key}: {e}")
                failures.append((spec.key, e))
    else:
        with ThreadPoolExecutor(max_workers=min(settings.parallel, Config.MAX_WORKERS)) as executor:
            futures = {
                executor.submit(execute_run, tasks[spec.task_id], spec, settings): (spec, config_hash)
                for spec, config_hash in pending
            }
            for future in as_completed(futures):
                spec, config_hash = futures[future]
                try:
                    finish(future.result(), config_hash)
                except QasError as e:
                    logger.error(f"Falló {spec.key}: {e}")
                    failures.append((spec.key, e))

    if failures:
        keys = ", ".join(key for key, _ in failures)
        raise QasError(f"{len(failures)} corrida(s) fallaron: {keys}") from failures[0][1]

    return [records[spec.key] for spec in matrix_specs(settings) if spec.key in records]
