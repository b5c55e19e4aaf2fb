"""
Escritura de reportes: registros, ranking por tarea y tabla de tiempos.
"""
import csv
from collections import defaultdict
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from ..utils.serialization import dumps_line
from .ranking import RankedAgent
from .records import RunRecord
from .run_store import RUNS_FILE

RANKING_COLUMNS = ["task", "agent", "E", "G", "D", "T", "S", "rank"]
RUNTIME_FILE = "runtime_table.csv"


def ranking_file_name(task: str) -> str:
    return f"ranking_{task}.csv"


def write_runs(records: Sequence[RunRecord], path: Path) -> Path:
    """Escribe runs.jsonl completo (una línea por registro)."""
    with open(path, "w") as f:
        for record in records:
            f.write(dumps_line(record.to_dict()) + "\n")
    return path


def write_ranking(task: str, rows: Sequence[RankedAgent], path: Path) -> Path:
    with open(path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=RANKING_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow({**row.to_row(), "task": task})
    return path


def runtime_table(records: Iterable[RunRecord]) -> Dict[str, Dict[str, float]]:
    """
    Promedio de segundos por episodio sobre semillas.

    Returns:
        agente -> tarea -> T medio
    """
    cells: Dict = defaultdict(list)
    for record in records:
        cells[(record.agent, record.task)].append(record.time_per_episode)
    table: Dict[str, Dict[str, float]] = defaultdict(dict)
    for (agent, task), values in cells.items():
        table[agent][task] = float(np.mean(values))
    return dict(table)


def write_runtime_table(records: Sequence[RunRecord], path: Path, tasks: Optional[Sequence[str]] = None) -> Path:
    """Filas = agentes, columnas = tareas."""
    table = runtime_table(records)
    columns = sorted(set(tasks or []) | {r.task for r in records})
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["agent", *columns])
        for agent in sorted(table):
            writer.writerow([agent, *[table[agent].get(task, "") for task in columns]])
    return path


def emit_report(
    records: Sequence[RunRecord],
    rankings: Dict[str, List[RankedAgent]],
    out_dir: Path,
    tasks: Optional[Sequence[str]] = None,
    include_runs: bool = True,
) -> List[Path]:
    """
    Escribe los archivos del reporte.

    Args:
        records: Registros de corridas
        rankings: tarea -> filas de ranking
        out_dir: Directorio de salida
        tasks: Tareas que deben tener archivo aunque no haya filas
        include_runs: False si runs.jsonl ya fue escrito por el RunStore

    Returns:
        Rutas escritas

    Raises:
        OSError: Directorio no escribible
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    if include_runs:
        written.append(write_runs(records, out_dir / RUNS_FILE))
    for task in sorted(set(tasks or []) | set(rankings)):
        written.append(write_ranking(task, rankings.get(task, []), out_dir / ranking_file_name(task)))
    written.append(write_runtime_table(records, out_dir / RUNTIME_FILE, tasks))
    return written


def read_ranking(path: Path) -> List[Dict]:
    """Lee un ranking_<task>.csv como lista de diccionarios."""
    with open(path, newline="") as f:
        return list(csv.DictReader(f))

