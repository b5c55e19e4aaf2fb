"""
Persistencia incremental de corridas: runs.jsonl + archivo de estado.
"""
import json
import threading
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional

from config import Config

from ..utils.errors import DataError
from ..utils.logger import setup_logger
from ..utils.serialization import dumps_line
from .records import RunRecord

RUNS_FILE = "runs.jsonl"


class RunStore:
    """
    Único punto de escritura de resultados.

    Cada registro se agrega a runs.jsonl en cuanto termina su corrida; el
    archivo de estado guarda las claves completadas y el hash de su
    configuración para poder reanudar una matriz interrumpida.
    """

    def __init__(self, out_dir: Path, log_level: Optional[str] = None):
        """
        Inicializa el almacén.

        Args:
            out_dir: Directorio de resultados
            log_level: Nivel de logging
        """
        self.out_dir = Path(out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.runs_file = self.out_dir / RUNS_FILE
        self.state_file = self.out_dir / Config.STATE_FILE_NAME
        self.logger = setup_logger(__name__, level=log_level)
        self._lock = threading.Lock()
        self.state = self._load_state()

    def _empty_state(self) -> Dict:
        return {"last_update": None, "completed": {}}

    def _load_state(self) -> Dict:
        """
        Carga el estado desde el archivo.

        Returns:
            Diccionario con el estado
        """
        if not self.state_file.exists():
            return self._empty_state()
        try:
            with open(self.state_file, "r") as f:
                state = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            self.logger.warning(f"Estado ilegible en {self.state_file}, se reinicia: {e}")
            return self._empty_state()
        state.setdefault("completed", {})
        return state

    def _save_state(self):
        self.state["last_update"] = datetime.now().isoformat()
        with open(self.state_file, "w") as f:
            json.dump(self.state, f, indent=2, sort_keys=True)

    def is_completed(self, key: str, config_hash: str) -> bool:
        """
        Verifica si la corrida ya está guardada con la misma configuración.

        Args:
            key: Clave tarea|agente|semilla
            config_hash: Hash de la configuración de la corrida

        Returns:
            True si puede saltarse
        """
        return self.state["completed"].get(key) == config_hash

    def append(self, record: RunRecord, config_hash: str = ""):
        """
        Agrega un registro y marca la corrida como completada.

        Args:
            record: Registro terminado
            config_hash: Hash de su configuración
        """
        line = dumps_line(record.to_dict())
        with self._lock:
            with open(self.runs_file, "a") as f:
                f.write(line + "\n")
                f.flush()
            self.state["completed"][record.key] = config_hash
            self._save_state()
        self.logger.debug(f"Corrida guardada: {record.key}")

    def load_records(self) -> List[RunRecord]:
        """Todos los registros de runs.jsonl (vacío si no existe)."""
        return load_records(self.runs_file)

    def clear(self):
        """Borra resultados y estado."""
        with self._lock:
            self.state = self._empty_state()
            for path in (self.runs_file, self.state_file):
                if path.exists():
                    path.unlink()


def load_records(path: Path) -> List[RunRecord]:
    """
    Lee un archivo runs.jsonl, o el de un directorio de resultados.

    Args:
        path: Archivo o directorio

    Returns:
        Registros en orden de escritura

    Raises:
        DataError: Línea no parseable
    """
    path = Path(path)
    if path.is_dir():
        path = path / RUNS_FILE
    if not path.exists():
        return []
    records = []
    with open(path, "r") as f:
        for number, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                records.append(RunRecord.from_dict(json.loads(line)))
            except json.JSONDecodeError as e:
                raise DataError(f"{path}:{number}: línea JSON inválida ({e})") from e
    return records
