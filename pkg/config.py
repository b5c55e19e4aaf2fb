"""
Configuración central del sistema de benchmark RL para búsqueda de arquitecturas cuánticas.
"""
import os
from pathlib import Path
from dotenv import load_dotenv

load_dotenv()


class Config:
    """Configuración global del sistema."""

    # Datos de entrada
    HAMILTONIAN_DIR = Path(os.getenv("QAS_HAMILTONIAN_DIR", "data/hamiltonians"))

    # Resultados y estado
    RESULTS_DIR = Path(os.getenv("QAS_RESULTS_DIR", "results"))
    STATE_FILE_NAME = "run_state.json"

    # Performance tuning
    MAX_WORKERS = int(os.getenv("MAX_WORKERS", "4"))
    TORCH_THREADS = int(os.getenv("TORCH_THREADS", "1"))

    # Logging
    LOG_LEVEL = os.getenv("QAS_LOG_LEVEL", "WARNING")
    LOG_FILE = os.getenv("QAS_LOG_FILE") or None

    # Simulación exacta (vector de estado / matriz densidad densos)
    MAX_QUBITS = 8

    @classmethod
    def ensure_dirs(cls, results_dir: Path = None):
        """Crear el directorio de resultados si no existe."""
        Path(results_dir or cls.RESULTS_DIR).mkdir(parents=True, exist_ok=True)
