"""
Registro de tareas del benchmark.

Cada id de tarea se resuelve a un TaskSpec con su carga útil (Hamiltoniano,
estado objetivo o dataset) y los hiperparámetros del entorno.
"""
import enum
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Union

from config import Config
from ..qsim.noise import NoiseConfig
from ..qsim.states import DensityMatrix, Statevector
from ..utils.errors import ConfigurationError
from .datasets import VQC_QUBITS, ClassificationDataset, generate_vqc_dataset
from .hamiltonian import PauliHamiltonian, load_hamiltonian
from .targets import ghz_target, random_mixed_state

BUNDLED_HAMILTONIAN_DIR = Path(__file__).resolve().parents[2] / "data" / "hamiltonians"

CHEMICAL_ACCURACY = 1.6e-3
VQSD_ZETA = 5e-2
VQC_ZETA = 0.2
# 1 - F ≤ 0.02  ⇔  F ≥ 0.98
STATE_PREP_ZETA = 0.02
STATE_PREP_D_MAX = 10
VQSD_TARGETS = 5
VQSD_RANK = 4


class TaskKind(str, enum.Enum):
    """Familias de tareas."""

    VQE = "VQE"
    VQSD = "VQSD"
    VQC = "VQC"
    STATE_PREP = "STATE_PREP"

    @property
    def parameterized(self) -> bool:
        return self is not TaskKind.STATE_PREP


Payload = Union[PauliHamiltonian, DensityMatrix, ClassificationDataset, Statevector]

_PAYLOAD_TYPES = {
    TaskKind.VQE: PauliHamiltonian,
    TaskKind.VQSD: DensityMatrix,
    TaskKind.VQC: ClassificationDataset,
    TaskKind.STATE_PREP: Statevector,
}


@dataclass
class TaskSpec:
    """Definición completa de una tarea."""

    task_id: str
    kind: TaskKind
    n_qubits: int
    d_max: int
    zeta: float
    optimizer_budget: int
    payload: Payload
    noise: NoiseConfig = field(default_factory=NoiseConfig.noiseless)
    network_layers: int = 3

    def __post_init__(self):
        if self.d_max <= 0:
            raise ConfigurationError(f"{self.task_id}: d_max debe ser positivo")
        if self.zeta <= 0:
            raise ConfigurationError(f"{self.task_id}: zeta debe ser positivo")
        if self.optimizer_budget < 0:
            raise ConfigurationError(f"{self.task_id}: presupuesto de optimización negativo")
        expected = _PAYLOAD_TYPES[self.kind]
        if not isinstance(self.payload, expected):
            raise ConfigurationError(
                f"{self.task_id}: la tarea {self.kind.value} requiere {expected.__name__}"
            )
        payload_qubits = getattr(self.payload, "n_qubits", self.n_qubits)
        if payload_qubits != self.n_qubits:
            raise ConfigurationError(
                f"{self.task_id}: carga útil de {payload_qubits} qubits en tarea de {self.n_qubits}"
            )

    @property
    def e_min(self) -> float:
        """Mínimo analítico del costo (energía fundamental en VQE, 0 en el resto)."""
        if self.kind is TaskKind.VQE:
            return float(self.payload.ground_energy)
        return 0.0

    def with_overrides(self, **overrides) -> "TaskSpec":
        """Copia con campos sobrescritos (d_max, zeta, optimizer_budget, ...)."""
        unknown = set(overrides) - {"d_max", "zeta", "optimizer_budget", "network_layers", "noise"}
        if unknown:
            raise ConfigurationError(f"Campos de tarea desconocidos: {sorted(unknown)}")
        return replace(self, **overrides)

    def to_dict(self) -> Dict:
        return {
            "task_id": self.task_id,
            "kind": self.kind.value,
            "n_qubits": self.n_qubits,
            "d_max": self.d_max,
            "zeta": self.zeta,
            "optimizer_budget": self.optimizer_budget,
            "noise": self.noise.to_dict(),
            "network_layers": self.network_layers,
        }


def resolve_hamiltonian_file(file_name: str, hamiltonian_dir: Optional[Path] = None) -> Path:
    """
    Busca un archivo de Hamiltoniano en el directorio configurado y luego en
    los datos incluidos con el repositorio.
    """
    candidates = [Path(hamiltonian_dir or Config.HAMILTONIAN_DIR) / file_name,
                  BUNDLED_HAMILTONIAN_DIR / file_name]
    for candidate in candidates:
        if candidate.exists():
            return candidate
    # load_hamiltonian reporta el error con la ruta configurada
    return candidates[0]


def vqe_task(
    task_id: str,
    hamiltonian: PauliHamiltonian,
    d_max: int,
    optimizer_budget: int,
    network_layers: int,
    noise: Optional[NoiseConfig] = None,
) -> TaskSpec:
    """Construye una tarea VQE sobre un Hamiltoniano ya cargado."""
    return TaskSpec(
        task_id=task_id,
        kind=TaskKind.VQE,
        n_qubits=hamiltonian.n_qubits,
        d_max=d_max,
        zeta=CHEMICAL_ACCURACY,
        optimizer_budget=optimizer_budget,
        payload=hamiltonian,
        noise=noise or NoiseConfig.noiseless(),
        network_layers=network_layers,
    )


# id -> (archivo, d_max, presupuesto COBYLA, capas de la red)
_VQE_MOLECULES = {
    "vqe-h2": ("h2_jw_4q.json", 40, 100, 3),
    "vqe-beh2": ("beh2_jw_6q.json", 70, 200, 4),
    "vqe-h2o": ("h2o_jw_8q.json", 250, 500, 5),
}


def list_task_ids() -> List[str]:
    """Ids de tarea válidos."""
    vqsd = [f"vqsd-2q-{k}" for k in range(VQSD_TARGETS)]
    return list(_VQE_MOLECULES) + ["vqsd-2q"] + vqsd + ["vqc-3q", "ghz-3q"]


def build_task(
    task_id: str,
    noise: Optional[NoiseConfig] = None,
    hamiltonian_dir: Optional[Path] = None,
) -> TaskSpec:
    """
    Resuelve un id de tarea.

    Args:
        task_id: Id (ver list_task_ids)
        noise: Configuración de ruido (por defecto sin ruido)
        hamiltonian_dir: Directorio de Hamiltonianos (por defecto Config.HAMILTONIAN_DIR)

    Returns:
        TaskSpec listo para construir el entorno
    """
    noise = noise or NoiseConfig.noiseless()

    if task_id in _VQE_MOLECULES:
        file_name, d_max, budget, layers = _VQE_MOLECULES[task_id]
        hamiltonian = load_hamiltonian(resolve_hamiltonian_file(file_name, hamiltonian_dir))
        return vqe_task(task_id, hamiltonian, d_max, budget, layers, noise)

    if task_id == "vqsd-2q" or task_id.startswith("vqsd-2q-"):
        suffix = task_id[len("vqsd-2q-"):] if task_id != "vqsd-2q" else "0"
        if not suffix.isdigit() or int(suffix) >= VQSD_TARGETS:
            raise ConfigurationError(_unknown_task_message(task_id))
        target = random_mixed_state(2, VQSD_RANK, seed=int(suffix))
        return TaskSpec(task_id, TaskKind.VQSD, 2, 40, VQSD_ZETA, 500, target, noise, 4)

    if task_id == "vqc-3q":
        dataset = generate_vqc_dataset(seed=0)
        return TaskSpec(task_id, TaskKind.VQC, VQC_QUBITS, 25, VQC_ZETA, 1000, dataset, noise, 3)

    if task_id == "ghz-3q":
        return TaskSpec(
            task_id, TaskKind.STATE_PREP, 3, STATE_PREP_D_MAX, STATE_PREP_ZETA, 0, ghz_target(3), noise, 3
        )

    raise ConfigurationError(_unknown_task_message(task_id))


def _unknown_task_message(task_id: str) -> str:
    return f"Tarea desconocida: '{task_id}'. Ids válidos: {', '.join(list_task_ids())}"
