"""
Hamiltonianos como suma ponderada de cadenas de Pauli.

Formato de archivo (JSON):
    {"name": "H2_JW_4q", "n_qubits": 4,
     "terms": [[coef, "IIII"], [coef, "ZIII"], ...],
     "ground_energy": -1.137}        # opcional
"""
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from config import Config
from ..utils.errors import ConfigurationError, HamiltonianLoadError
from ..utils.logger import setup_logger

logger = setup_logger(__name__)

PAULI_LABELS = frozenset("IXYZ")
GROUND_ENERGY_TOL = 1e-9


def pauli_string_matrix(label: str, coefficient: complex = 1.0) -> np.ndarray:
    """
    Matriz densa de una cadena de Pauli (qubit 0 = carácter 0 = bit más significativo).

    Cada cadena es una permutación con fases, por lo que se construye
    directamente sin productos de Kronecker.

    Args:
        label: Cadena sobre {I, X, Y, Z}
        coefficient: Factor multiplicativo

    Returns:
        Matriz 2^n x 2^n
    """
    n = len(label)
    dim = 2 ** n
    columns = np.arange(dim)
    rows = columns.copy()
    phases = np.full(dim, complex(coefficient))
    for q, char in enumerate(label):
        shift = n - 1 - q
        bits = (columns >> shift) & 1
        if char == "X":
            rows ^= 1 << shift
        elif char == "Y":
            rows ^= 1 << shift
            phases *= np.where(bits == 0, 1j, -1j)
        elif char == "Z":
            phases *= np.where(bits == 0, 1.0, -1.0)
    matrix = np.zeros((dim, dim), dtype=complex)
    matrix[rows, columns] = phases
    return matrix


@dataclass
class PauliHamiltonian:
    """Hamiltoniano H = Σ_j c_j P_j con energía fundamental cacheada."""

    n_qubits: int
    terms: List[Tuple[float, str]]
    ground_energy: Optional[float] = None
    name: str = ""
    _matrix: Optional[np.ndarray] = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        self.terms = [(float(c), str(p).upper()) for c, p in self.terms]
        if self.n_qubits < 1:
            raise ConfigurationError(f"n_qubits debe ser positivo: {self.n_qubits}")
        for coefficient, label in self.terms:
            if len(label) != self.n_qubits:
                raise ConfigurationError(
                    f"Cadena '{label}' de longitud {len(label)} en Hamiltoniano de {self.n_qubits} qubits"
                )
            if not set(label) <= PAULI_LABELS:
                raise ConfigurationError(f"Cadena de Pauli inválida: '{label}'")
            if not math.isfinite(coefficient):
                raise ConfigurationError(f"Coeficiente no finito para '{label}': {coefficient}")
        if self.ground_energy is None and self.n_qubits <= Config.MAX_QUBITS:
            self.ground_energy = self.exact_ground_energy()

    @property
    def coefficient_norm(self) -> float:
        """Σ |c_j|, cota superior de la norma espectral."""
        return float(sum(abs(c) for c, _ in self.terms))

    def to_matrix(self) -> np.ndarray:
        """
        Matriz densa del Hamiltoniano (cacheada).

        Returns:
            Matriz hermítica 2^n x 2^n
        """
        if self._matrix is None:
            if self.n_qubits > Config.MAX_QUBITS:
                raise ConfigurationError(
                    f"Matriz densa limitada a {Config.MAX_QUBITS} qubits (hay {self.n_qubits})"
                )
            dim = 2 ** self.n_qubits
            matrix = np.zeros((dim, dim), dtype=complex)
            for coefficient, label in self.terms:
                matrix += pauli_string_matrix(label, coefficient)
            self._matrix = matrix
        return self._matrix

    def exact_ground_energy(self) -> float:
        """Menor autovalor por diagonalización exacta."""
        return float(np.linalg.eigvalsh(self.to_matrix())[0])

    def scaled(self, factor: float) -> "PauliHamiltonian":
        """Copia con todos los coeficientes multiplicados por factor."""
        return PauliHamiltonian(self.n_qubits, [(factor * c, p) for c, p in self.terms], name=self.name)

    def to_dict(self) -> Dict:
        """Convierte al formato de archivo."""
        data = {
            "name": self.name,
            "n_qubits": self.n_qubits,
            "terms": [[c, p] for c, p in self.terms],
        }
        if self.ground_energy is not None:
            data["ground_energy"] = self.ground_energy
        return data


def parse_hamiltonian(data: Dict, source: str = "<dict>") -> PauliHamiltonian:
    """
    Valida y construye un Hamiltoniano desde su diccionario.

    Args:
        data: Diccionario con n_qubits, terms y opcionalmente ground_energy, name
        source: Origen (para los mensajes de error)

    Returns:
        PauliHamiltonian validado
    """
    if not isinstance(data, dict):
        raise HamiltonianLoadError(f"{source}: se esperaba un objeto JSON")
    unknown = set(data) - {"name", "n_qubits", "terms", "ground_energy"}
    if unknown:
        raise HamiltonianLoadError(f"{source}: claves desconocidas {sorted(unknown)}")
    if "n_qubits" not in data or "terms" not in data:
        raise HamiltonianLoadError(f"{source}: faltan 'n_qubits' o 'terms'")

    n_qubits = data["n_qubits"]
    if not isinstance(n_qubits, int) or isinstance(n_qubits, bool):
        raise HamiltonianLoadError(f"{source}: n_qubits debe ser entero")

    terms = []
    for entry in data["terms"]:
        if not isinstance(entry, (list, tuple)) or len(entry) != 2:
            raise HamiltonianLoadError(f"{source}: término malformado {entry!r}")
        coefficient, label = entry
        if not isinstance(coefficient, (int, float)) or not isinstance(label, str):
            raise HamiltonianLoadError(f"{source}: término malformado {entry!r}")
        terms.append((coefficient, label))

    ground_energy = data.get("ground_energy")
    if ground_energy is None and n_qubits > Config.MAX_QUBITS:
        raise HamiltonianLoadError(
            f"{source}: {n_qubits} qubits requiere ground_energy explícita"
        )

    try:
        hamiltonian = PauliHamiltonian(
            n_qubits, terms, ground_energy=ground_energy, name=data.get("name", "")
        )
    except ConfigurationError as e:
        raise HamiltonianLoadError(f"{source}: {e}") from e

    if ground_energy is not None and n_qubits <= Config.MAX_QUBITS:
        exact = hamiltonian.exact_ground_energy()
        if abs(exact - float(ground_energy)) > GROUND_ENERGY_TOL:
            raise HamiltonianLoadError(
                f"{source}: ground_energy={ground_energy} no coincide con el valor exacto {exact}"
            )
    return hamiltonian


def load_hamiltonian(path: Union[str, Path]) -> PauliHamiltonian:
    """
    Carga un Hamiltoniano desde un archivo JSON.

    Si el archivo no trae ground_energy, se calcula por diagonalización exacta.

    Args:
        path: Ruta al archivo

    Returns:
        PauliHamiltonian validado
    """
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except FileNotFoundError as e:
        raise HamiltonianLoadError(f"No existe el archivo de Hamiltoniano: {path}") from e
    except json.JSONDecodeError as e:
        raise HamiltonianLoadError(f"{path}: JSON inválido ({e})") from e

    hamiltonian = parse_hamiltonian(data, source=str(path))
    logger.debug(
        f"Hamiltoniano {hamiltonian.name or path.name}: {hamiltonian.n_qubits} qubits, "
        f"{len(hamiltonian.terms)} términos, E_min={hamiltonian.ground_energy}"
    )
    return hamiltonian


def dump_hamiltonian(hamiltonian: PauliHamiltonian, path: Union[str, Path]):
    """Escribe el Hamiltoniano en formato JSON."""
    with open(path, "w", encoding="utf-8") as f:
        json.dump(hamiltonian.to_dict(), f, indent=2)
