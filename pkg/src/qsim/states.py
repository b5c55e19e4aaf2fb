"""
Estados cuánticos densos: vector de estado y matriz densidad.

Orden de la base computacional: el qubit 0 es el bit más significativo del
índice (|q0 q1 ... q_{n-1}>).
"""
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence, Union

import numpy as np

from config import Config
from ..utils.errors import ConfigurationError, DataError
from .gates import Gate, gate_matrix

if TYPE_CHECKING:
    from ..problems.hamiltonian import PauliHamiltonian


def _check_n_qubits(n_qubits: int):
    if not 1 <= n_qubits <= Config.MAX_QUBITS:
        raise ConfigurationError(
            f"Número de qubits fuera de rango [1, {Config.MAX_QUBITS}]: {n_qubits}"
        )


@dataclass
class Statevector:
    """Estado puro de n qubits."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        _check_n_qubits(self.n_qubits)
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if self.amplitudes.shape[0] != 2 ** self.n_qubits:
            raise ConfigurationError(
                f"Se esperaban {2 ** self.n_qubits} amplitudes, hay {self.amplitudes.shape[0]}"
            )

    @classmethod
    def zero(cls, n_qubits: int) -> "Statevector":
        """Estado |0...0>."""
        amplitudes = np.zeros(2 ** n_qubits, dtype=complex)
        amplitudes[0] = 1.0
        return cls(n_qubits, amplitudes)

    @property
    def dim(self) -> int:
        return 2 ** self.n_qubits

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        """Probabilidades en la base computacional."""
        return np.abs(self.amplitudes) ** 2

    def copy(self) -> "Statevector":
        return Statevector(self.n_qubits, self.amplitudes.copy())


@dataclass
class DensityMatrix:
    """Estado mixto de n qubits."""

    n_qubits: int
    matrix: np.ndarray

    def __post_init__(self):
        _check_n_qubits(self.n_qubits)
        dim = 2 ** self.n_qubits
        self.matrix = np.asarray(self.matrix, dtype=complex)
        if self.matrix.shape != (dim, dim):
            raise ConfigurationError(
                f"Se esperaba una matriz {dim}x{dim}, hay {self.matrix.shape}"
            )

    @classmethod
    def zero(cls, n_qubits: int) -> "DensityMatrix":
        """Estado |0...0><0...0|."""
        return cls.from_statevector(Statevector.zero(n_qubits))

    @classmethod
    def from_statevector(cls, state: Statevector) -> "DensityMatrix":
        """Proyector |ψ><ψ|."""
        return cls(state.n_qubits, np.outer(state.amplitudes, state.amplitudes.conj()))

    @classmethod
    def maximally_mixed(cls, n_qubits: int) -> "DensityMatrix":
        """Estado I / 2^n."""
        dim = 2 ** n_qubits
        return cls(n_qubits, np.eye(dim, dtype=complex) / dim)

    @property
    def dim(self) -> int:
        return 2 ** self.n_qubits

    def copy(self) -> "DensityMatrix":
        return DensityMatrix(self.n_qubits, self.matrix.copy())

    def is_valid(self, atol: float = 1e-10) -> bool:
        """
        Verifica los invariantes de una matriz densidad.

        Args:
            atol: Tolerancia absoluta

        Returns:
            True si es hermítica, de traza 1 y semidefinida positiva
        """
        rho = self.matrix
        if not np.allclose(rho, rho.conj().T, atol=atol):
            return False
        if abs(np.trace(rho) - 1.0) > atol:
            return False
        eigenvalues = np.linalg.eigvalsh((rho + rho.conj().T) / 2.0)
        return bool(eigenvalues.min() >= -atol)


QuantumState = Union[Statevector, DensityMatrix]


def apply_to_axes(tensor: np.ndarray, matrix: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    """
    Aplica una matriz de 2^k x 2^k sobre k ejes de un tensor de qubits.

    Args:
        tensor: Tensor con un eje de dimensión 2 por qubit
        matrix: Matriz a aplicar
        axes: Ejes del tensor sobre los que actúa (en el orden de la matriz)

    Returns:
        Tensor transformado con los ejes en su posición original
    """
    k = len(axes)
    op = matrix.reshape((2,) * (2 * k))
    result = np.tensordot(op, tensor, axes=(list(range(k, 2 * k)), list(axes)))
    return np.moveaxis(result, list(range(k)), list(axes))


def apply_unitary_vector(
    amplitudes: np.ndarray, matrix: np.ndarray, qubits: Sequence[int], n_qubits: int
) -> np.ndarray:
    """Aplica U a un vector (o batch de vectores en el primer eje)."""
    batch_shape = amplitudes.shape[:-1]
    offset = len(batch_shape)
    tensor = amplitudes.reshape(batch_shape + (2,) * n_qubits)
    tensor = apply_to_axes(tensor, matrix, [offset + q for q in qubits])
    return tensor.reshape(batch_shape + (2 ** n_qubits,))


def apply_unitary_density(
    rho: np.ndarray, matrix: np.ndarray, qubits: Sequence[int], n_qubits: int
) -> np.ndarray:
    """Aplica U ρ U† a una matriz densidad (o batch en el primer eje)."""
    batch_shape = rho.shape[:-2]
    offset = len(batch_shape)
    dim = 2 ** n_qubits
    tensor = rho.reshape(batch_shape + (2,) * (2 * n_qubits))
    tensor = apply_to_axes(tensor, matrix, [offset + q for q in qubits])
    tensor = apply_to_axes(tensor, matrix.conj(), [offset + n_qubits + q for q in qubits])
    return tensor.reshape(batch_shape + (dim, dim))


def check_qubits(qubits: Sequence[int], n_qubits: int):
    """Valida que los índices de qubit existan en el registro."""
    for q in qubits:
        if not 0 <= q < n_qubits:
            raise ConfigurationError(
                f"Índice de qubit {q} fuera de rango para {n_qubits} qubits"
            )


def apply_gate(state: QuantumState, gate: Gate) -> QuantumState:
    """
    Aplica una compuerta y devuelve un nuevo estado del mismo tipo.

    Args:
        state: Vector de estado o matriz densidad
        gate: Compuerta a aplicar

    Returns:
        Estado transformado
    """
    check_qubits(gate.qubits, state.n_qubits)
    matrix = gate_matrix(gate)
    if isinstance(state, Statevector):
        return Statevector(
            state.n_qubits,
            apply_unitary_vector(state.amplitudes, matrix, gate.qubits, state.n_qubits),
        )
    return DensityMatrix(
        state.n_qubits,
        apply_unitary_density(state.matrix, matrix, gate.qubits, state.n_qubits),
    )


def expectation(state: QuantumState, hamiltonian: "PauliHamiltonian") -> float:
    """
    Valor esperado de un Hamiltoniano de Pauli.

    Args:
        state: Vector de estado o matriz densidad
        hamiltonian: Hamiltoniano con el mismo número de qubits

    Returns:
        Energía real
    """
    if hamiltonian.n_qubits != state.n_qubits:
        raise ConfigurationError(
            f"Hamiltoniano de {hamiltonian.n_qubits} qubits sobre estado de {state.n_qubits}"
        )
    h_matrix = hamiltonian.to_matrix()
    if isinstance(state, Statevector):
        value = np.vdot(state.amplitudes, h_matrix @ state.amplitudes)
    else:
        value = np.einsum("ij,ji->", h_matrix, state.matrix)

    scale = max(1.0, hamiltonian.coefficient_norm)
    if abs(value.imag) > 1e-9 * scale:
        raise DataError(f"Valor esperado con parte imaginaria {value.imag:.3e}")
    return float(value.real)


def fidelity(state: QuantumState, target: Statevector) -> float:
    """
    Fidelidad con un estado objetivo puro.

    Para un vector de estado es |<target|state>|²; para una matriz densidad
    es <target|ρ|target>.

    Args:
        state: Estado obtenido
        target: Estado objetivo

    Returns:
        Fidelidad en [0, 1]
    """
    if state.n_qubits != target.n_qubits:
        raise ConfigurationError(
            f"Dimensiones distintas: {state.n_qubits} vs {target.n_qubits} qubits"
        )
    if isinstance(state, Statevector):
        value = abs(np.vdot(target.amplitudes, state.amplitudes)) ** 2
    else:
        value = np.vdot(target.amplitudes, state.matrix @ target.amplitudes).real
    return float(min(1.0, max(0.0, value)))


def purity(state: DensityMatrix) -> float:
    """Tr(ρ²)."""
    return float(np.sum(np.abs(state.matrix) ** 2))


def dephase_diagonal(state: DensityMatrix) -> DensityMatrix:
    """Anula todas las coherencias (elementos fuera de la diagonal)."""
    return DensityMatrix(state.n_qubits, np.diag(np.diag(state.matrix)))
