"""
Funciones de costo por tipo de tarea y métricas de error.
"""
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ..problems.datasets import ClassificationDataset, encoded_states
from ..problems.hamiltonian import PauliHamiltonian
from ..problems.tasks import TaskKind, TaskSpec
from ..qsim.circuit import CircuitProgram
from ..qsim.gates import Gate
from ..qsim.noise import NoiseConfig, depolarize_array
from ..qsim.simulator import evolve_batch, run_density, run_statevector
from ..qsim.states import (
    DensityMatrix,
    Statevector,
    apply_unitary_density,
    dephase_diagonal,
    expectation,
    fidelity,
    purity,
)


def _noisy(noise: Optional[NoiseConfig]) -> bool:
    return noise is not None and noise.enabled


def vqe_cost(
    gates: Sequence[Gate], hamiltonian: PauliHamiltonian, noise: Optional[NoiseConfig] = None
) -> float:
    """Energía ⟨ψ(θ)|H|ψ(θ)⟩ (o Tr(ρH) con ruido) partiendo de |0...0>."""
    n = hamiltonian.n_qubits
    if _noisy(noise):
        return expectation(run_density(gates, n, noise), hamiltonian)
    return expectation(run_statevector(gates, n), hamiltonian)


def vqsd_cost(
    rho: DensityMatrix,
    unitary: Union[CircuitProgram, Sequence[Gate], np.ndarray],
    noise: Optional[NoiseConfig] = None,
) -> float:
    """
    Costo de diagonalización C = Tr(ρ²) - Tr(dephase(UρU†)²).

    Args:
        rho: Estado a diagonalizar
        unitary: Circuito, lista de compuertas o matriz unitaria explícita
        noise: Ruido aplicado después de cada compuerta del circuito

    Returns:
        Costo en [0, 1]; 0 si UρU† es diagonal
    """
    if isinstance(unitary, np.ndarray):
        evolved = DensityMatrix(
            rho.n_qubits,
            apply_unitary_density(rho.matrix, unitary, list(range(rho.n_qubits)), rho.n_qubits),
        )
    else:
        evolved = run_density(unitary, rho.n_qubits, noise, initial=rho)
    return max(0.0, purity(rho) - purity(dephase_diagonal(evolved)))


def vqc_predictions(
    gates: Sequence[Gate],
    points: np.ndarray,
    n_qubits: int,
    noise: Optional[NoiseConfig] = None,
) -> np.ndarray:
    """
    Salida del clasificador y(x) = (1 - ⟨Z_0⟩)/2 = P(qubit 0 = 1) para un batch.

    Args:
        gates: Ansatz (sin el prefijo de codificación)
        points: Array (B, 2)
        n_qubits: Qubits del registro
        noise: Ruido; incluye los canales tras las compuertas de codificación

    Returns:
        Array (B,) con valores en [0, 1]
    """
    states = encoded_states(points, n_qubits)
    if _noisy(noise):
        batch = np.einsum("bi,bj->bij", states, states.conj())
        for q in (0, 1):
            batch = depolarize_array(batch, [q], noise.p1, n_qubits)
        batch = evolve_batch(gates, n_qubits, batch, noise)
        probabilities = np.real(np.diagonal(batch, axis1=1, axis2=2))
    else:
        batch = evolve_batch(gates, n_qubits, states)
        probabilities = np.abs(batch) ** 2
    return probabilities.reshape(len(points), 2, -1)[:, 1, :].sum(axis=1)


def vqc_cost(
    circuit: Union[CircuitProgram, Sequence[Gate]],
    data: ClassificationDataset,
    split: str = "train",
    noise: Optional[NoiseConfig] = None,
    n_qubits: int = 3,
) -> Tuple[float, float]:
    """
    Costo cuadrático (1/2n) Σ |y(x) - a(x)|² y exactitud de un split.

    Args:
        circuit: Ansatz
        data: Dataset
        split: "train" o "test"
        noise: Ruido opcional
        n_qubits: Qubits del registro

    Returns:
        (costo, exactitud)
    """
    points, labels = data.split(split)
    y = vqc_predictions(list(circuit), points, n_qubits, noise)
    cost = float(np.sum((y - labels) ** 2) / (2 * len(labels)))
    accuracy = float(np.mean((y > 0.5).astype(np.int64) == labels))
    return cost, accuracy


def state_prep_fidelity(
    gates: Sequence[Gate], target: Statevector, noise: Optional[NoiseConfig] = None
) -> float:
    """Fidelidad del estado preparado con el objetivo."""
    n = target.n_qubits
    if _noisy(noise):
        return fidelity(run_density(gates, n, noise), target)
    return fidelity(run_statevector(gates, n), target)


def bind_params(program: CircuitProgram, params: Sequence[float]) -> List[Gate]:
    """Lista de compuertas con los ángulos dados (sin recalcular momentos)."""
    angles = iter(params)
    return [g.with_angle(float(next(angles))) if g.kind.is_rotation else g for g in program.gates]


class CostEvaluator:
    """
    Evalúa el costo C_t de un circuito para una tarea.

    En preparación de estados el costo es 1 - F, de modo que todas las
    tareas comparten la convención "menor es mejor" con mínimo e_min.
    """

    def __init__(self, task: TaskSpec):
        """
        Args:
            task: Tarea con su carga útil y ruido
        """
        self.task = task
        self.e_min = task.e_min

    def cost_of_gates(self, gates: Sequence[Gate]) -> float:
        task = self.task
        if task.kind is TaskKind.VQE:
            return vqe_cost(gates, task.payload, task.noise)
        if task.kind is TaskKind.VQSD:
            return vqsd_cost(task.payload, gates, task.noise)
        if task.kind is TaskKind.VQC:
            return vqc_cost(gates, task.payload, "train", task.noise, task.n_qubits)[0]
        return 1.0 - state_prep_fidelity(gates, task.payload, task.noise)

    def cost(self, program: CircuitProgram) -> float:
        """Costo del circuito con sus ángulos actuales."""
        return self.cost_of_gates(program.gates)

    def cost_fn(self, program: CircuitProgram):
        """Función ángulos -> costo para el optimizador."""
        return lambda params: self.cost_of_gates(bind_params(program, params))

    def error(self, cost: float, program: Optional[CircuitProgram] = None) -> float:
        """
        Métrica de error E reportada por corrida.

        VQE: |C - E_min|; VQSD: C; VQC: 1 - exactitud de prueba; estados: 1 - F.
        """
        if self.task.kind is TaskKind.VQE:
            return abs(cost - self.e_min)
        if self.task.kind is TaskKind.VQC and program is not None:
            return 1.0 - self.accuracies(program)[1]
        return max(0.0, cost)

    def accuracies(self, program: CircuitProgram) -> Tuple[float, float]:
        """Exactitud (train, test) de un clasificador."""
        task = self.task
        train = vqc_cost(program, task.payload, "train", task.noise, task.n_qubits)[1]
        test = vqc_cost(program, task.payload, "test", task.noise, task.n_qubits)[1]
        return train, test
