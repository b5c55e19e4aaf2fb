"""
Ejecución de circuitos sobre vectores de estado y matrices densidad.
"""
from typing import Iterable, Optional, Union

import numpy as np

from .circuit import CircuitProgram
from .gates import Gate, gate_matrix
from .noise import NoiseConfig, depolarize_array
from .states import (
    DensityMatrix,
    Statevector,
    apply_unitary_density,
    apply_unitary_vector,
    check_qubits,
)


def run_statevector(
    gates: Iterable[Gate], n_qubits: int, initial: Optional[Statevector] = None
) -> Statevector:
    """
    Simula un circuito sin ruido.

    Args:
        gates: Compuertas (o CircuitProgram)
        n_qubits: Número de qubits
        initial: Estado inicial (por defecto |0...0>)

    Returns:
        Vector de estado final
    """
    state = initial or Statevector.zero(n_qubits)
    amplitudes = state.amplitudes
    for gate in gates:
        check_qubits(gate.qubits, n_qubits)
        amplitudes = apply_unitary_vector(amplitudes, gate_matrix(gate), gate.qubits, n_qubits)
    return Statevector(n_qubits, amplitudes)


def run_density(
    gates: Iterable[Gate],
    n_qubits: int,
    noise: Optional[NoiseConfig] = None,
    initial: Optional[DensityMatrix] = None,
) -> DensityMatrix:
    """
    Simula un circuito con matriz densidad exacta.

    Si el ruido está habilitado, después de cada compuerta se aplica el
    canal despolarizante sobre los qubits que tocó.

    Args:
        gates: Compuertas (o CircuitProgram)
        n_qubits: Número de qubits
        noise: Configuración de ruido (opcional)
        initial: Estado inicial (por defecto |0...0><0...0|)

    Returns:
        Matriz densidad final
    """
    state = initial or DensityMatrix.zero(n_qubits)
    rho = state.matrix
    noisy = noise is not None and noise.enabled
    for gate in gates:
        check_qubits(gate.qubits, n_qubits)
        rho = apply_unitary_density(rho, gate_matrix(gate), gate.qubits, n_qubits)
        if noisy:
            rho = depolarize_array(rho, gate.qubits, noise.probability_for(len(gate.qubits)), n_qubits)
    return DensityMatrix(n_qubits, rho)


def run_program(
    program: CircuitProgram, noise: Optional[NoiseConfig] = None
) -> Union[Statevector, DensityMatrix]:
    """
    Ejecuta un programa en el modo adecuado: vector de estado si no hay
    ruido, matriz densidad si lo hay.
    """
    if noise is not None and noise.enabled:
        return run_density(program, program.n_qubits, noise)
    return run_statevector(program, program.n_qubits)


def evolve_batch(
    gates: Iterable[Gate],
    n_qubits: int,
    batch: np.ndarray,
    noise: Optional[NoiseConfig] = None,
) -> np.ndarray:
    """
    Aplica el mismo circuito a un batch de estados.

    Args:
        gates: Compuertas a aplicar
        n_qubits: Número de qubits
        batch: Array (B, 2^n) de vectores o (B, 2^n, 2^n) de matrices densidad
        noise: Ruido; solo se aplica en el modo matriz densidad

    Returns:
        Array con la misma forma que batch
    """
    density = batch.ndim == 3
    noisy = density and noise is not None and noise.enabled
    out = batch
    for gate in gates:
        check_qubits(gate.qubits, n_qubits)
        matrix = gate_matrix(gate)
        if density:
            out = apply_unitary_density(out, matrix, gate.qubits, n_qubits)
            if noisy:
                out = depolarize_array(out, gate.qubits, noise.probability_for(len(gate.qubits)), n_qubits)
        else:
            out = apply_unitary_vector(out, matrix, gate.qubits, n_qubits)
    return out


def circuit_unitary(gates: Iterable[Gate], n_qubits: int) -> np.ndarray:
    """Matriz unitaria completa del circuito (columnas = imágenes de la base)."""
    identity = np.eye(2 ** n_qubits, dtype=complex)
    return evolve_batch(gates, n_qubits, identity).T
