"""
Estados objetivo: matrices densidad aleatorias (VQSD) y estado GHZ.
"""
import math

import numpy as np

from ..qsim.states import DensityMatrix, Statevector
from ..utils.errors import ConfigurationError


def random_mixed_state(n_qubits: int, rank: int, seed: int) -> DensityMatrix:
    """
    Matriz densidad aleatoria ρ = G G† / Tr(G G†).

    G es una matriz gaussiana compleja 2^n x rank generada con la semilla
    (ensamble tipo Hilbert-Schmidt).

    Args:
        n_qubits: Número de qubits
        rank: Rango de ρ, entre 1 y 2^n
        seed: Semilla

    Returns:
        Matriz densidad determinista para la semilla
    """
    dim = 2 ** n_qubits
    if not 1 <= rank <= dim:
        raise ConfigurationError(f"rank debe estar en [1, {dim}], recibió {rank}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2.0
    return DensityMatrix(n_qubits, rho / np.trace(rho).real)


def ghz_target(n_qubits: int) -> Statevector:
    """
    Estado GHZ (|0...0> + |1...1>)/√2.

    Args:
        n_qubits: Número de qubits (≥ 2)

    Returns:
        Vector de estado objetivo
    """
    if n_qubits < 2:
        raise ConfigurationError(f"GHZ requiere al menos 2 qubits, recibió {n_qubits}")
    amplitudes = np.zeros(2 ** n_qubits, dtype=complex)
    amplitudes[0] = amplitudes[-1] = 1.0 / math.sqrt(2.0)
    return Statevector(n_qubits, amplitudes)
