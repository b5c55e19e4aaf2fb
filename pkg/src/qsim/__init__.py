"""
Simulación exacta de circuitos cuánticos pequeños.
"""
from .circuit import CircuitProgram
from .gates import FIXED_KINDS, PAULI_MATRICES, ROTATION_KINDS, Gate, GateKind, gate_matrix
from .noise import NoiseConfig, apply_depolarizing
from .simulator import circuit_unitary, evolve_batch, run_density, run_program, run_statevector
from .states import (
    DensityMatrix,
    Statevector,
    apply_gate,
    dephase_diagonal,
    expectation,
    fidelity,
    purity,
)

__all__ = [
    "CircuitProgram",
    "DensityMatrix",
    "FIXED_KINDS",
    "Gate",
    "GateKind",
    "NoiseConfig",
    "PAULI_MATRICES",
    "ROTATION_KINDS",
    "Statevector",
    "apply_depolarizing",
    "apply_gate",
    "circuit_unitary",
    "dephase_diagonal",
    "evolve_batch",
    "expectation",
    "fidelity",
    "gate_matrix",
    "purity",
    "run_density",
    "run_program",
    "run_statevector",
]
