"""
Suite de oráculos y propiedades ejecutada por `cli.py validate`.

Cada chequeo es independiente del entrenamiento y compara contra un
cálculo alternativo (operadores de Kraus explícitos, productos externos,
enumeración exhaustiva, valores derivados a mano).
"""
import itertools
import time
from dataclasses import asdict, dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..env.actions import ActionSpace
from ..env.costs import state_prep_fidelity, vqsd_cost
from ..env.rewards import cost_reward, fidelity_reward
from ..problems.hamiltonian import pauli_string_matrix
from ..problems.targets import ghz_target, random_mixed_state
from ..problems.tasks import VQSD_RANK, VQSD_TARGETS
from ..qsim.circuit import CircuitProgram
from ..qsim.gates import Gate, GateKind, gate_matrix
from ..qsim.noise import NoiseConfig
from ..qsim.simulator import run_density, run_statevector
from ..qsim.states import apply_unitary_density
from .ranking import AgentSummary, RankingWeights, composite_score

CheckResult = Tuple[bool, str]

RANKING_FIXTURE = {
    "error": [1e-6, 1e-4, 1e-2],
    "gates": [10, 20, 30],
    "depth": [5, 10, 15],
    "time_per_episode": [1.0, 2.0, 3.0],
}
RANKING_FIXTURE_SCORES = [0.0, 0.25495049504950495, 1.0]


@dataclass
class ValidationCheck:
    """Resultado de un chequeo."""

    name: str
    passed: bool
    detail: str
    seconds: float

    def to_dict(self) -> Dict:
        return asdict(self)


def random_circuit(rng: np.random.Generator, n_qubits: int, max_gates: int) -> CircuitProgram:
    """Circuito aleatorio con rotaciones, compuertas fijas y CX."""
    program = CircuitProgram(n_qubits)
    kinds = [k for k in GateKind if n_qubits > 1 or k is not GateKind.CX]
    for _ in range(int(rng.integers(1, max_gates + 1))):
        kind = kinds[int(rng.integers(len(kinds)))]
        if kind is GateKind.CX:
            control, target = rng.choice(n_qubits, size=2, replace=False)
            program.append(Gate(kind, (int(control), int(target))))
        else:
            angle = float(rng.uniform(-np.pi, np.pi)) if kind.is_rotation else None
            program.append(Gate(kind, (int(rng.integers(n_qubits)),), angle))
    return program


def kraus_depolarize(rho: np.ndarray, qubits: Sequence[int], p: float, n_qubits: int) -> np.ndarray:
    """Canal despolarizante con operadores de Kraus embebidos en todo el registro."""
    paulis = []
    for labels in itertools.product("IXYZ", repeat=len(qubits)):
        if all(label == "I" for label in labels):
            continue
        full = ["I"] * n_qubits
        for q, label in zip(qubits, labels):
            full[q] = label
        paulis.append(pauli_string_matrix("".join(full)))
    weight = p / len(paulis)
    out = (1.0 - p) * rho
    for pauli in paulis:
        out = out + weight * (pauli @ rho @ pauli.conj().T)
    return out


def check_reward_table() -> CheckResult:
    cases = [
        (cost_reward(1.0, 0.8, 0.0, 0.01, 1, 10), (0.2, False, False)),
        (cost_reward(0.5, 0.9, 0.0, 0.01, 1, 10), (-0.8, False, False)),
        (cost_reward(0.5, 2.0, 0.0, 0.01, 1, 10), (-1.0, False, False)),
        (cost_reward(0.5, 0.005, 0.0, 0.01, 10, 10), (5.0, True, True)),
        (cost_reward(0.5, 0.4, 0.0, 0.01, 10, 10), (-5.0, True, False)),
        (fidelity_reward(0.98), (5.0, True)),
        (fidelity_reward(0.97), (0.97, False)),
    ]
    for got, expected in cases:
        if got[1:] != expected[1:] or abs(got[0] - expected[0]) > 1e-12:
            return False, f"esperado {expected}, obtenido {got}"
    return True, f"{len(cases)} casos"


def check_simulator_oracles(n_circuits: int = 100, seed: int = 0) -> CheckResult:
    rng = np.random.default_rng(seed)
    noise = NoiseConfig(0.05, 0.03, True)
    worst_norm = worst_kraus = worst_pure = 0.0
    for _ in range(n_circuits):
        n = int(rng.integers(1, 4))
        program = random_circuit(rng, n, 8)

        state = run_statevector(program, n)
        worst_norm = max(worst_norm, abs(state.norm - 1.0))

        outer = np.outer(state.amplitudes, state.amplitudes.conj())
        worst_pure = max(worst_pure, float(np.max(np.abs(run_density(program, n).matrix - outer))))

        rho = np.zeros((2**n, 2**n), dtype=complex)
        rho[0, 0] = 1.0
        for gate in program:
            rho = apply_unitary_density(rho, gate_matrix(gate), gate.qubits, n)
            rho = kraus_depolarize(rho, gate.qubits, noise.probability_for(len(gate.qubits)), n)
        worst_kraus = max(worst_kraus, float(np.max(np.abs(run_density(program, n, noise).matrix - rho))))

    passed = worst_norm <= 1e-10 and worst_kraus <= 1e-12 and worst_pure <= 1e-10
    return passed, f"norma {worst_norm:.1e}, kraus {worst_kraus:.1e}, puro {worst_pure:.1e}"


def moment_layers(gates: Sequence[Gate]) -> List[Dict[int, Gate]]:
    """
    Reconstruye los momentos de una lista de compuertas.

    Cada compuerta va al primer momento posterior a todos los que ya ocupan
    alguno de sus qubits. Cada momento es un dict qubit -> compuerta.
    """
    layers: List[Dict[int, Gate]] = []
    for gate in gates:
        moment = _next_moment(layers, gate.qubits)
        if moment == len(layers):
            layers.append({})
        for q in gate.qubits:
            layers[moment][q] = gate
    return layers


def _next_moment(layers: List[Dict[int, Gate]], qubits: Sequence[int]) -> int:
    occupied = [m for m, layer in enumerate(layers) if any(q in layer for q in qubits)]
    return 1 + max(occupied) if occupied else 0


def is_illegal(gates: Sequence[Gate], kind: GateKind, qubits: Tuple[int, ...]) -> bool:
    """
    Predicados de acción ilegal evaluados sobre los momentos del circuito.

    La acción es ilegal si el momento inmediatamente anterior al que ocuparía
    contiene, sobre sus qubits, una compuerta del mismo tipo (una rotación o
    compuerta fija repetida, o un CX con el mismo control y target).
    """
    layers = moment_layers(gates)
    moment = _next_moment(layers, qubits)
    if moment == 0:
        return False
    previous = layers[moment - 1].get(qubits[0])
    if previous is None or previous.kind is not kind:
        return False
    return tuple(previous.qubits) == tuple(qubits)


def check_mask_soundness(max_steps: int = 3) -> CheckResult:
    discrepancies = 0
    checked = 0
    for parameterized in (True, False):
        space = ActionSpace(2, parameterized)
        for length in range(max_steps + 1):
            for sequence in itertools.product(range(space.size), repeat=length):
                program = CircuitProgram(2, [space.decode(a).to_gate() for a in sequence])
                mask = space.legal_mask(program)
                for index in range(space.size):
                    action = space.decode(index)
                    checked += 1
                    if mask[index] == is_illegal(program.gates, action.kind, action.qubits):
                        discrepancies += 1
    return discrepancies == 0, f"{checked} pares (circuito, acción), {discrepancies} discrepancias"


def ghz_oracle_circuit(n_qubits: int = 3) -> CircuitProgram:
    """H(0) seguido de la cadena CX(q, q+1)."""
    program = CircuitProgram(n_qubits, [Gate(GateKind.H, (0,))])
    for q in range(n_qubits - 1):
        program.append(Gate(GateKind.CX, (q, q + 1)))
    return program


def check_ghz_oracle() -> CheckResult:
    value = state_prep_fidelity(ghz_oracle_circuit(3).gates, ghz_target(3))
    return abs(value - 1.0) <= 1e-12, f"F = {value:.15f}"


def diagonalizing_unitary(rho: np.ndarray) -> np.ndarray:
    """U = V† con ρ = V diag(λ) V†."""
    _, vectors = np.linalg.eigh(rho)
    return vectors.conj().T


def check_vqsd_oracle() -> CheckResult:
    worst = 0.0
    for k in range(VQSD_TARGETS):
        rho = random_mixed_state(2, VQSD_RANK, seed=k)
        worst = max(worst, vqsd_cost(rho, diagonalizing_unitary(rho.matrix)))
    return worst <= 1e-9, f"costo máximo {worst:.1e}"


def fixture_summaries(columns: Optional[Dict[str, List[float]]] = None) -> List[AgentSummary]:
    columns = columns or RANKING_FIXTURE
    return [
        AgentSummary(
            "fixture",
            f"agent{i}",
            columns["error"][i],
            columns["gates"][i],
            columns["depth"][i],
            columns["time_per_episode"][i],
            n_seeds=1,
            success_rate=1.0,
        )
        for i in range(len(columns["error"]))
    ]


def check_ranking_arithmetic() -> CheckResult:
    weights = RankingWeights(0.5, 0.2, 0.2, 0.1)
    rows = sorted(composite_score(fixture_summaries(), weights), key=lambda r: r.agent)
    scores = [r.S for r in rows]
    if max(abs(a - b) for a, b in zip(scores, RANKING_FIXTURE_SCORES)) > 1e-12:
        return False, f"S = {scores}"

    base_ranks = [r.rank for r in rows]
    for name in RANKING_FIXTURE:
        scaled = {k: list(v) for k, v in RANKING_FIXTURE.items()}
        scaled[name] = [3.5 * v + 7.0 for v in scaled[name]]
        ranks = [r.rank for r in sorted(composite_score(fixture_summaries(scaled), weights), key=lambda r: r.agent)]
        if ranks != base_ranks:
            return False, f"el reescalado de {name} cambió el ranking"

    noisy_weights = RankingWeights(0.6, 0.1, 0.3, 0.0)
    reference = [r.S for r in composite_score(fixture_summaries(), noisy_weights)]
    for permutation in itertools.permutations(RANKING_FIXTURE["time_per_episode"]):
        permuted = {**RANKING_FIXTURE, "time_per_episode": list(permutation)}
        if [r.S for r in composite_score(fixture_summaries(permuted), noisy_weights)] != reference:
            return False, "w_T = 0 pero T afecta el ranking"
    return True, f"S = {[round(s, 12) for s in scores]}"


CHECKS: Dict[str, Callable[[], CheckResult]] = {
    "reward_table": check_reward_table,
    "simulator_oracles": check_simulator_oracles,
    "mask_soundness": check_mask_soundness,
    "ghz_oracle": check_ghz_oracle,
    "vqsd_oracle": check_vqsd_oracle,
    "ranking_arithmetic": check_ranking_arithmetic,
}


def run_validation(names: Optional[Sequence[str]] = None) -> List[ValidationCheck]:
    """
    Ejecuta los chequeos indicados (todos por defecto).

    Una excepción dentro de un chequeo se reporta como fallo.

    Returns:
        Un ValidationCheck por chequeo
    """
    results = []
    for name in names or list(CHECKS):
        start = time.perf_counter()
        try:
            passed, detail = CHECKS[name]()
        except Exception as e:
            passed, detail = False, f"{type(e).__name__}: {e}"
        results.append(ValidationCheck(name, bool(passed), detail, time.perf_counter() - start))
    return results
