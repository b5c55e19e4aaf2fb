"""
Programa de circuito: lista ordenada de compuertas con planificación por momentos.
"""
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from ..utils.errors import ConfigurationError
from .gates import Gate, GateKind
from .states import check_qubits


class CircuitProgram:
    """
    Circuito construido compuerta a compuerta.

    Cada compuerta se coloca en el primer momento en que todos sus qubits
    están libres (planificación greedy); la profundidad es el número de
    momentos ocupados.
    """

    def __init__(self, n_qubits: int, gates: Optional[Sequence[Gate]] = None):
        """
        Inicializa el circuito.

        Args:
            n_qubits: Número de qubits del registro
            gates: Compuertas iniciales (opcional)
        """
        if n_qubits < 1:
            raise ConfigurationError(f"n_qubits debe ser positivo: {n_qubits}")
        self.n_qubits = n_qubits
        self.gates: List[Gate] = []
        self.moments: List[int] = []
        self._frontier = [0] * n_qubits
        self._last: List[Optional[int]] = [None] * n_qubits
        for gate in gates or []:
            self.append(gate)

    def append(self, gate: Gate) -> int:
        """
        Agrega una compuerta al final del circuito.

        Args:
            gate: Compuerta a colocar

        Returns:
            Momento asignado
        """
        check_qubits(gate.qubits, self.n_qubits)
        moment = max(self._frontier[q] for q in gate.qubits)
        index = len(self.gates)
        self.gates.append(gate)
        self.moments.append(moment)
        for q in gate.qubits:
            self._frontier[q] = moment + 1
            self._last[q] = index
        return moment

    def copy(self) -> "CircuitProgram":
        return CircuitProgram(self.n_qubits, self.gates)

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self) -> Iterator[Gate]:
        return iter(self.gates)

    def __add__(self, other: "CircuitProgram") -> "CircuitProgram":
        if other.n_qubits != self.n_qubits:
            raise ConfigurationError(
                f"No se pueden concatenar circuitos de {self.n_qubits} y {other.n_qubits} qubits"
            )
        return CircuitProgram(self.n_qubits, list(self.gates) + list(other.gates))

    def __eq__(self, other) -> bool:
        if not isinstance(other, CircuitProgram):
            return NotImplemented
        return self.n_qubits == other.n_qubits and self.gates == other.gates

    def __repr__(self) -> str:
        body = ", ".join(str(g) for g in self.gates)
        return f"CircuitProgram(n_qubits={self.n_qubits}, [{body}])"

    @property
    def depth(self) -> int:
        """Número de momentos (0 para el circuito vacío)."""
        return 1 + max(self.moments) if self.moments else 0

    def last_on(self, qubit: int) -> Optional[Tuple[Gate, int]]:
        """
        Última compuerta que tocó un qubit.

        Args:
            qubit: Índice del qubit

        Returns:
            (compuerta, momento) o None si el qubit no tiene compuertas
        """
        index = self._last[qubit]
        if index is None:
            return None
        return self.gates[index], self.moments[index]

    @property
    def params(self) -> List[float]:
        """Ángulos de las rotaciones en orden de aparición."""
        return [g.angle for g in self.gates if g.kind.is_rotation]

    @property
    def parameter_count(self) -> int:
        return sum(1 for g in self.gates if g.kind.is_rotation)

    def with_params(self, params: Sequence[float]) -> "CircuitProgram":
        """
        Copia del circuito con nuevos ángulos para las rotaciones.

        Args:
            params: Un ángulo por rotación, en orden

        Returns:
            Nuevo circuito con la misma estructura
        """
        params = list(params)
        if len(params) != self.parameter_count:
            raise ConfigurationError(
                f"Se esperaban {self.parameter_count} ángulos, se recibieron {len(params)}"
            )
        angles = iter(params)
        gates = [g.with_angle(next(angles)) if g.kind.is_rotation else g for g in self.gates]
        return CircuitProgram(self.n_qubits, gates)

    @property
    def cx_count(self) -> int:
        return sum(1 for g in self.gates if g.kind is GateKind.CX)

    @property
    def single_qubit_count(self) -> int:
        return len(self.gates) - self.cx_count

    def to_dict(self) -> Dict:
        """Convierte a diccionario serializable."""
        return {
            "n_qubits": self.n_qubits,
            "gates": [g.to_dict() for g in self.gates],
            "moments": list(self.moments),
            "depth": self.depth,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "CircuitProgram":
        """Reconstruye el circuito; los momentos se recalculan."""
        return cls(int(data["n_qubits"]), [Gate.from_dict(g) for g in data.get("gates", [])])
