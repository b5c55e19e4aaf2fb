"""
Jerarquía de errores del sistema de benchmark QAS.
"""
from typing import Optional, Sequence


class QasError(Exception):
    """Error base del sistema."""


class ConfigurationError(QasError, ValueError):
    """Parámetros inválidos: índices de qubit, probabilidades, ids, pesos."""


class HamiltonianLoadError(QasError, ValueError):
    """Archivo de Hamiltoniano malformado o inconsistente."""


class DataError(QasError, ValueError):
    """Datos numéricos inválidos (métricas no finitas o faltantes)."""


class ContractViolation(QasError, RuntimeError):
    """Se violó una precondición entre componentes (p. ej. acción enmascarada)."""


class OptimizationError(QasError, RuntimeError):
    """El optimizador interno recibió un costo no finito."""

    def __init__(self, message: str, params: Optional[Sequence[float]] = None):
        """
        Inicializa el error.

        Args:
            message: Descripción del problema
            params: Vector de ángulos que produjo el costo inválido
        """
        super().__init__(message)
        self.params = list(params) if params is not None else []
