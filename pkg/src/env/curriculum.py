"""
Currículo simple sobre el umbral de éxito ζ.
"""
from dataclasses import asdict, dataclass
from typing import Dict, Optional

from ..utils.errors import ConfigurationError


@dataclass
class CurriculumTracker:
    """
    Reduce ζ multiplicativamente tras cada episodio exitoso hasta ζ_final.

    Deshabilitado (por defecto), ζ = ζ_final siempre.
    """

    zeta_final: float
    zeta_initial: Optional[float] = None
    decay: float = 0.5
    enabled: bool = False
    zeta: float = 0.0
    successes: int = 0

    def __post_init__(self):
        if self.zeta_final <= 0:
            raise ConfigurationError(f"zeta_final debe ser positivo: {self.zeta_final}")
        if not 0.0 < self.decay <= 1.0:
            raise ConfigurationError(f"decay debe estar en (0, 1]: {self.decay}")
        if self.zeta_initial is None or not self.enabled:
            self.zeta_initial = self.zeta_final
        self.zeta = self.zeta_initial

    def update(self, episode_success: bool) -> float:
        """
        Registra el resultado de un episodio.

        Args:
            episode_success: True si el episodio alcanzó el umbral

        Returns:
            ζ vigente para el siguiente episodio
        """
        if episode_success:
            self.successes += 1
            if self.enabled:
                self.zeta = max(self.zeta_final, self.zeta * self.decay)
        return self.zeta

    def to_dict(self) -> Dict:
        return asdict(self)


def curriculum_update(tracker: CurriculumTracker, episode_success: bool) -> float:
    """Actualiza el currículo y devuelve el nuevo ζ."""
    return tracker.update(episode_success)
