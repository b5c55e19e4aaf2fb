"""
Funciones de recompensa.
"""
from typing import Tuple

from ..qsim.states import Statevector, fidelity

SUCCESS_REWARD = 5.0
TIMEOUT_REWARD = -5.0
MIN_STEP_REWARD = -1.0
FIDELITY_THRESHOLD = 0.98
DENOMINATOR_FLOOR = 1e-12


def cost_reward(
    prev_cost: float,
    cost: float,
    e_min: float,
    zeta: float,
    t: int,
    d_max: int,
) -> Tuple[float, bool, bool]:
    """
    Recompensa de las tareas con costo (VQE, VQSD, VQC).

        5                                             si C_t - E_min ≤ ζ
        -5                                            si t ≥ D_max
        max((C_{t-1} - C_t) / (C_{t-1} - E_min), -1)  en otro caso

    Args:
        prev_cost: C_{t-1}
        cost: C_t
        e_min: Mínimo del costo
        zeta: Umbral de convergencia
        t: Paso actual (1 para la primera compuerta)
        d_max: Máximo de pasos

    Returns:
        (recompensa, done, éxito)
    """
    if cost - e_min <= zeta:
        return SUCCESS_REWARD, True, True
    if t >= d_max:
        return TIMEOUT_REWARD, True, False
    denominator = max(prev_cost - e_min, DENOMINATOR_FLOOR)
    return max((prev_cost - cost) / denominator, MIN_STEP_REWARD), False, False


def fidelity_reward(value: float, r_big: float = SUCCESS_REWARD) -> Tuple[float, bool]:
    """
    Recompensa de preparación de estados: R si F ≥ 0.98, si no F.

    Returns:
        (recompensa, éxito)
    """
    if value >= FIDELITY_THRESHOLD:
        return r_big, True
    return value, False


def state_prep_reward(
    state: Statevector, target: Statevector, r_big: float = SUCCESS_REWARD
) -> Tuple[float, bool]:
    """
    Recompensa a partir del estado obtenido y el objetivo.

    Args:
        state: Estado del circuito
        target: Estado objetivo
        r_big: Recompensa de éxito

    Returns:
        (recompensa, done)
    """
    return fidelity_reward(fidelity(state, target), r_big)
