"""
Entorno de búsqueda de arquitecturas cuánticas.
"""
from ..qsim.circuit import CircuitProgram
from .actions import ActionSpace, GateAction
from .baselines import BaselineResult, evaluate_baseline, hardware_efficient_ansatz
from .costs import CostEvaluator, state_prep_fidelity, vqc_cost, vqe_cost, vqsd_cost
from .curriculum import CurriculumTracker, curriculum_update
from .encoding import QasObservation, decode_observation, encode_observation, observation_size
from .environment import QasEnvironment, StepInfo, StepOutcome
from .rewards import cost_reward, fidelity_reward, state_prep_reward

__all__ = [
    "ActionSpace",
    "BaselineResult",
    "CircuitProgram",
    "CostEvaluator",
    "CurriculumTracker",
    "GateAction",
    "QasEnvironment",
    "QasObservation",
    "StepInfo",
    "StepOutcome",
    "cost_reward",
    "curriculum_update",
    "decode_observation",
    "encode_observation",
    "evaluate_baseline",
    "fidelity_reward",
    "hardware_efficient_ansatz",
    "observation_size",
    "state_prep_fidelity",
    "state_prep_reward",
    "vqc_cost",
    "vqe_cost",
    "vqsd_cost",
]
