"""
Optimización de ángulos de circuito.
"""
from .cobyla import COBYLA, NELDER_MEAD, OptimizeResult, minimize

__all__ = ["COBYLA", "NELDER_MEAD", "OptimizeResult", "minimize"]
