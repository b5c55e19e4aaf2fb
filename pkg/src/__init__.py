"""
Benchmark de agentes de aprendizaje por refuerzo para búsqueda de arquitecturas cuánticas.
"""
__version__ = "1.0.0"
