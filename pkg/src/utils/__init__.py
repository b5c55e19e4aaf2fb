"""
Utilidades compartidas del sistema.
"""
