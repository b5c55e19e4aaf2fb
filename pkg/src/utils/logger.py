"""
Sistema de logging estructurado.
"""
import logging
import sys
from pathlib import Path
from typing import Optional, Union

from config import Config


def resolve_level(level: Union[int, str, None]) -> int:
    """
    Convierte un nivel textual ("INFO", "debug") a su valor numérico.

    Args:
        level: Nivel como entero, texto o None (usa Config.LOG_LEVEL)

    Returns:
        Nivel numérico de logging
    """
    if level is None:
        level = Config.LOG_LEVEL
    if isinstance(level, int):
        return level
    value = logging.getLevelName(str(level).upper())
    return value if isinstance(value, int) else logging.WARNING


def setup_logger(
    name: str,
    level: Union[int, str, None] = None,
    log_file: Optional[Path] = None
) -> logging.Logger:
    """
    Configura un logger con formato estructurado.

    Args:
        name: Nombre del logger
        level: Nivel de logging (por defecto Config.LOG_LEVEL)
        log_file: Ruta opcional al archivo de log (por defecto Config.LOG_FILE)

    Returns:
        Logger configurado
    """
    logger = logging.getLogger(name)
    numeric_level = resolve_level(level)
    logger.setLevel(numeric_level)

    # Evitar duplicar handlers si ya existe
    if logger.handlers:
        return logger

    formatter = logging.Formatter(
        fmt='%(asctime)s | %(levelname)-8s | %(name)s | %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    # stderr para no mezclarse con las tablas de rich en stdout
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(numeric_level)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    log_file = log_file or Config.LOG_FILE
    if log_file:
        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(numeric_level)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger

