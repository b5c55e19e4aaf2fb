"""
Utilidades para serializar resultados a JSON.
"""
import dataclasses
import enum
import hashlib
import json
import math
from pathlib import Path
from typing import Any, Dict

import numpy as np


def to_jsonable(value: Any) -> Any:
    """
    Convierte valores de Python/numpy a tipos compatibles con JSON.

    Los arrays de numpy se convierten a listas, los enteros y flotantes de
    numpy a sus equivalentes nativos y los dataclasses a diccionarios.

    Args:
        value: Valor Python a convertir

    Returns:
        Valor compatible con json.dumps
    """
    if value is None:
        return None
    if isinstance(value, bool):
        return value
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        # JSON no admite NaN/inf; se guardan como texto explícito
        if math.isnan(value) or math.isinf(value):
            return str(value)
        return value
    if isinstance(value, (int, str)):
        return value
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, Path):
        return str(value)
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        if hasattr(value, "to_dict"):
            return to_jsonable(value.to_dict())
        return to_jsonable(dataclasses.asdict(value))
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return str(value)


def dumps_line(item: Dict[str, Any]) -> str:
    """
    Serializa un diccionario a una línea JSON (formato jsonl).

    Args:
        item: Diccionario a serializar

    Returns:
        Línea JSON sin salto final
    """
    return json.dumps(to_jsonable(item), sort_keys=True)


def stable_hash(payload: Any) -> str:
    """
    Calcula un hash SHA256 estable del contenido serializado.

    Args:
        payload: Estructura serializable

    Returns:
        Hash hexadecimal
    """
    text = json.dumps(to_jsonable(payload), sort_keys=True)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()
