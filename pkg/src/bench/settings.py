"""
Archivo de configuración de corridas y combinación con las opciones del CLI.
"""
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from config import Config

from ..agents.config import AgentConfig, Algorithm, parse_algorithm
from ..optimize import COBYLA, NELDER_MEAD
from ..problems.tasks import list_task_ids
from ..qsim.noise import NoiseConfig
from ..utils.errors import ConfigurationError
from .ranking import AGGREGATE_MEAN, AGGREGATE_MODES, RankingWeights, default_weights

SECTION_KEYS = {
    "task": {"ids", "d_max", "zeta", "optimizer_budget", "network_layers", "hamiltonian_dir"},
    "agent": {"ids"} | set(AgentConfig.__dataclass_fields__) - {"algorithm"},
    "noise": {"enabled", "p1", "p2"},
    "ranking": {"weights", "aggregate"},
    "run": {"seeds", "episodes", "out", "parallel", "resume", "curriculum", "optimizer"},
}


def _as_list(value) -> List[str]:
    if value is None:
        return []
    if isinstance(value, str):
        return [value]
    return [str(v) for v in value]


def load_run_config(path: Path) -> Dict[str, Dict[str, Any]]:
    """
    Lee y valida un archivo de corrida JSON.

    Args:
        path: Ruta al archivo

    Returns:
        Secciones validadas (las ausentes quedan vacías)

    Raises:
        ConfigurationError: Archivo ilegible, sección o clave desconocida
    """
    path = Path(path)
    try:
        with open(path, "r") as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigurationError(f"No se pudo leer la configuración {path}: {e}") from e
    return validate_run_config(data, str(path))


def validate_run_config(data: Dict, source: str = "<dict>") -> Dict[str, Dict[str, Any]]:
    if not isinstance(data, dict):
        raise ConfigurationError(f"{source}: se esperaba un objeto JSON")
    unknown_sections = set(data) - set(SECTION_KEYS)
    if unknown_sections:
        raise ConfigurationError(f"{source}: secciones desconocidas {sorted(unknown_sections)}")
    sections = {}
    for name, allowed in SECTION_KEYS.items():
        section = data.get(name) or {}
        if not isinstance(section, dict):
            raise ConfigurationError(f"{source}: la sección '{name}' debe ser un objeto")
        unknown = set(section) - allowed
        if unknown:
            raise ConfigurationError(f"{source}: claves desconocidas en '{name}': {sorted(unknown)}")
        sections[name] = dict(section)
    return sections


def resolve_agent_ids(ids: List[str]) -> List[Algorithm]:
    """Expande "all" y valida los ids de agente."""
    if not ids or "all" in ids:
        return list(Algorithm)
    algorithms = []
    for agent_id in ids:
        algorithm = parse_algorithm(agent_id)
        if algorithm not in algorithms:
            algorithms.append(algorithm)
    return algorithms


def resolve_task_ids(ids: List[str]) -> List[str]:
    """Valida los ids de tarea ("all" = todas las registradas)."""
    valid = list_task_ids()
    if not ids:
        raise ConfigurationError(f"Falta --task. Ids válidos: {', '.join(valid)}")
    if "all" in ids:
        return valid
    for task_id in ids:
        if task_id not in valid:
            raise ConfigurationError(f"Tarea desconocida: '{task_id}'. Ids válidos: {', '.join(valid)}")
    return list(dict.fromkeys(ids))


@dataclass
class RunSettings:
    """Todo lo necesario para ejecutar una matriz de corridas."""

    tasks: List[str]
    agents: List[Algorithm]
    seeds: int
    episodes: int
    agent_config: AgentConfig = field(default_factory=AgentConfig)
    noise: NoiseConfig = field(default_factory=NoiseConfig.noiseless)
    task_overrides: Dict[str, Any] = field(default_factory=dict)
    hamiltonian_dir: Optional[Path] = None
    weights: Optional[RankingWeights] = None
    aggregate: str = AGGREGATE_MEAN
    out_dir: Path = field(default_factory=lambda: Config.RESULTS_DIR)
    parallel: int = 1
    resume: bool = False
    curriculum: bool = False
    optimizer: str = COBYLA

    def __post_init__(self):
        if self.seeds < 1:
            raise ConfigurationError(f"seeds debe ser ≥ 1: {self.seeds}")
        if self.episodes < 1:
            raise ConfigurationError(f"episodes debe ser ≥ 1: {self.episodes}")
        if self.parallel < 1:
            raise ConfigurationError(f"parallel debe ser ≥ 1: {self.parallel}")
        if self.aggregate not in AGGREGATE_MODES:
            raise ConfigurationError(f"Agregación desconocida '{self.aggregate}'")
        if self.optimizer not in (COBYLA, NELDER_MEAD):
            raise ConfigurationError(f"Optimizador desconocido '{self.optimizer}'")
        if self.weights is None:
            self.weights = default_weights(self.noise.enabled)

    def agent_config_for(self, algorithm: Algorithm) -> AgentConfig:
        return self.agent_config.with_overrides(algorithm=algorithm)


def build_settings(file_sections: Optional[Dict[str, Dict[str, Any]]] = None, **cli) -> RunSettings:
    """
    Combina el archivo de corrida con las opciones del CLI.

    Las opciones del CLI con valor None no sobrescriben al archivo.

    Args:
        file_sections: Salida de load_run_config (o None)
        **cli: task, agent, seeds, episodes, noisy, out, parallel, resume,
            weights, aggregate, curriculum, optimizer

    Returns:
        RunSettings validado

    Raises:
        ConfigurationError: Ids inválidos, episodes faltante, valores fuera de rango
    """
    sections = file_sections or validate_run_config({})
    cli = {k: v for k, v in cli.items() if v is not None and v != ()}
    task_section = dict(sections["task"])
    agent_section = dict(sections["agent"])
    noise_section = dict(sections["noise"])
    ranking_section = sections["ranking"]
    run_section = sections["run"]

    tasks = resolve_task_ids(_as_list(cli.get("task", task_section.pop("ids", None))))
    task_section.pop("ids", None)
    agents = resolve_agent_ids(_as_list(cli.get("agent", agent_section.pop("ids", None))))
    agent_section.pop("ids", None)

    episodes = cli.get("episodes", run_section.get("episodes"))
    if episodes is None:
        raise ConfigurationError("Falta --episodes (sugerido: 5000)")

    if cli.get("noisy"):
        noise_section["enabled"] = True
    if noise_section.get("enabled"):
        preset = NoiseConfig.noisy_preset()
        noise = NoiseConfig(
            float(noise_section.get("p1", preset.p1)), float(noise_section.get("p2", preset.p2)), True
        )
    else:
        noise = NoiseConfig.noiseless()

    weights = cli.get("weights", ranking_section.get("weights"))
    hamiltonian_dir = task_section.pop("hamiltonian_dir", None)

    return RunSettings(
        tasks=tasks,
        agents=agents,
        seeds=int(cli.get("seeds", run_section.get("seeds", 1))),
        episodes=int(episodes),
        agent_config=AgentConfig.from_dict(agent_section),
        noise=noise,
        task_overrides=task_section,
        hamiltonian_dir=Path(hamiltonian_dir) if hamiltonian_dir else None,
        weights=RankingWeights.from_value(weights) if weights is not None else None,
        aggregate=cli.get("aggregate", ranking_section.get("aggregate", AGGREGATE_MEAN)),
        out_dir=Path(cli.get("out", run_section.get("out", Config.RESULTS_DIR))),
        parallel=int(cli.get("parallel", run_section.get("parallel", 1))),
        resume=bool(cli.get("resume", run_section.get("resume", False))),
        curriculum=bool(cli.get("curriculum", run_section.get("curriculum", False))),
        optimizer=cli.get("optimizer", run_section.get("optimizer", COBYLA)),
    )
