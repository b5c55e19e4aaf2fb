#!/usr/bin/env python3
"""
CLI principal del benchmark de agentes RL para búsqueda de arquitecturas cuánticas.
"""
import sys
from pathlib import Path
from typing import Optional, Sequence

import click
from rich.console import Console
from rich.progress import BarColumn, MofNCompleteColumn, Progress, SpinnerColumn, TextColumn
from rich.table import Table

from config import Config
from src.agents import Algorithm
from src.bench import (
    RankingWeights,
    RunStore,
    build_settings,
    default_weights,
    emit_report,
    load_records,
    load_run_config,
    rank_records,
    run_matrix,
    run_validation,
)
from src.bench.ranking import AGGREGATE_MEAN, AGGREGATE_MODES
from src.bench.runner import matrix_specs
from src.bench.settings import validate_run_config
from src.bench.validation import CHECKS
from src.env import evaluate_baseline
from src.optimize import COBYLA, NELDER_MEAD
from src.problems import build_task, list_task_ids
from src.qsim import NoiseConfig
from src.utils.errors import ConfigurationError, HamiltonianLoadError, QasError

console = Console()

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2


def print_ranking(task: str, rows):
    table = Table(title=f"Ranking: {task}")
    table.add_column("#", justify="right")
    table.add_column("Agente", style="cyan")
    table.add_column("E", justify="right")
    table.add_column("G", justify="right")
    table.add_column("D", justify="right")
    table.add_column("T (s)", justify="right")
    table.add_column("S", style="magenta", justify="right")
    for row in rows:
        table.add_row(
            str(row.rank), row.agent, f"{row.E:.3g}", f"{row.G:.1f}", f"{row.D:.1f}", f"{row.T:.3g}", f"{row.S:.4f}"
        )
    console.print(table)


def report_rankings(records, weights, aggregate_mode, out_dir, tasks=None):
    rankings = rank_records(records, weights, aggregate_mode)
    emit_report(records, rankings, out_dir, tasks=tasks, include_runs=False)
    for task, rows in rankings.items():
        print_ranking(task, rows)
    return rankings


@click.group()
def cli():
    """Benchmark de agentes RL para búsqueda de arquitecturas cuánticas."""
    pass


@cli.command()
@click.option("--task", "-t", multiple=True, help="Id de tarea (repetible, o 'all')")
@click.option("--agent", "-a", multiple=True, help="Id de agente (repetible, o 'all')")
@click.option("--seeds", type=int, help="Número de semillas por (tarea, agente)")
@click.option("--episodes", type=int, help="Episodios por corrida (sugerido: 5000)")
@click.option("--noisy", is_flag=True, help="Usar el preset ruidoso (p1=0.001, p2=0.0001)")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), help="Archivo de corrida JSON")
@click.option("--out", "-o", type=click.Path(file_okay=False), help="Directorio de resultados")
@click.option("--parallel", type=int, help="Corridas simultáneas")
@click.option("--resume", is_flag=True, help="Saltar corridas ya completadas")
@click.option("--curriculum", is_flag=True, help="Currículo sobre el umbral ζ")
@click.option("--optimizer", type=click.Choice([COBYLA, NELDER_MEAD]), help="Optimizador interno")
@click.option("--weights", help="Pesos del ranking wE,wG,wD,wT")
@click.option("--aggregate", type=click.Choice(AGGREGATE_MODES), help="Agregación de semillas")
def run(task, agent, seeds, episodes, noisy, config_path, out, parallel, resume, curriculum, optimizer, weights, aggregate):
    """Ejecuta la matriz tarea × agente × semilla y escribe el reporte."""
    sections = load_run_config(Path(config_path)) if config_path else None
    settings = build_settings(
        sections,
        task=task or None,
        agent=agent or None,
        seeds=seeds,
        episodes=episodes,
        noisy=noisy or None,
        out=out,
        parallel=parallel,
        resume=resume or None,
        curriculum=curriculum or None,
        optimizer=optimizer,
        weights=weights,
        aggregate=aggregate,
    )
    Config.ensure_dirs(settings.out_dir)
    store = RunStore(settings.out_dir)
    total = len(matrix_specs(settings))
    agents = ", ".join(a.value for a in settings.agents)
    console.print(f"[bold blue]Tareas:[/bold blue] {', '.join(settings.tasks)}  [bold blue]Agentes:[/bold blue] {agents}")
    console.print(f"[bold blue]Corridas:[/bold blue] {total} ({settings.episodes} episodios cada una)")

    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        MofNCompleteColumn(),
        console=console,
    ) as progress:
        bar = progress.add_task("Entrenando...", total=total)
        records = run_matrix(settings, store, on_complete=lambda record: progress.advance(bar))
        progress.update(bar, completed=total)

    console.print(f"[green]✓[/green] {len(records)} corridas en {settings.out_dir / 'runs.jsonl'}")
    report_rankings(store.load_records(), settings.weights, settings.aggregate, settings.out_dir, settings.tasks)


@cli.command()
@click.option("--in", "in_dir", required=True, type=click.Path(exists=True, file_okay=False), help="Directorio de resultados")
@click.option("--weights", help="Pesos wE,wG,wD,wT (por defecto según ruido)")
@click.option("--aggregate", type=click.Choice(AGGREGATE_MODES), help="mean o best")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), help="Archivo de corrida JSON")
@click.option("--out", "-o", type=click.Path(file_okay=False), help="Directorio del reporte (por defecto --in)")
def rank(in_dir, weights, aggregate, config_path, out):
    """Recalcula el ranking ponderado a partir de runs.jsonl."""
    ranking_section = (load_run_config(Path(config_path)) if config_path else validate_run_config({}))["ranking"]
    records = load_records(Path(in_dir))
    weights = weights or ranking_section.get("weights")
    if weights is not None:
        weights = RankingWeights.from_value(weights)
    else:
        weights = default_weights(bool(records) and all(r.noisy for r in records))
    aggregate_mode = aggregate or ranking_section.get("aggregate", AGGREGATE_MEAN)
    if aggregate_mode not in AGGREGATE_MODES:
        raise ConfigurationError(f"Agregación desconocida '{aggregate_mode}'")

    if not records:
        console.print(f"[yellow]No hay corridas en {in_dir}[/yellow]")
    report_rankings(records, weights, aggregate_mode, Path(out or in_dir))
    console.print(f"[green]✓ Ranking escrito en[/green] {Path(out or in_dir).absolute()}")


@cli.command()
@click.option("--check", "checks", multiple=True, help="Chequeo específico (repetible)")
def validate(checks):
    """Ejecuta la suite de oráculos y propiedades."""
    unknown = sorted(set(checks) - set(CHECKS))
    if unknown:
        raise ConfigurationError(f"Chequeos desconocidos: {unknown}. Válidos: {', '.join(CHECKS)}")
    results = run_validation(list(checks) or None)
    table = Table(title="Validación")
    table.add_column("Chequeo", style="cyan")
    table.add_column("Resultado")
    table.add_column("Detalle")
    table.add_column("s", justify="right")
    for result in results:
        status = "[green]OK[/green]" if result.passed else "[red]FALLA[/red]"
        table.add_row(result.name, status, result.detail, f"{result.seconds:.2f}")
    console.print(table)
    failed = [r.name for r in results if not r.passed]
    if failed:
        raise QasError(f"Chequeos fallidos: {', '.join(failed)}")


@cli.command("list")
def list_ids():
    """Lista los ids de tareas y agentes."""
    table = Table(title="Tareas")
    table.add_column("Id", style="cyan")
    for task_id in list_task_ids():
        table.add_row(task_id)
    console.print(table)

    table = Table(title="Agentes")
    table.add_column("Id", style="cyan")
    table.add_column("Tipo", style="magenta")
    for algorithm in Algorithm:
        table.add_row(algorithm.value, "valor" if algorithm.value_based else "política")
    console.print(table)


@cli.command()
@click.option("--task", "-t", required=True, help="Id de tarea parametrizada")
@click.option("--layers", default="2,3,4", help="Capas del HEA separadas por coma")
@click.option("--budget", type=int, help="Evaluaciones del optimizador")
@click.option("--seed", type=int, default=0, help="Semilla de los ángulos iniciales")
@click.option("--noisy", is_flag=True, help="Usar el preset ruidoso")
def baseline(task, layers, budget, seed, noisy):
    """Optimiza el ansatz eficiente en hardware como referencia."""
    try:
        layer_values = [int(v) for v in layers.split(",") if v.strip()]
    except ValueError:
        raise ConfigurationError(f"--layers inválido: '{layers}'") from None
    spec = build_task(task, NoiseConfig.noisy_preset() if noisy else None)

    table = Table(title=f"HEA sobre {task}")
    for column in ("Capas", "Costo", "Error", "G", "D", "Evals", "Train", "Test"):
        table.add_column(column, justify="right")
    for n_layers in layer_values:
        result = evaluate_baseline(spec, n_layers, budget, seed)
        table.add_row(
            str(result.layers),
            f"{result.cost:.4g}",
            f"{result.error:.3g}",
            str(result.gate_count),
            str(result.depth),
            str(result.evals_used),
            "-" if result.train_accuracy is None else f"{result.train_accuracy:.3f}",
            "-" if result.test_accuracy is None else f"{result.test_accuracy:.3f}",
        )
    console.print(table)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Punto de entrada con códigos de salida.

    Returns:
        0 éxito, 1 error de uso o configuración, 2 fallo en ejecución
    """
    try:
        cli.main(args=list(argv) if argv is not None else None, prog_name="cli.py", standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return EXIT_CONFIG
    except click.Abort:
        console.print("[yellow]Cancelado[/yellow]")
        return EXIT_CONFIG
    except (ConfigurationError, HamiltonianLoadError) as e:
        console.print(f"[red]Error de configuración: {e}[/red]")
        return EXIT_CONFIG
    except (QasError, OSError) as e:
        console.print(f"[red]Error: {e}[/red]")
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
