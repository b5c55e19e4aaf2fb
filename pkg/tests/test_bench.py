"""
Tests del benchmark: ranking, reportes, persistencia, configuración y matriz de corridas.
"""
import csv
import json

import pytest

from src.agents import EpisodeResult
from src.bench import (
    NOISELESS_WEIGHTS,
    NOISY_WEIGHTS,
    RankingWeights,
    RunRecord,
    RunStore,
    aggregate,
    build_settings,
    composite_score,
    default_weights,
    derive_seed,
    emit_report,
    load_records,
    normalize_metric,
    rank_records,
    run_matrix,
    run_validation,
    select_best_episode,
)
from src.bench.ranking import AgentSummary
from src.bench.report import RANKING_COLUMNS, read_ranking
from src.bench.runner import meets_task_threshold
from src.bench.settings import validate_run_config
from src.bench.validation import RANKING_FIXTURE_SCORES, fixture_summaries
from src.optimize import NELDER_MEAD
from src.problems import vqe_task
from src.problems.tasks import VQSD_ZETA
from src.qsim import CircuitProgram, Gate, GateKind
from src.utils.errors import ConfigurationError, DataError, QasError

from .conftest import synthetic_hamiltonian

TINY_AGENT = {
    "hidden_width": 16,
    "hidden_layers": 1,
    "batch_size": 4,
    "target_sync": 5,
    "replay_capacity": 64,
    "rollout_length": 8,
    "minibatch_size": 4,
    "ppo_epochs": 1,
    "epsilon_decay": 0.9,
}


def make_record(task="ghz-3q", agent="dqn", seed=0, error=0.1, gates=5, depth=3, t=1.0, noisy=False):
    program = CircuitProgram(3, [Gate(GateKind.H, (0,))])
    return RunRecord(
        task=task,
        agent=agent,
        seed=seed,
        episodes_run=10,
        success=error < 0.02,
        error=error,
        gates=gates,
        depth=depth,
        time_per_episode=t,
        best_circuit=program,
        noisy=noisy,
    )


def tiny_settings(out_dir, **cli):
    sections = validate_run_config({"agent": dict(TINY_AGENT)})
    options = dict(task=["ghz-3q"], agent=["dqn"], seeds=3, episodes=2, out=str(out_dir))
    options.update(cli)
    return build_settings(sections, **options)


@pytest.mark.parametrize(
    "values, expected",
    [([1.0, 2.0, 3.0], [0.0, 0.5, 1.0]), ([7.0, 7.0, 7.0], [0.0, 0.0, 0.0]), ([5.0], [0.0])],
)
def test_normalize_metric(values, expected):
    assert normalize_metric(values).tolist() == expected


def test_normalize_metric_rejects_bad_input():
    with pytest.raises(DataError):
        normalize_metric([])
    with pytest.raises(DataError, match="b"):
        normalize_metric([1.0, float("nan")], labels=["a", "b"])


def test_composite_score_fixture():
    rows = sorted(composite_score(fixture_summaries(), NOISELESS_WEIGHTS), key=lambda r: r.agent)
    assert [r.S for r in rows] == pytest.approx(RANKING_FIXTURE_SCORES, abs=1e-12)
    assert [r.rank for r in rows] == [1, 2, 3]


def test_dominant_agent_scores_zero():
    summaries = [
        AgentSummary("t", "good", 0.01, 5, 3, 1.0, 1, 1.0),
        AgentSummary("t", "bad", 0.5, 9, 7, 2.0, 1, 0.0),
    ]
    rows = composite_score(summaries, RankingWeights(0.6, 0.1, 0.3, 0.0))
    assert (rows[0].agent, rows[0].S, rows[0].rank) == ("good", 0.0, 1)
    assert rows[1].S == pytest.approx(1.0)


def test_ties_broken_by_error_then_agent():
    summaries = [
        AgentSummary("t", "b", 0.1, 5, 3, 1.0, 1, 0.0),
        AgentSummary("t", "a", 0.1, 5, 3, 1.0, 1, 0.0),
    ]
    assert [r.agent for r in composite_score(summaries, NOISELESS_WEIGHTS)] == ["a", "b"]


def test_weights_validation_and_parsing():
    with pytest.raises(ConfigurationError):
        RankingWeights.parse("0,0,0,0")
    with pytest.raises(ConfigurationError):
        RankingWeights.parse("0.5,0.5")
    with pytest.raises(ConfigurationError):
        RankingWeights.parse("0.5,x,0,0")
    with pytest.raises(ConfigurationError):
        RankingWeights(-0.1, 1.0, 0.0, 0.0)
    assert RankingWeights.from_value([0.6, 0.1, 0.3, 0.0]) == NOISY_WEIGHTS
    assert RankingWeights.from_value({"w_e": 1.0, "w_g": 0, "w_d": 0, "w_t": 0}).w_e == 1.0
    assert default_weights(True) == NOISY_WEIGHTS
    assert default_weights(False) == NOISELESS_WEIGHTS


def test_aggregate_mean_and_best():
    records = [
        make_record(seed=0, error=0.1, gates=4, depth=2, t=1.0),
        make_record(seed=1, error=0.01, gates=8, depth=6, t=3.0),
    ]
    (mean,) = aggregate(records, "mean")
    assert (mean.error, mean.gates, mean.depth, mean.time_per_episode) == pytest.approx((0.055, 6, 4, 2.0))
    assert mean.n_seeds == 2 and mean.success_rate == 0.5
    (best,) = aggregate(records, "best")
    assert (best.error, best.gates, best.depth) == (0.01, 8, 6)
    with pytest.raises(ConfigurationError):
        aggregate(records, "median")


def test_aggregate_rejects_non_finite_metric():
    with pytest.raises(DataError):
        aggregate([make_record(error=float("inf"))])


def test_rank_records_groups_by_task():
    records = [
        make_record(task="ghz-3q", agent="dqn", error=0.01),
        make_record(task="ghz-3q", agent="ppo", error=0.3),
        make_record(task="vqc-3q", agent="dqn", error=0.2),
    ]
    rankings = rank_records(records, NOISELESS_WEIGHTS)
    assert list(rankings) == ["ghz-3q", "vqc-3q"]
    assert [r.agent for r in rankings["ghz-3q"]] == ["dqn", "ppo"]
    assert rankings["vqc-3q"][0].S == 0.0


def test_select_best_episode_prefers_fewest_gates_among_successes():
    def episode(i, success, gates, depth, error):
        return EpisodeResult(i, 0.0, gates, success, error, error, gates, depth, 0, gates, 0, 0.1, CircuitProgram(3))

    results = [episode(0, False, 2, 2, 0.001), episode(1, True, 6, 4, 0.01), episode(2, True, 4, 4, 0.015)]
    assert select_best_episode(results).episode == 2
    assert select_best_episode([episode(0, False, 3, 2, 0.4), episode(1, False, 9, 9, 0.2)]).episode == 1
    assert select_best_episode([]) is None


def test_task_threshold_ignores_curriculum_zeta(two_qubit_zz):
    task = vqe_task("zz", two_qubit_zz, d_max=5, optimizer_budget=10, network_layers=1)
    e_min, zeta = task.e_min, task.zeta

    def episode(i, success, cost, gates):
        error = abs(cost - e_min)
        return EpisodeResult(i, 0.0, gates, success, cost, error, gates, gates, 0, gates, 0, 0.1, CircuitProgram(2))

    # éxito bajo un ζ de currículo 4 veces mayor, pero no bajo el ζ de la tarea
    loose = episode(0, True, e_min + 3 * zeta, 2)
    tight = episode(1, False, e_min + zeta / 2, 5)
    assert not meets_task_threshold(loose, task)
    assert meets_task_threshold(tight, task)
    assert select_best_episode([loose, tight]).episode == 0
    assert select_best_episode([loose, tight], lambda r: meets_task_threshold(r, task)).episode == 1


def test_record_round_trip_through_store(tmp_path):
    store = RunStore(tmp_path)
    record = make_record(seed=4, error=0.005)
    store.append(record, "abc")
    assert store.is_completed(record.key, "abc")
    assert not store.is_completed(record.key, "other")
    (loaded,) = load_records(tmp_path)
    assert loaded.to_dict() == record.to_dict()
    assert RunStore(tmp_path).is_completed(record.key, "abc")

    store.clear()
    assert load_records(tmp_path) == []


def test_bad_lines_raise_data_error(tmp_path):
    (tmp_path / "runs.jsonl").write_text("{not json}\n")
    with pytest.raises(DataError):
        load_records(tmp_path)
    (tmp_path / "runs.jsonl").write_text(json.dumps({"task": "x"}) + "\n")
    with pytest.raises(DataError):
        load_records(tmp_path)


def test_empty_report_has_headers(tmp_path):
    paths = emit_report([], {}, tmp_path, tasks=["ghz-3q"])
    assert (tmp_path / "runs.jsonl").read_text() == ""
    with open(tmp_path / "ranking_ghz-3q.csv") as f:
        assert f.read().strip() == ",".join(RANKING_COLUMNS)
    with open(tmp_path / "runtime_table.csv") as f:
        assert f.read().strip() == "agent,ghz-3q"
    assert len(paths) == 3


def test_report_files(tmp_path):
    records = [make_record(agent="dqn", seed=s, t=1.0 + s) for s in range(2)] + [make_record(agent="a2c", t=4.0)]
    emit_report(records, rank_records(records, NOISELESS_WEIGHTS), tmp_path)
    assert len((tmp_path / "runs.jsonl").read_text().splitlines()) == 3
    rows = read_ranking(tmp_path / "ranking_ghz-3q.csv")
    assert list(rows[0]) == RANKING_COLUMNS
    assert {row["agent"] for row in rows} == {"dqn", "a2c"}
    with open(tmp_path / "runtime_table.csv", newline="") as f:
        table = list(csv.reader(f))
    assert table[0] == ["agent", "ghz-3q"]
    assert dict((row[0], float(row[1])) for row in table[1:]) == {"a2c": 4.0, "dqn": 1.5}


def test_derive_seed():
    first = derive_seed("vqe-h2", "dqn", 0)
    assert first == derive_seed("vqe-h2", "dqn", 0)
    assert 0 <= first < 2**32
    assert len({derive_seed("vqe-h2", "dqn", s) for s in range(20)}) == 20
    assert first != derive_seed("vqe-h2", "ddqn", 0)


def test_settings_merge_and_validation(tmp_path):
    sections = validate_run_config(
        {"task": {"ids": ["ghz-3q"]}, "run": {"seeds": 5, "episodes": 7}, "agent": {"ids": ["ppo"], "lr": 0.01}}
    )
    settings = build_settings(sections, seeds=2, noisy=None, resume=None)
    assert settings.tasks == ["ghz-3q"]
    assert [a.value for a in settings.agents] == ["ppo"]
    assert (settings.seeds, settings.episodes) == (2, 7)
    assert settings.agent_config.lr == 0.01
    assert settings.weights == NOISELESS_WEIGHTS

    noisy = build_settings(sections, noisy=True)
    assert noisy.noise.enabled and noisy.noise.p1 == 0.001
    assert noisy.weights == NOISY_WEIGHTS

    assert len(build_settings(sections, agent=["all"]).agents) == 9
    with pytest.raises(ConfigurationError):
        validate_run_config({"agent": {"learning_rate": 1}})
    with pytest.raises(ConfigurationError):
        validate_run_config({"plots": {}})
    with pytest.raises(ConfigurationError):
        build_settings(None, task=["ghz-3q"])
    with pytest.raises(ConfigurationError):
        build_settings(None, task=["vqe-lih"], episodes=1)
    with pytest.raises(ConfigurationError):
        build_settings(None, task=["ghz-3q"], agent=["sac"], episodes=1)
    with pytest.raises(ConfigurationError):
        build_settings(None, task=["ghz-3q"], episodes=1, weights="0,0,0,0")


def test_run_matrix_writes_one_record_per_seed(tmp_path):
    settings = tiny_settings(tmp_path)
    completed = []
    records = run_matrix(settings, on_complete=completed.append)
    assert [r.key for r in records] == ["ghz-3q|dqn|0", "ghz-3q|dqn|1", "ghz-3q|dqn|2"]
    assert len(completed) == 3
    assert len({r.derived_seed for r in records}) == 3
    for record in records:
        assert record.episodes_run == 2
        assert record.gates == len(record.best_circuit)
        assert record.depth == record.best_circuit.depth
        assert 0.0 <= record.extras["success_rate"] <= 1.0
    assert len(load_records(tmp_path)) == 3


def test_resume_skips_completed_runs(tmp_path):
    first = run_matrix(tiny_settings(tmp_path, seeds=2))
    completed = []
    resumed = run_matrix(tiny_settings(tmp_path, seeds=3, resume=True), on_complete=completed.append)
    assert [r.key for r in completed] == ["ghz-3q|dqn|2"]
    assert [r.to_dict() for r in resumed[:2]] == [r.to_dict() for r in first]
    assert len(load_records(tmp_path)) == 3

    # sin --resume se reemplazan los resultados
    run_matrix(tiny_settings(tmp_path, seeds=1))
    assert len(load_records(tmp_path)) == 1


def test_parallel_matches_serial(tmp_path):
    serial = run_matrix(tiny_settings(tmp_path / "serial", agent=["dqn", "a2c"], seeds=2))
    parallel = run_matrix(tiny_settings(tmp_path / "parallel", agent=["dqn", "a2c"], seeds=2, parallel=2))

    def summary(records):
        return [(r.key, r.error, r.gates, r.depth, r.best_circuit.to_dict()) for r in records]

    assert summary(parallel) == summary(serial)


def test_missing_hamiltonian_fails_before_running(tmp_path):
    sections = validate_run_config({"task": {"hamiltonian_dir": str(tmp_path / "none")}})
    settings = build_settings(sections, task=["vqe-beh2"], agent=["dqn"], episodes=1, out=str(tmp_path / "out"))
    with pytest.raises(QasError):
        run_matrix(settings)
    assert load_records(tmp_path / "out") == []


def test_validation_suite_passes():
    results = run_validation()
    assert [r.name for r in results] == [
        "reward_table",
        "simulator_oracles",
        "mask_soundness",
        "ghz_oracle",
        "vqsd_oracle",
        "ranking_arithmetic",
    ]
    failed = [(r.name, r.detail) for r in results if not r.passed]
    assert failed == []


@pytest.mark.slow
@pytest.mark.parametrize("task_id, file_name, n_qubits", [("vqe-beh2", "beh2_jw_6q.json", 6), ("vqe-h2o", "h2o_jw_8q.json", 8)])
def test_synthetic_molecule_smoke(tmp_path, task_id, file_name, n_qubits):
    hamiltonian_dir = tmp_path / "hamiltonians"
    hamiltonian_dir.mkdir()
    with open(hamiltonian_dir / file_name, "w") as f:
        json.dump(synthetic_hamiltonian(n_qubits, seed=2).to_dict(), f)
    sections = validate_run_config(
        {
            "task": {"hamiltonian_dir": str(hamiltonian_dir), "d_max": 3, "optimizer_budget": 10},
            "agent": dict(TINY_AGENT),
        }
    )
    settings = build_settings(sections, task=[task_id], agent=["dqn"], seeds=1, episodes=1, out=str(tmp_path / "out"))
    (record,) = run_matrix(settings)
    assert 1 <= record.gates <= 3
    assert record.error >= 0.0


def small_vqsd_settings(out_dir, **cli):
    sections = validate_run_config({"task": {"d_max": 4, "optimizer_budget": 20}, "agent": dict(TINY_AGENT)})
    options = dict(task=["vqsd-2q"], agent=["dqn"], seeds=1, episodes=2, out=str(out_dir))
    options.update(cli)
    return build_settings(sections, **options)


def test_curriculum_run_judges_success_with_task_zeta(tmp_path):
    records = run_matrix(small_vqsd_settings(tmp_path, seeds=2, episodes=3, curriculum=True))
    for record in records:
        assert record.config["task"]["zeta"] == VQSD_ZETA
        assert record.success == (record.error <= VQSD_ZETA)
        assert record.success == (record.extras["success_rate"] > 0)


def test_record_keeps_fallback_optimizer(tmp_path, failing_cobyla):
    (record,) = run_matrix(small_vqsd_settings(tmp_path))
    assert record.optimizer == NELDER_MEAD
    assert load_records(tmp_path)[0].optimizer == NELDER_MEAD
