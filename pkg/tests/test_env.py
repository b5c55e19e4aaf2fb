"""
Tests del entorno: acciones, máscara, codificación, recompensas, costos y currículo.
"""
import math

import numpy as np
import pytest

from src.bench.validation import (
    check_mask_soundness,
    diagonalizing_unitary,
    is_illegal,
    moment_layers,
    random_circuit,
)
from src.env import (
    ActionSpace,
    CostEvaluator,
    CurriculumTracker,
    QasEnvironment,
    cost_reward,
    decode_observation,
    encode_observation,
    evaluate_baseline,
    fidelity_reward,
    hardware_efficient_ansatz,
    observation_size,
    vqsd_cost,
)
from src.env.encoding import cost_feature
from src.optimize import COBYLA, NELDER_MEAD
from src.problems import build_task, random_mixed_state, vqe_task
from src.qsim import CircuitProgram, Gate, GateKind
from src.utils.errors import ConfigurationError, ContractViolation


def test_action_space_layout():
    space = ActionSpace(3, parameterized=True)
    assert space.size == 3 * 3 + 6
    assert space.decode(0).kind is GateKind.RX and space.decode(0).qubits == (0,)
    assert space.decode(4).kind is GateKind.RY and space.decode(4).qubits == (1,)
    assert space.decode(9).qubits == (0, 1)
    assert space.decode(space.size - 1).qubits == (2, 1)
    for index in range(space.size):
        action = space.decode(index)
        assert space.encode(action.kind, action.qubits) == index

    fixed = ActionSpace(3, parameterized=False)
    assert fixed.size == 5 * 3 + 6
    with pytest.raises(ConfigurationError):
        fixed.encode(GateKind.RX, (0,))
    with pytest.raises(ConfigurationError):
        fixed.decode(fixed.size)


def test_mask_matches_brute_force_predicates():
    passed, detail = check_mask_soundness()
    assert passed, detail


def test_mask_on_three_qubits():
    space = ActionSpace(3, parameterized=True)
    program = CircuitProgram(3, [Gate(GateKind.RX, (0,)), Gate(GateKind.CX, (1, 2))])
    mask = space.legal_mask(program)
    assert not mask[space.encode(GateKind.RX, (0,))]
    assert mask[space.encode(GateKind.RY, (0,))]
    assert not mask[space.encode(GateKind.CX, (1, 2))]
    assert mask[space.encode(GateKind.CX, (2, 1))]
    for index in range(space.size):
        action = space.decode(index)
        assert mask[index] != is_illegal(program.gates, action.kind, action.qubits)


def test_moment_layers_rebuild_circuit_moments(rng):
    for _ in range(50):
        program = random_circuit(rng, 3, 8)
        layers = moment_layers(program.gates)
        assert len(layers) == program.depth
        for gate, moment in zip(program.gates, program.moments):
            assert all(layers[moment][q] == gate for q in gate.qubits)


def test_cx_after_rotation_on_target_is_legal():
    space = ActionSpace(2, parameterized=True)
    program = CircuitProgram(2, [Gate(GateKind.CX, (0, 1)), Gate(GateKind.RX, (1,), 0.2)])
    mask = space.legal_mask(program)
    assert mask[space.encode(GateKind.CX, (0, 1))]
    assert not is_illegal(program.gates, GateKind.CX, (0, 1))
    assert not mask[space.encode(GateKind.RX, (1,))]
    assert is_illegal(program.gates, GateKind.RX, (1,))


@pytest.mark.parametrize(
    "prev, cost, t, expected",
    [
        (1.0, 0.8, 1, (0.2, False, False)),
        (0.5, 0.9, 1, (-0.8, False, False)),
        (0.5, 2.0, 1, (-1.0, False, False)),
        (0.5, 0.005, 10, (5.0, True, True)),
        (0.5, 0.4, 10, (-5.0, True, False)),
    ],
)
def test_cost_reward_table(prev, cost, t, expected):
    reward, done, success = cost_reward(prev, cost, 0.0, 0.01, t, 10)
    assert reward == pytest.approx(expected[0], abs=1e-12)
    assert (done, success) == expected[1:]


def test_fidelity_reward_threshold():
    assert fidelity_reward(0.98) == (5.0, True)
    assert fidelity_reward(0.97) == (0.97, False)
    assert fidelity_reward(0.99, r_big=10.0) == (10.0, True)


def test_cost_feature_clipped():
    assert cost_feature(0.5, 0.0, 1.0) == pytest.approx(0.5)
    assert cost_feature(2.0, 0.0, 1.0) == 1.0
    assert cost_feature(-1.0, 0.0, 1.0) == 0.0
    assert cost_feature(0.3, 0.0, 0.0) == 0.0


def test_observation_encoding_round_trip():
    program = CircuitProgram(
        3,
        [Gate(GateKind.H, (0,)), Gate(GateKind.CX, (0, 1)), Gate(GateKind.T, (2,)), Gate(GateKind.CX, (1, 2))],
    )
    observation = encode_observation(program, 10, 0.4, parameterized=False)
    assert observation.structure.shape == (10, 6, 3)
    assert observation.flat().shape == (observation_size(3, 10),)
    assert observation.flat()[-1] == pytest.approx(0.4)
    decoded = decode_observation(observation, parameterized=False)
    assert sorted(map(str, decoded.gates)) == sorted(map(str, program.gates))
    assert decoded.depth == program.depth

    rotations = CircuitProgram(2, [Gate(GateKind.RY, (0,), 1.2), Gate(GateKind.RZ, (1,), -0.3)])
    decoded = decode_observation(encode_observation(rotations, 4, 0.0))
    assert [g.kind for g in decoded.gates] == [GateKind.RY, GateKind.RZ]


def test_encoding_rejects_moment_beyond_d_max():
    program = CircuitProgram(2, [Gate(GateKind.H, (0,)), Gate(GateKind.X, (0,))])
    with pytest.raises(ContractViolation):
        encode_observation(program, 1, 0.0, parameterized=False)


def test_ghz_episode_reaches_success():
    env = QasEnvironment(build_task("ghz-3q"), seed=0)
    observation = env.reset()
    assert observation.flat().shape == (env.observation_size,)
    assert env.observation_size == 10 * 6 * 3 + 1
    assert not observation.structure.any()

    space = env.action_space
    first = env.step(space.encode(GateKind.H, (0,)))
    assert first.reward == pytest.approx(0.25)
    assert not first.done

    with pytest.raises(ContractViolation):
        env.step(space.encode(GateKind.H, (0,)))

    env.step(space.encode(GateKind.CX, (0, 1)))
    last = env.step(space.encode(GateKind.CX, (1, 2)))
    assert last.done and last.info.success
    assert last.reward == 5.0
    assert last.info.gate_count == 3 and last.info.depth == 3
    assert last.info.error == pytest.approx(0.0, abs=1e-12)

    with pytest.raises(ContractViolation):
        env.step(0)


def test_state_prep_times_out():
    task = build_task("ghz-3q").with_overrides(d_max=2)
    env = QasEnvironment(task)
    env.reset()
    env.step(env.action_space.encode(GateKind.X, (2,)))
    outcome = env.step(env.action_space.encode(GateKind.X, (1,)))
    assert outcome.done and not outcome.info.success
    assert outcome.reward == pytest.approx(0.0)


def test_vqe_single_rotation_reaches_ground(two_qubit_zz):
    task = vqe_task("zz", two_qubit_zz, d_max=5, optimizer_budget=60, network_layers=1)
    env = QasEnvironment(task, seed=3)
    env.reset()
    assert env.initial_cost == pytest.approx(1.0)
    outcome = env.step(env.action_space.encode(GateKind.RY, (0,)))
    assert outcome.done and outcome.info.success
    assert outcome.reward == 5.0
    assert outcome.info.cost == pytest.approx(-math.sqrt(1.25), abs=1.6e-3)
    assert 1 < outcome.info.optimizer_evals <= 60
    assert env.program.parameter_count == 1


def test_vqe_step_without_success_is_bounded(two_qubit_zz):
    task = vqe_task("zz", two_qubit_zz, d_max=5, optimizer_budget=30, network_layers=1)
    env = QasEnvironment(task, seed=0)
    env.reset()
    # RX en q1 solo llega a <ZZ> = -1, lejos de E_min
    outcome = env.step(env.action_space.encode(GateKind.RX, (1,)))
    assert -1.0 <= outcome.reward <= 5.0
    assert outcome.info.cost <= 1.0 + 1e-12


def test_curriculum_decays_to_final():
    tracker = CurriculumTracker(zeta_final=0.0125, zeta_initial=0.05, decay=0.5, enabled=True)
    assert tracker.zeta == 0.05
    assert tracker.update(True) == pytest.approx(0.025)
    assert tracker.update(False) == pytest.approx(0.025)
    assert tracker.update(True) == pytest.approx(0.0125)
    assert tracker.update(True) == pytest.approx(0.0125)
    assert tracker.successes == 3

    disabled = CurriculumTracker(zeta_final=0.0125, zeta_initial=0.05)
    assert disabled.zeta == 0.0125
    assert disabled.update(True) == 0.0125
    with pytest.raises(ConfigurationError):
        CurriculumTracker(zeta_final=0.0)


def test_vqsd_cost_zero_for_diagonalizing_unitary():
    for seed in range(5):
        rho = random_mixed_state(2, 4, seed=seed)
        assert vqsd_cost(rho, diagonalizing_unitary(rho.matrix)) <= 1e-9
        assert vqsd_cost(rho, []) > 0.0


def test_cost_evaluator_conventions():
    ghz = CostEvaluator(build_task("ghz-3q"))
    assert ghz.cost(CircuitProgram(3)) == pytest.approx(0.5)
    vqsd = CostEvaluator(build_task("vqsd-2q"))
    assert vqsd.error(0.3) == 0.3
    vqc = build_task("vqc-3q")
    evaluator = CostEvaluator(vqc)
    empty = CircuitProgram(3)
    # sin compuertas P(q0 = 1) = sin²(x1·π/2)
    train_x, train_y = vqc.payload.split("train")
    y = np.sin(train_x[:, 0] * math.pi / 2) ** 2
    assert evaluator.cost(empty) == pytest.approx(np.sum((y - train_y) ** 2) / (2 * len(train_y)))
    train_acc, test_acc = evaluator.accuracies(empty)
    assert 0.0 <= train_acc <= 1.0
    assert evaluator.error(evaluator.cost(empty), empty) == pytest.approx(1.0 - test_acc)


def test_hardware_efficient_ansatz_shape():
    program = hardware_efficient_ansatz(3, 2)
    assert len(program) == 10
    assert program.parameter_count == 6
    assert program.cx_count == 4
    with pytest.raises(ConfigurationError):
        hardware_efficient_ansatz(3, 0)


def test_baseline_on_classifier():
    result = evaluate_baseline(build_task("vqc-3q"), layers=2, budget=30, seed=0)
    assert result.layers == 2 and result.gate_count == 10
    assert 1 <= result.evals_used <= 30
    assert 0.0 <= result.test_accuracy <= 1.0
    assert result.error == pytest.approx(1.0 - result.test_accuracy)
    with pytest.raises(ConfigurationError):
        evaluate_baseline(build_task("ghz-3q"), layers=1)


def test_step_reports_optimizer_actually_used(two_qubit_zz, failing_cobyla):
    task = vqe_task("zz", two_qubit_zz, d_max=5, optimizer_budget=40, network_layers=1)
    env = QasEnvironment(task, seed=0, optimizer_method=COBYLA)
    env.reset()
    outcome = env.step(env.action_space.encode(GateKind.CX, (0, 1)))
    assert outcome.info.optimizer_method is None
    outcome = env.step(env.action_space.encode(GateKind.RY, (0,)))
    assert outcome.info.optimizer_method == NELDER_MEAD
