"""
Tests de Hamiltonianos, estados objetivo, dataset VQC y registro de tareas.
"""
import json
import math

import numpy as np
import pytest

from src.problems import (
    PauliHamiltonian,
    TaskKind,
    build_task,
    dump_hamiltonian,
    encode_features,
    encoded_states,
    generate_vqc_dataset,
    ghz_target,
    label_for,
    list_task_ids,
    load_hamiltonian,
    parse_hamiltonian,
    random_mixed_state,
)
from src.problems.hamiltonian import pauli_string_matrix
from src.problems.tasks import BUNDLED_HAMILTONIAN_DIR, CHEMICAL_ACCURACY
from src.qsim import PAULI_MATRICES, Statevector, expectation, run_statevector
from src.utils.errors import ConfigurationError, HamiltonianLoadError

from .conftest import synthetic_hamiltonian


@pytest.mark.parametrize("label", ["XYZ", "ZIX", "YYI", "IIZ"])
def test_pauli_string_matches_kronecker(label):
    expected = np.array([[1.0]], dtype=complex)
    for char in label:
        expected = np.kron(expected, PAULI_MATRICES[char])
    assert np.allclose(pauli_string_matrix(label, 0.7), 0.7 * expected)


def test_ground_energy_computed_exactly(two_qubit_zz):
    assert two_qubit_zz.ground_energy == pytest.approx(-math.sqrt(1.25), abs=1e-12)


def test_expectation_on_basis_state(two_qubit_zz):
    # |00>: <ZZ> = 1, <X0> = 0
    assert expectation(Statevector.zero(2), two_qubit_zz) == pytest.approx(1.0)


def test_bundled_h2_hamiltonian():
    hamiltonian = load_hamiltonian(BUNDLED_HAMILTONIAN_DIR / "h2_jw_4q.json")
    assert hamiltonian.n_qubits == 4
    assert len(hamiltonian.terms) == 15
    assert hamiltonian.ground_energy == pytest.approx(-1.137, abs=2e-3)


def test_parse_rejects_malformed():
    with pytest.raises(HamiltonianLoadError):
        parse_hamiltonian({"n_qubits": 2, "terms": [[1.0, "ZZZ"]]})
    with pytest.raises(HamiltonianLoadError):
        parse_hamiltonian({"n_qubits": 2, "terms": [[1.0, "ZA"]]})
    with pytest.raises(HamiltonianLoadError):
        parse_hamiltonian({"n_qubits": 2, "terms": [["a", "ZZ"]]})
    with pytest.raises(HamiltonianLoadError):
        parse_hamiltonian({"n_qubits": 2})
    with pytest.raises(HamiltonianLoadError):
        parse_hamiltonian({"n_qubits": 2, "terms": [], "extra": 1})


def test_parse_checks_declared_ground_energy():
    with pytest.raises(HamiltonianLoadError):
        parse_hamiltonian({"n_qubits": 1, "terms": [[1.0, "Z"]], "ground_energy": -0.5})
    hamiltonian = parse_hamiltonian({"n_qubits": 1, "terms": [[1.0, "Z"]], "ground_energy": -1.0})
    assert hamiltonian.ground_energy == -1.0


def test_dump_and_load_round_trip(tmp_path, two_qubit_zz):
    path = tmp_path / "zz.json"
    dump_hamiltonian(two_qubit_zz, path)
    loaded = load_hamiltonian(path)
    assert loaded.terms == two_qubit_zz.terms
    assert loaded.ground_energy == pytest.approx(two_qubit_zz.ground_energy, abs=1e-12)


def test_load_missing_and_invalid_json(tmp_path):
    with pytest.raises(HamiltonianLoadError):
        load_hamiltonian(tmp_path / "nope.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(HamiltonianLoadError):
        load_hamiltonian(bad)


def test_random_mixed_state_is_valid_and_deterministic():
    rho = random_mixed_state(2, 4, seed=3)
    assert rho.is_valid()
    assert np.linalg.matrix_rank(rho.matrix, tol=1e-10) == 4
    assert np.array_equal(rho.matrix, random_mixed_state(2, 4, seed=3).matrix)
    with pytest.raises(ConfigurationError):
        random_mixed_state(2, 5, seed=0)


def test_ghz_target():
    target = ghz_target(3)
    assert target.probabilities()[0] == pytest.approx(0.5)
    assert target.probabilities()[7] == pytest.approx(0.5)
    with pytest.raises(ConfigurationError):
        ghz_target(1)


def test_circle_labels():
    assert label_for(np.array([0.5, 0.5])) == 0
    assert label_for(np.array([0.0, 0.0])) == 1


def test_vqc_dataset_balanced_and_deterministic():
    data = generate_vqc_dataset(seed=0)
    assert data.train_x.shape == (200, 2) and data.test_x.shape == (100, 2)
    assert data.train_y.sum() == 100 and data.test_y.sum() == 50
    assert all(label_for(x) == y for x, y in zip(data.train_x, data.train_y))
    again = generate_vqc_dataset(seed=0)
    assert np.array_equal(data.train_x, again.train_x)
    with pytest.raises(ConfigurationError):
        generate_vqc_dataset(seed=0, n_train=5)


def test_encoded_states_match_simulated_prefix(rng):
    points = rng.uniform(size=(6, 2))
    batch = encoded_states(points, 3)
    for point, amplitudes in zip(points, batch):
        simulated = run_statevector(encode_features(point, 3), 3)
        assert np.allclose(amplitudes, simulated.amplitudes, atol=1e-12)


def test_task_registry():
    ids = list_task_ids()
    for expected in ("vqe-h2", "vqe-beh2", "vqe-h2o", "vqsd-2q", "vqsd-2q-4", "vqc-3q", "ghz-3q"):
        assert expected in ids

    h2 = build_task("vqe-h2")
    assert (h2.kind, h2.n_qubits, h2.d_max, h2.zeta) == (TaskKind.VQE, 4, 40, CHEMICAL_ACCURACY)
    assert h2.e_min == pytest.approx(h2.payload.ground_energy)

    vqsd = build_task("vqsd-2q")
    assert (vqsd.kind, vqsd.n_qubits, vqsd.d_max, vqsd.zeta) == (TaskKind.VQSD, 2, 40, 5e-2)
    assert np.array_equal(vqsd.payload.matrix, build_task("vqsd-2q-0").payload.matrix)

    ghz = build_task("ghz-3q")
    assert ghz.kind is TaskKind.STATE_PREP and not ghz.kind.parameterized
    assert ghz.e_min == 0.0


def test_unknown_task_lists_valid_ids():
    with pytest.raises(ConfigurationError, match="vqe-h2"):
        build_task("vqe-lih")
    with pytest.raises(ConfigurationError):
        build_task("vqsd-2q-9")


def test_missing_molecule_file_reports_path(tmp_path):
    with pytest.raises(HamiltonianLoadError, match="beh2_jw_6q.json"):
        build_task("vqe-beh2", hamiltonian_dir=tmp_path)


def test_molecule_from_configured_directory(tmp_path):
    hamiltonian = synthetic_hamiltonian(6, seed=1)
    with open(tmp_path / "beh2_jw_6q.json", "w") as f:
        json.dump(hamiltonian.to_dict(), f)
    task = build_task("vqe-beh2", hamiltonian_dir=tmp_path)
    assert task.n_qubits == 6 and task.d_max == 70 and task.network_layers == 4


def test_task_overrides():
    task = build_task("ghz-3q").with_overrides(d_max=12)
    assert task.d_max == 12
    with pytest.raises(ConfigurationError):
        build_task("ghz-3q").with_overrides(kind="VQE")


def test_hamiltonian_scaled(two_qubit_zz):
    doubled = two_qubit_zz.scaled(2.0)
    assert isinstance(doubled, PauliHamiltonian)
    assert doubled.ground_energy == pytest.approx(2 * two_qubit_zz.ground_energy)
