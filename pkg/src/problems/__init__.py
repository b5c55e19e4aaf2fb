"""
Tareas del benchmark: Hamiltonianos, estados objetivo y datasets.
"""
from .datasets import (
    ClassificationDataset,
    encode_features,
    encoded_states,
    generate_vqc_dataset,
    label_for,
)
from .hamiltonian import PauliHamiltonian, dump_hamiltonian, load_hamiltonian, parse_hamiltonian
from .targets import ghz_target, random_mixed_state
from .tasks import TaskKind, TaskSpec, build_task, list_task_ids, vqe_task

__all__ = [
    "ClassificationDataset",
    "PauliHamiltonian",
    "TaskKind",
    "TaskSpec",
    "build_task",
    "dump_hamiltonian",
    "encode_features",
    "encoded_states",
    "generate_vqc_dataset",
    "ghz_target",
    "label_for",
    "list_task_ids",
    "load_hamiltonian",
    "parse_hamiltonian",
    "random_mixed_state",
    "vqe_task",
]
