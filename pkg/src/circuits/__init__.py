"""Per-stabilizer syndrome-extraction circuits and their metrics."""

from src.circuits.compose import GateEvent, StabilizerCircuit, Tag, compose_all, compose_stabilizer_circuit
from src.circuits.io import circuit_from_dict, circuit_to_dict, load_circuits, save_circuits
from src.circuits.metrics import circuit_kdq, circuit_kq
from src.circuits.replay import data_returns_home, replay_stabilizer_circuit, verify_circuit
from src.circuits.tsp import brute_force_open_path, held_karp_open_path, solve_open_path

__all__ = [
    "GateEvent",
    "StabilizerCircuit",
    "Tag",
    "brute_force_open_path",
    "circuit_from_dict",
    "circuit_kdq",
    "circuit_kq",
    "circuit_to_dict",
    "compose_all",
    "compose_stabilizer_circuit",
    "data_returns_home",
    "held_karp_open_path",
    "load_circuits",
    "replay_stabilizer_circuit",
    "save_circuits",
    "solve_open_path",
    "verify_circuit",
]
