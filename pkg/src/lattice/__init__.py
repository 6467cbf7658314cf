"""Lattice generation, stabilizer reconfiguration and encodability."""

from src.lattice.encodability import Encodability, encodability_check, stabilizer_graph
from src.lattice.io import (
    lattice_from_dict,
    lattice_to_dict,
    layout_from_dict,
    layout_to_dict,
    load_lattice,
    save_lattice,
)
from src.lattice.layout import MergePolicy, StabilizerLayout, StabilizerSpec, reconfigure
from src.lattice.model import Lattice, Role, SingleFault, Status, apply_yield, generate_perfect, single_fault_lattice

__all__ = [
    "Encodability",
    "Lattice",
    "MergePolicy",
    "Role",
    "SingleFault",
    "StabilizerLayout",
    "StabilizerSpec",
    "Status",
    "apply_yield",
    "encodability_check",
    "generate_perfect",
    "lattice_from_dict",
    "lattice_to_dict",
    "layout_from_dict",
    "layout_to_dict",
    "load_lattice",
    "reconfigure",
    "save_lattice",
    "single_fault_lattice",
    "stabilizer_graph",
]
