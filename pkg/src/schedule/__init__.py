"""Asynchronous whole-circuit scheduling and cycle statistics."""

from src.schedule.cycles import correction_boundaries, cycle_of, error_correction_cycle, mean_correction_cycle
from src.schedule.io import load_whole_circuit, save_whole_circuit, whole_circuit_from_dict, whole_circuit_to_dict
from src.schedule.replay import measured_operator, no_double_booking, verify_whole_circuit
from src.schedule.scheduler import (
    Instance,
    ScheduledEvent,
    WholeCircuit,
    default_horizon,
    priority_order,
    schedule,
)

__all__ = [
    "Instance",
    "ScheduledEvent",
    "WholeCircuit",
    "correction_boundaries",
    "cycle_of",
    "default_horizon",
    "error_correction_cycle",
    "load_whole_circuit",
    "mean_correction_cycle",
    "measured_operator",
    "no_double_booking",
    "priority_order",
    "save_whole_circuit",
    "schedule",
    "verify_whole_circuit",
    "whole_circuit_from_dict",
    "whole_circuit_to_dict",
]
