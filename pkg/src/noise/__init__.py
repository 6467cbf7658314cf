"""Circuit-level Pauli noise and Monte Carlo trials."""

from src.noise.model import ErrorModel, Preset, sample_channel
from src.noise.trial import (
    CompiledCircuit,
    TrialBatch,
    TrialState,
    compile_circuit,
    compile_events,
    is_noiseless,
    run_trial,
    simulate,
    sweep,
)

__all__ = [
    "CompiledCircuit",
    "ErrorModel",
    "Preset",
    "TrialBatch",
    "TrialState",
    "compile_circuit",
    "compile_events",
    "is_noiseless",
    "run_trial",
    "sample_channel",
    "simulate",
    "sweep",
]
