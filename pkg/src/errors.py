"""Error types raised across the workbench."""

from __future__ import annotations


class DefectQError(Exception):
    """Base class for every error raised on purpose by this package."""


class DimensionMismatchError(DefectQError, ValueError):
    """Operands act on different numbers of qubits."""


class InvalidObservableError(DefectQError, ValueError):
    """Observable is not Hermitian (phase must be +1 or -1)."""


class InvalidGateError(DefectQError, ValueError):
    """Gate kind or qubit arity is not supported."""


class InvalidParameterError(DefectQError, ValueError):
    """A numeric parameter is outside its allowed range."""


class ConfigError(DefectQError, ValueError):
    """Experiment configuration is malformed."""


class UnsupportedDistanceError(DefectQError, ValueError):
    """Requested code distance has no reference construction."""


class UncoverableStabilizerError(DefectQError, RuntimeError):
    """No set of working ancillae reaches every data member of a stabilizer."""


class HorizonError(DefectQError, RuntimeError):
    """The time horizon is too short to measure every stabilizer once."""


class InsufficientHorizonError(HorizonError):
    """A stabilizer was measured fewer than twice, so no cycle is defined."""


class DisconnectedEventError(DefectQError, RuntimeError):
    """A detection event has no path to any partner or boundary."""


class RetryCapError(DefectQError, RuntimeError):
    """Purification gave up after the configured number of batches."""


class AlgebraTraceError(DefectQError, RuntimeError):
    """A symbolic verification trace did not reach the expected tableau."""
