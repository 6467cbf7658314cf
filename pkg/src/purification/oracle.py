"""Exact purification statistics for pairs without gate, memory or measurement errors."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from src.errors import InvalidParameterError
from src.purification.pairs import RawPairModel

# Discrepancy index -> (x bit, z bit), in the order I, X, Y, Z.
_XZ = ((0, 0), (1, 0), (1, 1), (0, 1))
_INDEX = {xz: i for i, xz in enumerate(_XZ)}


@dataclass
class OracleResult:
    fidelity: float
    success: list[float] = field(default_factory=list)
    distribution: np.ndarray = field(default_factory=lambda: np.zeros(4))

    @property
    def inefficiency(self) -> float:
        """Raw pairs consumed per delivered pair."""
        return float(2 ** len(self.success) / np.prod(self.success)) if self.success else 1.0


def purification_step(dist: np.ndarray) -> tuple[np.ndarray, float]:
    """One bilateral-CNOT round on two independent pairs, followed by the H toggle.

    The round keeps the first pair when the X parts agree; the kept pair
    picks up the second pair's Z part.
    """
    out = np.zeros(4)
    for i, (x1, z1) in enumerate(_XZ):
        for j, (x2, z2) in enumerate(_XZ):
            if x1 != x2:
                continue
            # H swaps the roles of X and Z on the survivor
            out[_INDEX[(z1 ^ z2, x1)]] += dist[i] * dist[j]
    success = float(out.sum())
    return out / success, success


def exact_purification_oracle(model: RawPairModel, rounds: int) -> OracleResult:
    """Fidelity, per-round success probabilities and final discrepancy distribution after ``rounds``."""
    if rounds < 0:
        raise InvalidParameterError(f"rounds must be >= 0, got {rounds}")
    dist = model.probabilities
    result = OracleResult(fidelity=float(dist[0]), distribution=dist.copy())
    for _ in range(rounds):
        dist, success = purification_step(dist)
        result.success.append(success)
    result.fidelity = float(dist[0])
    result.distribution = dist
    return result


def closed_form_fidelity(fidelity: float) -> float:
    """Approximate fidelity after two rounds on Werner pairs, F^2 / (F^2 + (1 - F)^2)."""
    if not 0.0 <= fidelity <= 1.0:
        raise InvalidParameterError(f"fidelity must be in [0, 1], got {fidelity}")
    return fidelity**2 / (fidelity**2 + (1 - fidelity) ** 2)


def success_probability(fidelity: float) -> float:
    """First-round success probability on Werner pairs."""
    rest = (1 - fidelity) / 3
    return fidelity**2 + 2 * fidelity * rest + 5 * rest**2
