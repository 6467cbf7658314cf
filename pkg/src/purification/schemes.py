"""The purification schemes end to end: sources, rounds, encoding, judgment and ledgers."""

from __future__ import annotations

import csv
import itertools
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np
from tqdm import tqdm

from src.codes import CodeDef, get_code, physical_code
from src.errors import InvalidParameterError, RetryCapError
from src.noise import ErrorModel
from src.purification.ledger import (
    ResourceLedger,
    ops_ledger,
    recursive_ledger,
    round_zero_ledger,
)
from src.purification.pairs import (
    HOLD_STEPS,
    EncodedPairState,
    ErrorRates,
    RawPairModel,
    encode_half,
    judge,
    local_gate_ops,
    make_raw_pair,
    make_raw_pair_local_gates,
)
from src.purification.rounds import (
    RoundResult,
    encoded_round_ops,
    physical_round_ops,
    purify_encoded,
    purify_physical,
)
from src.utils.seeding import make_rng

logger = logging.getLogger(__name__)

CSV_HEADER = (
    "#purification",
    "X error rate",
    "Z error rate",
    "Merged error rate",
    "Phys Bell Pair Ineff",
    "KQ",
    "#single qubit gate",
    "#two qubit gate",
)


class Scheme(str, Enum):
    PHYSICAL = "physical"
    BEFORE = "before"
    AFTER = "after"
    AFTER_STRICT = "after_strict"

    @classmethod
    def parse(cls, value: Scheme | str) -> Scheme:
        try:
            return cls(str(value).replace("-", "_"))
        except ValueError:
            raise InvalidParameterError(f"unknown scheme {value!r}; choose from {[s.value for s in cls]}") from None


class Source(str, Enum):
    OPTICAL = "optical"
    LOCAL = "local"

    @classmethod
    def parse(cls, value: Source | str) -> Source:
        try:
            return cls(value)
        except ValueError:
            choices = [s.value for s in cls]
            raise InvalidParameterError(f"unknown pair source {value!r}; choose from {choices}") from None


@dataclass
class SchemeResult:
    scheme: str
    code_a: str
    code_b: str
    rounds: int
    p: float
    rates: ErrorRates
    ledger: ResourceLedger
    success: list[float] = field(default_factory=list)
    attempts: list[int] = field(default_factory=list)

    def csv_row(self) -> list[str]:
        return [
            str(self.rounds),
            f"{self.rates.x:.3e}",
            f"{self.rates.z:.3e}",
            f"{self.rates.merged:.3e}",
            f"{self.ledger.inefficiency:.4g}",
            f"{self.ledger.kq:.6g}",
            f"{self.ledger.single_qubit_gates:.6g}",
            f"{self.ledger.two_qubit_gates:.6g}",
        ]


class _Pipeline:
    """Builds pairs level by level; level ``r`` consumes two level ``r - 1`` pairs per attempt."""

    def __init__(
        self,
        scheme: Scheme,
        code_a: CodeDef,
        code_b: CodeDef,
        rounds: int,
        m: ErrorModel,
        source: Source,
        raw_model: RawPairModel,
        hold_steps: int,
        seed: int | None,
        max_batches: int,
    ):
        self.scheme = scheme
        self.code_a = code_a
        self.code_b = code_b
        self.rounds = rounds
        self.m = m
        self.source = source
        self.raw_model = raw_model
        self.hold_steps = hold_steps
        self.seed = seed
        self.max_batches = max_batches
        self.attempts = [0] * rounds
        self.successes = [0] * rounds
        self._draw = itertools.count()

    @property
    def encoded_rounds(self) -> bool:
        return self.scheme in (Scheme.AFTER, Scheme.AFTER_STRICT)

    def _rng(self) -> np.random.Generator:
        return make_rng(self.seed, next(self._draw))

    def _raw(self, count: int) -> EncodedPairState:
        if self.source is Source.LOCAL:
            return make_raw_pair_local_gates(self.m, count, self._rng(), self.hold_steps)
        return make_raw_pair(self.raw_model, count, self.m, self._rng(), self.hold_steps)

    def _encode(self, state: EncodedPairState) -> EncodedPairState:
        state = encode_half(state, self.code_a, "A", self.m, self._rng())
        return encode_half(state, self.code_b, "B", self.m, self._rng())

    def _round(self, a: EncodedPairState, b: EncodedPairState, r: int) -> RoundResult:
        if self.encoded_rounds:
            return purify_encoded(a, b, self.m, r, strict=self.scheme is Scheme.AFTER_STRICT, rng=self._rng())
        return purify_physical(a, b, self.m, basis_toggle=True, rng=self._rng())

    def level(self, r: int, count: int) -> EncodedPairState:
        if r == 0:
            raw = self._raw(count)
            return self._encode(raw) if self.encoded_rounds else raw
        parts: list[EncodedPairState] = []
        got = 0
        for _ in range(self.max_batches):
            done = self.attempts[r - 1]
            rate = self.successes[r - 1] / done if done else 0.5
            need = math.ceil((count - got) / max(rate, 1e-3) * 1.05) + 1
            pool = self.level(r - 1, 2 * need)
            result = self._round(pool.take(slice(0, need)), pool.take(slice(need, 2 * need)), r - 1)
            self.attempts[r - 1] += result.attempts
            self.successes[r - 1] += result.successes
            parts.append(result.pairs)
            got += result.successes
            if got >= count:
                return EncodedPairState.concat(parts).take(slice(0, count))
        raise RetryCapError(f"round {r} delivered {got} of {count} pairs after {self.max_batches} batches")

    def deliver(self, count: int) -> EncodedPairState:
        state = self.level(self.rounds, count)
        if self.scheme is Scheme.BEFORE:
            state = self._encode(state)
        return state

    def success_rates(self) -> list[float]:
        return [s / a for s, a in zip(self.successes, self.attempts)]

    def ledger(self) -> ResourceLedger:
        source_ops = local_gate_ops(self.hold_steps) if self.source is Source.LOCAL else []
        success = self.success_rates()
        if self.encoded_rounds:
            base = round_zero_ledger(self.code_a, self.code_b, source_ops, self.hold_steps)
            width = self.code_a.n + self.code_b.n
            footprint = 2 * (self.code_a.footprint + self.code_b.footprint)
            attempts = [ops_ledger(encoded_round_ops(width, r % 2 == 1), footprint) for r in range(self.rounds)]
            return recursive_ledger(base, attempts, success)
        phys = physical_code()
        base = round_zero_ledger(phys, phys, source_ops, self.hold_steps)
        attempts = [ops_ledger(physical_round_ops(True), 4)] * self.rounds
        ledger = recursive_ledger(base, attempts, success)
        if self.scheme is Scheme.BEFORE:
            encoded = round_zero_ledger(self.code_a, self.code_b, source_ops, self.hold_steps)
            ledger = ledger + (encoded - base)
        return ledger


def run_scheme(
    scheme: Scheme | str,
    codes: tuple[str, str] = ("physical", "physical"),
    rounds: int = 0,
    m: ErrorModel | None = None,
    source: Source | str = Source.OPTICAL,
    trials: int = 10_000,
    seed: int | None = None,
    raw_model: RawPairModel | None = None,
    hold_steps: int = HOLD_STEPS,
    chunk: int = 1024,
    max_batches: int = 64,
    progress: bool = False,
) -> SchemeResult:
    """Deliver ``trials`` pairs through ``scheme`` with ``rounds`` purification rounds and judge them.

    ``before`` purifies physical pairs and then encodes both halves;
    ``after`` encodes first and purifies at the logical level;
    ``after_strict`` additionally drops pairs with any nonzero syndrome in
    the measured blocks; ``physical`` never encodes. Final judgment is a
    perfect syndrome extraction on both blocks.
    """
    scheme = Scheme.parse(scheme)
    source = Source.parse(source)
    if rounds < 0:
        raise InvalidParameterError(f"rounds must be >= 0, got {rounds}")
    if trials <= 0:
        raise InvalidParameterError(f"trials must be positive, got {trials}")
    code_a, code_b = (get_code(c) for c in codes)
    if scheme is Scheme.PHYSICAL and not (code_a.is_physical and code_b.is_physical):
        raise InvalidParameterError("the physical scheme takes no codes")
    m = m if m is not None else ErrorModel.purification(0.0)
    pipeline = _Pipeline(
        scheme,
        code_a,
        code_b,
        rounds,
        m,
        source,
        raw_model or RawPairModel.optical(),
        hold_steps,
        seed,
        max_batches,
    )

    parts = []
    for lo in tqdm(range(0, trials, chunk), desc=f"{scheme.value} r={rounds}", disable=not progress):
        parts.append(pipeline.deliver(min(chunk, trials - lo)))
    delivered = EncodedPairState.concat(parts)
    rates = judge(delivered)
    ledger = pipeline.ledger()
    logger.info(
        "%s %s/%s rounds=%d p=%g: merged %.3e, inefficiency %.3g",
        scheme.value,
        code_a.name,
        code_b.name,
        rounds,
        m.p,
        rates.merged,
        ledger.inefficiency,
    )
    return SchemeResult(
        scheme=scheme.value,
        code_a=code_a.name,
        code_b=code_b.name,
        rounds=rounds,
        p=m.p,
        rates=rates,
        ledger=ledger,
        success=pipeline.success_rates(),
        attempts=list(pipeline.attempts),
    )


def purification_table(
    scheme: Scheme | str,
    codes: tuple[str, str] = ("physical", "physical"),
    max_rounds: int = 4,
    **kwargs,
) -> list[SchemeResult]:
    """One result per round count ``0..max_rounds``, each run independently from the same seed."""
    return [run_scheme(scheme, codes, r, **kwargs) for r in range(max_rounds + 1)]


def write_csv(results: list[SchemeResult], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in results:
            writer.writerow(r.csv_row())
    return path


def read_csv(path: str | Path) -> list[dict[str, str]]:
    with Path(path).open(newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))
