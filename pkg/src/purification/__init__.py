"""Raw Bell pairs, physical and encoded purification rounds, the three schemes and their ledgers."""

from src.purification.ledger import (
    REFERENCE_ROUND_ZERO,
    ResourceLedger,
    encoding_ledger,
    ops_ledger,
    recursive_ledger,
    round_zero_ledger,
)
from src.purification.oracle import (
    OracleResult,
    closed_form_fidelity,
    exact_purification_oracle,
    purification_step,
    success_probability,
)
from src.purification.pairs import (
    HOLD_STEPS,
    EncodedPairState,
    ErrorRates,
    RawPairModel,
    encode_half,
    hold,
    judge,
    local_gate_ops,
    make_raw_pair,
    make_raw_pair_local_gates,
    run_ops,
)
from src.purification.rounds import (
    RoundResult,
    encoded_round_ops,
    physical_round_ops,
    purify_encoded,
    purify_physical,
)
from src.purification.schemes import (
    CSV_HEADER,
    Scheme,
    SchemeResult,
    Source,
    purification_table,
    read_csv,
    run_scheme,
    write_csv,
)

__all__ = [
    "CSV_HEADER",
    "HOLD_STEPS",
    "REFERENCE_ROUND_ZERO",
    "EncodedPairState",
    "ErrorRates",
    "OracleResult",
    "RawPairModel",
    "ResourceLedger",
    "RoundResult",
    "Scheme",
    "SchemeResult",
    "Source",
    "closed_form_fidelity",
    "encode_half",
    "encoded_round_ops",
    "encoding_ledger",
    "exact_purification_oracle",
    "hold",
    "judge",
    "local_gate_ops",
    "make_raw_pair",
    "make_raw_pair_local_gates",
    "ops_ledger",
    "physical_round_ops",
    "purification_step",
    "purification_table",
    "purify_encoded",
    "purify_physical",
    "read_csv",
    "recursive_ledger",
    "round_zero_ledger",
    "run_ops",
    "run_scheme",
    "success_probability",
    "write_csv",
]
