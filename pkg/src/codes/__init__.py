"""Steane and surface-d3 codes, deformation-code algebra traces and resource formulas."""

from src.codes.codedef import (
    CODES,
    SURFACE_D3_FOOTPRINT,
    CodeDef,
    EncoderCheck,
    LookupDecoder,
    build_encoding,
    get_code,
    physical_code,
    steane_code,
    surface_d3_code,
    verify_encoder,
)
from src.codes.resources import (
    PatchCounts,
    ResourceReport,
    corner_superstabilizer_steps,
    deformation_patch_counts,
    resource_formulas,
    superstabilizer_steps,
)
from src.codes.traces import (
    CatStateReport,
    TraceReport,
    abstract_cnot_stabilizers,
    cat_state_check,
    verify_all,
    verify_lattice_surgery_cnot_trace,
    verify_state_injection_trace,
    verify_zz_teleportation_trace,
)

__all__ = [
    "CODES",
    "SURFACE_D3_FOOTPRINT",
    "CatStateReport",
    "CodeDef",
    "EncoderCheck",
    "LookupDecoder",
    "PatchCounts",
    "ResourceReport",
    "TraceReport",
    "abstract_cnot_stabilizers",
    "build_encoding",
    "cat_state_check",
    "corner_superstabilizer_steps",
    "deformation_patch_counts",
    "get_code",
    "physical_code",
    "resource_formulas",
    "steane_code",
    "superstabilizer_steps",
    "surface_d3_code",
    "verify_all",
    "verify_encoder",
    "verify_lattice_surgery_cnot_trace",
    "verify_state_injection_trace",
    "verify_zz_teleportation_trace",
]
