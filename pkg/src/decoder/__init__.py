"""Matching nest, detection events, minimum-weight matching and logical assessment."""

from src.decoder.assess import CodeCapacityDecoder, LogicalOutcome, assess_logical
from src.decoder.bench import (
    BenchResult,
    boundary_miscorrection,
    matching_agreement,
    random_matching_instance,
    single_error_sweep,
)
from src.decoder.distances import GraphDistances
from src.decoder.events import DetectionEvent, extract_events, terminal_signs
from src.decoder.matching import Matching, brute_force_matching, greedy_matching, mwpm
from src.decoder.nest import BOUNDARY, REFERENCE_P, Nest, build_nest, edge_weight, merge_probability
from src.decoder.window import WindowDecoder, decode_window

__all__ = [
    "BOUNDARY",
    "REFERENCE_P",
    "BenchResult",
    "CodeCapacityDecoder",
    "DetectionEvent",
    "GraphDistances",
    "LogicalOutcome",
    "Matching",
    "Nest",
    "WindowDecoder",
    "assess_logical",
    "boundary_miscorrection",
    "brute_force_matching",
    "build_nest",
    "decode_window",
    "edge_weight",
    "extract_events",
    "greedy_matching",
    "matching_agreement",
    "merge_probability",
    "mwpm",
    "random_matching_instance",
    "single_error_sweep",
    "terminal_signs",
]
