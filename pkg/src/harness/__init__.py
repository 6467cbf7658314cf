"""Chip metrics, correlation and culling, and experiment orchestration."""

from src.harness.analysis import CorrelationTable, correlate, cull, geometric_mean_rate, pearson
from src.harness.config import ExperimentConfig, ExperimentKind, load_config
from src.harness.metrics import METRIC_COLUMNS, ChipMetrics, compute_metrics, unencodable_metrics
from src.harness.runner import (
    RATE_COLUMNS,
    CampaignResult,
    Chip,
    ChipSpec,
    ExperimentResult,
    LogicalRate,
    chip_from_whole,
    chip_specs,
    load_ensemble,
    logical_rate,
    per_cycle_rate,
    prepare_chip,
    read_rows,
    run_campaign,
    run_experiment,
)

__all__ = [
    "METRIC_COLUMNS",
    "RATE_COLUMNS",
    "CampaignResult",
    "Chip",
    "ChipMetrics",
    "ChipSpec",
    "CorrelationTable",
    "ExperimentConfig",
    "ExperimentKind",
    "ExperimentResult",
    "LogicalRate",
    "chip_from_whole",
    "chip_specs",
    "compute_metrics",
    "correlate",
    "cull",
    "geometric_mean_rate",
    "load_config",
    "load_ensemble",
    "logical_rate",
    "pearson",
    "per_cycle_rate",
    "prepare_chip",
    "read_rows",
    "run_campaign",
    "run_experiment",
    "unencodable_metrics",
]
