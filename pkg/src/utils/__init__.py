"""Utility functions: seeded random streams and the worker pool."""

from src.utils.parallel import pool_size, run_parallel
from src.utils.seeding import make_rng, stream_seed

__all__ = ["make_rng", "pool_size", "run_parallel", "stream_seed"]
