"""
Utility modules for walkerverify.

This module provides common utilities for logging, batch mapping, and other
shared functionality across the toolkit.
"""

from .helpers import chunk_ranges, map_chunks, parse_grid, relative_residual
from .logging import format_point, get_logger, setup_logging

__all__ = [
    "setup_logging",
    "get_logger",
    "format_point",
    "chunk_ranges",
    "map_chunks",
    "parse_grid",
    "relative_residual",
]
