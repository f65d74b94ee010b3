"""
Utilities package for treecrit.

This package contains helpers for:
- Checked quadrature and one-dimensional optimization
- Deterministic random streams and trial parallelism
- Atomic file output and CSV rendering
"""

from .csv_utils import format_float, frame_to_csv
from .file_utils import atomic_write_bytes, atomic_write_text, calculate_file_hash, hash_path
from .optimize import MinimizeResult, bisect_root, golden_section_min
from .rng import trial_rng

__all__ = [
    "MinimizeResult",
    "atomic_write_bytes",
    "atomic_write_text",
    "bisect_root",
    "calculate_file_hash",
    "format_float",
    "frame_to_csv",
    "golden_section_min",
    "hash_path",
    "trial_rng",
]
