"""
CSV rendering with fixed float formatting and infinity sentinels.
"""

import io
import math
from typing import Iterable, Optional

import numpy as np
import pandas as pd

FLOAT_FORMAT = "%.12g"


def format_float(value: float) -> str:
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "+inf" if value > 0 else "-inf"
    return FLOAT_FORMAT % value


def frame_to_csv(frame: pd.DataFrame, header_lines: Optional[Iterable[str]] = None) -> str:
    """
    Render ``frame`` as CSV text.

    Optional ``header_lines`` are emitted first as ``# key=value`` comments.
    Float columns use a fixed format so repeated runs are byte-identical.
    """
    out = frame.copy()
    for column in out.columns:
        if pd.api.types.is_float_dtype(out[column]):
            out[column] = [format_float(float(v)) for v in out[column]]
        elif pd.api.types.is_bool_dtype(out[column]):
            out[column] = np.where(out[column], "true", "false")
    buffer = io.StringIO()
    for line in header_lines or ():
        buffer.write(f"# {line}\n")
    out.to_csv(buffer, index=False, lineterminator="\n")
    return buffer.getvalue()
