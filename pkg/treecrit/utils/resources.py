"""
Process resource checks for the simulators.
"""

import psutil

from ..core.config import get_settings
from ..core.exceptions import BudgetExceededError
from ..core.logging import log_memory_usage


def current_memory_mb() -> float:
    return psutil.Process().memory_info().rss / (1024 * 1024)


def report_memory(component: str) -> float:
    """Log resident memory for ``component``, warning above MEMORY_WARNING_MB."""
    memory_mb = current_memory_mb()
    log_memory_usage(component, memory_mb, get_settings().MEMORY_WARNING_MB)
    return memory_mb


def check_budget(resource: str, requested: float, limit: float) -> None:
    if requested > limit:
        raise BudgetExceededError(resource, requested, limit)
