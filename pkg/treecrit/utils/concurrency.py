"""
Trial-level parallelism with deterministic result ordering.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, TypeVar

from ..core.config import get_settings

T = TypeVar("T")


def map_trials(
    func: Callable[[int], T],
    n_trials: int,
    threads: Optional[int] = None,
) -> List[T]:
    """
    Evaluate ``func(trial_index)`` for every trial, results ordered by index.

    Each call must derive its randomness from the trial index alone.
    """
    workers = threads if threads is not None else get_settings().THREADS
    if workers <= 1 or n_trials <= 1:
        return [func(k) for k in range(n_trials)]
    with ThreadPoolExecutor(max_workers=min(workers, n_trials)) as pool:
        return list(pool.map(func, range(n_trials)))
