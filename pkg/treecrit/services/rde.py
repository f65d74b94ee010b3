"""
Recursive distributional equation Y_i = 1 + sum_j xi_ij Y_j (in law).

Solutions exist when lambda1 < 1 and not when lambda1 > 1. The population
dynamics solver keeps one pool of samples per component, starting from the
constant 1, so after k iterations pool i is distributed as the tree sum to
depth k with root colour i.
"""

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd
from scipy import stats

from ..core.config import get_settings
from ..core.exceptions import DomainError, NoFiniteMeanError, UnsupportedEnvironmentError
from ..core.logging import get_logger, log_simulation_activity
from ..models.environment import EnvSpec, SiblingMode
from ..models.verdicts import RdeVerdict
from ..utils.rng import STREAM_POOL, trial_rng
from .classifier import classify
from .environment import moment_matrix, sample_rows
from .spectral import rho

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class RdeResult:
    """
    Final pools and per-iteration diagnostics.

    ``means[k]`` and ``std_err[k]`` describe the pools after k iterations
    (row 0 is the initial state); ``ks[k - 1]`` is the KS distance between
    iterations k - 1 and k, per component.
    """

    pools: np.ndarray
    means: np.ndarray
    std_err: np.ndarray
    ks: np.ndarray
    iterations_run: int
    diverged: bool
    diverged_at: Optional[int]

    def to_frame(self) -> pd.DataFrame:
        iterations, b = self.means.shape
        ks = np.vstack([np.full((1, b), np.nan), self.ks])
        return pd.DataFrame(
            {
                "iteration": np.repeat(np.arange(iterations), b),
                "component": np.tile(np.arange(1, b + 1), iterations),
                "mean": self.means.ravel(),
                "ks_to_previous": ks.ravel(),
            }
        )


def existence(env: EnvSpec, eps_critical: Optional[float] = None) -> RdeVerdict:
    """Whether a solution exists, by the lambda1 verdict."""
    return classify(env, eps_critical=eps_critical).rde


def iterate(
    env: EnvSpec,
    pool_size: int,
    iterations: int,
    seed: Optional[int],
    divergence_median: Optional[float] = None,
) -> RdeResult:
    """
    Population dynamics for the vector equation.

    Each new sample of component i uses one fresh row (xi_i1, ..., xi_ib) and
    b independent picks from the previous pools. Stops early once any pool's
    median exceeds ``divergence_median``.

    Raises:
        UnsupportedEnvironmentError: For rwre_joint environments
    """
    if env.sibling_mode is not SiblingMode.INDEPENDENT:
        raise UnsupportedEnvironmentError(
            "population dynamics needs independent sibling labels",
            sibling_mode=env.sibling_mode.value,
        )
    if pool_size < 2 or iterations < 0:
        raise DomainError("pool_size must be >= 2 and iterations >= 0")
    threshold = (
        divergence_median if divergence_median is not None else get_settings().RDE_DIVERGENCE_MEDIAN
    )
    b = env.b
    pools = np.ones((b, pool_size))
    means = [pools.mean(axis=1)]
    errors = [np.zeros(b)]
    ks_rows = []
    diverged_at: Optional[int] = None
    start = time.perf_counter()

    for k in range(1, iterations + 1):
        rng = trial_rng(seed, k, STREAM_POOL)
        new = np.empty_like(pools)
        for i in range(1, b + 1):
            rows = sample_rows(env, np.full(pool_size, i), rng)
            picks = rng.integers(0, pool_size, size=(b, pool_size))
            chosen = pools[np.arange(b)[:, None], picks]
            new[i - 1] = 1.0 + np.einsum("pj,jp->p", rows, chosen)
        ks_rows.append([stats.ks_2samp(new[i], pools[i]).statistic for i in range(b)])
        pools = new
        means.append(pools.mean(axis=1))
        errors.append(pools.std(axis=1, ddof=1) / np.sqrt(pool_size))
        if np.any(np.median(pools, axis=1) > threshold):
            diverged_at = k
            logger.warning("rde_divergence_detected", iteration=k, threshold=threshold)
            break

    log_simulation_activity(
        "rde_iterate",
        "success",
        duration_ms=(time.perf_counter() - start) * 1000,
        pool_size=pool_size,
        iterations=len(means) - 1,
    )
    return RdeResult(
        pools=pools,
        means=np.vstack(means),
        std_err=np.vstack(errors),
        ks=np.array(ks_rows).reshape(-1, b),
        iterations_run=len(means) - 1,
        diverged=diverged_at is not None,
        diverged_at=diverged_at,
    )


def mean_system(env: EnvSpec) -> np.ndarray:
    """
    E[Y] = (I - m(1))^{-1} e.

    Raises:
        NoFiniteMeanError: If rho(1) >= 1
    """
    r1 = rho(env, 1.0)
    if r1 >= 1.0:
        raise NoFiniteMeanError(r1)
    m1 = moment_matrix(env, 1.0).values
    return np.linalg.solve(np.eye(env.b) - m1, np.ones(env.b))


def mean_system_matrix(m1: np.ndarray) -> np.ndarray:
    """(I - M)^{-1} e for an explicit mean matrix M with spectral radius < 1."""
    m1 = np.asarray(m1, dtype=float)
    radius = float(np.max(np.abs(np.linalg.eigvals(m1))))
    if radius >= 1.0:
        raise NoFiniteMeanError(radius)
    return np.linalg.solve(np.eye(m1.shape[0]) - m1, np.ones(m1.shape[0]))
