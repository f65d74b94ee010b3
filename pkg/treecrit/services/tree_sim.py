"""
Tree simulation service.

Trees are grown level by level. Each parent's children receive a uniform
random permutation of the colours 1..b, and the child on colour j gets the
label drawn for entry (parent colour, j). Path weights are accumulated as
sums of log labels, so log zeta[child] = log zeta[parent] + log label exactly
and zeta = exp(log zeta).

Every trial draws from its own stream keyed by (seed, trial_index), so
results are independent of thread count and execution order.
"""

import math
import time
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd
from scipy import stats

from ..core.config import get_settings
from ..core.exceptions import DomainError
from ..core.logging import get_logger, log_simulation_activity
from ..models.environment import EnvSpec
from ..utils.concurrency import map_trials
from ..utils.resources import check_budget, report_memory
from ..utils.rng import STREAM_TREE, trial_rng
from .environment import moment_matrix, sample_log_rows
from .spectral import optimal_block_threshold, rate_function

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class Level:
    """One materialized level: child k of parent p sits at index p * b + k."""

    colours: np.ndarray
    zeta: np.ndarray
    log_zeta: np.ndarray


@dataclass(frozen=True, eq=False)
class TreeTrial:
    depth: int
    seed: Optional[int]
    trial_index: int
    root_color: int
    s: float
    x: Optional[float]
    sum_zeta: np.ndarray
    sum_zeta_s: np.ndarray
    count_exceed: Optional[np.ndarray]
    levels: Optional[List[Level]] = None


@dataclass(frozen=True, eq=False)
class LevelStats:
    s: float
    root_color: int
    n_trials: int
    empirical_mean: np.ndarray
    variance: np.ndarray
    std_err: np.ndarray
    oracle: np.ndarray

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "level": np.arange(self.empirical_mean.size),
                "empirical_mean": self.empirical_mean,
                "std_err": self.std_err,
                "oracle": self.oracle,
                "n_trials": self.n_trials,
            }
        )

    def z_scores(self) -> np.ndarray:
        diff = self.empirical_mean - self.oracle
        with np.errstate(divide="ignore", invalid="ignore"):
            z = np.where(self.std_err > 0, diff / self.std_err, np.where(diff == 0, 0.0, np.inf))
        return np.abs(z)


@dataclass(frozen=True, eq=False)
class YEstimate:
    """Partial sums of Y per trial and the median growth of level sums."""

    partial_sums: np.ndarray
    level_sums: np.ndarray
    level_medians: np.ndarray
    growth_ratios: np.ndarray

    def median_growth(self, first: int = 4, last: int = 10) -> float:
        """Geometric mean of successive median ratios over levels first..last."""
        last = min(last, self.level_medians.size - 1)
        if last <= first:
            raise DomainError(f"need depth > {first} for a growth estimate")
        lo, hi = self.level_medians[first], self.level_medians[last]
        if lo <= 0:
            return math.inf if hi > 0 else math.nan
        return float((hi / lo) ** (1.0 / (last - first)))


@dataclass(frozen=True, eq=False)
class ExceedanceCounts:
    x: float
    counts: np.ndarray
    stabilization_levels: int

    @property
    def totals(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def stabilized(self) -> np.ndarray:
        """Per trial: no exceedance in the last ``stabilization_levels`` levels."""
        return ~np.any(self.counts[:, -self.stabilization_levels :] > 0, axis=1)

    @property
    def growing(self) -> np.ndarray:
        """Per trial: the last level has more exceedances than ``stabilization_levels`` earlier."""
        k = min(self.stabilization_levels, self.counts.shape[1] - 1)
        return self.counts[:, -1] > self.counts[:, -1 - k]

    def to_frame(self) -> pd.DataFrame:
        trials, levels = self.counts.shape
        return pd.DataFrame(
            {
                "trial": np.repeat(np.arange(trials), levels),
                "level": np.tile(np.arange(levels), trials),
                "count": self.counts.ravel(),
            }
        )


@dataclass(frozen=True)
class TailEstimate:
    n: int
    log_a: float
    trials: int
    empirical: float
    std_err: float
    rate: float
    predicted: float


@dataclass(frozen=True, eq=False)
class EmbeddedSurvival:
    y: float
    n: int
    generations: int
    survival_frequency: float
    mean_sizes: np.ndarray
    capped: bool


def check_tree_budget(b: int, depth: int) -> None:
    limit = get_settings().MAX_TREE_VERTICES
    check_budget("tree vertices", float(depth) * float(b) ** depth, limit)


def expand_level(
    env: EnvSpec, colours: np.ndarray, log_zeta: np.ndarray, rng: np.random.Generator
) -> Tuple[np.ndarray, np.ndarray]:
    """Children of every vertex in a level and their log path weights, in parent order."""
    b = env.b
    perms = rng.permuted(np.tile(np.arange(1, b + 1), (colours.size, 1)), axis=1)
    log_labels = sample_log_rows(env, colours, rng)
    child_log = log_zeta[:, None] + np.take_along_axis(log_labels, perms - 1, axis=1)
    return perms.ravel(), child_log.ravel()


def sample_tree(
    env: EnvSpec,
    depth: int,
    seed: Optional[int],
    trial_index: int = 0,
    s: float = 1.0,
    x: Optional[float] = None,
    root_color: Optional[int] = None,
    keep_levels: bool = False,
) -> TreeTrial:
    """
    One coloured tree to ``depth`` with per-level aggregates.

    Raises:
        BudgetExceededError: If depth * b^depth exceeds MAX_TREE_VERTICES
    """
    if depth < 0:
        raise DomainError(f"depth must be >= 0, got {depth}")
    check_tree_budget(env.b, depth)
    root = root_color if root_color is not None else env.root_color
    if not 1 <= root <= env.b:
        raise DomainError(f"root colour must lie in 1..{env.b}, got {root}")
    rng = trial_rng(seed, trial_index, STREAM_TREE)

    colours = np.array([root], dtype=np.int64)
    log_zeta = np.zeros(1)
    zeta = np.ones(1)
    sum_zeta = np.empty(depth + 1)
    sum_zeta_s = np.empty(depth + 1)
    count = np.empty(depth + 1, dtype=np.int64) if x is not None else None
    levels: Optional[List[Level]] = [Level(colours, zeta, log_zeta)] if keep_levels else None

    for n in range(depth + 1):
        if n > 0:
            colours, log_zeta = expand_level(env, colours, log_zeta, rng)
            zeta = np.exp(log_zeta)
            if levels is not None:
                levels.append(Level(colours, zeta, log_zeta))
        sum_zeta[n] = zeta.sum()
        sum_zeta_s[n] = (zeta**s).sum()
        if count is not None:
            count[n] = int(np.count_nonzero(zeta > x))

    return TreeTrial(
        depth=depth,
        seed=seed,
        trial_index=trial_index,
        root_color=root,
        s=s,
        x=x,
        sum_zeta=sum_zeta,
        sum_zeta_s=sum_zeta_s,
        count_exceed=count,
        levels=levels,
    )


def moment_oracle(env: EnvSpec, s: float, n: int, root_color: Optional[int] = None) -> float:
    """e_alpha^T m(s)^n e, the exact mean of the level-n sum of zeta^s."""
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    if n == 0:
        return 1.0
    root = root_color if root_color is not None else env.root_color
    log_m = moment_matrix(env, s).log_values
    shift = float(log_m.max())
    a = np.exp(log_m - shift)
    v = np.ones(env.b)
    log_scale = 0.0
    for _ in range(n):
        v = a @ v
        top = float(v.max())
        v /= top
        log_scale += math.log(top) + shift
    with np.errstate(over="ignore"):
        return float(np.exp(log_scale + math.log(v[root - 1])))


def _run_trials(
    env: EnvSpec,
    depth: int,
    trials: int,
    seed: Optional[int],
    s: float = 1.0,
    x: Optional[float] = None,
    root_color: Optional[int] = None,
    threads: Optional[int] = None,
) -> List[TreeTrial]:
    check_tree_budget(env.b, depth)
    start = time.perf_counter()
    results = map_trials(
        lambda k: sample_tree(env, depth, seed, k, s=s, x=x, root_color=root_color),
        trials,
        threads,
    )
    log_simulation_activity(
        "tree_sim",
        "success",
        duration_ms=(time.perf_counter() - start) * 1000,
        trials=trials,
        depth=depth,
    )
    report_memory("tree_sim")
    return results


def estimate_level_sums(
    env: EnvSpec,
    s: float,
    depth: int,
    trials: int,
    seed: Optional[int],
    root_color: Optional[int] = None,
    threads: Optional[int] = None,
) -> LevelStats:
    """Monte Carlo mean of the level sums of zeta^s, paired with the exact oracle."""
    if trials < 2:
        raise DomainError("standard errors need at least 2 trials")
    root = root_color if root_color is not None else env.root_color
    results = _run_trials(env, depth, trials, seed, s=s, root_color=root, threads=threads)
    sums = np.vstack([t.sum_zeta_s for t in results])
    variance = sums.var(axis=0, ddof=1)
    return LevelStats(
        s=s,
        root_color=root,
        n_trials=trials,
        empirical_mean=sums.mean(axis=0),
        variance=variance,
        std_err=np.sqrt(variance / trials),
        oracle=np.array([moment_oracle(env, s, n, root) for n in range(depth + 1)]),
    )


def estimate_Y(
    env: EnvSpec,
    depth: int,
    trials: int,
    seed: Optional[int],
    root_color: Optional[int] = None,
    threads: Optional[int] = None,
) -> YEstimate:
    """Partial sums of Y to each depth, with median level-sum growth ratios."""
    results = _run_trials(env, depth, trials, seed, root_color=root_color, threads=threads)
    level_sums = np.vstack([t.sum_zeta for t in results])
    medians = np.median(level_sums, axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = medians[1:] / medians[:-1]
    return YEstimate(
        partial_sums=np.cumsum(level_sums, axis=1),
        level_sums=level_sums,
        level_medians=medians,
        growth_ratios=ratios,
    )


def count_exceedances(
    env: EnvSpec,
    x: float,
    depth: int,
    trials: int,
    seed: Optional[int],
    root_color: Optional[int] = None,
    threads: Optional[int] = None,
) -> ExceedanceCounts:
    """Per-level counts of vertices with zeta[v] > x (strict), per trial."""
    if not x > 0:
        raise DomainError(f"threshold x must be positive, got {x}")
    results = _run_trials(env, depth, trials, seed, x=x, root_color=root_color, threads=threads)
    return ExceedanceCounts(
        x=x,
        counts=np.vstack([t.count_exceed for t in results]),
        stabilization_levels=get_settings().STABILIZATION_LEVELS,
    )


def sample_path_log_products(
    env: EnvSpec, n: int, size: int, rng: np.random.Generator
) -> np.ndarray:
    """log zeta along ``size`` independent paths of length n with i.i.d. uniform colours."""
    colours = rng.integers(1, env.b + 1, size=(size, n + 1))
    total = np.zeros(size)
    for step in range(n):
        parent, child = colours[:, step], colours[:, step + 1]
        for i in range(1, env.b + 1):
            for j in range(1, env.b + 1):
                mask = (parent == i) & (child == j)
                k = int(mask.sum())
                if k:
                    total[mask] += env.entry(i, j).sample_log(rng, k)
    return total


def path_tail_probability(
    env: EnvSpec,
    n: int,
    log_a: float,
    trials: int,
    seed: Optional[int],
    chunk_size: int = 100_000,
    threads: Optional[int] = None,
) -> TailEstimate:
    """
    Empirical P(S_n / n >= log a) against the prediction exp(-n Lambda*(log a)).

    Colours along the path, root included, are i.i.d. uniform on 1..b.
    """
    if n < 1:
        raise DomainError(f"path length must be >= 1, got {n}")
    chunks = [min(chunk_size, trials - start) for start in range(0, trials, chunk_size)]

    def run_chunk(k: int) -> int:
        rng = trial_rng(seed, k, STREAM_TREE)
        logs = sample_path_log_products(env, n, chunks[k], rng)
        return int(np.count_nonzero(logs >= n * log_a))

    hits = sum(map_trials(run_chunk, len(chunks), threads))
    p = hits / trials
    rate = rate_function(env, log_a)
    predicted = math.exp(-n * rate.value) if math.isfinite(rate.value) else 0.0
    return TailEstimate(
        n=n,
        log_a=log_a,
        trials=trials,
        empirical=p,
        std_err=math.sqrt(max(p * (1.0 - p), 0.0) / trials),
        rate=rate.value,
        predicted=predicted,
    )


def gaussian_tail_oracle(mu: float, sigma: float, n: int, log_a: float) -> float:
    """P(S_n / n >= log a) when every log label is Normal(mu, sigma^2)."""
    return float(stats.norm.sf(log_a, loc=mu, scale=sigma / math.sqrt(n)))


def embedded_survival(
    env: EnvSpec,
    n: int,
    generations: int,
    trials: int,
    seed: Optional[int],
    y: Optional[float] = None,
    root_color: Optional[int] = None,
    threads: Optional[int] = None,
) -> EmbeddedSurvival:
    """
    Survival of the embedded process over n-level blocks.

    M_j holds the level-jn descendants v of members u of M_{j-1} with block
    product zeta[u, v] >= y^n. Populations are capped at
    EMBEDDED_POPULATION_CAP by uniform subsampling, so the survival
    frequency is a lower bound whenever the cap binds.
    """
    if n < 1 or generations < 1:
        raise DomainError("block length and generations must be >= 1")
    settings = get_settings()
    cap = settings.EMBEDDED_POPULATION_CAP
    check_budget("embedded block vertices", float(cap) * float(env.b) ** n, settings.MAX_TREE_VERTICES)
    if y is None:
        y, _ = optimal_block_threshold(env)
    if y <= 0:
        raise DomainError(f"block threshold y must be positive, got {y}")
    log_threshold = n * math.log(y)
    root = root_color if root_color is not None else env.root_color

    def run(k: int) -> Tuple[np.ndarray, bool]:
        rng = trial_rng(seed, k, STREAM_TREE)
        members = np.array([root], dtype=np.int64)
        sizes = np.zeros(generations + 1, dtype=np.int64)
        sizes[0] = 1
        capped = False
        for j in range(1, generations + 1):
            colours, log_zeta = members, np.zeros(members.size)
            for _ in range(n):
                colours, log_zeta = expand_level(env, colours, log_zeta, rng)
            members = colours[log_zeta >= log_threshold]
            sizes[j] = members.size
            if members.size == 0:
                break
            if members.size > cap:
                members = rng.choice(members, size=cap, replace=False)
                capped = True
        return sizes, capped

    start = time.perf_counter()
    runs = map_trials(run, trials, threads)
    sizes = np.vstack([r[0] for r in runs])
    log_simulation_activity(
        "embedded_survival",
        "success",
        duration_ms=(time.perf_counter() - start) * 1000,
        trials=trials,
        y=y,
        n=n,
    )
    return EmbeddedSurvival(
        y=y,
        n=n,
        generations=generations,
        survival_frequency=float(np.mean(sizes[:, -1] > 0)),
        mean_sizes=sizes.mean(axis=0),
        capped=any(r[1] for r in runs),
    )
