"""
Multi-type branching random walk and first-passage percolation.

Generation-synchronous: each particle of type i splits into b children,
one of each type j, displaced by an independent draw of eta_ij. The
frontier is pruned to particles within ``prune_window`` of the current
minimum and then capped at BRW_FRONTIER_CAP by keeping the lowest.
"""

import math
import time
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from ..core.config import get_settings
from ..core.exceptions import BudgetExceededError, DomainError
from ..core.logging import get_logger, log_simulation_activity
from ..models.brw import BrwSpec
from ..models.environment import EnvSpec
from ..utils.concurrency import map_trials
from ..utils.rng import STREAM_TREE, trial_rng
from .spectral import SpeedResult, speed_x0
from .tree_sim import check_tree_budget, sample_tree

logger = get_logger(__name__)


@dataclass(frozen=True)
class FrontierSnapshot:
    generation: int
    mu: float
    frontier_size: int
    pruned: bool
    sound: bool


@dataclass(frozen=True, eq=False)
class BrwRun:
    snapshots: List[FrontierSnapshot]
    prune_window: float
    types: np.ndarray
    positions: np.ndarray

    @property
    def mu(self) -> np.ndarray:
        return np.array([s.mu for s in self.snapshots])

    @property
    def sound(self) -> bool:
        return all(s.sound for s in self.snapshots)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "generation": [s.generation for s in self.snapshots],
                "mu_t": [s.mu for s in self.snapshots],
                "frontier_size": [s.frontier_size for s in self.snapshots],
                "pruned_flag": [s.pruned for s in self.snapshots],
            }
        )


@dataclass(frozen=True, eq=False)
class Enumeration:
    """Every particle of generation t with its full path sum."""

    types: np.ndarray
    positions: np.ndarray
    mu: float


@dataclass(frozen=True, eq=False)
class SpeedEstimate:
    t_max: int
    trials: int
    mu_over_t: np.ndarray
    mean: float
    std_err: float
    ci_low: float
    ci_high: float
    x0: float
    degenerate: bool
    sound: bool

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"trial": np.arange(self.mu_over_t.size), "mu_over_t": self.mu_over_t})


@dataclass(frozen=True, eq=False)
class PositivityResult:
    t_max: int
    window: int
    trials: int
    positive: np.ndarray

    @property
    def frequency(self) -> float:
        return float(self.positive.mean())


@dataclass(frozen=True, eq=False)
class ReachCounts:
    t: float
    counts: np.ndarray

    def to_frame(self) -> pd.DataFrame:
        trials, levels = self.counts.shape
        return pd.DataFrame(
            {
                "trial": np.repeat(np.arange(trials), levels),
                "level": np.tile(np.arange(levels), trials),
                "reached": self.counts.ravel(),
            }
        )


def brw_env(spec: BrwSpec) -> EnvSpec:
    """Environment with labels xi_ij = exp(-eta_ij)."""
    entries = tuple(tuple(law.to_label() for law in row) for row in spec.steps)
    return EnvSpec(b=spec.b, entries=entries, root_color=spec.start_type)


def _branch(
    spec: BrwSpec, types: np.ndarray, positions: np.ndarray, rng: np.random.Generator
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    One generation: returns (child types, child positions, parent index, step).

    Children are grouped by (parent type, child type) in lexicographic order.
    """
    out_types, out_pos, out_parent, out_step = [], [], [], []
    for i in range(1, spec.b + 1):
        parents = np.flatnonzero(types == i)
        if parents.size == 0:
            continue
        for j in range(1, spec.b + 1):
            step = spec.step(i, j).sample(rng, parents.size)
            out_types.append(np.full(parents.size, j, dtype=np.int64))
            out_pos.append(positions[parents] + step)
            out_parent.append(parents)
            out_step.append(step)
    return (
        np.concatenate(out_types),
        np.concatenate(out_pos),
        np.concatenate(out_parent),
        np.concatenate(out_step),
    )


def simulate_brw(
    spec: BrwSpec,
    t_max: int,
    seed: Optional[int],
    prune_window: Optional[float] = None,
    frontier_cap: Optional[int] = None,
    trial_index: int = 0,
) -> BrwRun:
    """
    Run the walk for ``t_max`` generations.

    ``prune_window=math.inf`` and ``frontier_cap=0`` disable pruning. A
    snapshot is unsound once the cap discards a particle within the window
    of the minimum.

    Raises:
        BudgetExceededError: If the frontier exceeds MAX_FRONTIER after pruning
    """
    settings = get_settings()
    window = prune_window if prune_window is not None else settings.PRUNE_WINDOW
    cap = frontier_cap if frontier_cap is not None else settings.BRW_FRONTIER_CAP
    deterministic = spec.is_deterministic
    rng = trial_rng(seed, trial_index, STREAM_TREE)

    types = np.array([spec.start_type], dtype=np.int64)
    positions = np.zeros(1)
    snapshots: List[FrontierSnapshot] = []
    sound = True

    for t in range(1, t_max + 1):
        types, positions, _, _ = _branch(spec, types, positions, rng)
        mu = float(positions.min())
        pruned = False

        if math.isfinite(window):
            keep = positions <= mu + window
            if not keep.all():
                types, positions = types[keep], positions[keep]
                pruned = True
        if cap and positions.size > cap:
            order = np.argpartition(positions, cap - 1)
            dropped = order[cap:]
            if np.any(positions[dropped] <= mu + window):
                sound = False
            kept = np.sort(order[:cap])
            types, positions = types[kept], positions[kept]
            pruned = True
        if deterministic:
            merged = np.unique(np.column_stack([types, positions]), axis=0)
            types, positions = merged[:, 0].astype(np.int64), merged[:, 1]
        if positions.size > settings.MAX_FRONTIER:
            raise BudgetExceededError("brw frontier", positions.size, settings.MAX_FRONTIER)

        snapshots.append(
            FrontierSnapshot(
                generation=t, mu=mu, frontier_size=int(positions.size), pruned=pruned, sound=sound
            )
        )

    return BrwRun(snapshots=snapshots, prune_window=window, types=types, positions=positions)


def enumerate_minima(spec: BrwSpec, t: int, seed: Optional[int], trial_index: int = 0) -> Enumeration:
    """
    Brute-force generation ``t``: every particle's position as the sum of the
    steps along its ancestry, drawn in the same order as :func:`simulate_brw`.
    """
    check_tree_budget(spec.b, t)
    rng = trial_rng(seed, trial_index, STREAM_TREE)
    types = np.array([spec.start_type], dtype=np.int64)
    positions = np.zeros(1)
    parents: List[np.ndarray] = []
    steps: List[np.ndarray] = []
    for _ in range(t):
        types, positions, parent, step = _branch(spec, types, positions, rng)
        parents.append(parent)
        steps.append(step)

    # ancestry of every particle, then its steps summed root first
    ancestry: List[np.ndarray] = [np.arange(types.size)]
    for gen in range(t - 1, 0, -1):
        ancestry.append(parents[gen][ancestry[-1]])
    ancestry.reverse()
    totals = np.zeros(types.size)
    for gen in range(t):
        totals += steps[gen][ancestry[gen]]
    return Enumeration(types=types, positions=totals, mu=float(totals.min()) if t else 0.0)


def speed_estimate(
    spec: BrwSpec,
    t_max: int,
    trials: int,
    seed: Optional[int],
    prune_window: Optional[float] = None,
    threads: Optional[int] = None,
) -> SpeedEstimate:
    """
    Monte Carlo mu_t / t at t_max with a 95% interval, paired with x0.

    A degenerate spec returns its deterministic speed without simulating.
    """
    if t_max < 1:
        raise DomainError("t_max must be >= 1")
    speed: SpeedResult = speed_x0(brw_env(spec))
    if speed.degenerate:
        logger.info("brw_speed_degenerate", x0=speed.x0)
        values = np.full(trials, speed.x0)
        return SpeedEstimate(
            t_max=t_max, trials=trials, mu_over_t=values, mean=speed.x0, std_err=0.0,
            ci_low=speed.x0, ci_high=speed.x0, x0=speed.x0, degenerate=True, sound=True,
        )

    start = time.perf_counter()
    runs = map_trials(
        lambda k: simulate_brw(spec, t_max, seed, prune_window, trial_index=k), trials, threads
    )
    values = np.array([run.snapshots[-1].mu / t_max for run in runs])
    mean = float(values.mean())
    std_err = float(values.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    log_simulation_activity(
        "brw_speed",
        "success",
        duration_ms=(time.perf_counter() - start) * 1000,
        trials=trials,
        t_max=t_max,
    )
    return SpeedEstimate(
        t_max=t_max,
        trials=trials,
        mu_over_t=values,
        mean=mean,
        std_err=std_err,
        ci_low=mean - 1.96 * std_err,
        ci_high=mean + 1.96 * std_err,
        x0=speed.x0,
        degenerate=False,
        sound=all(run.sound for run in runs),
    )


def positivity_time(
    spec: BrwSpec,
    t_max: int,
    trials: int,
    seed: Optional[int],
    window: int = 5,
    prune_window: Optional[float] = None,
    threads: Optional[int] = None,
) -> PositivityResult:
    """Fraction of trials whose minimum stays >= 0 over generations t_max - window..t_max."""
    first = max(1, t_max - window)

    def run(k: int) -> bool:
        result = simulate_brw(spec, t_max, seed, prune_window, trial_index=k)
        return bool(all(s.mu >= 0 for s in result.snapshots if s.generation >= first))

    positive = np.array(map_trials(run, trials, threads), dtype=bool)
    return PositivityResult(t_max=t_max, window=window, trials=trials, positive=positive)


def fpp_reach(
    spec: BrwSpec,
    t: float,
    depth: int,
    trials: int,
    seed: Optional[int],
    threads: Optional[int] = None,
) -> ReachCounts:
    """
    Per-level counts of vertices whose passage time sum_path tau <= t, with
    tau_ij = eta_ij.

    Trees come from the same sampler as the exceedance counts on the
    environment exp(-tau), and passage times are summed from the sampled
    log labels, so a path time equal to t counts as reached.
    """
    env = brw_env(spec)
    check_tree_budget(env.b, depth)
    if spec.has_atomic_step:
        logger.info("fpp_atomic_steps", t=t, boundary="path times equal to t count as reached")

    def run(k: int) -> np.ndarray:
        tree = sample_tree(env, depth, seed, k, keep_levels=True)
        assert tree.levels is not None
        return np.array([int(np.count_nonzero(-lv.log_zeta <= t)) for lv in tree.levels])

    counts = np.vstack(map_trials(run, trials, threads))
    return ReachCounts(t=t, counts=counts)
