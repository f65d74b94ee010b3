"""
Random walk in random environment on the b-ary tree.

Vertex (n, k) is the k-th vertex of level n; its children are
(n + 1, k * b + i) for i = 0..b-1 and child i has colour i + 1. Each vertex
carries a jump vector p(u) = (p_down, p_child1, ..., p_childb) drawn from
the law of its colour. At the root the down move is a self-loop.

Conductances follow the product formula
    C(u_{n-1}, u_n) = prod_{i<n} p(u_i -> u_{i+1}) / p(u_i -> down)
with the root loop set to 1, which makes C(u, v) / sum_w C(u, w) = p(u -> v).
"""

import time
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np
import pandas as pd

from ..core.config import get_settings
from ..core.exceptions import DomainError
from ..core.logging import get_logger, log_simulation_activity
from ..models.environment import EnvSpec
from ..models.rwre import RwreSpec
from ..models.verdicts import Target
from ..utils.concurrency import map_trials
from ..utils.resources import check_budget
from ..utils.rng import STREAM_ENVIRONMENT, STREAM_WALK, trial_rng
from .catalogue import sec51_env
from .classifier import constant_table, find_critical_parameter
from .environment import env_from_rwre

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class RealizedEnvironment:
    """Jump vectors to a depth: ``jumps[n]`` has shape (b^n, b + 1)."""

    b: int
    root_color: int
    jumps: List[np.ndarray]

    @property
    def depth(self) -> int:
        return len(self.jumps) - 1

    def colours(self, n: int) -> np.ndarray:
        if n == 0:
            return np.array([self.root_color])
        return np.tile(np.arange(1, self.b + 1), self.b ** (n - 1))


@dataclass(frozen=True, eq=False)
class StationaryCheck:
    stationary: np.ndarray
    conductance_weights: np.ndarray
    max_abs_diff: float


@dataclass
class WalkStats:
    steps: int
    root_visits: int
    max_depth: int
    final_depth: int
    cut_depth: int
    occupation: Dict[Tuple[int, int], int] = field(default_factory=dict)
    depth_histogram: List[int] = field(default_factory=list)
    beyond_cut: int = 0

    def time_within(self, depth: int) -> float:
        """Fraction of the steps + 1 visited positions at depth <= ``depth``."""
        return sum(self.depth_histogram[: depth + 1]) / (self.steps + 1)

    def to_dict(self) -> Dict[str, object]:
        return {
            "steps": self.steps,
            "root_visits": self.root_visits,
            "max_depth": self.max_depth,
            "final_depth": self.final_depth,
            "cut_depth": self.cut_depth,
            "beyond_cut": self.beyond_cut,
            "depth_histogram": list(self.depth_histogram),
        }


@dataclass(frozen=True, eq=False)
class SweepResult:
    table: pd.DataFrame
    root: float


def induced_env(spec: RwreSpec) -> EnvSpec:
    """Environment of the ratios p_childj / p_down, sibling_mode rwre_joint."""
    return env_from_rwre(spec)


def sample_environment(spec: RwreSpec, depth: int, seed: Optional[int]) -> RealizedEnvironment:
    """
    Independent p(u) at every vertex to ``depth``.

    Raises:
        BudgetExceededError: If the vertex count exceeds MAX_TREE_VERTICES
    """
    b = spec.b
    check_budget("rwre vertices", float(b) ** (depth + 1), get_settings().MAX_TREE_VERTICES)
    rng = trial_rng(seed, 0, STREAM_ENVIRONMENT)
    jumps = [spec.law(spec.root_color).sample(rng, 1)]
    for n in range(1, depth + 1):
        level = np.empty((b**n, b + 1))
        for i in range(b):
            # child position i carries colour i + 1
            level[i::b] = spec.law(i + 1).sample(rng, b ** (n - 1))
        jumps.append(level)
    return RealizedEnvironment(b=b, root_color=spec.root_color, jumps=jumps)


def conductances(env: RealizedEnvironment, depth: Optional[int] = None) -> List[np.ndarray]:
    """
    Edge conductances by level: ``C[n][k]`` is C on the edge into vertex (n, k).

    ``C[0]`` holds the root loop, fixed at 1.
    """
    depth = env.depth if depth is None else depth
    if depth > env.depth:
        raise DomainError(f"environment realized to depth {env.depth}, asked for {depth}")
    out = [np.ones(1)]
    for n in range(1, depth + 1):
        parent = env.jumps[n - 1]
        ratios = parent[:, 1:] / parent[:, :1]
        out.append((out[-1][:, None] * ratios).ravel())
    return out


def balance_residual(env: RealizedEnvironment, cond: Optional[List[np.ndarray]] = None) -> float:
    """max |C(u, v) / C_u - p(u -> v)| over interior vertices and all moves."""
    cond = cond if cond is not None else conductances(env)
    b = env.b
    worst = 0.0
    for n in range(len(cond) - 1):
        down = cond[n]
        children = cond[n + 1].reshape(-1, b)
        total = down + children.sum(axis=1)
        implied = np.column_stack([down / total, children / total[:, None]])
        worst = max(worst, float(np.max(np.abs(implied - env.jumps[n]))))
    return worst


def _flat_index(b: int, n: int, k: int) -> int:
    return (b**n - 1) // (b - 1) + k


def truncated_stationary(env: RealizedEnvironment, depth: int) -> StationaryCheck:
    """
    Stationary law of the walk truncated at ``depth`` with reflecting leaves,
    against the normalized conductance weights C_x.
    """
    b = env.b
    cond = conductances(env, depth)
    size = (b ** (depth + 1) - 1) // (b - 1)
    P = np.zeros((size, size))
    weights = np.zeros(size)
    for n in range(depth + 1):
        for k in range(b**n):
            u = _flat_index(b, n, k)
            parent = 0 if n == 0 else _flat_index(b, n - 1, k // b)
            weights[u] += cond[n][k]
            if n == depth:
                P[u, parent] = 1.0
                continue
            p = env.jumps[n][k]
            P[u, parent] += p[0]
            for i in range(b):
                child = _flat_index(b, n + 1, k * b + i)
                P[u, child] = p[i + 1]
                weights[u] += cond[n + 1][k * b + i]
    # pi (P - I) = 0 with sum(pi) = 1
    system = np.vstack([(P - np.eye(size)).T, np.ones(size)])
    rhs = np.zeros(size + 1)
    rhs[-1] = 1.0
    pi, *_ = np.linalg.lstsq(system, rhs, rcond=None)
    weights = weights / weights.sum()
    return StationaryCheck(
        stationary=pi,
        conductance_weights=weights,
        max_abs_diff=float(np.max(np.abs(pi - weights))),
    )


def simulate_walk(
    spec: RwreSpec,
    steps: int,
    seed: Optional[int],
    cut_depth: int = 10,
    trial_index: int = 0,
) -> WalkStats:
    """
    One walk of ``steps`` steps from the root.

    The environment is realized lazily on first visit and reused on every
    revisit; it draws from its own stream so the walk's uniforms do not
    shift when the set of visited vertices changes.
    """
    check_budget("walk steps", float(steps), float(get_settings().MAX_WALK_STEPS))
    b = spec.b
    env_rng = trial_rng(seed, trial_index, STREAM_ENVIRONMENT)
    walk_rng = trial_rng(seed, trial_index, STREAM_WALK)
    cache: Dict[Tuple[int, int], np.ndarray] = {}

    def jumps_at(n: int, k: int) -> np.ndarray:
        key = (n, k)
        p = cache.get(key)
        if p is None:
            colour = spec.root_color if n == 0 else k % b + 1
            p = np.cumsum(spec.law(colour).sample(env_rng, 1)[0])
            cache[key] = p
        return p

    n, k = 0, 0
    stats = WalkStats(steps=steps, root_visits=1, max_depth=0, final_depth=0, cut_depth=cut_depth)
    histogram = [1]
    stats.occupation[(0, 0)] = 1
    uniforms = walk_rng.random(steps)

    for t in range(steps):
        cum = jumps_at(n, k)
        move = int(np.searchsorted(cum, uniforms[t] * cum[-1], side="right"))
        move = min(move, b)
        if move == 0:
            if n > 0:
                n, k = n - 1, k // b
        else:
            n, k = n + 1, k * b + (move - 1)
        if n == 0:
            stats.root_visits += 1
        if n >= len(histogram):
            histogram.append(0)
        histogram[n] += 1
        if n <= cut_depth:
            stats.occupation[(n, k)] = stats.occupation.get((n, k), 0) + 1
        else:
            stats.beyond_cut += 1

    stats.max_depth = len(histogram) - 1
    stats.final_depth = n
    stats.depth_histogram = histogram
    return stats


def simulate_walks(
    spec: RwreSpec,
    steps: int,
    walks: int,
    seed: Optional[int],
    cut_depth: int = 10,
    threads: Optional[int] = None,
) -> List[WalkStats]:
    start = time.perf_counter()
    results = map_trials(
        lambda k: simulate_walk(spec, steps, seed, cut_depth, trial_index=k), walks, threads
    )
    log_simulation_activity(
        "rwre_walk",
        "success",
        duration_ms=(time.perf_counter() - start) * 1000,
        trials=walks,
        steps=steps,
    )
    return results


def walks_frame(stats: Iterable[WalkStats]) -> pd.DataFrame:
    rows = [{"walk": i, **{k: v for k, v in s.to_dict().items() if k != "depth_histogram"}}
            for i, s in enumerate(stats)]
    return pd.DataFrame(rows)


def hcr_sweep(h_grid: Iterable[float], target: Target = Target.LAMBDA1) -> SweepResult:
    """
    lambda1(h) over ``h_grid`` for the binary example family, and the
    critical h where it crosses 1.
    """
    grid = sorted(float(h) for h in h_grid)
    if not grid or grid[0] <= 0 or grid[-1] >= 1:
        raise DomainError("h grid must be non-empty and inside (0, 1)")
    table = constant_table(sec51_env, grid, target).rename(columns={"param": "h"})
    root = find_critical_parameter(sec51_env, (grid[0], grid[-1]), target)
    return SweepResult(table=table, root=root)
