"""
One-dimensional minimization and root bracketing.
"""

import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional

from ..core.config import get_settings
from ..core.exceptions import ConvergenceError, NoCrossingError

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class MinimizeResult:
    x: float
    fun: float
    evaluations: int


def golden_section_min(
    func: Callable[[float], float],
    a: float,
    b: float,
    tol: Optional[float] = None,
    max_iter: int = 500,
) -> MinimizeResult:
    """
    Minimize a unimodal ``func`` on [a, b] by golden-section search.

    Both endpoints are evaluated, so a monotone function returns the exact
    endpoint. Ties keep the left point, so flat minima resolve to the
    smallest x.
    """
    tol = tol if tol is not None else get_settings().GOLDEN_TOL
    if b < a:
        a, b = b, a
    cache: Dict[float, float] = {}

    def f(x: float) -> float:
        if x not in cache:
            cache[x] = float(func(x))
        return cache[x]

    lo, hi = a, b
    c = hi - INV_PHI * (hi - lo)
    d = lo + INV_PHI * (hi - lo)
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        if f(c) <= f(d):
            hi, d = d, c
            c = hi - INV_PHI * (hi - lo)
        else:
            lo, c = c, d
            d = lo + INV_PHI * (hi - lo)
    else:
        raise ConvergenceError(
            f"golden-section search did not reach width {tol:g} on [{a:g}, {b:g}]",
            method="golden_section",
            iterations=max_iter,
        )

    mid = 0.5 * (lo + hi)
    candidates = [a, mid, b] if a < b else [a]
    best = min(candidates, key=lambda x: (f(x), x))
    return MinimizeResult(x=best, fun=f(best), evaluations=len(cache))


def bisect_root(
    func: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float,
    max_iter: int = 200,
) -> float:
    """
    Locate a sign change of ``func`` on [lo, hi] to width ``tol``.

    Raises:
        NoCrossingError: If ``func`` has the same strict sign at both ends
    """
    if hi < lo:
        lo, hi = hi, lo
    f_lo, f_hi = func(lo), func(hi)
    if f_lo == 0:
        return lo
    if f_hi == 0:
        return hi
    if (f_lo > 0) == (f_hi > 0):
        raise NoCrossingError(
            f"no sign change on [{lo:g}, {hi:g}]: f(lo) = {f_lo:.6g}, f(hi) = {f_hi:.6g}",
            lo=lo,
            hi=hi,
        )
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        f_mid = func(mid)
        if f_mid == 0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
