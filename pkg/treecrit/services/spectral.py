"""
Spectral service: Perron root of the moment matrix and the constants built
on it.

rho(s) is the largest eigenvalue of m(s). Its log is convex in s, which
makes golden-section search sound for every one-dimensional problem here:

- lambda1 = inf of rho over [0, 1]
- lambda = inf of rho over [0, inf), searched up to S_MAX_BOUND
- Lambda(s) = log(rho(s) / b) and its Legendre transform (the rate function)
- x0, the root of inf_s e^{sx} rho(s) = 1 (branching-walk speed)
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, List, Optional, Tuple, Union

import numpy as np

from ..core.config import get_settings
from ..core.exceptions import ConvergenceError, DomainError, NoCrossingError, SpeedSearchError
from ..core.logging import get_logger
from ..models.environment import EnvSpec, MomentMatrix
from ..schemas.reports import RhoSample, SpectralReport
from ..utils.optimize import MinimizeResult, bisect_root, golden_section_min
from .environment import moment_matrix

logger = get_logger(__name__)

_TINY = np.finfo(float).tiny
_LIMIT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class PerronResult:
    """Perron root and its right eigenvector (normalized to sum 1)."""

    rho: float
    log_rho: float
    right_vector: np.ndarray
    iterations: int
    residual: float


@dataclass(frozen=True)
class SpectralConstant:
    value: float
    argmin: float
    attained_within_bound: bool = True

    @property
    def log_value(self) -> float:
        return math.log(self.value) if self.value > 0 else -math.inf


@dataclass(frozen=True)
class RatePoint:
    z: float
    value: float
    s0: float
    unbounded: bool = False


@dataclass(frozen=True)
class SpeedResult:
    x0: float
    degenerate: bool


def perron(
    m: Union[MomentMatrix, np.ndarray],
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
) -> PerronResult:
    """
    Power iteration on a strictly positive matrix.

    Iterates until successive Collatz quotients agree to ``tol`` relative
    and the residual ||A v - rho v||_inf is below PERRON_RESIDUAL_TOL * rho.
    A MomentMatrix is iterated in the log domain, shifted by its largest
    entry, so extreme exponents neither overflow nor underflow.

    Raises:
        DomainError: If an entry is not strictly positive and finite
        ConvergenceError: If the iteration cap is reached
    """
    settings = get_settings()
    tol = tol if tol is not None else settings.PERRON_TOL
    max_iter = max_iter if max_iter is not None else settings.PERRON_MAX_ITER

    if isinstance(m, MomentMatrix):
        log_a = np.asarray(m.log_values, dtype=float)
        if not np.all(np.isfinite(log_a)):
            raise DomainError("moment matrix has non-finite entries", s=m.s)
    else:
        arr = np.asarray(m, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DomainError(f"perron needs a square matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
            raise DomainError("perron needs a strictly positive finite matrix")
        log_a = np.log(arr)

    shift = float(log_a.max())
    a = np.maximum(np.exp(log_a - shift), _TINY)
    n = a.shape[0]
    v = np.full(n, 1.0 / n)
    r_prev = math.nan
    residual = math.inf

    for k in range(1, max_iter + 1):
        w = a @ v
        r = float(w.sum())
        v = w / r
        if abs(r - r_prev) <= tol * r:
            residual = float(np.max(np.abs(a @ v - r * v))) / r
            if residual <= settings.PERRON_RESIDUAL_TOL:
                log_r = math.log(r) + shift
                with np.errstate(over="ignore"):
                    rho_value = float(np.exp(log_r))
                return PerronResult(
                    rho=rho_value,
                    log_rho=log_r,
                    right_vector=v,
                    iterations=k,
                    residual=residual,
                )
        r_prev = r

    raise ConvergenceError(
        f"power iteration did not converge in {max_iter} iterations (residual {residual:.3g})",
        method="power_iteration",
        iterations=max_iter,
    )


@lru_cache(maxsize=65536)
def _log_rho_cached(env: EnvSpec, s: float) -> float:
    return perron(moment_matrix(env, s)).log_rho


def log_rho(env: EnvSpec, s: float) -> float:
    """log rho(s); s = 0 gives log b exactly."""
    if s == 0:
        return math.log(env.b)
    return _log_rho_cached(env, float(s))


def rho(env: EnvSpec, s: float) -> float:
    with np.errstate(over="ignore"):
        return float(np.exp(log_rho(env, s)))


def cgf(env: EnvSpec, s: float) -> float:
    """Lambda(s) = log rho(s) - log b."""
    return log_rho(env, s) - math.log(env.b)


def shifted_rho(env: EnvSpec, s: float, x: float) -> float:
    """e^{s x} rho(s)."""
    return math.exp(s * x + log_rho(env, s))


def _search_bound(env: EnvSpec, s_max: Optional[float]) -> Tuple[float, bool]:
    """Upper end of the s-search and whether the moment domain truncated it."""
    bound = s_max if s_max is not None else get_settings().S_MAX_BOUND
    hi = env.joint_domain.hi
    if hi < math.inf and (hi < bound or (hi == bound and not env.joint_domain.hi_closed)):
        if env.joint_domain.hi_closed:
            return hi, True
        return hi - 1e-9 * max(1.0, abs(hi)), True
    return bound, False


def _require(env: EnvSpec, lo: float, hi: float, what: str) -> None:
    dom = env.joint_domain
    if not (dom.computable(lo) and dom.computable(hi)):
        raise DomainError(
            f"{what} needs [{lo:g}, {hi:g}] inside the moment domain {dom.describe()}",
            interval=dom.computable_interval,
        )


def bracketed_min(
    func: Callable[[float], float], s_max: float, tol: Optional[float] = None
) -> Tuple[MinimizeResult, bool]:
    """
    Minimize a convex ``func`` over [0, s_max].

    The minimizer is bracketed by doubling from s = 1, then refined by
    golden section. Returns the result and whether the minimum is attained
    inside the bound; when ``func`` still decreases at s_max the result is
    ``func(s_max)`` with attained False.
    """
    f0, f1 = func(0.0), func(min(1.0, s_max))
    if f1 >= f0 or s_max <= 1.0:
        return golden_section_min(func, 0.0, min(1.0, s_max), tol), True

    left, mid, right = 0.0, 1.0, 2.0
    f_mid = f1
    while right < s_max:
        f_right = func(right)
        if f_right >= f_mid:
            return golden_section_min(func, left, right, tol), True
        left, mid, right, f_mid = mid, right, 2.0 * right, f_right

    f_end = func(s_max)
    delta = 1e-6 * s_max
    if f_end < func(s_max - delta):
        return MinimizeResult(x=s_max, fun=f_end, evaluations=0), False
    return golden_section_min(func, left, s_max, tol), True


def lambda1(env: EnvSpec) -> SpectralConstant:
    """lambda1 = inf of rho(s) over s in [0, 1], with its argmin."""
    _require(env, 0.0, 1.0, "lambda1")
    res = golden_section_min(lambda s: log_rho(env, s), 0.0, 1.0)
    return SpectralConstant(value=math.exp(res.fun), argmin=res.x)


def lambda_inf(env: EnvSpec, s_max: Optional[float] = None) -> SpectralConstant:
    """
    lambda = inf of rho(s) over s >= 0, searched on [0, s_max].

    When log rho is still decreasing at the bound the value is rho(s_max)
    and ``attained_within_bound`` is False.
    """
    bound, truncated = _search_bound(env, s_max)
    _require(env, 0.0, bound, "lambda")
    res, attained = bracketed_min(lambda s: log_rho(env, s), bound)
    if truncated and not attained:
        logger.warning("lambda_search_truncated_by_domain", bound=bound)
    return SpectralConstant(value=math.exp(res.fun), argmin=res.x, attained_within_bound=attained)


def max_cycle_mean(weights: np.ndarray) -> float:
    """Largest mean edge weight over the cycles of a complete digraph (Karp)."""
    n = weights.shape[0]
    walks = np.full((n + 1, n), -np.inf)
    walks[0] = 0.0
    for k in range(1, n + 1):
        walks[k] = np.max(walks[k - 1][:, None] + weights, axis=0)
    return float(
        max(min((walks[n, v] - walks[k, v]) / (n - k) for k in range(n)) for v in range(n))
    )


def _critical_limit_matrix(weights: np.ndarray, mass: np.ndarray) -> np.ndarray:
    """
    Entrywise limit of D m(s) D^-1 when the maximum cycle mean is zero.

    D = diag(e^{-s v}) with v_i the heaviest path weight from i to a node on
    a zero-mean cycle. Rescaled entries whose supremum lands on 1 tend to
    the mass there; the rest vanish.
    """
    n = weights.shape[0]
    star = np.where(np.eye(n, dtype=bool), 0.0, weights)
    for k in range(n):
        star = np.maximum(star, star[:, [k]] + star[[k], :])
    cycles = np.max(weights + star.T, axis=1)
    node = int(np.argmax(cycles))
    v = star[:, node]
    tight = np.abs(weights + v[None, :] - v[:, None]) <= _LIMIT_TOL
    return np.where(tight, mass, 0.0)


def rho_limit(env: EnvSpec) -> Optional[float]:
    """
    lim rho(s) as s -> inf, or None when rho eventually grows.

    log rho(s) / s tends to the maximum cycle mean of the log essential
    suprema: a negative rate sends rho to 0, a zero rate leaves the mass
    sitting on the suprema.
    """
    if env.joint_domain.hi < math.inf:
        return None
    sups = [[dist.log_sup() for dist in row] for row in env.entries]
    weights = np.array([[w for w, _ in row] for row in sups])
    if not np.all(np.isfinite(weights)):
        return None
    rate = max_cycle_mean(weights)
    if rate < -_LIMIT_TOL:
        return 0.0
    if rate > _LIMIT_TOL:
        return None
    mass = np.array([[p for _, p in row] for row in sups])
    limit = _critical_limit_matrix(weights, mass)
    return float(np.max(np.abs(np.linalg.eigvals(limit))))


def lambda_infimum(env: EnvSpec, lam: Optional[SpectralConstant] = None) -> Optional[float]:
    """
    inf of rho(s) over all s >= 0, also when the search stopped at its bound.

    A search cut short by the moment domain already sits at the infimum.
    Otherwise rho decreases for ever and the infimum is its limit. None
    when neither pins the value down.
    """
    lam = lam if lam is not None else lambda_inf(env)
    if lam.attained_within_bound:
        return lam.value
    if _search_bound(env, None)[1]:
        return lam.value
    return rho_limit(env)


def _fd_derivative(env: EnvSpec, func: Callable[[float], float], s: float, step: float) -> float:
    """Central difference, or second-order one-sided where the domain stops short."""
    if env.joint_domain.computable(s - step):
        return (func(s + step) - func(s - step)) / (2.0 * step)
    return (-3.0 * func(s) + 4.0 * func(s + step) - func(s + 2.0 * step)) / (2.0 * step)


def cgf_derivative(env: EnvSpec, s: float, step: Optional[float] = None) -> float:
    step = step if step is not None else get_settings().FD_STEP
    return _fd_derivative(env, lambda t: cgf(env, t), s, step)


def mean_log_drift(env: EnvSpec) -> float:
    """Average of E log xi_ij over all b^2 entries."""
    return math.fsum(dist.mean_log() for _, _, dist in env.iter_entries()) / env.b**2


def drift(env: EnvSpec) -> float:
    """
    Lambda'(0) by finite differences.

    Cross-checked against the mean log label under uniform colours; a
    disagreement is logged, never silently corrected.
    """
    dom = env.joint_domain
    if not dom.contains(0.0) or not dom.computable(get_settings().FD_STEP):
        raise DomainError("drift needs 0 inside the moment domain", interval=dom.computable_interval)
    value = cgf_derivative(env, 0.0)
    reference = mean_log_drift(env)
    if abs(value - reference) > 1e-6 * max(1.0, abs(reference)):
        logger.warning("drift_cross_check_mismatch", finite_difference=value, mean_log=reference)
    return value


def rate_function(env: EnvSpec, z: float, s_max: Optional[float] = None) -> RatePoint:
    """
    Lambda*(z) = sup_{s >= 0} [s z - Lambda(s)].

    Zero for z at or below the drift. A maximizer pinned at the search bound
    means the supremum is unbounded and the value is +inf.
    """
    d = drift(env)
    if z <= d:
        return RatePoint(z=z, value=0.0, s0=0.0)
    bound, _ = _search_bound(env, s_max)
    _require(env, 0.0, bound, "rate_function")
    res, attained = bracketed_min(lambda s: cgf(env, s) - s * z, bound)
    if not attained:
        return RatePoint(z=z, value=math.inf, s0=bound, unbounded=True)
    return RatePoint(z=z, value=max(0.0, -res.fun), s0=res.x)


def rate_function_grid(env: EnvSpec, zs: Iterable[float]) -> List[RatePoint]:
    return [rate_function(env, float(z)) for z in zs]


def _shifted_log_inf(env: EnvSpec, x: float, bound: float) -> MinimizeResult:
    res, _ = bracketed_min(lambda s: s * x + log_rho(env, s), bound)
    return res


def lambda_shifted(env: EnvSpec, x: float, s_max: Optional[float] = None) -> SpectralConstant:
    """inf over s >= 0 of e^{s x} rho(s)."""
    bound, _ = _search_bound(env, s_max)
    res, attained = bracketed_min(lambda s: s * x + log_rho(env, s), bound)
    return SpectralConstant(value=math.exp(res.fun), argmin=res.x, attained_within_bound=attained)


def is_degenerate(env: EnvSpec, threshold: Optional[float] = None) -> bool:
    """True when log rho shows no strict convexity at five sampled points."""
    threshold = threshold if threshold is not None else get_settings().DEGENERACY_THRESHOLD
    h = 0.25
    points = (0.25, 0.5, 0.75, 1.0, 1.25)
    second = [log_rho(env, s - h) - 2.0 * log_rho(env, s) + log_rho(env, s + h) for s in points]
    return all(d <= threshold for d in second)


def speed_x0(
    env: EnvSpec,
    search: Optional[Tuple[float, float]] = None,
    tol: Optional[float] = None,
) -> SpeedResult:
    """
    Speed x0 of the branching walk with labels e^{-eta}.

    x0 solves g(x) = inf_s (s x + log rho(s)) = 0. A degenerate walk (log rho
    linear) has the jump location -d log rho / ds as its speed.

    Raises:
        SpeedSearchError: If g has no sign change on the search interval
    """
    settings = get_settings()
    lo, hi = search if search is not None else (settings.SPEED_SEARCH_LO, settings.SPEED_SEARCH_HI)
    tol = tol if tol is not None else settings.SPEED_TOL
    bound, _ = _search_bound(env, None)
    _require(env, 0.0, bound, "speed_x0")

    if is_degenerate(env):
        slope = (log_rho(env, 1.0) - log_rho(env, 0.5)) / 0.5
        return SpeedResult(x0=-slope, degenerate=True)

    def g(x: float) -> float:
        return _shifted_log_inf(env, x, bound).fun

    try:
        x0 = bisect_root(g, lo, hi, tol)
    except NoCrossingError as e:
        raise SpeedSearchError(lo, hi, g(lo), g(hi)) from e
    logger.debug("speed_located", x0=x0)
    return SpeedResult(x0=x0, degenerate=False)


def optimal_block_threshold(env: EnvSpec) -> Tuple[float, float]:
    """
    y* in (0, 1] maximizing inf_{s >= 0} rho(s) y^{1-s}, and the maximum.

    The objective is concave in u = log y, so golden section over u in
    [-40, 0] applies. The maximum equals lambda1 whenever lambda1 > 1.
    """
    bound, _ = _search_bound(env, None)
    _require(env, 0.0, bound, "optimal_block_threshold")

    def neg_h(u: float) -> float:
        res, _ = bracketed_min(lambda s: log_rho(env, s) + (1.0 - s) * u, bound)
        return -res.fun

    res = golden_section_min(neg_h, -40.0, 0.0)
    return math.exp(res.x), math.exp(-res.fun)


def spectral_report(
    env: EnvSpec, samples: Iterable[float] = (0.0, 0.5, 1.0, 2.0)
) -> SpectralReport:
    l1 = lambda1(env)
    lam = lambda_inf(env)
    points = [
        RhoSample(s=s, rho=rho(env, s), log_rho=log_rho(env, s))
        for s in samples
        if env.joint_domain.computable(s)
    ]
    return SpectralReport(
        lambda1=l1.value,
        lambda1_argmin=l1.argmin,
        lambda_=lam.value,
        lambda_argmin=lam.argmin,
        attained_within_bound=lam.attained_within_bound,
        s_max_bound=_search_bound(env, None)[0],
        drift=drift(env),
        degenerate=is_degenerate(env),
        rho_samples=points,
    )
