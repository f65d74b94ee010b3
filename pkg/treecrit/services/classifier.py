"""
Classifier service: turns lambda1 and lambda into finiteness verdicts.

Y is finite when lambda1 < 1 and infinite when lambda1 > 1; Z(x) likewise
with lambda, for every x > 0. Values within ``eps_critical`` of 1 are
reported as Critical. Infinite verdicts need the regularity conditions and
are downgraded to Indeterminate when those fail.
"""

import math
from typing import Callable, Iterable, List, Optional, Tuple

import pandas as pd

from ..core.config import get_settings
from ..core.logging import get_logger
from ..models.environment import EnvSpec
from ..models.verdicts import RDE_BY_REGIME, RWRE_BY_REGIME, Regime, Target
from ..schemas.reports import RegimeReport, SpeedVerdict
from ..utils.optimize import bisect_root
from .environment import check_regularity
from .spectral import SpectralConstant, lambda1, lambda_inf, lambda_infimum, speed_x0

logger = get_logger(__name__)

EnvBuilder = Callable[[float], EnvSpec]


def regime_of(value: float, eps_critical: float, regular: bool = True) -> Regime:
    if value < 1.0 - eps_critical:
        return Regime.FINITE
    if value > 1.0 + eps_critical:
        return Regime.INFINITE if regular else Regime.INDETERMINATE
    return Regime.CRITICAL


def classify(
    env: EnvSpec,
    eps_critical: Optional[float] = None,
    include_speed: bool = False,
) -> RegimeReport:
    """
    Regime verdicts for Y and Z plus the application verdicts.

    Raises:
        DomainError: If the spectral constants cannot be computed
    """
    eps = eps_critical if eps_critical is not None else get_settings().EPS_CRITICAL
    l1 = lambda1(env)
    lam = lambda_inf(env)
    report = check_regularity(env)
    warnings: List[str] = []

    if not report.all_passed:
        failing = ", ".join(sorted(report.failing))
        warnings.append(
            f"regularity conditions fail ({failing}); Infinite verdicts are reported as Indeterminate"
        )
    infimum = lambda_infimum(env, lam)
    if not lam.attained_within_bound:
        if infimum is None:
            warnings.append(
                f"rho(s) still decreasing at s = {lam.argmin:g} and its limit is unknown; "
                "lambda is an upper bound"
            )
        else:
            warnings.append(
                f"rho(s) still decreasing at s = {lam.argmin:g}; lambda is its limit {infimum:g}"
            )

    y_regime = regime_of(l1.value, eps, report.all_passed)
    if infimum is not None:
        z_regime = regime_of(infimum, eps, report.all_passed)
    elif lam.value < 1.0 - eps:
        z_regime = Regime.FINITE
    else:
        z_regime = Regime.INDETERMINATE
    lam_value = infimum if infimum is not None else lam.value

    speed = None
    if include_speed:
        result = speed_x0(env)
        speed = SpeedVerdict(x0=result.x0, degenerate=result.degenerate)

    logger.info(
        "env_classified",
        lambda1=l1.value,
        lam=lam_value,
        y_regime=y_regime.value,
        z_regime=z_regime.value,
    )
    return RegimeReport(
        y_regime=y_regime,
        z_regime=z_regime,
        lambda1=l1.value,
        lambda1_argmin=l1.argmin,
        lambda_=lam_value,
        lambda_argmin=lam.argmin,
        lambda_attained=lam.attained_within_bound,
        critical_band=eps,
        rwre=RWRE_BY_REGIME[y_regime],
        rde=RDE_BY_REGIME[y_regime],
        fpp_finite=z_regime,
        brw_speed=speed,
        regularity=report.to_dict(),
        warnings=warnings,
    )


def spectral_constant(env: EnvSpec, target: Target) -> SpectralConstant:
    if target is Target.LAMBDA1:
        return lambda1(env)
    return lambda_inf(env)


def find_critical_parameter(
    family: EnvBuilder,
    param_range: Tuple[float, float],
    target: Target = Target.LAMBDA1,
    tol: Optional[float] = None,
) -> float:
    """
    Parameter at which the target constant crosses 1, by bisection.

    The range may be given in either order.

    Raises:
        NoCrossingError: If the constant minus 1 has the same sign at both ends
    """
    tol = tol if tol is not None else get_settings().BISECTION_TOL
    lo, hi = sorted(param_range)

    def log_constant(p: float) -> float:
        return math.log(spectral_constant(family(p), target).value)

    root = bisect_root(log_constant, lo, hi, tol)
    logger.info("critical_parameter_found", target=target.value, root=root, lo=lo, hi=hi)
    return root


def constant_table(family: EnvBuilder, grid: Iterable[float], target: Target) -> pd.DataFrame:
    """The (param, constant) table over ``grid``, sorted by param."""
    params = sorted(float(p) for p in grid)
    values = [spectral_constant(family(p), target).value for p in params]
    return pd.DataFrame({"param": params, target.value: values})
