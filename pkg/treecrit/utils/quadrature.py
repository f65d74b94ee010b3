"""
Checked adaptive quadrature on top of scipy.integrate.quad.
"""

import math
import warnings
from typing import Callable, Optional, Tuple

from scipy import integrate

from ..core.config import get_settings
from ..core.exceptions import QuadratureError
from ..core.logging import get_logger

logger = get_logger(__name__)


def quad_checked(
    func: Callable[[float], float],
    a: float,
    b: float,
    *,
    alg_exponents: Optional[Tuple[float, float]] = None,
    rel_tol: Optional[float] = None,
    max_subdivisions: Optional[int] = None,
) -> float:
    """
    Integrate ``func`` over [a, b] to a relative tolerance.

    With ``alg_exponents = (alpha, beta)`` the integrand is multiplied by the
    algebraic weight (x - a)^alpha (b - x)^beta and the endpoint singularities
    are handled analytically by QUADPACK.

    Raises:
        QuadratureError: If the error estimate misses the tolerance by more
            than a factor 1e3, or the result is not finite
    """
    settings = get_settings()
    tol = rel_tol if rel_tol is not None else settings.QUAD_REL_TOL
    limit = max_subdivisions if max_subdivisions is not None else settings.QUAD_MAX_SUBDIVISIONS

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", integrate.IntegrationWarning)
        if alg_exponents is not None:
            value, abserr = integrate.quad(
                func, a, b, weight="alg", wvar=alg_exponents,
                epsabs=0.0, epsrel=tol, limit=limit,
            )
        else:
            value, abserr = integrate.quad(func, a, b, epsabs=0.0, epsrel=tol, limit=limit)

    if not math.isfinite(value):
        raise QuadratureError(f"quadrature on [{a:g}, {b:g}] returned {value}", abserr=abserr)

    if caught:
        # Round-off warnings are tolerated while abserr stays within 1e3 * tol
        scale = abs(value) if value != 0 else 1.0
        if abserr > 1e3 * tol * scale:
            raise QuadratureError(
                f"quadrature on [{a:g}, {b:g}] did not converge: "
                f"abserr {abserr:.3g} for value {value:.6g}",
                abserr=abserr,
            )
        logger.debug("quadrature_warning", a=a, b=b, abserr=abserr, message=str(caught[0].message))

    return float(value)
