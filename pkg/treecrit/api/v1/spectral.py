"""
Spectral endpoints: Perron root samples and the rate function.
"""

import math
from typing import List

from fastapi import APIRouter

from ...schemas.reports import RateFunctionPoint, RhoSample
from ...schemas.requests import RateFunctionRequest, RhoRequest
from ...services.environment import parse_env
from ...services.spectral import log_rho, rate_function, rho

router = APIRouter()


@router.post("/rho", response_model=List[RhoSample])
def rho_samples(request: RhoRequest) -> List[RhoSample]:
    """rho(s) and log rho(s) at every requested s."""
    env = parse_env(request.env)
    samples = []
    for s in request.s:
        value = rho(env, s)
        samples.append(
            RhoSample(s=s, rho=value if math.isfinite(value) else None, log_rho=log_rho(env, s))
        )
    return samples


@router.post("/rate-function", response_model=List[RateFunctionPoint])
def rate_function_points(request: RateFunctionRequest) -> List[RateFunctionPoint]:
    """
    Rate function at every requested z.

    Unbounded points come back with ``value`` null and ``unbounded`` true.
    """
    env = parse_env(request.env)
    points = []
    for z in request.z:
        point = rate_function(env, z)
        points.append(
            RateFunctionPoint(
                z=z,
                value=point.value if math.isfinite(point.value) else None,
                s0=point.s0,
                unbounded=point.unbounded,
            )
        )
    return points
