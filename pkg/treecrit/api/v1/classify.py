"""
Classification endpoint.
"""

from typing import Any, Dict, Optional

from fastapi import APIRouter, Body, Query

from ...core.logging import get_logger
from ...schemas.reports import RegimeReport
from ...services.classifier import classify
from ...services.environment import parse_env

router = APIRouter()
logger = get_logger(__name__)


@router.post("", response_model=RegimeReport, response_model_by_alias=True)
def classify_env(
    config: Dict[str, Any] = Body(..., description="environment config"),
    eps_critical: Optional[float] = Query(None, gt=0),
    include_speed: bool = Query(False),
) -> RegimeReport:
    """Regime verdicts for the posted environment."""
    env = parse_env(config)
    return classify(env, eps_critical=eps_critical, include_speed=include_speed)
