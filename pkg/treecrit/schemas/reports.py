"""
Report schemas: spectral constants, regime verdicts, run manifests.
"""

from datetime import datetime
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from ..models.verdicts import Regime, RdeVerdict, RwreVerdict


class RhoSample(BaseModel):
    s: float
    rho: Optional[float]
    log_rho: float


class SpectralReport(BaseModel):
    """Spectral constants of one environment."""

    model_config = ConfigDict(populate_by_name=True)

    lambda1: float = Field(..., description="inf of rho(s) over s in [0, 1]")
    lambda1_argmin: float
    lambda_: float = Field(..., alias="lambda", description="inf of rho(s) over s >= 0")
    lambda_argmin: float
    attained_within_bound: bool
    s_max_bound: float
    drift: float = Field(..., description="derivative of log(rho(s)/b) at s = 0")
    degenerate: bool = Field(..., description="rho is not strictly log-convex")
    rho_samples: List[RhoSample] = Field(default_factory=list)


class SpeedVerdict(BaseModel):
    x0: float
    degenerate: bool


class RegimeReport(BaseModel):
    """Finiteness verdicts for Y and Z plus the application verdicts."""

    model_config = ConfigDict(populate_by_name=True)

    y_regime: Regime
    z_regime: Regime
    lambda1: float
    lambda1_argmin: float
    lambda_: float = Field(..., alias="lambda")
    lambda_argmin: float
    lambda_attained: bool
    critical_band: float
    rwre: RwreVerdict
    rde: RdeVerdict
    fpp_finite: Regime
    brw_speed: Optional[SpeedVerdict] = None
    regularity: Dict[str, Any] = Field(default_factory=dict)
    warnings: List[str] = Field(default_factory=list)


class RateFunctionPoint(BaseModel):
    """One point of the rate function; ``value`` is None when unbounded."""

    z: float
    value: Optional[float]
    s0: Optional[float]
    unbounded: bool = False


class FamilyInfo(BaseModel):
    kind: str
    parameters: List[str]
    description: str
    capabilities: List[str]


class SweepPoint(BaseModel):
    param: float
    value: float


class SweepResponse(BaseModel):
    family: str
    target: str
    root: float
    points: List[SweepPoint]


class RunManifest(BaseModel):
    """Everything needed to reproduce one CLI run."""

    command: str
    argv: List[str]
    config: Dict[str, Any]
    seed: Optional[int] = None
    version: str
    started_at: datetime
    wall_clock_seconds: float
    outputs: Dict[str, str] = Field(default_factory=dict, description="path -> sha256")
