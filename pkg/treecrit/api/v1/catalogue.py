"""
Catalogue endpoints: sweeps over the built-in environment families.
"""

from typing import Optional

from fastapi import APIRouter, Query

from ...models.verdicts import Target
from ...schemas.reports import SweepPoint, SweepResponse
from ...services.catalogue import get_family
from ...services.classifier import constant_table, find_critical_parameter

router = APIRouter()


@router.get("/{name}/sweep", response_model=SweepResponse)
def sweep(
    name: str,
    lo: Optional[float] = Query(None),
    hi: Optional[float] = Query(None),
    target: Optional[Target] = Query(None),
    points: int = Query(9, ge=2, le=201),
) -> SweepResponse:
    """Constant table over the family's parameter and the parameter where it crosses 1."""
    family = get_family(name)
    target = target or family.default_target
    default_lo, default_hi = family.default_range
    a, b = sorted((lo if lo is not None else default_lo, hi if hi is not None else default_hi))
    step = (b - a) / (points - 1)
    grid = [a + k * step for k in range(points)]
    table = constant_table(family.build, grid, target)
    root = find_critical_parameter(family.build, (a, b), target)
    return SweepResponse(
        family=family.name,
        target=target.value,
        root=root,
        points=[
            SweepPoint(param=float(p), value=float(v))
            for p, v in zip(table["param"], table[target.value])
        ],
    )
