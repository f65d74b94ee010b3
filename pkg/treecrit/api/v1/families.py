"""
Label family endpoints.
Lists the registered edge-label families and their capabilities.
"""

from typing import List

from fastapi import APIRouter

from ...distributions import get_registry
from ...schemas.reports import FamilyInfo

router = APIRouter()


@router.get("", response_model=List[FamilyInfo])
def list_families() -> List[FamilyInfo]:
    """List all registered label families."""
    return [
        FamilyInfo(
            kind=meta.kind,
            parameters=meta.parameters,
            description=meta.description,
            capabilities=[c.name.lower() for c in meta.capabilities],
        )
        for meta in get_registry().list_families()
    ]
