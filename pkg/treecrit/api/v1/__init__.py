"""
API v1 router aggregation.
Combines all API endpoints into a single router.
"""

from fastapi import APIRouter

from .catalogue import router as catalogue_router
from .classify import router as classify_router
from .families import router as families_router
from .spectral import router as spectral_router

api_router = APIRouter()

api_router.include_router(families_router, prefix="/families", tags=["Families"])
api_router.include_router(classify_router, prefix="/classify", tags=["Classify"])
api_router.include_router(spectral_router, prefix="/spectral", tags=["Spectral"])
api_router.include_router(catalogue_router, prefix="/catalogue", tags=["Catalogue"])


__all__ = ["api_router"]
