"""
Common schemas used across the application.
"""

from datetime import datetime, timezone
from typing import Any, Dict, Optional

from pydantic import BaseModel, Field


def _utcnow() -> datetime:
    return datetime.now(timezone.utc)


class ErrorResponse(BaseModel):
    """Standard error response."""

    error: str = Field(..., description="Error code")
    message: str = Field(..., description="Human-readable error message")
    details: Optional[Dict[str, Any]] = Field(None, description="Additional error details")
    timestamp: datetime = Field(default_factory=_utcnow)
    request_id: Optional[str] = Field(None, description="Request tracking ID")


class HealthCheckResponse(BaseModel):
    """Health check response."""

    status: str
    timestamp: datetime
    version: str
    components: Dict[str, Dict[str, Any]]
