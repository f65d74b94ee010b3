"""
Request bodies for the HTTP API.
"""

from typing import Any, Dict, List

from pydantic import BaseModel, Field


class RhoRequest(BaseModel):
    env: Dict[str, Any] = Field(..., description="environment config, as in the JSON file format")
    s: List[float] = Field(..., min_length=1)


class RateFunctionRequest(BaseModel):
    env: Dict[str, Any]
    z: List[float] = Field(..., min_length=1)
