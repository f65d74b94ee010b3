"""
Pydantic schemas for reports and API responses.
"""

from . import common, reports, requests

__all__ = ["common", "reports", "requests"]
