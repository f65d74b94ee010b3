"""
Edge-label distribution families.

Importing this package registers the built-in families.
"""

from . import families  # noqa: F401
from .base import FamilyCapabilities, FamilyMetadata, LabelDistribution, MomentDomain
from .registry import FamilyRegistry, get_registry, register_family

__all__ = [
    "FamilyCapabilities",
    "FamilyMetadata",
    "FamilyRegistry",
    "LabelDistribution",
    "MomentDomain",
    "get_registry",
    "register_family",
]
