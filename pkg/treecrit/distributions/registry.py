"""
Label family registration and lookup.

Families register themselves with ``@register_family``; config parsing
resolves the ``kind`` field of each entry through the singleton registry.
"""

from typing import Any, Dict, List, Mapping, Optional, Type, TypeVar

from ..core.logging import get_logger
from .base import FamilyMetadata, LabelDistribution

logger = get_logger(__name__)

F = TypeVar("F", bound=Type[LabelDistribution])


class FamilyRegistry:
    """
    Central registry for all available label families.

    A singleton, so that families registered at import time are visible to
    every parser and to the CLI listing.
    """

    _instance: Optional["FamilyRegistry"] = None
    _families: Dict[str, Type[LabelDistribution]]

    def __new__(cls) -> "FamilyRegistry":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._families = {}
        return cls._instance

    def register(self, family_class: Type[LabelDistribution]) -> None:
        """
        Register a family class.

        Raises:
            ValueError: If the class is not a LabelDistribution or its kind is taken
        """
        if not issubclass(family_class, LabelDistribution):
            raise ValueError(f"{family_class.__name__} must inherit from LabelDistribution")

        metadata = getattr(family_class, "metadata", None)
        if not isinstance(metadata, FamilyMetadata):
            raise ValueError(f"{family_class.__name__} does not declare FamilyMetadata")

        existing = self._families.get(metadata.kind)
        if existing is not None and existing is not family_class:
            raise ValueError(
                f"family kind {metadata.kind!r} already registered by {existing.__name__}"
            )

        self._families[metadata.kind] = family_class
        logger.debug("family_registered", kind=metadata.kind, cls=family_class.__name__)

    def unregister(self, kind: str) -> None:
        self._families.pop(kind, None)

    def get(self, kind: str) -> Optional[Type[LabelDistribution]]:
        return self._families.get(kind)

    def build(self, payload: Mapping[str, Any]) -> LabelDistribution:
        """
        Validate a ``{"kind": ..., **params}`` mapping into a family instance.

        Raises:
            KeyError: If the kind is not registered
            pydantic.ValidationError: If the parameters are invalid
        """
        kind = payload.get("kind")
        family_class = self._families.get(str(kind))
        if family_class is None:
            raise KeyError(kind)
        return family_class.model_validate(dict(payload))

    def kinds(self) -> List[str]:
        return sorted(self._families)

    def list_families(self) -> List[FamilyMetadata]:
        return [self._families[k].metadata for k in self.kinds()]


def get_registry() -> FamilyRegistry:
    return FamilyRegistry()


def register_family(family_class: F) -> F:
    """Class decorator registering a family with the global registry."""
    get_registry().register(family_class)
    return family_class
