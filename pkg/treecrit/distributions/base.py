"""
Base classes for the edge-label distribution plug-in system.

Every family is a frozen pydantic model identified by its ``kind`` field.
Families report a moment domain, evaluate log E[xi^s], the mean of log xi,
and draw samples from an explicit numpy Generator.
"""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum, auto
from typing import ClassVar, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from ..core.exceptions import DomainError


class FamilyCapabilities(Enum):
    """Capabilities that a label family may support."""

    CLOSED_FORM = auto()  # Moments in closed form
    QUADRATURE = auto()  # Moments by adaptive quadrature
    ATOMIC = auto()  # Law has atoms, so ties occur with positive probability


@dataclass(frozen=True)
class MomentDomain:
    """
    Interval D of exponents s for which E[xi^s] is finite.

    ``computable_lo`` narrows the left end to where the numerical method is
    trusted, which may be stricter than the theoretical domain.
    """

    lo: float = -math.inf
    hi: float = math.inf
    lo_closed: bool = False
    hi_closed: bool = False
    computable_lo: Optional[float] = None

    def contains(self, s: float) -> bool:
        above = s >= self.lo if self.lo_closed else s > self.lo
        below = s <= self.hi if self.hi_closed else s < self.hi
        return bool(above and below)

    def interior_contains(self, s: float) -> bool:
        return bool(self.lo < s < self.hi)

    def computable(self, s: float) -> bool:
        if not self.contains(s):
            return False
        return self.computable_lo is None or s >= self.computable_lo

    def covers(self, a: float, b: float) -> bool:
        """True when the closed interval [a, b] lies inside D."""
        return self.contains(a) and self.contains(b)

    @property
    def computable_interval(self) -> Tuple[float, float]:
        lo = self.lo if self.computable_lo is None else max(self.lo, self.computable_lo)
        return (lo, self.hi)

    def intersect(self, other: "MomentDomain") -> "MomentDomain":
        if self.lo > other.lo:
            lo, lo_closed = self.lo, self.lo_closed
        elif other.lo > self.lo:
            lo, lo_closed = other.lo, other.lo_closed
        else:
            lo, lo_closed = self.lo, self.lo_closed and other.lo_closed
        if self.hi < other.hi:
            hi, hi_closed = self.hi, self.hi_closed
        elif other.hi < self.hi:
            hi, hi_closed = other.hi, other.hi_closed
        else:
            hi, hi_closed = self.hi, self.hi_closed and other.hi_closed
        limits = [c for c in (self.computable_lo, other.computable_lo) if c is not None]
        return MomentDomain(lo, hi, lo_closed, hi_closed, max(limits) if limits else None)

    def describe(self) -> str:
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{self.lo:g}, {self.hi:g}{right}"


@dataclass
class FamilyMetadata:
    """Metadata about a label family, used by the registry and the CLI."""

    kind: str
    parameters: List[str]
    description: str
    capabilities: List[FamilyCapabilities] = field(default_factory=list)

    def supports(self, capability: FamilyCapabilities) -> bool:
        return capability in self.capabilities


class LabelDistribution(BaseModel, ABC):
    """
    Abstract base class for positive edge-label laws.

    Subclasses implement ``_log_moment``; the public ``log_moment`` checks the
    domain and pins the s = 0 value to exactly zero.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    metadata: ClassVar[FamilyMetadata]

    @abstractmethod
    def domain(self) -> MomentDomain:
        """Moment domain D of this law."""

    @abstractmethod
    def _log_moment(self, s: float) -> float:
        """log E[xi^s] for s inside the computable domain, s != 0."""

    @abstractmethod
    def mean_log(self) -> float:
        """E[log xi]."""

    @abstractmethod
    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Draw ``size`` independent labels."""

    def sample_log(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Draw ``size`` independent values of log xi."""
        return np.log(self.sample(rng, size))

    def log_sup(self) -> Tuple[float, float]:
        """log of the essential supremum of xi and the probability sitting on it."""
        return math.inf, 0.0

    def log_moment(self, s: float) -> float:
        dom = self.domain()
        if not dom.computable(s):
            raise DomainError(
                f"s = {s:g} is outside the moment domain {dom.describe()} of {self.metadata.kind}"
                + (
                    f" (computable from s >= {dom.computable_lo:g})"
                    if dom.computable_lo is not None
                    else ""
                ),
                s=s,
                interval=dom.computable_interval,
            )
        if s == 0:
            return 0.0
        return float(self._log_moment(s))

    def moment(self, s: float) -> float:
        """E[xi^s]; may be +inf when the value overflows a double."""
        with np.errstate(over="ignore"):
            return float(np.exp(self.log_moment(s)))

    @property
    def is_atomic(self) -> bool:
        return self.metadata.supports(FamilyCapabilities.ATOMIC)

    # Regularity: E|log xi| < inf and E|xi log xi| < inf follow from 0 and 1
    # lying in the interior of D.
    @property
    def log_integrable(self) -> bool:
        return self.domain().interior_contains(0.0)

    @property
    def xlogx_integrable(self) -> bool:
        return self.domain().interior_contains(1.0)

    def describe(self) -> str:
        params = ", ".join(f"{k}={v}" for k, v in self.model_dump(exclude={"kind"}).items())
        return f"{self.metadata.kind}({params})"
