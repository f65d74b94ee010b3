"""
Environment domain objects: the b x b grid of edge-label laws, its moment
matrix at an exponent s, and the regularity report.
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from typing import Any, Dict, Iterator, List, Optional, Tuple

import numpy as np

from ..distributions.base import LabelDistribution, MomentDomain
from .rwre import RwreSpec


class SiblingMode(str, Enum):
    """Joint law of the b labels below one parent."""

    INDEPENDENT = "independent"
    RWRE_JOINT = "rwre_joint"


@dataclass(frozen=True)
class RegularityReport:
    """
    The four moment conditions on the labels, each with its failing entries.

    Entries are reported 1-based as (parent colour, child colour).
    """

    zero_one_in_domain: bool
    zero_in_interior: bool
    log_integrable: bool
    xlogx_integrable: bool
    failing: Dict[str, Tuple[Tuple[int, int], ...]] = field(default_factory=dict)

    @property
    def all_passed(self) -> bool:
        return (
            self.zero_one_in_domain
            and self.zero_in_interior
            and self.log_integrable
            and self.xlogx_integrable
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "zero_one_in_domain": self.zero_one_in_domain,
            "zero_in_interior": self.zero_in_interior,
            "log_integrable": self.log_integrable,
            "xlogx_integrable": self.xlogx_integrable,
            "all_passed": self.all_passed,
            "failing": {k: [list(e) for e in v] for k, v in self.failing.items()},
        }


@dataclass(frozen=True)
class EnvSpec:
    """
    A random environment on the b-ary coloured tree.

    ``entries[i][j]`` (0-based storage) is the law of the label on an edge
    from a colour-(i+1) parent to a colour-(j+1) child. Public accessors and
    colours are 1-based.
    """

    b: int
    entries: Tuple[Tuple[LabelDistribution, ...], ...]
    sibling_mode: SiblingMode = SiblingMode.INDEPENDENT
    root_color: int = 1
    rwre: Optional[RwreSpec] = None

    def __post_init__(self) -> None:
        if self.b < 2:
            raise ValueError(f"b must be >= 2, got {self.b}")
        if len(self.entries) != self.b or any(len(row) != self.b for row in self.entries):
            raise ValueError(f"entries must be a {self.b}x{self.b} grid")
        if not 1 <= self.root_color <= self.b:
            raise ValueError(f"root_color must lie in 1..{self.b}, got {self.root_color}")
        if self.sibling_mode is SiblingMode.RWRE_JOINT and self.rwre is None:
            raise ValueError("rwre_joint environments need an RwreSpec")

    def entry(self, i: int, j: int) -> LabelDistribution:
        return self.entries[i - 1][j - 1]

    def iter_entries(self) -> Iterator[Tuple[int, int, LabelDistribution]]:
        for i, row in enumerate(self.entries, start=1):
            for j, dist in enumerate(row, start=1):
                yield i, j, dist

    def with_root(self, root_color: int) -> "EnvSpec":
        return replace(self, root_color=root_color)

    @cached_property
    def joint_domain(self) -> MomentDomain:
        dom = MomentDomain()
        for _, _, dist in self.iter_entries():
            dom = dom.intersect(dist.domain())
        return dom

    @property
    def has_atomic_entry(self) -> bool:
        return any(dist.is_atomic for _, _, dist in self.iter_entries())

    @cached_property
    def regularity(self) -> RegularityReport:
        checks = {
            "zero_one_in_domain": lambda d: d.domain().covers(0.0, 1.0),
            "zero_in_interior": lambda d: d.domain().interior_contains(0.0),
            "log_integrable": lambda d: d.log_integrable,
            "xlogx_integrable": lambda d: d.xlogx_integrable,
        }
        failing: Dict[str, Tuple[Tuple[int, int], ...]] = {}
        for name, check in checks.items():
            bad = tuple((i, j) for i, j, dist in self.iter_entries() if not check(dist))
            if bad:
                failing[name] = bad
        return RegularityReport(
            zero_one_in_domain="zero_one_in_domain" not in failing,
            zero_in_interior="zero_in_interior" not in failing,
            log_integrable="log_integrable" not in failing,
            xlogx_integrable="xlogx_integrable" not in failing,
            failing=failing,
        )

    def to_config(self) -> Dict[str, Any]:
        """Config mapping that parses back to an equal environment."""
        config: Dict[str, Any] = {
            "b": self.b,
            "root_color": self.root_color,
            "sibling_mode": self.sibling_mode.value,
        }
        if self.sibling_mode is SiblingMode.RWRE_JOINT and self.rwre is not None:
            config["rwre"] = self.rwre.model_dump(exclude={"b", "root_color"})
        else:
            config["entries"] = [[dist.model_dump() for dist in row] for row in self.entries]
        return config


@dataclass(frozen=True, eq=False)
class MomentMatrix:
    """m(s): entry (i, j) is E[xi_ij^s], stored as logs."""

    s: float
    log_values: np.ndarray

    @property
    def b(self) -> int:
        return int(self.log_values.shape[0])

    @property
    def values(self) -> np.ndarray:
        with np.errstate(over="ignore"):
            return np.exp(self.log_values)

    def tolist(self) -> List[List[float]]:
        return [[float(v) for v in row] for row in self.values]
