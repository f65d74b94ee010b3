"""
Jump-vector laws for the random walk in random environment.

A vertex u of colour c carries p(u) = (p_down, p_child1, ..., p_childb),
drawn from the law attached to colour c. The ratios p_childj / p_down are
the edge labels of the induced tree environment.
"""

import math
from abc import ABC, abstractmethod
from typing import Annotated, Literal, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from pydantic_core import PydanticCustomError

from ..core.config import get_settings
from ..distributions.base import LabelDistribution
from ..distributions.families import PointMass, RatioUniform, RecipUniform


def _check_probability_sum(total: float) -> None:
    tol = get_settings().PROBABILITY_SUM_TOL
    if abs(total - 1.0) > tol:
        raise PydanticCustomError(
            "probability_sum",
            "jump probabilities sum to {total}, not 1 within {tol}",
            {"total": total, "tol": tol},
        )


def _check_open_unit(values: Tuple[float, ...], name: str) -> Tuple[float, ...]:
    for v in values:
        if not 0 < v < 1:
            raise PydanticCustomError(
                "open_unit_interval",
                "{name} components must lie in (0, 1), got {value}",
                {"name": name, "value": v},
            )
    return values


class JumpLawBase(BaseModel, ABC):
    model_config = ConfigDict(frozen=True, extra="forbid")

    @property
    @abstractmethod
    def width(self) -> int:
        """Length b + 1 of the jump vector."""

    @abstractmethod
    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Draw ``size`` jump vectors as rows of a (size, b + 1) array."""

    @abstractmethod
    def ratio_marginals(self) -> Tuple[LabelDistribution, ...]:
        """Marginal laws of p_childj / p_down, j = 1..b."""

    @abstractmethod
    def mean(self) -> np.ndarray:
        """E[p(u)]."""


class FixedJump(JumpLawBase):
    """The same jump vector at every vertex of the colour."""

    kind: Literal["fixed"] = "fixed"
    p: Tuple[float, ...] = Field(min_length=3)

    @field_validator("p")
    @classmethod
    def check_components(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        _check_open_unit(v, "p")
        _check_probability_sum(math.fsum(v))
        return v

    @property
    def width(self) -> int:
        return len(self.p)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return np.tile(np.asarray(self.p, dtype=float), (size, 1))

    def ratio_marginals(self) -> Tuple[LabelDistribution, ...]:
        down = self.p[0]
        return tuple(PointMass(value=q / down) for q in self.p[1:])

    def mean(self) -> np.ndarray:
        return np.asarray(self.p, dtype=float)


class EtaSplitJump(JumpLawBase):
    """
    p(u) = (w eta, w (1 - eta), q_2, ..., q_b) with eta ~ Uniform[h, 1].

    With w = 3/4 and tail (1/4,) this is the binary example where the walk
    goes down with probability 3 eta / 4 and to the right child with 1/4.
    """

    kind: Literal["eta_split"] = "eta_split"
    h: float
    weight: float = 0.75
    tail: Tuple[float, ...] = (0.25,)

    @field_validator("h", "weight")
    @classmethod
    def check_unit(cls, v: float) -> float:
        _check_open_unit((v,), "h/weight")
        return v

    @field_validator("tail")
    @classmethod
    def check_tail(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        return _check_open_unit(v, "tail")

    @model_validator(mode="after")
    def check_total(self) -> "EtaSplitJump":
        _check_probability_sum(self.weight + math.fsum(self.tail))
        return self

    @property
    def width(self) -> int:
        return 2 + len(self.tail)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        eta = rng.uniform(self.h, 1.0, size)
        out = np.empty((size, self.width))
        out[:, 0] = self.weight * eta
        out[:, 1] = self.weight * (1.0 - eta)
        out[:, 2:] = np.asarray(self.tail, dtype=float)
        return out

    def ratio_marginals(self) -> Tuple[LabelDistribution, ...]:
        # w(1-eta)/(w eta) = (1-eta)/eta and q/(w eta) = 1/((w/q) eta)
        first: LabelDistribution = RatioUniform(h=self.h)
        rest = tuple(RecipUniform(c=self.weight / q, h=self.h) for q in self.tail)
        return (first,) + rest

    def mean(self) -> np.ndarray:
        mean_eta = 0.5 * (1.0 + self.h)
        return np.array(
            [self.weight * mean_eta, self.weight * (1.0 - mean_eta), *self.tail], dtype=float
        )


JumpLaw = Annotated[Union[FixedJump, EtaSplitJump], Field(discriminator="kind")]


class RwreSpec(BaseModel):
    """Per-colour jump-vector laws; the root's down move is a self-loop."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    b: int = Field(ge=2)
    laws: Tuple[JumpLaw, ...]
    root_color: int = 1

    @model_validator(mode="after")
    def check_shape(self) -> "RwreSpec":
        if len(self.laws) != self.b:
            raise ValueError(f"need one jump law per colour: b={self.b}, got {len(self.laws)}")
        for colour, law in enumerate(self.laws, start=1):
            if law.width != self.b + 1:
                raise ValueError(
                    f"jump law of colour {colour} has {law.width} components, expected {self.b + 1}"
                )
        if not 1 <= self.root_color <= self.b:
            raise ValueError(f"root_color must lie in 1..{self.b}, got {self.root_color}")
        return self

    def law(self, colour: int) -> Union[FixedJump, EtaSplitJump]:
        return self.laws[colour - 1]

    def ratio_marginals(self) -> Tuple[Tuple[LabelDistribution, ...], ...]:
        return tuple(law.ratio_marginals() for law in self.laws)
