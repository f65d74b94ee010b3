"""
Real-valued displacement laws eta for the branching random walk.

Each step law maps to the edge-label family of xi = exp(-eta), so that the
spectral machinery applies to walks and passage times unchanged.
"""

import math
from abc import ABC, abstractmethod
from typing import Annotated, Literal, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from pydantic_core import PydanticCustomError

from ..core.config import get_settings
from .base import LabelDistribution
from .families import Discrete, ExpNegExponential, ExpNegGaussian, PointMass


class StepLaw(BaseModel, ABC):
    model_config = ConfigDict(frozen=True, extra="forbid")

    @abstractmethod
    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Draw ``size`` displacements."""

    @abstractmethod
    def to_label(self) -> LabelDistribution:
        """Law of exp(-eta)."""

    @property
    def is_atomic(self) -> bool:
        return self.to_label().is_atomic


class NormalStep(StepLaw):
    kind: Literal["normal"] = "normal"
    mu: float
    sigma: float = Field(ge=0)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.normal(self.mu, self.sigma, size)

    def to_label(self) -> LabelDistribution:
        return ExpNegGaussian(mu=self.mu, sigma=self.sigma)


class PointMassStep(StepLaw):
    kind: Literal["point_mass"] = "point_mass"
    value: float

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return np.full(size, self.value, dtype=float)

    def to_label(self) -> LabelDistribution:
        return PointMass(value=math.exp(-self.value))


class ShiftedExponentialStep(StepLaw):
    kind: Literal["shifted_exponential"] = "shifted_exponential"
    shift: float
    rate: float = Field(gt=0)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return self.shift + rng.exponential(1.0 / self.rate, size)

    def to_label(self) -> LabelDistribution:
        return ExpNegExponential(shift=self.shift, rate=self.rate)


class StepAtom(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    x: float
    p: float = Field(gt=0, le=1)


class DiscreteStep(StepLaw):
    kind: Literal["discrete"] = "discrete"
    atoms: Tuple[StepAtom, ...] = Field(min_length=1)

    @model_validator(mode="after")
    def check_total(self) -> "DiscreteStep":
        total = math.fsum(a.p for a in self.atoms)
        tol = get_settings().PROBABILITY_SUM_TOL
        if abs(total - 1.0) > tol:
            raise PydanticCustomError(
                "probability_sum",
                "atom probabilities sum to {total}, not 1 within {tol}",
                {"total": total, "tol": tol},
            )
        return self

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        xs = np.array([a.x for a in self.atoms])
        ps = np.array([a.p for a in self.atoms])
        return rng.choice(xs, size=size, p=ps / ps.sum())

    def to_label(self) -> LabelDistribution:
        return Discrete.model_validate(
            {"atoms": [{"x": math.exp(-a.x), "p": a.p} for a in self.atoms]}
        )


AnyStepLaw = Annotated[
    Union[NormalStep, PointMassStep, ShiftedExponentialStep, DiscreteStep],
    Field(discriminator="kind"),
]
