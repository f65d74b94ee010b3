"""
Built-in edge-label families.

All laws live on (0, inf). Moments are evaluated in the log domain so that
large exponents (s up to the spectral search bound) do not overflow.
"""

import math
from typing import ClassVar, Literal, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from pydantic_core import PydanticCustomError
from scipy.special import logsumexp

from ..core.config import get_settings
from ..utils.quadrature import quad_checked
from .base import FamilyCapabilities, FamilyMetadata, LabelDistribution, MomentDomain
from .registry import register_family


def log_power_difference(a: float, log_ratio: float) -> float:
    """
    log((1 - r^a) / a) for r = exp(log_ratio) < 1, continuous at a = 0.

    Both (hi^(s+1) - lo^(s+1)) / (s+1) and (1 - h^(1-s)) / (1-s) reduce to it.
    """
    if a == 0:
        return math.log(-log_ratio)
    x = a * log_ratio
    if x < 0:
        return math.log(-math.expm1(x)) - math.log(a)
    # a < 0 here: expm1(x) may overflow, so expand log(expm1(x))
    return x + math.log(-math.expm1(-x)) - math.log(-a)


def _positive_support(value: float, name: str) -> float:
    if not value > 0:
        raise PydanticCustomError(
            "non_positive_support",
            "{name} must be positive so that the label lives on (0, inf), got {value}",
            {"name": name, "value": value},
        )
    return value


def _unit_interval(value: float, name: str) -> float:
    if not 0 < value < 1:
        raise PydanticCustomError(
            "open_unit_interval",
            "{name} must lie in (0, 1), got {value}",
            {"name": name, "value": value},
        )
    return value


@register_family
class PointMass(LabelDistribution):
    kind: Literal["point_mass"] = "point_mass"
    value: float

    metadata: ClassVar[FamilyMetadata] = FamilyMetadata(
        kind="point_mass",
        parameters=["value"],
        description="xi = value almost surely",
        capabilities=[FamilyCapabilities.CLOSED_FORM, FamilyCapabilities.ATOMIC],
    )

    @field_validator("value")
    @classmethod
    def check_value(cls, v: float) -> float:
        return _positive_support(v, "value")

    def domain(self) -> MomentDomain:
        return MomentDomain()

    def _log_moment(self, s: float) -> float:
        return s * math.log(self.value)

    def mean_log(self) -> float:
        return math.log(self.value)

    def log_sup(self) -> Tuple[float, float]:
        return math.log(self.value), 1.0

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return np.full(size, self.value, dtype=float)


@register_family
class Uniform(LabelDistribution):
    kind: Literal["uniform"] = "uniform"
    lo: float
    hi: float

    metadata: ClassVar[FamilyMetadata] = FamilyMetadata(
        kind="uniform",
        parameters=["lo", "hi"],
        description="xi ~ Uniform[lo, hi] with 0 < lo < hi",
        capabilities=[FamilyCapabilities.CLOSED_FORM],
    )

    @field_validator("lo")
    @classmethod
    def check_lo(cls, v: float) -> float:
        return _positive_support(v, "lo")

    @model_validator(mode="after")
    def check_order(self) -> "Uniform":
        if not self.hi > self.lo:
            raise ValueError(f"hi must exceed lo, got lo={self.lo}, hi={self.hi}")
        return self

    def domain(self) -> MomentDomain:
        return MomentDomain()

    def _log_moment(self, s: float) -> float:
        # E xi^s = (hi^(s+1) - lo^(s+1)) / ((s+1)(hi-lo)); s = -1 is the log limit
        a = s + 1.0
        return (
            a * math.log(self.hi)
            + log_power_difference(a, math.log(self.lo / self.hi))
            - math.log(self.hi - self.lo)
        )

    def mean_log(self) -> float:
        lo, hi = self.lo, self.hi
        return (hi * math.log(hi) - hi - lo * math.log(lo) + lo) / (hi - lo)

    def log_sup(self) -> Tuple[float, float]:
        return math.log(self.hi), 0.0

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.uniform(self.lo, self.hi, size)


@register_family
class LogNormal(LabelDistribution):
    kind: Literal["log_normal"] = "log_normal"
    mu: float
    sigma: float = Field(gt=0)

    metadata: ClassVar[FamilyMetadata] = FamilyMetadata(
        kind="log_normal",
        parameters=["mu", "sigma"],
        description="log xi ~ Normal(mu, sigma^2)",
        capabilities=[FamilyCapabilities.CLOSED_FORM],
    )

    def domain(self) -> MomentDomain:
        return MomentDomain()

    def _log_moment(self, s: float) -> float:
        return s * self.mu + 0.5 * s * s * self.sigma**2

    def mean_log(self) -> float:
        return self.mu

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.lognormal(self.mu, self.sigma, size)

    def sample_log(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.normal(self.mu, self.sigma, size)


class Atom(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    x: float
    p: float

    @field_validator("x")
    @classmethod
    def check_x(cls, v: float) -> float:
        return _positive_support(v, "x")

    @field_validator("p")
    @classmethod
    def check_p(cls, v: float) -> float:
        if not 0 < v <= 1:
            raise PydanticCustomError(
                "probability_range", "atom probability must lie in (0, 1], got {value}", {"value": v}
            )
        return v


@register_family
class Discrete(LabelDistribution):
    kind: Literal["discrete"] = "discrete"
    atoms: Tuple[Atom, ...] = Field(min_length=1)

    metadata: ClassVar[FamilyMetadata] = FamilyMetadata(
        kind="discrete",
        parameters=["atoms"],
        description="finitely many atoms {x, p} with probabilities summing to 1",
        capabilities=[FamilyCapabilities.CLOSED_FORM, FamilyCapabilities.ATOMIC],
    )

    @model_validator(mode="after")
    def check_total(self) -> "Discrete":
        total = math.fsum(a.p for a in self.atoms)
        tol = get_settings().PROBABILITY_SUM_TOL
        if abs(total - 1.0) > tol:
            raise PydanticCustomError(
                "probability_sum",
                "atom probabilities sum to {total}, not 1 within {tol}",
                {"total": total, "tol": tol},
            )
        return self

    @property
    def xs(self) -> np.ndarray:
        return np.array([a.x for a in self.atoms])

    @property
    def ps(self) -> np.ndarray:
        p = np.array([a.p for a in self.atoms])
        return p / p.sum()

    def domain(self) -> MomentDomain:
        return MomentDomain()

    def _log_moment(self, s: float) -> float:
        return float(logsumexp(np.log(self.ps) + s * np.log(self.xs)))

    def mean_log(self) -> float:
        return float(np.dot(self.ps, np.log(self.xs)))

    def log_sup(self) -> Tuple[float, float]:
        top = float(self.xs.max())
        return math.log(top), float(self.ps[self.xs == top].sum())

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.choice(self.xs, size=size, p=self.ps)


@register_family
class ExpNegGaussian(LabelDistribution):
    """xi = exp(-eta) with eta ~ Normal(mu, sigma^2); the branching-walk label."""

    kind: Literal["exp_neg_gaussian"] = "exp_neg_gaussian"
    mu: float
    sigma: float = Field(ge=0)

    metadata: ClassVar[FamilyMetadata] = FamilyMetadata(
        kind="exp_neg_gaussian",
        parameters=["mu", "sigma"],
        description="xi = exp(-eta), eta ~ Normal(mu, sigma^2), sigma >= 0",
        capabilities=[FamilyCapabilities.CLOSED_FORM],
    )

    def domain(self) -> MomentDomain:
        return MomentDomain()

    def _log_moment(self, s: float) -> float:
        return -s * self.mu + 0.5 * s * s * self.sigma**2

    def mean_log(self) -> float:
        return -self.mu

    def log_sup(self) -> Tuple[float, float]:
        if self.sigma == 0:
            return -self.mu, 1.0
        return math.inf, 0.0

    @property
    def is_atomic(self) -> bool:
        return self.sigma == 0

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return np.exp(self.sample_log(rng, size))

    def sample_log(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return -rng.normal(self.mu, self.sigma, size)


@register_family
class ExpNegExponential(LabelDistribution):
    """xi = exp(-eta) with eta = shift + Exponential(rate)."""

    kind: Literal["exp_neg_exponential"] = "exp_neg_exponential"
    shift: float
    rate: float = Field(gt=0)

    metadata: ClassVar[FamilyMetadata] = FamilyMetadata(
        kind="exp_neg_exponential",
        parameters=["shift", "rate"],
        description="xi = exp(-eta), eta = shift + Exponential(rate)",
        capabilities=[FamilyCapabilities.CLOSED_FORM],
    )

    def domain(self) -> MomentDomain:
        return MomentDomain(lo=-self.rate)

    def _log_moment(self, s: float) -> float:
        return -s * self.shift + math.log(self.rate) - math.log(self.rate + s)

    def mean_log(self) -> float:
        return -(self.shift + 1.0 / self.rate)

    def log_sup(self) -> Tuple[float, float]:
        return -self.shift, 0.0

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return np.exp(self.sample_log(rng, size))

    def sample_log(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return -(self.shift + rng.exponential(1.0 / self.rate, size))


@register_family
class RatioUniform(LabelDistribution):
    """xi = (1 - eta) / eta with eta ~ Uniform[h, 1]."""

    kind: Literal["ratio_uniform"] = "ratio_uniform"
    h: float

    metadata: ClassVar[FamilyMetadata] = FamilyMetadata(
        kind="ratio_uniform",
        parameters=["h"],
        description="xi = (1 - eta)/eta, eta ~ Uniform[h, 1], 0 < h < 1",
        capabilities=[FamilyCapabilities.QUADRATURE],
    )

    @field_validator("h")
    @classmethod
    def check_h(cls, v: float) -> float:
        return _unit_interval(v, "h")

    def domain(self) -> MomentDomain:
        # (1-t)^s is integrable at t = 1 for s > -1; quadrature is trusted from -1/2
        return MomentDomain(lo=-1.0, computable_lo=-0.5)

    def _log_moment(self, s: float) -> float:
        # (1/(1-h)) int_h^1 (1-t)^s t^(-s) dt, with t^(-s) rescaled to (h/t)^s <= 1
        # and (1-t)^s carried by the algebraic weight.
        h = self.h
        if s > 0:
            integral = quad_checked(lambda t: (h / t) ** s, h, 1.0, alg_exponents=(0.0, s))
            return math.log(integral) - s * math.log(h) - math.log1p(-h)
        integral = quad_checked(lambda t: t ** (-s), h, 1.0, alg_exponents=(0.0, s))
        return math.log(integral) - math.log1p(-h)

    def mean_log(self) -> float:
        h = self.h
        return ((1 - h) * math.log1p(-h) + h * math.log(h)) / (1 - h)

    def log_sup(self) -> Tuple[float, float]:
        return math.log1p(-self.h) - math.log(self.h), 0.0

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        eta = rng.uniform(self.h, 1.0, size)
        return (1.0 - eta) / eta


@register_family
class RecipUniform(LabelDistribution):
    """xi = 1 / (c * eta) with eta ~ Uniform[h, 1]."""

    kind: Literal["recip_uniform"] = "recip_uniform"
    c: float
    h: float

    metadata: ClassVar[FamilyMetadata] = FamilyMetadata(
        kind="recip_uniform",
        parameters=["c", "h"],
        description="xi = 1/(c eta), eta ~ Uniform[h, 1], c > 0, 0 < h < 1",
        capabilities=[FamilyCapabilities.CLOSED_FORM, FamilyCapabilities.QUADRATURE],
    )

    @field_validator("c")
    @classmethod
    def check_c(cls, v: float) -> float:
        return _positive_support(v, "c")

    @field_validator("h")
    @classmethod
    def check_h(cls, v: float) -> float:
        return _unit_interval(v, "h")

    def domain(self) -> MomentDomain:
        return MomentDomain()

    def _log_moment(self, s: float) -> float:
        # c^(-s) (1 - h^(1-s)) / ((1-s)(1-h)); s = 1 gives -log h / (c (1-h))
        return (
            -s * math.log(self.c)
            + log_power_difference(1.0 - s, math.log(self.h))
            - math.log1p(-self.h)
        )

    def quadrature_moment(self, s: float) -> float:
        """E[xi^s] by direct quadrature, for cross-checking the closed form."""
        h, c = self.h, self.c
        if s == 0:
            return 1.0
        if s > 0:
            integral = quad_checked(lambda t: (h / t) ** s, h, 1.0)
            return math.exp(math.log(integral) - s * math.log(c * h) - math.log1p(-h))
        integral = quad_checked(lambda t: t ** (-s), h, 1.0)
        return math.exp(math.log(integral) - s * math.log(c) - math.log1p(-h))

    def mean_log(self) -> float:
        h = self.h
        return -math.log(self.c) + 1.0 + h * math.log(h) / (1 - h)

    def log_sup(self) -> Tuple[float, float]:
        return -math.log(self.c * self.h), 0.0

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        eta = rng.uniform(self.h, 1.0, size)
        return 1.0 / (self.c * eta)

