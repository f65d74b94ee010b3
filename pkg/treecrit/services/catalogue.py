"""
Built-in parametrized environment families for sweeps and acceptance runs.
"""

from dataclasses import dataclass
from typing import Callable, Dict, List, Tuple

from ..core.exceptions import UnknownFamilyError
from ..distributions.families import ExpNegGaussian, PointMass
from ..distributions.steps import NormalStep
from ..models.brw import BrwSpec
from ..models.environment import EnvSpec
from ..models.rwre import EtaSplitJump, FixedJump, RwreSpec
from ..models.verdicts import Target
from .environment import env_from_rwre


def sec51_rwre(h: float) -> RwreSpec:
    """
    Binary RWRE: colour 1 jumps (1/2, 1/4, 1/4); colour 2 jumps
    (3 eta / 4, 3 (1 - eta) / 4, 1/4) with eta ~ Uniform[h, 1].
    """
    return RwreSpec(
        b=2,
        laws=(FixedJump(p=(0.5, 0.25, 0.25)), EtaSplitJump(h=h, weight=0.75, tail=(0.25,))),
    )


def sec51_env(h: float) -> EnvSpec:
    return env_from_rwre(sec51_rwre(h))


def point_mass_env(c: float, b: int = 2) -> EnvSpec:
    row = tuple(PointMass(value=c) for _ in range(b))
    return EnvSpec(b=b, entries=tuple(row for _ in range(b)))


def normal_env(mu: float, sigma: float = 1.0, b: int = 2) -> EnvSpec:
    """Labels exp(-eta) with eta ~ Normal(mu, sigma^2) on every edge."""
    row = tuple(ExpNegGaussian(mu=mu, sigma=sigma) for _ in range(b))
    return EnvSpec(b=b, entries=tuple(row for _ in range(b)))


def normal_brw(mu: float, sigma: float = 1.0, b: int = 2) -> BrwSpec:
    row = tuple(NormalStep(mu=mu, sigma=sigma) for _ in range(b))
    return BrwSpec(b=b, steps=tuple(row for _ in range(b)))


@dataclass(frozen=True)
class CatalogueFamily:
    name: str
    description: str
    param_name: str
    default_range: Tuple[float, float]
    default_target: Target
    build: Callable[[float], EnvSpec]


CATALOGUE: Dict[str, CatalogueFamily] = {
    family.name: family
    for family in (
        CatalogueFamily(
            name="sec51",
            description="binary RWRE example, parameter h of eta ~ Uniform[h, 1]",
            param_name="h",
            default_range=(0.1, 0.9),
            default_target=Target.LAMBDA1,
            build=sec51_env,
        ),
        CatalogueFamily(
            name="pointmass-b2",
            description="b = 2, every label equal to c",
            param_name="c",
            default_range=(0.1, 0.9),
            default_target=Target.LAMBDA1,
            build=point_mass_env,
        ),
        CatalogueFamily(
            name="normal01",
            description="b = 2, labels exp(-eta) with eta ~ Normal(mu, 1)",
            param_name="mu",
            default_range=(0.0, 3.0),
            default_target=Target.LAMBDA,
            build=normal_env,
        ),
    )
}


def get_family(name: str) -> CatalogueFamily:
    try:
        return CATALOGUE[name]
    except KeyError:
        raise UnknownFamilyError(name, field="family", known=sorted(CATALOGUE)) from None


def family_names() -> List[str]:
    return sorted(CATALOGUE)
