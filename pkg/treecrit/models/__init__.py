"""
Immutable domain objects: environments, moment matrices, RWRE and BRW specs.
"""

from .brw import BrwSpec
from .environment import EnvSpec, MomentMatrix, RegularityReport, SiblingMode
from .rwre import EtaSplitJump, FixedJump, JumpLaw, RwreSpec
from .verdicts import RdeVerdict, Regime, RwreVerdict, Target

__all__ = [
    "BrwSpec",
    "EnvSpec",
    "EtaSplitJump",
    "FixedJump",
    "JumpLaw",
    "MomentMatrix",
    "RdeVerdict",
    "Regime",
    "RegularityReport",
    "RwreVerdict",
    "RwreSpec",
    "SiblingMode",
    "Target",
]
