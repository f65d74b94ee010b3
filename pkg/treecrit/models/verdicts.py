"""
Verdict enumerations for the classifier.
"""

from enum import Enum


class Regime(str, Enum):
    """Finiteness regime of Y (via lambda1) or Z (via lambda)."""

    FINITE = "Finite"
    INFINITE = "Infinite"
    CRITICAL = "Critical"
    INDETERMINATE = "Indeterminate"


class RwreVerdict(str, Enum):
    POSITIVE_RECURRENT = "PositiveRecurrent"
    TRANSIENT = "Transient"
    CRITICAL = "Critical"
    INDETERMINATE = "Indeterminate"


class RdeVerdict(str, Enum):
    SOLUTION_EXISTS = "SolutionExists"
    NO_SOLUTION = "NoSolution"
    CRITICAL = "Critical"
    INDETERMINATE = "Indeterminate"


class Target(str, Enum):
    """Spectral constant searched by a parameter sweep."""

    LAMBDA1 = "lambda1"
    LAMBDA = "lambda"


RWRE_BY_REGIME = {
    Regime.FINITE: RwreVerdict.POSITIVE_RECURRENT,
    Regime.INFINITE: RwreVerdict.TRANSIENT,
    Regime.CRITICAL: RwreVerdict.CRITICAL,
    Regime.INDETERMINATE: RwreVerdict.INDETERMINATE,
}

RDE_BY_REGIME = {
    Regime.FINITE: RdeVerdict.SOLUTION_EXISTS,
    Regime.INFINITE: RdeVerdict.NO_SOLUTION,
    Regime.CRITICAL: RdeVerdict.CRITICAL,
    Regime.INDETERMINATE: RdeVerdict.INDETERMINATE,
}
