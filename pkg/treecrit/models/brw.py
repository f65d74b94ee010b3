"""
Multi-type branching random walk: step laws per (parent type, child type).

Every particle of type i splits into b children, one of each type j, each
displaced by an independent copy of eta_ij.
"""

from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..distributions.steps import AnyStepLaw, NormalStep, PointMassStep, StepLaw


class BrwSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    b: int = Field(ge=2)
    steps: Tuple[Tuple[AnyStepLaw, ...], ...]
    start_type: int = 1

    @model_validator(mode="after")
    def check_shape(self) -> "BrwSpec":
        if len(self.steps) != self.b or any(len(row) != self.b for row in self.steps):
            raise ValueError(f"steps must be a {self.b}x{self.b} grid")
        if not 1 <= self.start_type <= self.b:
            raise ValueError(f"start_type must lie in 1..{self.b}, got {self.start_type}")
        return self

    def step(self, i: int, j: int) -> StepLaw:
        return self.steps[i - 1][j - 1]

    @property
    def has_atomic_step(self) -> bool:
        return any(law.is_atomic for row in self.steps for law in row)

    @property
    def is_deterministic(self) -> bool:
        """Every step is a constant."""
        return all(
            isinstance(law, PointMassStep) or (isinstance(law, NormalStep) and law.sigma == 0)
            for row in self.steps
            for law in row
        )
