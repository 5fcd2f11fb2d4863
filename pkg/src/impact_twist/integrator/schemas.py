from __future__ import annotations

from typing import Iterator, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class PhaseState(BaseModel):
    """Physical state (x, v, t) with the number of impacts so far."""

    model_config = ConfigDict(frozen=True)

    x: float = Field(ge=0.0)
    v: float
    t: float
    impact_count: int = Field(default=0, ge=0)

    @property
    def at_barrier(self) -> bool:
        return self.x == 0.0

    def reversed(self) -> PhaseState:
        """Same position with the velocity reversed (time-reversal image)."""
        return self.model_copy(update={"v": -self.v})


class IntegratorOptions(BaseModel):
    model_config = ConfigDict(frozen=True)

    rel_tol: float = Field(default=1e-12, gt=0)
    abs_tol: float = Field(default=1e-12, gt=0)
    max_step: Optional[float] = Field(default=None, gt=0)
    event_tol: float = Field(default=1e-12, gt=0)
    min_contact_speed: float = Field(default=1e-12, gt=0)
    method: Literal["DOP853", "RK45"] = "DOP853"

    @property
    def solver_max_step(self) -> float:
        return np.inf if self.max_step is None else self.max_step


class OrbitTrace(BaseModel):
    """
    Time-ordered samples of an integrated orbit together with its impacts and diagnostics.

    Samples are stored column-wise; impact rows carry x = 0 and the post-reflection velocity.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    t: np.ndarray
    x: np.ndarray
    v: np.ndarray
    impact_flag: np.ndarray
    impact_times: np.ndarray
    impact_speeds: np.ndarray
    final_state: PhaseState
    max_norm: float
    energy_drift: Optional[float] = None

    @model_validator(mode="after")
    def _check_ordering(self) -> OrbitTrace:
        if np.any(np.diff(self.impact_times) <= 0):
            raise ValueError("impact times must be strictly increasing")
        if np.any(np.diff(self.t) < 0):
            raise ValueError("samples must be time-ordered")
        return self

    @property
    def impact_count(self) -> int:
        return len(self.impact_times)

    def states(self) -> Iterator[PhaseState]:
        count = self.final_state.impact_count - self.impact_count
        for t, x, v, flag in zip(self.t, self.x, self.v, self.impact_flag):
            count += int(flag)
            yield PhaseState(x=max(float(x), 0.0), v=float(v), t=float(t), impact_count=count)

    def to_rows(self) -> list[tuple[float, float, float, int]]:
        """Rows (t, x, v, impact_flag)."""
        return [
            (float(t), float(x), float(v), int(flag))
            for t, x, v, flag in zip(self.t, self.x, self.v, self.impact_flag)
        ]
