from __future__ import annotations

from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

Quantity = Literal["R", "f1", "f2"]


class TwistSample(BaseModel):
    """
    One application of the exchanged Poincare map P(upsilon0, theta0) = (upsilon1, theta1).

    theta values are lifted (not reduced mod 1), so theta1 - theta0 is the flight time.
    """

    model_config = ConfigDict(frozen=True)

    upsilon0: float
    theta0: float
    epsilon: float = Field(gt=0)
    upsilon1: float
    theta1: float
    f1: float
    f2: float
    twist_term: float
    backend: str = "physical"

    @model_validator(mode="after")
    def _check_residuals(self) -> TwistSample:
        scale = max(1.0, abs(self.theta1))
        if abs(self.upsilon0 + self.f1 - self.upsilon1) > 1e-12 * max(1.0, abs(self.upsilon1)):
            raise ValueError("upsilon1 must equal upsilon0 + f1")
        if abs(self.theta0 + self.twist_term + self.f2 - self.theta1) > 1e-12 * scale:
            raise ValueError("theta1 must equal theta0 + twist_term + f2")
        return self

    def to_row(self) -> tuple[float, ...]:
        """(upsilon0, theta0, epsilon, upsilon1, theta1, f1, f2, twist_term)."""
        return (
            self.upsilon0,
            self.theta0,
            self.epsilon,
            self.upsilon1,
            self.theta1,
            self.f1,
            self.f2,
            self.twist_term,
        )


class ScalingFit(BaseModel):
    """Least-squares fit log|value| = exponent * log(x) + intercept."""

    model_config = ConfigDict(frozen=True)

    which: Quantity
    j: int = 0
    k: int = 0
    exponent: float
    intercept: float
    r2: float
    points: int = Field(ge=8)
    x_min: float = Field(gt=0)
    x_max: float = Field(gt=0)

    @property
    def decades(self) -> float:
        return float(np.log10(self.x_max / self.x_min))

    def to_row(self) -> tuple:
        """(which, j, k, exponent, intercept, r2, points)."""
        return (self.which, self.j, self.k, self.exponent, self.intercept, self.r2, self.points)


class MapOrbit(BaseModel):
    """Iterates (upsilon_k, theta_k) of the exchanged map with a continuous theta lift."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    upsilon: np.ndarray
    theta: np.ndarray
    epsilon: float
    completed: bool = True
    error: Optional[str] = None

    @property
    def iterates(self) -> int:
        return len(self.theta) - 1

    def to_rows(self, orbit: int = 0) -> list[tuple[int, int, float, float]]:
        """Rows (orbit, iterate, upsilon, theta)."""
        return [
            (orbit, i, float(u), float(t))
            for i, (u, t) in enumerate(zip(self.upsilon, self.theta))
        ]


class RotationEstimate(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: float
    error: float = Field(ge=0)
    iterates: int = Field(ge=1)
    partial: bool = False


class CurveRecurrence(BaseModel):
    """
    Trigonometric fit upsilon = g(theta) of the first half of an orbit and the largest
    deviation of the second half from it.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    harmonics: int
    coefficients: np.ndarray
    fit_residual: float
    max_deviation: float

    def __call__(self, theta):
        return trig_design(np.asarray(theta, dtype=float), self.harmonics) @ self.coefficients


class IntersectionReport(BaseModel):
    """Range of upsilon_image - g(theta_image) over a sampled circle upsilon = g(theta)."""

    model_config = ConfigDict(frozen=True)

    min_gap: float
    max_gap: float
    samples: int

    @property
    def crossed(self) -> bool:
        return self.min_gap <= 0.0 <= self.max_gap


class SweepRecord(BaseModel):
    """Boundedness record of one initial condition."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    ic: int
    x0: float
    v0: float
    energy0: float
    checkpoint_times: np.ndarray
    M: np.ndarray
    impacts: np.ndarray
    ratio: Optional[float] = None
    flagged: bool = False
    error: Optional[str] = None
    energy_min: Optional[float] = None
    energy_max: Optional[float] = None
    strobe_t: np.ndarray = Field(default_factory=lambda: np.empty(0))
    strobe_x: np.ndarray = Field(default_factory=lambda: np.empty(0))
    strobe_v: np.ndarray = Field(default_factory=lambda: np.empty(0))

    def to_rows(self) -> list[tuple]:
        """Rows (ic, x0, v0, energy0, checkpoint, t, M, impacts, ratio, flagged, error)."""
        head = (self.ic, self.x0, self.v0, self.energy0)
        if self.error is not None:
            return [head + (None, None, None, None, None, self.flagged, self.error)]
        return [
            head + (i, float(t), float(m), int(count), self.ratio, self.flagged, None)
            for i, (t, m, count) in enumerate(zip(self.checkpoint_times, self.M, self.impacts))
        ]


class SweepReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    horizon: float
    threshold: float
    records: list[SweepRecord]

    @property
    def flagged(self) -> list[int]:
        return [record.ic for record in self.records if record.flagged]

    @property
    def failures(self) -> list[int]:
        return [record.ic for record in self.records if record.error is not None]

    @property
    def all_bounded(self) -> bool:
        return not self.flagged and not self.failures

    def to_rows(self) -> list[tuple]:
        return [row for record in self.records for row in record.to_rows()]


def trig_design(theta: np.ndarray, harmonics: int) -> np.ndarray:
    """Columns 1, cos(2 pi k theta), sin(2 pi k theta) for k = 1 ... harmonics."""
    k = np.arange(1, harmonics + 1)
    phase = 2.0 * np.pi * np.multiply.outer(theta, k)
    return np.concatenate([np.ones(theta.shape + (1,)), np.cos(phase), np.sin(phase)], axis=-1)
