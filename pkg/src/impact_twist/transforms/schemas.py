from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field, field_validator


def _wrap_unit(value: float) -> float:
    wrapped = value % 1.0
    # -1e-18 % 1.0 rounds to 1.0
    return 0.0 if wrapped == 1.0 else wrapped


class ActionAngle(BaseModel):
    """Action-angle pair (lambda, vartheta) of the unperturbed oscillator."""

    model_config = ConfigDict(frozen=True)

    action: float = Field(gt=0)
    angle: float

    @field_validator("angle")
    @classmethod
    def _reduce_angle(cls, value: float) -> float:
        return _wrap_unit(value)


class ImpactCoords(BaseModel):
    """
    Coordinates (rho, phi) adapted to the impacts.

    phi is lifted: its integer part counts impacts and integer values sit on the barrier.
    """

    model_config = ConfigDict(frozen=True)

    rho: float = Field(gt=0)
    phi: float


class ExchangedCoords(BaseModel):
    """
    Time-energy exchanged coordinates: I = H3 (action), theta = t mod 1 (angle) and
    tau = phi (new time).
    """

    model_config = ConfigDict(frozen=True)

    I: float = Field(gt=0)  # noqa: E741
    theta: float
    tau: float

    @field_validator("theta")
    @classmethod
    def _reduce_theta(cls, value: float) -> float:
        return _wrap_unit(value)


class ScaledCoords(BaseModel):
    """I = upsilon / epsilon with upsilon in [1, 2]."""

    model_config = ConfigDict(frozen=True)

    upsilon: float = Field(ge=1.0, le=2.0)
    epsilon: float = Field(gt=0)

    @property
    def I(self) -> float:  # noqa: E743
        return self.upsilon / self.epsilon

    @classmethod
    def from_action(cls, I: float, epsilon: float) -> ScaledCoords:  # noqa: E741
        return cls(upsilon=I * epsilon, epsilon=epsilon)


class RegimeOptions(BaseModel):
    """Numerical settings of the large-energy regime."""

    model_config = ConfigDict(frozen=True)

    i_min: float = Field(default=10.0, gt=0)
    newton_rtol: float = Field(default=1e-10, gt=0, lt=1e-4)
    newton_max_iter: int = Field(default=50, ge=1)
    fd_delta: float = Field(default=1e-3, gt=0, lt=0.1)


class PartialEstimate(BaseModel):
    """
    Finite-difference estimate of D_I^j D_theta^k R.

    error is the difference between the extrapolated value and the finer of the two raw
    estimates; reliable is False when the two raw estimates differ by more than 10 %.
    """

    model_config = ConfigDict(frozen=True)

    j: int = Field(ge=0)
    k: int = Field(ge=0)
    value: float
    error: float = Field(ge=0)
    reliable: bool = True

    def __float__(self) -> float:
        return self.value
