from __future__ import annotations

import math
from functools import cached_property

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationInfo,
    field_validator,
    model_validator,
)

TWO_PI = 2.0 * math.pi


class FourierSeries(BaseModel):
    """
    Truncated Fourier series p(t) = a0 + sum_k cos[k-1] cos(2 pi k t) + sin[k-1] sin(2 pi k t).

    The period is exactly 1; arguments are reduced modulo 1 before evaluation.
    """

    model_config = ConfigDict(frozen=True)

    a0: float = 0.0
    cos: tuple[float, ...] = ()
    sin: tuple[float, ...] = ()

    @field_validator("a0", "cos", "sin")
    @classmethod
    def _finite(cls, value):
        if not np.all(np.isfinite(np.asarray(value, dtype=float))):
            raise ValueError("Fourier coefficients must be finite")
        return value

    @property
    def harmonics(self) -> int:
        return max(len(self.cos), len(self.sin))

    @property
    def is_zero(self) -> bool:
        return self.a0 == 0.0 and not any(self.cos) and not any(self.sin)

    def __call__(self, t):
        t_arr = np.mod(np.asarray(t, dtype=float), 1.0)
        value = np.full_like(t_arr, self.a0)
        for k, coefficient in enumerate(self.cos, start=1):
            value = value + coefficient * np.cos(TWO_PI * k * t_arr)
        for k, coefficient in enumerate(self.sin, start=1):
            value = value + coefficient * np.sin(TWO_PI * k * t_arr)
        if value.ndim == 0:
            return float(value)
        return value

    def derivative(self) -> FourierSeries:
        """Exact derivative dp/dt as another Fourier series."""
        k_cos = range(1, len(self.sin) + 1)
        k_sin = range(1, len(self.cos) + 1)
        return FourierSeries(
            a0=0.0,
            cos=tuple(TWO_PI * k * b for k, b in zip(k_cos, self.sin)),
            sin=tuple(-TWO_PI * k * a for k, a in zip(k_sin, self.cos)),
        )

    @classmethod
    def constant(cls, value: float) -> FourierSeries:
        return cls(a0=value)

    @classmethod
    def harmonic(cls, amplitude: float, k: int = 1, phase: str = "cos") -> FourierSeries:
        """Single harmonic amplitude * cos(2 pi k t) (or sin)."""
        coefficients = tuple(amplitude if j == k else 0.0 for j in range(1, k + 1))
        if phase == "sin":
            return cls(sin=coefficients)
        return cls(cos=coefficients)


class PotentialSpec(BaseModel):
    """
    Degree parameter n and the 2n+1 periodic coefficients p_0 ... p_2n of the potential.

    Shorter coefficient lists are padded with zero series.
    """

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=0)
    coefficients: tuple[FourierSeries, ...] = Field(default=(), validate_default=True)

    @field_validator("coefficients")
    @classmethod
    def _pad_coefficients(cls, value, info: ValidationInfo):
        n = info.data.get("n")
        if n is None:
            return value
        count = 2 * n + 1
        if len(value) > count:
            raise ValueError(f"n={n} admits {count} coefficient series, got {len(value)}")
        return tuple(value) + (FourierSeries(),) * (count - len(value))

    @property
    def K(self) -> int:
        """Harmonic cutoff."""
        return max((p.harmonics for p in self.coefficients), default=0)

    @property
    def is_unperturbed(self) -> bool:
        return all(p.is_zero for p in self.coefficients)

    @cached_property
    def fourier_matrices(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(a0, cos, sin) coefficient arrays of shapes (2n+1,), (2n+1, K), (2n+1, K)."""
        m, harmonics = len(self.coefficients), self.K
        a0 = np.array([p.a0 for p in self.coefficients], dtype=float)
        cos = np.zeros((m, harmonics))
        sin = np.zeros((m, harmonics))
        for i, p in enumerate(self.coefficients):
            cos[i, : len(p.cos)] = p.cos
            sin[i, : len(p.sin)] = p.sin
        return a0, cos, sin

    def _evaluate(self, a0, cos, sin, t) -> np.ndarray:
        t_arr = np.mod(np.asarray(t, dtype=float), 1.0)
        phase = TWO_PI * np.multiply.outer(np.arange(1, cos.shape[1] + 1), t_arr)
        offset = a0.reshape((-1,) + (1,) * t_arr.ndim)
        return offset + cos @ np.cos(phase) + sin @ np.sin(phase)

    def values(self, t) -> np.ndarray:
        """p_i(t) for i = 0 ... 2n, stacked along the first axis."""
        return self._evaluate(*self.fourier_matrices, t)

    def derivative_values(self, t) -> np.ndarray:
        """p_i'(t) for i = 0 ... 2n."""
        a0, cos, sin = self.fourier_matrices
        k = TWO_PI * np.arange(1, cos.shape[1] + 1)
        return self._evaluate(np.zeros_like(a0), sin * k, -cos * k, t)

    @classmethod
    def unperturbed(cls, n: int) -> PotentialSpec:
        return cls(n=n)


class DerivedConstants(BaseModel):
    """
    Constants of the action-angle normalization.

    alpha = 1/(n+2), beta = (n+1)/(n+2), a = 1/(alpha T0) (unit Jacobian of the action-angle
    map) and d = (2a)^(2 beta) / (2n+2).
    """

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=0)
    T0: float = Field(gt=0)
    alpha: float
    beta: float
    a: float = Field(gt=0)
    d: float = Field(gt=0)

    @model_validator(mode="after")
    def _check_relations(self) -> DerivedConstants:
        if not math.isclose(self.alpha + self.beta, 1.0, rel_tol=1e-14):
            raise ValueError("alpha + beta must equal 1")
        expected_d = (2.0 * self.a) ** (2.0 * self.beta) / (2 * self.n + 2)
        if not math.isclose(self.d, expected_d, rel_tol=1e-12):
            raise ValueError("d must equal (2a)^(2 beta) / (2n+2)")
        return self

    @classmethod
    def from_period(cls, n: int, T0: float) -> DerivedConstants:
        alpha = 1.0 / (n + 2)
        beta = (n + 1) / (n + 2)
        a = 1.0 / (alpha * T0)
        d = (2.0 * a) ** (2.0 * beta) / (2 * n + 2)
        return cls(n=n, T0=T0, alpha=alpha, beta=beta, a=a, d=d)

    @classmethod
    def from_table(cls, table) -> DerivedConstants:
        return cls.from_period(table.n, table.T0)

    @property
    def inverse_exponent(self) -> float:
        """1 / (2 beta), the exponent of I in the unperturbed rho(I)."""
        return 1.0 / (2.0 * self.beta)

    def unperturbed_rho(self, energy):
        """rho solving d rho^(2 beta) = energy."""
        return (np.asarray(energy, dtype=float) / self.d) ** self.inverse_exponent
