"""
Forces and Hamiltonians of the impact oscillator x'' + x^(2n+1) + sum_i p_i(t) x^i = 0.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from numpy.polynomial import polynomial as P

from ..decorators import require_nonnegative, require_positive
from ..gentrig import GenTrigTable, eval_cs
from .schemas import DerivedConstants, PotentialSpec


class H3Partials(NamedTuple):
    d_rho: float
    d_t: float
    d_phi: float


def _force_coefficients(spec: PotentialSpec, t) -> np.ndarray:
    return np.append(spec.values(t), 1.0)


def _energy_coefficients(spec: PotentialSpec, p_values: np.ndarray) -> np.ndarray:
    # x * polyval(x, c) = sum_i p_i x^(i+1) / (i+1) + x^(2n+2) / (2n+2)
    weights = 1.0 / np.arange(1, 2 * spec.n + 2)
    return np.append(p_values * weights, 1.0 / (2 * spec.n + 2))


def _perturbation(p_values: np.ndarray, x):
    """sum_i p_i x^(i+1) / (i+1) without the leading term."""
    weights = 1.0 / np.arange(1, len(p_values) + 1)
    return x * P.polyval(x, p_values * weights)


@require_nonnegative("x")
def force(spec: PotentialSpec, x: float, t: float) -> float:
    """
    Right-hand side of y' in the first-order system: -x^(2n+1) - sum_i p_i(t) x^i.

    :param spec: Potential specification
    :param x: Position, x >= 0
    :param t: Time
    :return: The force
    """
    return -P.polyval(x, _force_coefficients(spec, t))


@require_nonnegative("x")
def hamiltonian(spec: PotentialSpec, x: float, y: float, t: float) -> float:
    """H(x, y, t) = y^2/2 + x^(2n+2)/(2n+2) + sum_i p_i(t) x^(i+1)/(i+1)."""
    return 0.5 * y * y + x * P.polyval(x, _energy_coefficients(spec, spec.values(t)))


def unperturbed_energy(n: int, x, y):
    """H0(x, y) = y^2/2 + x^(2n+2)/(2n+2)."""
    return 0.5 * np.square(y) + np.power(x, 2 * n + 2) / (2 * n + 2)


def amplitude(n: int, energy):
    """Turning point A of the unperturbed orbit with H0 = energy."""
    return ((2 * n + 2) * np.asarray(energy, dtype=float)) ** (1.0 / (2 * n + 2))


@require_positive("energy")
def unperturbed_flight_time(consts: DerivedConstants, energy: float) -> float:
    """
    Time between consecutive impacts of the unperturbed impact oscillator at the given energy.

    The orbit through (A, 0) is x(t) = A C(A^n t) with period T0 / A^n; the flight between
    impacts is half of it.
    """
    return 0.5 * consts.T0 * float(amplitude(consts.n, energy)) ** (-consts.n)


def _impact_cs(table: GenTrigTable, phi):
    phi_arr = np.asarray(phi, dtype=float)
    fraction = phi_arr - np.floor(phi_arr)
    c, s = eval_cs(table, (0.5 * fraction - 0.25) * table.T0)
    # the barrier is hit exactly at integer phi
    c = np.where(fraction == 0.0, 0.0, c)
    if phi_arr.ndim == 0:
        return float(c), float(s)
    return c, s


def impact_cosine(table: GenTrigTable, phi):
    """C(((phi - [phi]) / 2 - 1/4) T0): the angular factor of x along phi."""
    c, _ = _impact_cs(table, phi)
    return c


def impact_position(consts: DerivedConstants, table: GenTrigTable, rho, phi):
    """x = (2 a rho)^alpha C(...) of the point (rho, phi)."""
    return (2.0 * consts.a * rho) ** consts.alpha * impact_cosine(table, phi)


@require_positive("rho")
def h3(
    spec: PotentialSpec,
    consts: DerivedConstants,
    table: GenTrigTable,
    rho: float,
    phi: float,
    t: float,
) -> float:
    """
    H3(rho, phi, t) = d rho^(2 beta) + sum_i p_i(t) (2 a rho)^(alpha(i+1)) C(...)^(i+1) / (i+1).

    The cosine argument is ((phi - [phi]) / 2 - 1/4) T0, which puts the impacts at integer phi.
    H3 is periodic in phi with period 1 and right-continuous at integers.
    """
    x = impact_position(consts, table, rho, phi)
    return consts.d * rho ** (2.0 * consts.beta) + _perturbation(spec.values(t), x)


@require_positive("rho")
def h3_partials(
    spec: PotentialSpec,
    consts: DerivedConstants,
    table: GenTrigTable,
    rho: float,
    phi: float,
    t: float,
) -> H3Partials:
    """Analytic partial derivatives of H3 with respect to rho, t and phi (phi not integer)."""
    c, s = _impact_cs(table, phi)
    radius = (2.0 * consts.a * rho) ** consts.alpha
    x = radius * c

    p_values = spec.values(t)
    dv_dx = P.polyval(x, p_values)

    d_rho = (
        2.0 * consts.beta * consts.d * rho ** (2.0 * consts.beta - 1.0)
        + dv_dx * consts.alpha * x / rho
    )
    d_t = _perturbation(spec.derivative_values(t), x)
    d_phi = dv_dx * radius * s * 0.5 * table.T0
    return H3Partials(float(d_rho), float(d_t), float(d_phi))
