"""
Action-angle map Psi1 and the impact folding Psi2.

    Psi1: x = (a lambda)^alpha C(vartheta T0),  y = (a lambda)^beta S(vartheta T0)
    Psi2: lambda = 2 rho,  vartheta = frac(phi) / 2 - 1/4

With a = 1/(alpha T0) the Jacobian determinant of Psi1 is -1 everywhere, and that of the
composite Psi1 o Psi2 as well. Integer phi lands on the barrier x = 0 with y > 0.
"""

from __future__ import annotations

import logging
import math
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import root_scalar

from ..dynamics import DerivedConstants
from ..exceptions import DomainError
from ..gentrig import GenTrigTable, eval_cs
from .schemas import ActionAngle, ImpactCoords

logger = logging.getLogger(__name__)

# angles within this distance of the barrier are snapped onto it
BARRIER_SNAP = 1e-12


def psi1(consts: DerivedConstants, table: GenTrigTable, aa: ActionAngle) -> tuple[float, float]:
    """
    Map an action-angle pair to the phase plane.

    :param consts: Derived constants (alpha, beta, a)
    :param table: (C, S) table of the same n
    :param aa: Action-angle pair, lambda > 0
    :return: The point (x, y)
    """
    c, s = eval_cs(table, aa.angle * table.T0)
    scale = consts.a * aa.action
    return scale**consts.alpha * c, scale**consts.beta * s


def _quarter_angle(table: GenTrigTable, c_abs: float, s_abs: float) -> float:
    """
    r in [0, T0/4] with (C(r), S(r)) proportional to (c_abs, -s_abs).

    g(r) = C(r) s_abs + S(r) c_abs decreases from s_abs to -c_abs / sqrt(n+1) on the
    quarter; the node values bracket the root, Newton polishes it.
    """
    if c_abs == 0.0:
        return table.quarter
    if s_abs == 0.0:
        return 0.0

    def g(r):
        c, s = eval_cs(table, r)
        return c * s_abs + s * c_abs

    def g_prime(r):
        c, s = eval_cs(table, r)
        return s * s_abs - c ** (2 * table.n + 1) * c_abs

    values = table.c_nodes * s_abs + table.s_nodes * c_abs
    i = int(np.clip(np.searchsorted(-values, 0.0), 1, len(values) - 1))
    lo, hi = float(table.t_nodes[i - 1]), float(table.t_nodes[i])
    guess = lo + (hi - lo) * values[i - 1] / (values[i - 1] - values[i])

    try:
        result = root_scalar(
            g, x0=guess, fprime=g_prime, method="newton", xtol=1e-15, maxiter=20
        )
        if result.converged and 0.0 <= result.root <= table.quarter:
            return float(result.root)
    except (RuntimeError, ZeroDivisionError):
        pass

    logger.debug("Newton angle inversion failed for (%r, %r); using brentq", c_abs, s_abs)
    return float(root_scalar(g, bracket=(0.0, table.quarter), method="brentq", xtol=1e-15).root)


def psi1_inv(consts: DerivedConstants, table: GenTrigTable, x: float, y: float) -> ActionAngle:
    """
    Invert Psi1.

    The action follows from the energy, (a lambda)^(2 beta) = (2n+2) H0(x, y). The angle is
    recovered on the base quarter and unfolded by the signs of (x, y).

    :raises DomainError: For the origin
    """
    if x == 0.0 and y == 0.0:
        raise DomainError("(x, y)", (x, y), "the origin has no action-angle representation")

    n = consts.n
    energy_scale = y * y * (n + 1) + x ** (2 * n + 2)  # (2n+2) H0
    radius = energy_scale ** (1.0 / (2 * n + 2))
    action = energy_scale ** (1.0 / (2.0 * consts.beta)) / consts.a

    c, s = x / radius, y / radius ** (n + 1)
    r = _quarter_angle(table, abs(c), abs(s))

    half = 0.5 * table.T0
    if c >= 0.0 and s <= 0.0:
        angle = r
    elif c <= 0.0 and s <= 0.0:
        angle = half - r
    elif c <= 0.0:
        angle = half + r
    else:
        angle = table.T0 - r
    return ActionAngle(action=action, angle=angle / table.T0)


def psi2(ic: ImpactCoords) -> ActionAngle:
    """(rho, phi) -> (lambda, vartheta) = (2 rho, frac(phi)/2 - 1/4 mod 1)."""
    return ActionAngle(action=2.0 * ic.rho, angle=0.5 * (ic.phi - math.floor(ic.phi)) - 0.25)


def psi2_inv(aa: ActionAngle, lift: int = 0) -> ImpactCoords:
    """
    Invert Psi2 on the closed half-plane x >= 0.

    phi is returned in [0, 1]: 0 on the outgoing side of the barrier, 1 only for the
    incoming impact point. lift is added to phi (number of impacts so far).

    :raises DomainError: If vartheta points into x < 0
    """
    w = (aa.angle + 0.25) % 1.0
    if w < BARRIER_SNAP or w > 1.0 - BARRIER_SNAP:
        w = 0.0
    elif abs(w - 0.5) <= BARRIER_SNAP:
        w = 0.5
    if w > 0.5:
        raise DomainError("vartheta", aa.angle, "must describe a point with x >= 0")
    return ImpactCoords(rho=0.5 * aa.action, phi=2.0 * w + lift)


def impact_to_xy(consts: DerivedConstants, table: GenTrigTable, ic: ImpactCoords):
    """Psi1 o Psi2; integer phi maps exactly onto x = 0."""
    x, y = psi1(consts, table, psi2(ic))
    if ic.phi == math.floor(ic.phi):
        return 0.0, y
    return max(x, 0.0), y


def xy_to_impact(
    consts: DerivedConstants, table: GenTrigTable, x: float, y: float, lift: int = 0
) -> ImpactCoords:
    """(Psi1 o Psi2)^-1 for points with x >= 0."""
    if x < 0.0:
        raise DomainError("x", x, "must be >= 0")
    return psi2_inv(psi1_inv(consts, table, x, y), lift)


def numerical_jacobian(
    func: Callable[[np.ndarray], Sequence[float]],
    point: Sequence[float],
    steps: Sequence[float],
) -> np.ndarray:
    """
    Jacobian matrix of func at point by second-order central differences.

    :param func: Map R^m -> R^k taking a numpy array
    :param point: Evaluation point
    :param steps: One step per coordinate
    :return: Array of shape (k, m)
    """
    point = np.asarray(point, dtype=float)
    columns = []
    for i, h in enumerate(steps):
        offset = np.zeros_like(point)
        offset[i] = h
        forward = np.asarray(func(point + offset), dtype=float)
        backward = np.asarray(func(point - offset), dtype=float)
        columns.append((forward - backward) / (2.0 * h))
    return np.column_stack(columns)
