"""
Orbit diagnostics of the exchanged twist map: rotation numbers, recurrence to invariant
curves and the twist frequency window.
"""

from __future__ import annotations

import logging

import numpy as np

from ..dynamics import DerivedConstants
from ..exceptions import DomainError
from ..transforms import twist_term
from .schemas import CurveRecurrence, RotationEstimate, trig_design

logger = logging.getLogger(__name__)

MIN_ITERATES = 1000


def rotation_number(theta_lift, required: int = MIN_ITERATES) -> RotationEstimate:
    """
    Birkhoff average (theta_N - theta_0) / N of a lifted angle sequence.

    The error estimate is the difference between the full average and the average over the
    last quarter of the orbit. Orbits shorter than `required` iterates give a partial result.
    """
    theta = np.asarray(theta_lift, dtype=float)
    iterates = len(theta) - 1
    if iterates < 4:
        raise DomainError("theta_lift", f"{iterates} iterates", "needs at least 4 iterates")

    value = (theta[-1] - theta[0]) / iterates
    start = iterates - iterates // 4
    tail = (theta[-1] - theta[start]) / (iterates - start)
    partial = iterates < required
    if partial:
        logger.warning("Rotation number from %d < %d iterates is partial", iterates, required)
    return RotationEstimate(
        value=value, error=abs(value - tail), iterates=iterates, partial=partial
    )


def invariant_curve_recurrence(upsilon, theta_lift, harmonics: int = 8) -> CurveRecurrence:
    """
    Fit upsilon = g(theta mod 1) by trigonometric least squares on the first half of the
    orbit and return the largest deviation of the second half from g.

    A small deviation means the orbit keeps returning to one invariant circle.
    """
    upsilon = np.asarray(upsilon, dtype=float)
    theta = np.mod(np.asarray(theta_lift, dtype=float), 1.0)
    half = len(theta) // 2
    if half < 2 * harmonics + 1:
        raise DomainError(
            "orbit", f"{len(theta)} points", f"too short for {harmonics} harmonics"
        )

    design = trig_design(theta[:half], harmonics)
    coefficients, *_ = np.linalg.lstsq(design, upsilon[:half], rcond=None)
    fit_residual = float(np.max(np.abs(design @ coefficients - upsilon[:half])))
    prediction = trig_design(theta[half:], harmonics) @ coefficients
    max_deviation = float(np.max(np.abs(prediction - upsilon[half:])))
    return CurveRecurrence(
        harmonics=harmonics,
        coefficients=coefficients,
        fit_residual=fit_residual,
        max_deviation=max_deviation,
    )


def twist_interval(consts: DerivedConstants, epsilon: float) -> tuple[float, float]:
    """
    Unperturbed angle advances at the annulus edges upsilon = 2 and upsilon = 1.

    The advance decreases in upsilon, so the pair is ordered (low, high).
    """
    return twist_term(consts, 2.0, epsilon), twist_term(consts, 1.0, epsilon)
