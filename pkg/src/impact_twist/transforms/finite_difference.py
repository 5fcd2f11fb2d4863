"""
Finite-difference estimates of the partial derivatives D_I^j D_theta^k R(I, theta, tau).

Central stencils of second order are tensorized over (I, theta) and refined by one level of
Richardson extrapolation. Steps grow with the derivative order, h_m = delta^(3/(m+2)), relative
in I and absolute in theta.
"""

from __future__ import annotations

import logging
import math
from functools import lru_cache
from typing import Optional

import numpy as np

from ..dynamics import DerivedConstants, PotentialSpec
from ..exceptions import DomainError
from ..gentrig import GenTrigTable
from .exchange import solve_rho
from .schemas import PartialEstimate, RegimeOptions

logger = logging.getLogger(__name__)

MAX_ORDER = 5
AGREEMENT = 0.1


@lru_cache(maxsize=None)
def central_weights(order: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Offsets and weights of the narrowest central stencil for the order-th derivative.

    The weights solve the moment equations sum_s w_s s^q = order! delta_{q, order} for
    q = 0 ... 2p, p = (order + 1) // 2, which makes the stencil exact on polynomials of
    degree 2p and second-order accurate by symmetry.
    """
    half_width = (order + 1) // 2
    offsets = np.arange(-half_width, half_width + 1, dtype=float)
    vandermonde = np.vander(offsets, increasing=True).T
    rhs = np.zeros(len(offsets))
    rhs[order] = math.factorial(order)
    weights = np.linalg.solve(vandermonde, rhs)
    weights[np.abs(weights) < 1e-12] = 0.0
    weights.setflags(write=False)
    offsets.setflags(write=False)
    return offsets, weights


def step_size(order: int, delta: float) -> float:
    """Unscaled step delta^(3/(order+2)) for a derivative of the given order."""
    return delta ** (3.0 / (order + 2))


def _stencil_estimate(function, I, theta, j, k, h_i, h_theta) -> float:  # noqa: E741
    offsets_i, weights_i = central_weights(j)
    offsets_t, weights_t = central_weights(k)
    total = 0.0
    for s_i, w_i in zip(offsets_i, weights_i):
        if w_i == 0.0:
            continue
        for s_t, w_t in zip(offsets_t, weights_t):
            if w_t == 0.0:
                continue
            total += w_i * w_t * function(I + s_i * h_i, theta + s_t * h_theta)
    return total / (h_i**j * h_theta**k)


def fd_partial_R(
    spec: PotentialSpec,
    consts: DerivedConstants,
    table: GenTrigTable,
    I: float,  # noqa: E741
    theta: float,
    tau: float,
    j: int,
    k: int,
    regime: Optional[RegimeOptions] = None,
) -> PartialEstimate:
    """
    Estimate D_I^j D_theta^k R at fixed tau.

    :param spec: Potential specification
    :param consts: Derived constants
    :param table: (C, S) table
    :param I: Energy, in regime (every stencil point must stay above i_min)
    :param theta: Old time
    :param tau: Old angle, not an integer
    :param j: Order in I
    :param k: Order in theta, j + k <= 5
    :param regime: Regime settings, delta is regime.fd_delta
    :return: The Richardson-extrapolated estimate with its error and a reliability flag
    """
    regime = regime or RegimeOptions()
    if j < 0 or k < 0 or j + k > MAX_ORDER:
        raise DomainError("(j, k)", (j, k), f"orders must be >= 0 with j + k <= {MAX_ORDER}")
    if tau == math.floor(tau):
        raise DomainError("tau", tau, "must not be an integer (R is not smooth across impacts)")

    def remainder(i_value, theta_value):
        return solve_rho(spec, consts, table, i_value, theta_value, tau, regime)[1]

    h_i = I * step_size(j, regime.fd_delta)
    h_theta = step_size(k, regime.fd_delta)

    coarse = _stencil_estimate(remainder, I, theta, j, k, h_i, h_theta)
    fine = _stencil_estimate(remainder, I, theta, j, k, 0.5 * h_i, 0.5 * h_theta)
    value = (4.0 * fine - coarse) / 3.0
    error = abs(value - fine)

    reliable = bool(abs(fine - coarse) <= AGREEMENT * abs(value) or fine == coarse)
    if not reliable:
        logger.warning(
            "Richardson levels disagree for D_I^%d D_theta^%d R at I=%r, theta=%r, tau=%r: "
            "%r vs %r",
            j,
            k,
            I,
            theta,
            tau,
            coarse,
            fine,
        )
    return PartialEstimate(j=j, k=k, value=value, error=error, reliable=reliable)
