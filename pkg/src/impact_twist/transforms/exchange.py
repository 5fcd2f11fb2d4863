"""
Time-energy exchange (rho, phi, t) -> (I, theta, tau) = (H3, t, phi).

On a level set H3(rho, phi, t) = I the action is recovered as rho = rho0(I) - R(I, theta, tau)
with rho0(I) = (I/d)^(1/(2 beta)); the new Hamiltonian is H4 = rho.
"""

from __future__ import annotations

import logging
import math
from typing import Optional

import numpy as np
from scipy.optimize import root_scalar

from ..decorators import require_positive
from ..dynamics import DerivedConstants, PotentialSpec, h3, h3_partials
from ..exceptions import ConvergenceError, DomainError, OutOfRegimeError
from ..gentrig import GenTrigTable
from .schemas import ExchangedCoords, ImpactCoords, RegimeOptions

logger = logging.getLogger(__name__)

BRACKET = (0.5, 2.0)
_XTOL = 4.0 * np.finfo(float).eps


def _on_barrier(tau: float) -> bool:
    return tau == math.floor(tau)


def solve_rho(
    spec: PotentialSpec,
    consts: DerivedConstants,
    table: GenTrigTable,
    I: float,  # noqa: E741
    theta: float,
    tau: float,
    regime: Optional[RegimeOptions] = None,
) -> tuple[float, float]:
    """
    Solve H3(rho, tau, theta) = I for rho.

    Newton is seeded at the unperturbed value rho0 = (I/d)^(1/(2 beta)); if it fails or
    leaves the residual above newton_rtol * I, brentq is run on [1/2, 2] * rho0.

    :param spec: Potential specification
    :param consts: Derived constants
    :param table: (C, S) table
    :param I: Energy level, at least regime.i_min
    :param theta: Old time t, reduced mod 1 (H3 is 1-periodic in t)
    :param tau: Old angle phi
    :param regime: Regime settings
    :return: (rho, R) with R = rho0 - rho
    :raises DomainError: If theta is not finite
    :raises OutOfRegimeError: If I < i_min or the bracket does not contain a root
    :raises ConvergenceError: If neither Newton nor brentq meet the residual tolerance
    """
    regime = regime or RegimeOptions()
    if not I >= regime.i_min:
        raise OutOfRegimeError(f"I={I!r} is below the regime threshold i_min={regime.i_min!r}")
    if not math.isfinite(theta):
        raise DomainError("theta", theta, "must be finite")
    theta = theta % 1.0

    seed = float(consts.unperturbed_rho(I))
    if spec.is_unperturbed or _on_barrier(tau):
        return seed, 0.0

    tolerance = regime.newton_rtol * I

    def residual(rho):
        return h3(spec, consts, table, rho, tau, theta) - I

    def slope(rho):
        return h3_partials(spec, consts, table, rho, tau, theta).d_rho

    try:
        result = root_scalar(
            residual,
            x0=seed,
            fprime=slope,
            method="newton",
            xtol=_XTOL * seed,
            maxiter=regime.newton_max_iter,
        )
        rho = float(result.root)
        if result.converged and rho > 0.0 and abs(residual(rho)) < tolerance:
            return rho, seed - rho
    except (RuntimeError, ZeroDivisionError, ValueError) as exc:
        logger.debug("Newton for rho failed at I=%r, theta=%r, tau=%r: %s", I, theta, tau, exc)

    lo, hi = BRACKET[0] * seed, BRACKET[1] * seed
    f_lo, f_hi = residual(lo), residual(hi)
    if f_lo * f_hi > 0.0:
        raise OutOfRegimeError(
            f"no sign change of H3 - I on [{lo!r}, {hi!r}] "
            f"at I={I!r}, theta={theta!r}, tau={tau!r}"
        )

    result = root_scalar(
        residual, bracket=(lo, hi), method="brentq", xtol=_XTOL * seed, rtol=1e-15
    )
    rho = float(result.root)
    error = abs(residual(rho))
    if not result.converged or error >= tolerance:
        raise ConvergenceError("solve_rho", error)
    return rho, seed - rho


def to_exchanged(
    spec: PotentialSpec,
    consts: DerivedConstants,
    table: GenTrigTable,
    ic: ImpactCoords,
    t: float,
) -> ExchangedCoords:
    """I = H3(rho, phi, t), theta = t mod 1, tau = phi."""
    energy = h3(spec, consts, table, ic.rho, ic.phi, t)
    return ExchangedCoords(I=energy, theta=t, tau=ic.phi)


def from_exchanged(
    spec: PotentialSpec,
    consts: DerivedConstants,
    table: GenTrigTable,
    ex: ExchangedCoords,
    regime: Optional[RegimeOptions] = None,
) -> tuple[ImpactCoords, float]:
    """
    Inverse of to_exchanged.

    :return: The impact coordinates and the time t = theta in [0, 1)
    """
    rho, _ = solve_rho(spec, consts, table, ex.I, ex.theta, ex.tau, regime)
    return ImpactCoords(rho=rho, phi=ex.tau), ex.theta


@require_positive("I")
def twist_rate(consts: DerivedConstants, I: float) -> float:  # noqa: E741
    """
    dtheta/dtau of the unperturbed system, (1/(2 beta)) d^(-1/(2 beta)) I^(1/(2 beta) - 1).
    """
    exponent = consts.inverse_exponent
    return exponent * consts.d ** (-exponent) * I ** (exponent - 1.0)


@require_positive("upsilon", "epsilon")
def twist_term(consts: DerivedConstants, upsilon: float, epsilon: float) -> float:
    """
    Angle advance of the unperturbed map over one unit of tau at I = upsilon / epsilon.

    Equal to (1/(2 beta)) d^(-1/(2 beta)) epsilon^(1 - 1/(2 beta)) upsilon^(1/(2 beta) - 1), the
    unperturbed flight time between two impacts.
    """
    exponent = consts.inverse_exponent
    return (
        exponent
        * consts.d ** (-exponent)
        * epsilon ** (1.0 - exponent)
        * upsilon ** (exponent - 1.0)
    )
