from __future__ import annotations

import logging
from typing import Callable, Optional, Union

import numpy as np

from ..dynamics import DerivedConstants, PotentialSpec
from ..exceptions import BackendDisagreementError, DomainError, ImpactTwistError
from ..gentrig import GenTrigTable
from ..integrator import IntegratorOptions
from ..transforms import RegimeOptions, ScaledCoords, numerical_jacobian, twist_term
from .backends import BackendName, PoincareBackend, make_backend
from .schemas import IntersectionReport, MapOrbit, TwistSample

logger = logging.getLogger(__name__)

AGREEMENT_TOL = 1e-6
DISAGREEMENT_TOL = 1e-4


def _sample(
    backend: PoincareBackend, upsilon0: float, theta0: float, epsilon: float
) -> TwistSample:
    upsilon1, theta1 = backend(upsilon0, theta0, epsilon)
    advance = twist_term(backend.consts, upsilon0, epsilon)
    return TwistSample(
        upsilon0=upsilon0,
        theta0=theta0,
        epsilon=epsilon,
        upsilon1=upsilon1,
        theta1=theta1,
        f1=upsilon1 - upsilon0,
        f2=theta1 - theta0 - advance,
        twist_term=advance,
        backend=backend.name,
    )


def exchanged_poincare(
    spec: PotentialSpec,
    consts: DerivedConstants,
    table: GenTrigTable,
    upsilon0: float,
    theta0: float,
    epsilon: float,
    backend: Union[BackendName, PoincareBackend] = "physical",
    regime: Optional[RegimeOptions] = None,
    opts: Optional[IntegratorOptions] = None,
    cross_check: bool = False,
) -> TwistSample:
    """
    Apply the exchanged Poincare map once and split it into twist and residuals.

    :param spec: Potential specification
    :param consts: Derived constants
    :param table: (C, S) table
    :param upsilon0: Scaled energy in [1, 2]
    :param theta0: Time of the outgoing impact
    :param epsilon: Scale with upsilon0 / epsilon >= i_min
    :param backend: "physical", "direct" or a backend instance
    :param regime: Regime settings
    :param opts: Integrator options of the physical backend
    :param cross_check: Also run the other backend and compare
    :return: The sample with f1 = upsilon1 - upsilon0 and f2 = theta1 - theta0 - twist_term
    :raises BackendDisagreementError: If cross_check is set and the backends differ by > 1e-4
    """
    ScaledCoords(upsilon=upsilon0, epsilon=epsilon)  # range check
    if isinstance(backend, str):
        backend = make_backend(backend, spec, consts, table, regime, opts)

    sample = _sample(backend, upsilon0, theta0, epsilon)
    if not cross_check:
        return sample

    other_name = "direct" if backend.name == "physical" else "physical"
    other = make_backend(other_name, spec, consts, table, backend.regime, backend.opts)
    reference = _sample(other, upsilon0, theta0, epsilon)

    gap = max(abs(sample.upsilon1 - reference.upsilon1), abs(sample.theta1 - reference.theta1))
    if gap > DISAGREEMENT_TOL:
        raise BackendDisagreementError(
            (sample.upsilon1, sample.theta1),
            (reference.upsilon1, reference.theta1),
            DISAGREEMENT_TOL,
        )
    if gap > AGREEMENT_TOL:
        logger.warning(
            "Poincare backends differ by %.3g at upsilon0=%r, theta0=%r, epsilon=%r",
            gap,
            upsilon0,
            theta0,
            epsilon,
        )
    return sample


def iterate_map(
    backend: PoincareBackend,
    upsilon0: float,
    theta0: float,
    epsilon: float,
    iterates: int,
) -> MapOrbit:
    """
    Iterate the exchanged map; theta is kept as a continuous lift.

    An orbit that escapes or leaves the regime stops early and is returned with
    completed = False and the error message.
    """
    if iterates < 1:
        raise DomainError("iterates", iterates, "must be >= 1")

    upsilon, theta = [upsilon0], [theta0]
    error = None
    for i in range(iterates):
        try:
            u, t = backend(upsilon[-1], theta[-1], epsilon)
        except ImpactTwistError as exc:
            error = str(exc)
            logger.warning(
                "Orbit from (%r, %r) stopped after %d iterates: %s", upsilon0, theta0, i, exc
            )
            break
        upsilon.append(u)
        theta.append(t)

    return MapOrbit(
        upsilon=np.asarray(upsilon),
        theta=np.asarray(theta),
        epsilon=epsilon,
        completed=error is None,
        error=error,
    )


def map_jacobian_determinant(
    backend: PoincareBackend,
    upsilon0: float,
    theta0: float,
    epsilon: float,
    steps: tuple[float, float] = (1e-5, 1e-5),
) -> float:
    """Determinant of DP at (upsilon0, theta0) by central differences."""

    def image(point):
        return backend(float(point[0]), float(point[1]), epsilon)

    return float(np.linalg.det(numerical_jacobian(image, (upsilon0, theta0), steps)))


def intersection_check(
    backend: PoincareBackend,
    curve: Callable[[np.ndarray], np.ndarray],
    epsilon: float,
    samples: int = 32,
) -> IntersectionReport:
    """
    Sample the circle upsilon = curve(theta) and measure upsilon_image - curve(theta_image).

    The image of the circle intersects the circle when the gap changes sign.
    """
    thetas = np.linspace(0.0, 1.0, samples, endpoint=False)
    gaps = []
    for theta in thetas:
        upsilon = float(curve(theta))
        upsilon1, theta1 = backend(upsilon, float(theta), epsilon)
        gaps.append(upsilon1 - float(curve(theta1 % 1.0)))
    return IntersectionReport(min_gap=min(gaps), max_gap=max(gaps), samples=samples)
