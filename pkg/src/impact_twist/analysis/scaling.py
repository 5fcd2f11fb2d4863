from __future__ import annotations

import numpy as np

from ..exceptions import DegenerateGridError
from .schemas import Quantity, ScalingFit

MIN_POINTS = 8
MIN_DECADES = 3.0


def fit_scaling(x, values, which: Quantity, j: int = 0, k: int = 0) -> ScalingFit:
    """
    Least-squares power law |value| ~ x^exponent on a log-log scale.

    :param x: Grid (epsilon or I), positive, at least 8 points spanning 3 decades
    :param values: Measured quantity; the absolute value is fitted and must be positive
    :param which: Name of the quantity ("R", "f1" or "f2")
    :param j: Order in I of the fitted derivative of R
    :param k: Order in theta of the fitted derivative of R
    :return: The fit with its coefficient of determination
    """
    x = np.asarray(x, dtype=float)
    magnitude = np.abs(np.asarray(values, dtype=float))

    if x.shape != magnitude.shape or x.ndim != 1:
        raise DegenerateGridError(
            f"grid and values must be 1-d of equal length, got {x.shape} and {magnitude.shape}"
        )
    if len(x) < MIN_POINTS:
        raise DegenerateGridError(f"{len(x)} points, at least {MIN_POINTS} required")
    if np.any(x <= 0) or not np.all(np.isfinite(x)):
        raise DegenerateGridError("grid values must be finite and positive")
    if np.any(magnitude == 0) or not np.all(np.isfinite(magnitude)):
        raise DegenerateGridError("values must be finite and non-zero")

    decades = np.log10(x.max() / x.min())
    if decades < MIN_DECADES - 1e-9:
        raise DegenerateGridError(
            f"grid spans {decades:.3g} decades, at least {MIN_DECADES} required"
        )

    log_x, log_y = np.log(x), np.log(magnitude)
    exponent, intercept = np.polyfit(log_x, log_y, 1)
    residual = log_y - (exponent * log_x + intercept)
    total = np.sum((log_y - log_y.mean()) ** 2)
    r2 = 1.0 - float(np.sum(residual**2)) / total if total > 0 else 1.0

    return ScalingFit(
        which=which,
        j=j,
        k=k,
        exponent=float(exponent),
        intercept=float(intercept),
        r2=r2,
        points=len(x),
        x_min=float(x.min()),
        x_max=float(x.max()),
    )
