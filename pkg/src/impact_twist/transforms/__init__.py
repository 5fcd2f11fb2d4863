from .action_angle import (
    impact_to_xy,
    numerical_jacobian,
    psi1,
    psi1_inv,
    psi2,
    psi2_inv,
    xy_to_impact,
)
from .exchange import from_exchanged, solve_rho, to_exchanged, twist_rate, twist_term
from .finite_difference import central_weights, fd_partial_R, step_size
from .schemas import (
    ActionAngle,
    ExchangedCoords,
    ImpactCoords,
    PartialEstimate,
    RegimeOptions,
    ScaledCoords,
)

__all__ = [
    "ActionAngle",
    "ExchangedCoords",
    "ImpactCoords",
    "PartialEstimate",
    "RegimeOptions",
    "ScaledCoords",
    "central_weights",
    "fd_partial_R",
    "from_exchanged",
    "impact_to_xy",
    "numerical_jacobian",
    "psi1",
    "psi1_inv",
    "psi2",
    "psi2_inv",
    "solve_rho",
    "step_size",
    "to_exchanged",
    "twist_rate",
    "twist_term",
    "xy_to_impact",
]
