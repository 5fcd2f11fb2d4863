"""
Realizations of the exchanged Poincare map P: (upsilon0, theta0) -> (upsilon1, theta1).

P advances the new time tau = phi by one unit, which is one flight from an impact to the next.
Every backend implements the same call; analysis code only sees PoincareBackend.

PHYSICAL
    Builds the outgoing impact state with energy I = upsilon0 / epsilon at time theta0,
    integrates the impact oscillator to the next impact and maps that state back through
    the action-angle and exchange transformations.

DIRECT
    Integrates dupsilon/dtau = epsilon D_theta R, dtheta/dtau = rate(I) - D_I R over
    tau in [0, 1] with finite-difference partials of R on the right-hand side.
"""

from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from typing import Literal, Optional

from scipy.integrate import solve_ivp

from ..dynamics import DerivedConstants, PotentialSpec
from ..exceptions import IntegrationError, OutOfRegimeError
from ..gentrig import GenTrigTable
from ..integrator import IntegratorOptions, PhaseState, successor
from ..transforms import (
    ExchangedCoords,
    RegimeOptions,
    fd_partial_R,
    from_exchanged,
    impact_to_xy,
    to_exchanged,
    twist_rate,
    xy_to_impact,
)

logger = logging.getLogger(__name__)

BackendName = Literal["physical", "direct"]

DIRECT_RTOL = 1e-10
DIRECT_ATOL = 1e-12


class PoincareBackend(ABC):
    """
    Abstract base class for the exchanged Poincare map.

    Implementations are stateless apart from the immutable inputs passed to __init__, so one
    instance may be shared between iterations and worker processes.
    """

    name: str

    def __init__(
        self,
        spec: PotentialSpec,
        consts: DerivedConstants,
        table: GenTrigTable,
        regime: Optional[RegimeOptions] = None,
        opts: Optional[IntegratorOptions] = None,
    ):
        self.spec = spec
        self.consts = consts
        self.table = table
        self.regime = regime or RegimeOptions()
        self.opts = opts or IntegratorOptions()

    def check_regime(self, upsilon: float, epsilon: float) -> float:
        """Return I = upsilon / epsilon or raise OutOfRegimeError below i_min."""
        energy = upsilon / epsilon
        if energy < self.regime.i_min:
            raise OutOfRegimeError(
                f"epsilon={epsilon!r} is too large: I = upsilon/epsilon = {energy!r} "
                f"< i_min = {self.regime.i_min!r}"
            )
        return energy

    @abstractmethod
    def __call__(self, upsilon0: float, theta0: float, epsilon: float) -> tuple[float, float]:
        """
        Apply the map once.

        :param upsilon0: Scaled energy
        :param theta0: Lifted time of the outgoing impact
        :param epsilon: Scale, I = upsilon0 / epsilon
        :return: (upsilon1, theta1) with theta1 lifted
        """
        raise NotImplementedError


class PhysicalBackend(PoincareBackend):
    name = "physical"

    def start_state(self, upsilon0: float, theta0: float, epsilon: float) -> PhaseState:
        """Outgoing impact state whose exchanged coordinates are (I, theta0, tau = 0)."""
        energy = self.check_regime(upsilon0, epsilon)
        ic, _ = from_exchanged(
            self.spec,
            self.consts,
            self.table,
            ExchangedCoords(I=energy, theta=theta0, tau=0.0),
            self.regime,
        )
        _, y = impact_to_xy(self.consts, self.table, ic)
        return PhaseState(x=0.0, v=y, t=theta0)

    def __call__(self, upsilon0: float, theta0: float, epsilon: float) -> tuple[float, float]:
        state = self.start_state(upsilon0, theta0, epsilon)
        next_state, _ = successor(self.spec, state, self.opts)

        ic = xy_to_impact(self.consts, self.table, 0.0, next_state.v, lift=1)
        ex = to_exchanged(self.spec, self.consts, self.table, ic, next_state.t)
        return epsilon * ex.I, next_state.t


class DirectBackend(PoincareBackend):
    name = "direct"

    def _rhs(self, epsilon: float):
        spec, consts, table, regime = self.spec, self.consts, self.table, self.regime

        def rhs(tau, y):
            upsilon, theta = y
            energy = upsilon / epsilon
            rate = twist_rate(consts, energy)
            if tau == math.floor(tau):
                # the perturbation vanishes on the barrier
                return [0.0, rate]
            d_theta = fd_partial_R(spec, consts, table, energy, theta, tau, 0, 1, regime)
            d_action = fd_partial_R(spec, consts, table, energy, theta, tau, 1, 0, regime)
            return [epsilon * d_theta.value, rate - d_action.value]

        return rhs

    def __call__(self, upsilon0: float, theta0: float, epsilon: float) -> tuple[float, float]:
        self.check_regime(upsilon0, epsilon)
        sol = solve_ivp(
            self._rhs(epsilon),
            (0.0, 1.0),
            [upsilon0, theta0],
            method="DOP853",
            rtol=DIRECT_RTOL,
            atol=DIRECT_ATOL,
        )
        if sol.status < 0:
            raise IntegrationError(float(sol.t[-1]), sol.message)
        return float(sol.y[0, -1]), float(sol.y[1, -1])


BACKENDS: dict[str, type[PoincareBackend]] = {
    PhysicalBackend.name: PhysicalBackend,
    DirectBackend.name: DirectBackend,
}


def make_backend(
    name: BackendName,
    spec: PotentialSpec,
    consts: DerivedConstants,
    table: GenTrigTable,
    regime: Optional[RegimeOptions] = None,
    opts: Optional[IntegratorOptions] = None,
) -> PoincareBackend:
    try:
        backend_class = BACKENDS[name]
    except KeyError:
        raise ValueError(
            f"Unknown Poincare backend {name!r}; expected one of {sorted(BACKENDS)}"
        )
    return backend_class(spec, consts, table, regime, opts)
