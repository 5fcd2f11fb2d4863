"""
Generalized cosine/sine pair (C, S) of the homogeneous oscillator x'' = -x^(2n+1).

(C, S) solves C' = S, S' = -C^(2n+1) with (C(0), S(0)) = (1, 0). The pair is tabulated over a
quarter period [0, T0/4] and evaluated anywhere on the real line through the symmetries

    C(-t) = C(t),  S(-t) = -S(t),  C(t + T0/2) = -C(t),  S(t + T0/2) = -S(t).

The conserved quantity is (n+1) S^2 + C^(2n+2) = 1.
"""

from __future__ import annotations

import logging
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, PrivateAttr
from scipy.integrate import quad, solve_ivp
from scipy.interpolate import BPoly
from scipy.special import beta as beta_function

from ..exceptions import (
    DomainError,
    IntegrationError,
    PeriodConsistencyError,
    QuadratureError,
)

logger = logging.getLogger(__name__)

# DOP853 refuses tolerances below 100 * machine epsilon.
_ODE_RTOL = 1e-13
_ODE_ATOL = 1e-15

MIN_NODES = 256
INTERPOLATION_ORDER = 5


def _homogeneous_rhs(n: int):
    power = 2 * n + 1

    def rhs(t, y):
        return [y[1], -(y[0] ** power)]

    return rhs


def _check_degree(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise DomainError("n", n, "must be a non-negative integer")


def quadrature_period(n: int, tol: float = 1e-10) -> float:
    """
    Period T0 = 4 sqrt(n+1) * int_0^1 (1 - u^(2n+2))^(-1/2) du by regularized quadrature.

    The endpoint singularity at u = 1 is removed with u = 1 - w^2 and the factorization
    1 - u^(2n+2) = (1 - u) * sum_k u^k, which leaves the smooth integrand
    2 / sqrt(sum_{k=0}^{2n+1} (1 - w^2)^k) on [0, 1].
    """
    _check_degree(n)
    exponents = np.arange(2 * n + 2)

    def integrand(w):
        return 2.0 / math.sqrt(float(np.sum((1.0 - w * w) ** exponents)))

    try:
        value, abserr = quad(integrand, 0.0, 1.0, epsabs=0.0, epsrel=1e-13, limit=200)
    except ValueError as exc:
        raise QuadratureError(n, math.inf, tol, reason=str(exc)) from exc
    if abserr > tol:
        raise QuadratureError(n, abserr, tol)
    return 4.0 * math.sqrt(n + 1) * value


def beta_period(n: int) -> float:
    """Closed form of the period integral through the Beta function."""
    _check_degree(n)
    m = 2 * n + 2
    return 4.0 * math.sqrt(n + 1) * beta_function(1.0 / m, 0.5) / m


def event_period(n: int, estimate: float) -> float:
    """
    Period from the first return of the integrated orbit to (1, 0).

    S crosses zero downwards only at multiples of T0, so the first downward crossing beyond
    half the estimate is the first return.
    """

    def s_crossing(t, y):
        return y[1]

    s_crossing.direction = -1

    sol = solve_ivp(
        _homogeneous_rhs(n),
        (0.0, 1.25 * estimate),
        [1.0, 0.0],
        method="DOP853",
        rtol=_ODE_RTOL,
        atol=_ODE_ATOL,
        events=s_crossing,
    )
    if sol.status < 0:
        raise IntegrationError(float(sol.t[-1]), sol.message)

    crossings = [t for t in sol.t_events[0] if t > 0.5 * estimate]
    if not crossings:
        raise IntegrationError(float(sol.t[-1]), "no return to (1, 0) detected")
    return float(crossings[0])


def compute_period(n: int, tol: float = 1e-10) -> float:
    """
    Minimal period T0 of (C, S), cross-checked by quadrature and event detection.

    :param n: Degree parameter (n = 0 is the harmonic validation case)
    :param tol: Agreement tolerance between both methods, in (1e-14, 1e-6)
    :return: The quadrature value of T0
    """
    _check_degree(n)
    if not 1e-14 < tol < 1e-6:
        raise DomainError("tol", tol, "must lie in (1e-14, 1e-6)")

    t_quad = quadrature_period(n, tol)
    t_event = event_period(n, t_quad)
    if abs(t_quad - t_event) > tol:
        raise PeriodConsistencyError(t_quad, t_event, tol)

    logger.debug("T0(n=%d) = %.17g (event detection %.17g)", n, t_quad, t_event)
    return t_quad


class GenTrigTable(BaseModel):
    """
    Tabulated (C, S) over [0, T0/4] with quintic Hermite interpolation.

    The interpolant matches C, C', C'' and S, S', S'' at every node, using the defining ODE
    for the derivatives, so it is a piecewise polynomial of order 5 that keeps five derivatives
    accurate. Instances are immutable and safe to share between workers.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n: int
    T0: float
    t_nodes: np.ndarray
    c_nodes: np.ndarray
    s_nodes: np.ndarray
    order: int = INTERPOLATION_ORDER

    _c_poly: BPoly = PrivateAttr()
    _s_poly: BPoly = PrivateAttr()

    def model_post_init(self, __context) -> None:
        for arr in (self.t_nodes, self.c_nodes, self.s_nodes):
            arr.setflags(write=False)
        c, s, p = self.c_nodes, self.s_nodes, 2 * self.n + 1
        c_pow = c**p
        s_second = -p * c ** (p - 1) * s
        self._c_poly = BPoly.from_derivatives(self.t_nodes, np.column_stack([c, s, -c_pow]))
        self._s_poly = BPoly.from_derivatives(
            self.t_nodes, np.column_stack([s, -c_pow, s_second])
        )

    @property
    def nodes(self) -> int:
        return len(self.t_nodes) - 1

    @property
    def quarter(self) -> float:
        return self.T0 / 4.0

    def defect(self, c, s):
        """Conservation defect (n+1) S^2 + C^(2n+2) - 1."""
        return (self.n + 1) * np.square(s) + np.power(c, 2 * self.n + 2) - 1.0

    def node_defect(self) -> float:
        return float(np.max(np.abs(self.defect(self.c_nodes, self.s_nodes))))

    def __call__(self, t):
        return eval_cs(self, t)

    def derivatives(self, t):
        """(C'(t), S'(t)) from the defining ODE."""
        c, s = eval_cs(self, t)
        return s, -np.power(c, 2 * self.n + 1)

    def to_rows(self) -> list[tuple[float, float, float, float]]:
        """Rows (t, C, S, defect) of the stored nodes."""
        defects = self.defect(self.c_nodes, self.s_nodes)
        return [
            (float(t), float(c), float(s), float(e))
            for t, c, s, e in zip(self.t_nodes, self.c_nodes, self.s_nodes, defects)
        ]


def build_table(n: int, M: int = 1024, tol: float = 1e-10) -> GenTrigTable:
    """
    Integrate (C, S) over a quarter period and tabulate it on M + 1 uniform nodes.

    :param n: Degree parameter
    :param M: Number of intervals, at least 256
    :param tol: Tolerance for the period cross-check and the node conservation defect
    :return: An immutable GenTrigTable
    """
    if M < MIN_NODES:
        raise DomainError("M", M, f"must be >= {MIN_NODES}")

    period = compute_period(n, tol)
    quarter = period / 4.0
    t_nodes = np.linspace(0.0, quarter, M + 1)

    sol = solve_ivp(
        _homogeneous_rhs(n),
        (0.0, quarter),
        [1.0, 0.0],
        method="DOP853",
        rtol=_ODE_RTOL,
        atol=_ODE_ATOL,
        t_eval=t_nodes,
    )
    if sol.status < 0:
        raise IntegrationError(float(sol.t[-1]), sol.message)

    c_nodes = np.array(sol.y[0], dtype=float)
    s_nodes = np.array(sol.y[1], dtype=float)
    # pin the exactly known endpoints
    c_nodes[0], s_nodes[0] = 1.0, 0.0
    c_nodes[-1], s_nodes[-1] = 0.0, -1.0 / math.sqrt(n + 1)

    table = GenTrigTable(n=n, T0=period, t_nodes=t_nodes, c_nodes=c_nodes, s_nodes=s_nodes)
    defect = table.node_defect()
    if defect > tol:
        raise IntegrationError(quarter, f"node conservation defect {defect!r} exceeds {tol!r}")

    logger.info(
        "Built (C, S) table for n=%d: T0=%.15g, %d nodes, defect %.3g", n, period, M, defect
    )
    return table


def eval_cs(table: GenTrigTable, t):
    """
    Evaluate (C(t), S(t)) for scalar or array t.

    t is reduced to [0, T0) by periodicity, to [0, T0/2) by half-period antisymmetry and to
    [0, T0/4] by reflection about T0/4, where C(T0/2 - r) = -C(r) and S(T0/2 - r) = S(r).
    """
    t_arr = np.asarray(t, dtype=float)
    period = table.T0
    half, quarter = period / 2.0, period / 4.0

    r = np.mod(t_arr, period)
    second_half = r >= half
    r = np.where(second_half, r - half, r)
    reflected = r > quarter
    r = np.where(reflected, half - r, r)
    r = np.clip(r, 0.0, quarter)

    c = table._c_poly(r)
    s = table._s_poly(r)
    c = np.where(reflected, -c, c)
    sign = np.where(second_half, -1.0, 1.0)
    c, s = sign * c, sign * s

    if t_arr.ndim == 0:
        return float(c), float(s)
    return c, s
