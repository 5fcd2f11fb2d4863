"""
Event-driven integration of the impact oscillator in the half-plane x >= 0.

Between impacts the smooth system x' = v, v' = -x^(2n+1) - sum_i p_i(t) x^i is advanced by an
adaptive Runge-Kutta pair with dense output. A terminal event on x = 0 stops each flight; the
impact time is polished on the dense output and the state is reset to (0, -v) before the next
flight starts.
"""

from __future__ import annotations

import logging
from functools import lru_cache
from typing import Optional

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.integrate import solve_ivp
from scipy.optimize import root_scalar

from ..dynamics import PotentialSpec, amplitude, unperturbed_energy
from ..exceptions import (
    DegenerateContactError,
    DomainError,
    EscapeError,
    IntegrationError,
    StiffnessError,
)
from ..gentrig import quadrature_period
from .schemas import IntegratorOptions, OrbitTrace, PhaseState

logger = logging.getLogger(__name__)

ESCAPE_FACTOR = 10.0
NORM_REFINEMENT = 8


def _rhs(spec: PotentialSpec):
    if spec.is_unperturbed:
        power = 2 * spec.n + 1

        def rhs(t, y):
            return [y[1], -(y[0] ** power)]

        return rhs

    def rhs(t, y):
        return [y[1], -P.polyval(y[0], np.append(spec.values(t), 1.0))]

    return rhs


def _barrier(t, y):
    return y[0]


_barrier.terminal = True
_barrier.direction = -1


def _localize_impact(dense, t_lo: float, t_guess: float, opts: IntegratorOptions) -> float:
    """
    Polish the impact time with Newton on the dense output, falling back to brentq.

    :param dense: Dense output of the flight that ended in the impact
    :param t_lo: Last accepted time with x > 0
    :param t_guess: Event time reported by the solver
    """

    def position(t):
        return float(dense(t)[0])

    def velocity(t):
        return float(dense(t)[1])

    window = t_guess - t_lo
    try:
        result = root_scalar(
            position,
            x0=t_guess,
            fprime=velocity,
            method="newton",
            xtol=opts.event_tol,
            maxiter=20,
        )
        if result.converged and t_lo < result.root and abs(result.root - t_guess) <= window:
            return float(result.root)
    except (RuntimeError, ZeroDivisionError, ValueError):
        pass

    logger.debug("Newton impact refinement failed near t=%r; bisecting", t_guess)
    t_hi = t_guess
    for _ in range(8):
        if position(t_hi) <= 0.0:
            break
        t_hi += max(opts.event_tol, 1e-3 * window)
    if not (position(t_lo) > 0.0 >= position(t_hi)):
        raise IntegrationError(t_guess, "impact could not be bracketed on the dense output")
    result = root_scalar(position, bracket=(t_lo, t_hi), method="brentq", xtol=opts.event_tol)
    return float(result.root)


def _check_initial_state(s0: PhaseState, t_end: float, opts: IntegratorOptions) -> None:
    if t_end <= s0.t:
        raise DomainError("t_end", t_end, f"must be greater than the initial time {s0.t!r}")
    if s0.x == 0.0:
        if abs(s0.v) < opts.min_contact_speed:
            raise DegenerateContactError(s0.t, s0.v)
        if s0.v < 0.0:
            raise DomainError("s0.v", s0.v, "must be >= 0 when starting on the barrier")


class _SampleBuffer:
    def __init__(self):
        self.t, self.x, self.v, self.flag = [], [], [], []

    def extend(self, t, x, v, flag: int = 0) -> None:
        t = np.atleast_1d(t)
        self.t.extend(t)
        self.x.extend(np.atleast_1d(x))
        self.v.extend(np.atleast_1d(v))
        self.flag.extend([flag] * t.size)

    def arrays(self) -> dict[str, np.ndarray]:
        return {
            "t": np.asarray(self.t, dtype=float),
            "x": np.asarray(self.x, dtype=float),
            "v": np.asarray(self.v, dtype=float),
            "impact_flag": np.asarray(self.flag, dtype=np.int8),
        }


def integrate(
    spec: PotentialSpec,
    s0: PhaseState,
    t_end: float,
    opts: Optional[IntegratorOptions] = None,
    t_eval: Optional[np.ndarray] = None,
    max_impacts: Optional[int] = None,
) -> OrbitTrace:
    """
    Integrate the impact oscillator from s0 up to t_end.

    :param spec: Potential specification
    :param s0: Initial state with x >= 0 (v >= 0 if x = 0)
    :param t_end: Final time, greater than s0.t
    :param opts: Solver options
    :param t_eval: Optional output times; if omitted every accepted step is sampled
    :param max_impacts: Stop right after this many impacts
    :return: The orbit trace; impact rows are always included in the samples
    """
    opts = opts or IntegratorOptions()
    _check_initial_state(s0, t_end, opts)

    rhs = _rhs(spec)
    t_out = None if t_eval is None else np.sort(np.asarray(t_eval, dtype=float))

    samples = _SampleBuffer()
    impact_times, impact_speeds = [], []
    energy0 = float(unperturbed_energy(spec.n, s0.x, s0.v))
    max_norm = abs(s0.x) + abs(s0.v)
    energy_drift = 0.0

    if t_out is None:
        samples.extend(s0.t, s0.x, s0.v)

    t, x, v, count = s0.t, s0.x, s0.v, s0.impact_count
    recorded_until = -np.inf
    while True:
        sol = solve_ivp(
            rhs,
            (t, t_end),
            [x, v],
            method=opts.method,
            rtol=opts.rel_tol,
            atol=opts.abs_tol,
            max_step=opts.solver_max_step,
            events=_barrier,
            dense_output=True,
        )
        if sol.status < 0:
            if "step size" in sol.message:
                raise StiffnessError(float(sol.t[-1]))
            raise IntegrationError(float(sol.t[-1]), sol.message)

        hit = sol.status == 1
        steps = slice(1, -1) if hit else slice(1, None)
        step_t, step_y = sol.t[steps], sol.y[:, steps]

        if step_t.size and spec.is_unperturbed:
            energies = unperturbed_energy(spec.n, step_y[0], step_y[1])
            energy_drift = max(energy_drift, float(np.max(np.abs(energies - energy0))))

        t_stop = float(sol.t[-1])
        if hit:
            t_guess = float(sol.t_events[0][0])
            t_lo = float(sol.t[-2])
            if t_lo == t and x == 0.0:
                # flight shorter than the first step: start the bracket inside the arc
                t_lo = 0.5 * (t + t_guess)
            t_stop = _localize_impact(sol.sol, t_lo, t_guess, opts)

        # sup of |x| + |v| on a grid finer than the accepted steps
        fine = sol.sol(np.linspace(t, t_stop, NORM_REFINEMENT * len(sol.t) + 1))
        max_norm = max(max_norm, float(np.max(np.abs(fine[0]) + np.abs(fine[1]))))

        if t_out is None:
            samples.extend(step_t, step_y[0], step_y[1])
        else:
            mask = (t_out > recorded_until) & (t_out >= t) & (t_out <= t_stop)
            if np.any(mask):
                dense_y = sol.sol(t_out[mask])
                samples.extend(t_out[mask], np.maximum(dense_y[0], 0.0), dense_y[1])
                recorded_until = float(t_out[mask][-1])

        if not hit:
            t, x, v = float(sol.t[-1]), float(sol.y[0, -1]), float(sol.y[1, -1])
            break

        v_in = float(sol.sol(t_stop)[1])
        if abs(v_in) < opts.min_contact_speed:
            raise DegenerateContactError(t_stop, v_in)

        t, x, v, count = t_stop, 0.0, -v_in, count + 1
        impact_times.append(t)
        impact_speeds.append(abs(v_in))
        samples.extend(t, 0.0, v, flag=1)
        recorded_until = max(recorded_until, t)
        max_norm = max(max_norm, abs(v))
        logger.debug("impact %d at t=%.17g, |v|=%.17g", count, t, abs(v_in))

        if max_impacts is not None and len(impact_times) >= max_impacts:
            break
        if t >= t_end:
            break

    return OrbitTrace(
        **samples.arrays(),
        impact_times=np.asarray(impact_times, dtype=float),
        impact_speeds=np.asarray(impact_speeds, dtype=float),
        final_state=PhaseState(x=max(x, 0.0), v=v, t=t, impact_count=count),
        max_norm=max_norm,
        energy_drift=energy_drift if spec.is_unperturbed else None,
    )


@lru_cache(maxsize=16)
def _period(n: int) -> float:
    return quadrature_period(n)


def default_time_cap(n: int, v: float) -> float:
    """ESCAPE_FACTOR times the unperturbed flight time at the energy v^2 / 2."""
    flight = 0.5 * _period(n) * float(amplitude(n, 0.5 * v * v)) ** (-n)
    return ESCAPE_FACTOR * flight


def successor(
    spec: PotentialSpec,
    state: PhaseState,
    opts: Optional[IntegratorOptions] = None,
    time_cap: Optional[float] = None,
) -> tuple[PhaseState, float]:
    """
    Map one outgoing impact state to the next one.

    :param spec: Potential specification
    :param state: State on the barrier, x = 0 and v > 0
    :param opts: Solver options
    :param time_cap: Maximal flight time; defaults to 10x the unperturbed flight time
    :return: The post-reflection state at the next impact and the flight time
    """
    if state.x != 0.0:
        raise DomainError("state.x", state.x, "must be 0 (state on the barrier)")
    if state.v <= 0.0:
        raise DomainError("state.v", state.v, "must be > 0 (outgoing impact state)")

    cap = time_cap if time_cap is not None else default_time_cap(spec.n, state.v)
    trace = integrate(spec, state, state.t + cap, opts, max_impacts=1)
    if trace.impact_count == 0:
        raise EscapeError(trace.final_state.t, cap)

    next_state = trace.final_state
    return next_state, next_state.t - state.t
