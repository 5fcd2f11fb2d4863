"""
Long-time boundedness sweeps over many initial conditions.

Each initial condition is integrated segment by segment between checkpoints. The running
maximum M(t) = sup_{s <= t} (|x(s)| + |v(s)|) is recorded at every checkpoint together with the
impact count, the impact-energy envelope and stroboscopic samples at integer times.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, Optional, Sequence, TypeVar

import numpy as np

from ..dynamics import PotentialSpec, amplitude, hamiltonian
from ..exceptions import DomainError, ImpactTwistError
from ..integrator import IntegratorOptions, PhaseState, integrate
from .schemas import SweepRecord, SweepReport

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 1.5

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(func: Callable[[T], R], tasks: Iterable[T], jobs: int = 1) -> list[R]:
    """
    Map func over tasks, in a process pool when jobs > 1.

    Results come back in task order whatever the number of workers.
    """
    tasks = list(tasks)
    if jobs <= 1 or len(tasks) <= 1:
        return [func(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, tasks))


def sample_initial_conditions(
    spec: PotentialSpec,
    count: int,
    energy_range: tuple[float, float] = (10.0, 1e4),
    seed: int = 0,
) -> list[PhaseState]:
    """
    Draw initial states at t = 0 with log-uniform unperturbed energy in energy_range.

    The position is uniform on [0, A) for the turning point A of that energy and the sign of
    the velocity is random.
    """
    low, high = energy_range
    if not 0.0 < low < high:
        raise DomainError("energy_range", energy_range, "must satisfy 0 < low < high")

    rng = np.random.default_rng(seed)
    energies = np.exp(rng.uniform(math.log(low), math.log(high), count))
    fractions = rng.uniform(0.0, 1.0, count)
    signs = rng.choice([-1.0, 1.0], count)

    states = []
    for energy, fraction, sign in zip(energies, fractions, signs):
        x = float(fraction * amplitude(spec.n, energy))
        kinetic = energy - x ** (2 * spec.n + 2) / (2 * spec.n + 2)
        v = float(sign * math.sqrt(2.0 * kinetic))
        if x == 0.0:
            v = abs(v)
        states.append(PhaseState(x=x, v=v, t=0.0))
    return states


def _checkpoint_times(t0: float, horizon: float, checkpoints: int) -> np.ndarray:
    return t0 + horizon * np.arange(1, checkpoints + 1) / checkpoints


def _sweep_one(task) -> SweepRecord:
    index, spec, state, horizon, opts, checkpoints, threshold = task
    energy0 = float(hamiltonian(spec, state.x, state.v, state.t))
    times = _checkpoint_times(state.t, horizon, checkpoints)
    head = {"ic": index, "x0": state.x, "v0": state.v, "energy0": energy0}

    running_max = abs(state.x) + abs(state.v)
    maxima, counts = [], []
    impact_energies = []
    strobe_t, strobe_x, strobe_v = [], [], []
    current = state
    try:
        for t_next in times:
            strobes = np.arange(math.floor(current.t) + 1, math.floor(t_next) + 1, dtype=float)
            trace = integrate(spec, current, float(t_next), opts, t_eval=strobes)

            running_max = max(running_max, trace.max_norm)
            maxima.append(running_max)
            counts.append(trace.final_state.impact_count)
            impact_energies.extend(0.5 * trace.impact_speeds**2)

            regular = trace.impact_flag == 0
            strobe_t.extend(trace.t[regular])
            strobe_x.extend(trace.x[regular])
            strobe_v.extend(trace.v[regular])
            current = trace.final_state
    except ImpactTwistError as exc:
        logger.warning("Initial condition %d failed: %s", index, exc)
        return SweepRecord(
            **head,
            checkpoint_times=times[: len(maxima)],
            M=np.asarray(maxima),
            impacts=np.asarray(counts, dtype=int),
            error=str(exc),
        )

    # the first checkpoint at or after a tenth of the horizon
    early = int(np.searchsorted(times, state.t + 0.1 * horizon * (1.0 - 1e-12)))
    ratio = maxima[-1] / maxima[min(early, len(maxima) - 1)]
    flagged = ratio > threshold
    if flagged:
        logger.warning(
            "Initial condition %d grew by a factor %.4g > %.4g", index, ratio, threshold
        )

    return SweepRecord(
        **head,
        checkpoint_times=times,
        M=np.asarray(maxima),
        impacts=np.asarray(counts, dtype=int),
        ratio=ratio,
        flagged=flagged,
        energy_min=min(impact_energies) if impact_energies else None,
        energy_max=max(impact_energies) if impact_energies else None,
        strobe_t=np.asarray(strobe_t),
        strobe_x=np.asarray(strobe_x),
        strobe_v=np.asarray(strobe_v),
    )


def boundedness_sweep(
    spec: PotentialSpec,
    initial_conditions: Sequence[PhaseState],
    horizon: float,
    opts: Optional[IntegratorOptions] = None,
    checkpoints: int = 10,
    threshold: float = DEFAULT_THRESHOLD,
    jobs: int = 1,
) -> SweepReport:
    """
    Integrate every initial condition over the horizon and flag growing orbits.

    :param spec: Potential specification
    :param initial_conditions: Initial states
    :param horizon: Integration time, in periods of the coefficients
    :param opts: Integrator options
    :param checkpoints: Number of equally spaced checkpoints, the last one at the horizon
    :param threshold: An orbit is flagged when M(T) / M(T/10) exceeds it
    :param jobs: Worker processes
    :return: The per-IC records in input order; failures are recorded, not raised
    """
    if horizon <= 0:
        raise DomainError("horizon", horizon, "must be > 0")
    if checkpoints < 1:
        raise DomainError("checkpoints", checkpoints, "must be >= 1")

    opts = opts or IntegratorOptions()
    tasks = [
        (i, spec, state, horizon, opts, checkpoints, threshold)
        for i, state in enumerate(initial_conditions)
    ]
    logger.info("Boundedness sweep: %d initial conditions, horizon %g", len(tasks), horizon)
    records = ordered_map(_sweep_one, tasks, jobs)

    report = SweepReport(horizon=horizon, threshold=threshold, records=records)
    logger.info(
        "Boundedness sweep done: %d flagged, %d failed",
        len(report.flagged),
        len(report.failures),
    )
    return report
