"""
The experiments behind `impact-twist run`.

Every experiment takes the validated configuration, an ArtifactWriter and the worker count,
writes its CSV and SVG files and returns a JSON-serializable summary for the manifest.
"""

from __future__ import annotations

import logging
from typing import Callable

import numpy as np

from ..analysis import (
    PhysicalBackend,
    boundedness_sweep,
    exchanged_poincare,
    fit_scaling,
    invariant_curve_recurrence,
    iterate_map,
    ordered_map,
    rotation_number,
    sample_initial_conditions,
)
from ..dynamics import DerivedConstants
from ..gentrig import GenTrigTable, beta_period, build_table, eval_cs, event_period
from ..integrator import PhaseState, integrate, successor
from ..transforms import fd_partial_R
from .artifacts import ArtifactWriter, plt
from .config import ExperimentConfig

logger = logging.getLogger(__name__)

Experiment = Callable[[ExperimentConfig, ArtifactWriter, int], dict]

SWEEP_HEADER = (
    "ic",
    "x0",
    "v0",
    "energy0",
    "checkpoint",
    "t",
    "M",
    "impacts",
    "ratio",
    "flagged",
    "error",
)


def _table(config: ExperimentConfig) -> tuple[GenTrigTable, DerivedConstants]:
    table = build_table(
        config.potential.n, M=config.regime.gentrig_nodes, tol=config.regime.gentrig_tol
    )
    return table, DerivedConstants.from_table(table)


########################################################################################
# gentrig-check
########################################################################################


def gentrig_check(config: ExperimentConfig, writer: ArtifactWriter, jobs: int) -> dict:
    table, _ = _table(config)
    t = np.linspace(0.0, table.T0, 4 * table.nodes + 1)
    c, s = eval_cs(table, t)
    defect = table.defect(c, s)

    writer.write_csv("gentrig_check.csv", ("t", "C", "S", "defect"), zip(t, c, s, defect))

    fig, (top, bottom) = plt.subplots(2, 1, sharex=True, figsize=(7, 6))
    top.plot(t, c, label="C")
    top.plot(t, s, label="S")
    top.legend()
    top.set_title(f"Generalized cosine and sine, n = {table.n}")
    bottom.semilogy(t, np.abs(defect) + 1e-300)
    bottom.set_xlabel("t")
    bottom.set_ylabel("|defect|")
    writer.write_svg("gentrig_check.svg", fig)

    return {
        "T0": table.T0,
        "T0_beta": beta_period(table.n),
        "T0_event": event_period(table.n, table.T0),
        "max_defect": float(np.max(np.abs(defect))),
        "C_quarter": float(eval_cs(table, table.quarter)[0]),
    }


########################################################################################
# orbit
########################################################################################


def orbit(config: ExperimentConfig, writer: ArtifactWriter, jobs: int) -> dict:
    settings = config.experiment
    state = PhaseState(x=settings.x0, v=settings.v0, t=settings.t0)
    trace = integrate(config.potential, state, settings.t_end, config.integrator)

    writer.write_csv("orbit.csv", ("t", "x", "v", "impact_flag"), trace.to_rows())

    fig, (phase, series) = plt.subplots(1, 2, figsize=(11, 5))
    phase.plot(trace.x, trace.v, lw=0.8)
    phase.axvline(0.0, color="k", lw=1.5)
    phase.set_xlabel("x")
    phase.set_ylabel("v")
    phase.set_title("Phase portrait")
    series.plot(trace.t, trace.x, lw=0.8)
    series.set_xlabel("t")
    series.set_ylabel("x")
    writer.write_svg("orbit.svg", fig)

    return {
        "impacts": trace.impact_count,
        "max_norm": trace.max_norm,
        "energy_drift": trace.energy_drift,
        "final_state": trace.final_state.model_dump(),
    }


########################################################################################
# successor
########################################################################################


def successor_map(config: ExperimentConfig, writer: ArtifactWriter, jobs: int) -> dict:
    settings = config.experiment
    state = PhaseState(x=0.0, v=settings.v0, t=settings.t0)
    rows = [(0, state.t, state.v, None)]
    for index in range(1, settings.impacts + 1):
        state, flight = successor(config.potential, state, config.integrator)
        rows.append((index, state.t, state.v, flight))

    writer.write_csv("successor.csv", ("index", "t", "v", "flight_time"), rows)

    fig, ax = plt.subplots(figsize=(7, 5))
    ax.plot([row[1] for row in rows], [row[2] for row in rows], ".", ms=3)
    ax.set_xlabel("impact time t")
    ax.set_ylabel("outgoing speed v")
    writer.write_svg("successor.svg", fig)

    speeds = np.array([row[2] for row in rows])
    return {
        "impacts": settings.impacts,
        "v_min": float(speeds.min()),
        "v_max": float(speeds.max()),
    }


########################################################################################
# poincare
########################################################################################


def _poincare_task(task):
    config, table, consts, upsilon0, theta0, epsilon = task
    return exchanged_poincare(
        config.potential,
        consts,
        table,
        upsilon0,
        theta0,
        epsilon,
        backend=config.experiment.backend,
        regime=config.regime.options(),
        opts=config.integrator,
        cross_check=config.experiment.cross_check,
    )


def _orbit_task(task):
    config, table, consts, upsilon0, epsilon = task
    backend = PhysicalBackend(
        config.potential, consts, table, config.regime.options(), config.integrator
    )
    return iterate_map(backend, upsilon0, 0.0, epsilon, config.grids.iterates)


def _twist_samples(config, table, consts, jobs):
    tasks = [
        (config, table, consts, upsilon0, theta0, epsilon)
        for epsilon in config.grids.epsilons
        for upsilon0 in config.grids.upsilon0
        for theta0 in config.grids.theta0
    ]
    return ordered_map(_poincare_task, tasks, jobs)


def poincare(config: ExperimentConfig, writer: ArtifactWriter, jobs: int) -> dict:
    table, consts = _table(config)
    samples = _twist_samples(config, table, consts, jobs)
    writer.write_csv(
        "poincare.csv",
        ("upsilon0", "theta0", "epsilon", "upsilon1", "theta1", "f1", "f2", "twist_term"),
        (sample.to_row() for sample in samples),
    )
    summary = {
        "samples": len(samples),
        "max_abs_f1": max(abs(sample.f1) for sample in samples),
        "max_abs_f2": max(abs(sample.f2) for sample in samples),
    }

    fig, ax = plt.subplots(figsize=(7, 5))
    for epsilon in config.grids.epsilons:
        chosen = [sample for sample in samples if sample.epsilon == epsilon]
        ax.plot(
            [sample.theta0 for sample in chosen],
            [sample.f1 for sample in chosen],
            ".",
            label=f"{epsilon:g}",
        )
    ax.set_xlabel("theta0")
    ax.set_ylabel("f1")
    ax.legend(title="epsilon")
    writer.write_svg("poincare_residuals.svg", fig)

    if config.experiment.orbits > 0:
        epsilon = config.grids.epsilons[0]
        grid = config.grids.upsilon0
        seeds = np.linspace(min(grid), max(grid), config.experiment.orbits)
        orbits = ordered_map(
            _orbit_task, [(config, table, consts, float(u), epsilon) for u in seeds], jobs
        )
        writer.write_csv(
            "poincare_orbits.csv",
            ("orbit", "iterate", "upsilon", "theta"),
            (row for i, map_orbit in enumerate(orbits) for row in map_orbit.to_rows(i)),
        )
        fig, ax = plt.subplots(figsize=(7, 5))
        for map_orbit in orbits:
            ax.plot(np.mod(map_orbit.theta, 1.0), map_orbit.upsilon, ",")
        ax.set_xlabel("theta mod 1")
        ax.set_ylabel("upsilon")
        ax.set_title(f"Exchanged Poincare map, epsilon = {epsilon:g}")
        writer.write_svg("poincare_orbits.svg", fig)
        summary["rotation_numbers"] = [
            rotation_number(map_orbit.theta).value if map_orbit.iterates >= 4 else None
            for map_orbit in orbits
        ]
    return summary


########################################################################################
# scaling
########################################################################################


def _partial_task(task):
    config, table, consts, energy, j, k = task
    settings = config.experiment
    return fd_partial_R(
        config.potential,
        consts,
        table,
        energy,
        settings.theta,
        settings.tau,
        j,
        k,
        config.regime.options(),
    ).value


def scaling(config: ExperimentConfig, writer: ArtifactWriter, jobs: int) -> dict:
    table, consts = _table(config)
    settings, grids = config.experiment, config.grids
    fits, raw = [], []

    if "R" in settings.quantities:
        energies = np.asarray(grids.energies, dtype=float)
        for j, k in settings.orders:
            tasks = [(config, table, consts, float(energy), j, k) for energy in energies]
            values = ordered_map(_partial_task, tasks, jobs)
            label = f"R_j{j}_k{k}"
            raw.extend((label, energy, value) for energy, value in zip(energies, values))
            fits.append((label, energies, values, fit_scaling(energies, values, "R", j, k)))

    residuals = [q for q in ("f1", "f2") if q in settings.quantities]
    if residuals:
        samples = _twist_samples(config, table, consts, jobs)
        epsilons = np.asarray(grids.epsilons, dtype=float)
        for which in residuals:
            sup = [
                max(abs(getattr(s, which)) for s in samples if s.epsilon == epsilon)
                for epsilon in epsilons
            ]
            raw.extend((which, epsilon, value) for epsilon, value in zip(epsilons, sup))
            fits.append((which, epsilons, sup, fit_scaling(epsilons, sup, which)))

    writer.write_csv(
        "scaling.csv",
        ("which", "j", "k", "exponent", "intercept", "r2", "points"),
        (fit.to_row() for _, _, _, fit in fits),
    )
    writer.write_csv("scaling_raw.csv", ("which", "x", "value"), raw)

    fig, ax = plt.subplots(figsize=(7, 5))
    for label, x, values, fit in fits:
        line = ax.loglog(x, np.abs(values), "o", ms=3, label=f"{label}: {fit.exponent:.3f}")[0]
        model = np.exp(fit.intercept) * x**fit.exponent
        ax.loglog(x, model, "-", lw=0.8, color=line.get_color())
    ax.set_xlabel("I or epsilon")
    ax.legend(fontsize="small")
    writer.write_svg("scaling.svg", fig)

    return {"fits": [fit.model_dump() | {"label": label} for label, _, _, fit in fits]}


########################################################################################
# sweep
########################################################################################


def sweep(config: ExperimentConfig, writer: ArtifactWriter, jobs: int) -> dict:
    grids, settings = config.grids, config.experiment
    if grids.initial_conditions:
        ics = [PhaseState(x=ic.x, v=ic.v, t=ic.t) for ic in grids.initial_conditions]
    else:
        ics = sample_initial_conditions(
            config.potential, grids.ic_count, grids.ic_energy_range, config.seed
        )

    report = boundedness_sweep(
        config.potential,
        ics,
        grids.horizon,
        config.integrator,
        checkpoints=settings.checkpoints,
        threshold=settings.threshold,
        jobs=jobs,
    )
    writer.write_csv(
        "sweep.csv",
        SWEEP_HEADER,
        report.to_rows(),
    )
    writer.write_csv(
        "sweep_stroboscopic.csv",
        ("ic", "t", "x", "v"),
        (
            (record.ic, t, x, v)
            for record in report.records
            for t, x, v in zip(record.strobe_t, record.strobe_x, record.strobe_v)
        ),
    )

    fig, ax = plt.subplots(figsize=(7, 5))
    for record in report.records:
        if len(record.M):
            ax.semilogy(record.checkpoint_times, record.M, lw=0.8)
    ax.set_xlabel("t")
    ax.set_ylabel("M(t)")
    ax.set_title("Running maximum of |x| + |v|")
    writer.write_svg("sweep.svg", fig)

    ratios = [record.ratio for record in report.records if record.ratio is not None]
    summary = {
        "initial_conditions": len(report.records),
        "flagged": report.flagged,
        "failures": report.failures,
        "max_ratio": max(ratios, default=None),
    }

    if grids.iterates > 0:
        table, consts = _table(config)
        epsilon = grids.epsilons[0]
        upsilon0 = float(np.median(grids.upsilon0))
        map_orbit = _orbit_task((config, table, consts, upsilon0, epsilon))
        writer.write_csv(
            "sweep_recurrence.csv",
            ("orbit", "iterate", "upsilon", "theta"),
            map_orbit.to_rows(),
        )
        summary["recurrence"] = {
            "epsilon": epsilon,
            "upsilon0": upsilon0,
            "iterates": map_orbit.iterates,
            "completed": map_orbit.completed,
            "max_deviation": (
                invariant_curve_recurrence(map_orbit.upsilon, map_orbit.theta).max_deviation
                if map_orbit.iterates >= 40
                else None
            ),
        }
    return summary


EXPERIMENTS: dict[str, Experiment] = {
    "gentrig-check": gentrig_check,
    "orbit": orbit,
    "successor": successor_map,
    "poincare": poincare,
    "scaling": scaling,
    "sweep": sweep,
}
