from __future__ import annotations

import math
import os
from typing import Union

from pydantic import BaseModel, ConfigDict

from ..analysis.scaling import MIN_DECADES, MIN_POINTS
from ..exceptions import ConfigParseError
from ..transforms.finite_difference import MAX_ORDER
from .config import ExperimentConfig, load_config


class ValidationReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    path: str
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations


def _scaling_grid_problems(name: str, grid: list[float]) -> list[str]:
    if len(grid) < MIN_POINTS:
        return [
            f"grids.{name} needs at least {MIN_POINTS} points for a scaling fit, "
            f"got {len(grid)}"
        ]
    positive = [value for value in grid if value > 0]
    if len(positive) < len(grid):
        return [f"grids.{name} must be positive"]
    if math.log10(max(grid) / min(grid)) < MIN_DECADES - 1e-9:
        return [f"grids.{name} must span at least {MIN_DECADES:g} decades"]
    return []


def collect_violations(config: ExperimentConfig) -> list[str]:
    """
    Every semantic violation of a schema-valid configuration, in a stable order.
    """
    violations = []
    settings, grids, regime = config.experiment, config.grids, config.regime
    name = settings.name

    if config.potential.n == 0 and not config.validation_mode:
        violations.append("potential.n = 0 is only allowed with validation_mode = true")

    if name in ("orbit", "successor"):
        if settings.x0 < 0:
            violations.append(f"experiment.x0 = {settings.x0!r} must be >= 0")
        elif settings.x0 == 0 and settings.v0 <= 0:
            violations.append("experiment.v0 must be > 0 when the orbit starts on the barrier")
    if name == "orbit" and settings.t_end <= settings.t0:
        violations.append("experiment.t_end must be greater than experiment.t0")
    if name == "successor" and settings.x0 != 0:
        violations.append("experiment.x0 must be 0 for the successor map (impact states only)")

    uses_epsilons = name == "poincare" or (
        name == "scaling" and {"f1", "f2"} & set(settings.quantities)
    )
    if uses_epsilons or (name == "sweep" and grids.iterates > 0):
        if not grids.epsilons:
            violations.append("grids.epsilons must not be empty")
        elif any(epsilon <= 0 for epsilon in grids.epsilons):
            violations.append("grids.epsilons must be positive")
        elif min(grids.upsilon0, default=1.0) / max(grids.epsilons) < regime.i_min:
            violations.append(
                f"out of regime: upsilon0 / epsilon must be >= i_min = {regime.i_min!r}, "
                f"got {min(grids.upsilon0) / max(grids.epsilons)!r} for epsilon = "
                f"{max(grids.epsilons)!r}"
            )
    if name in ("poincare", "scaling"):
        if not grids.upsilon0:
            violations.append("grids.upsilon0 must not be empty")
        elif any(not 1.0 <= upsilon <= 2.0 for upsilon in grids.upsilon0):
            violations.append("grids.upsilon0 values must lie in [1, 2]")
        if not grids.theta0:
            violations.append("grids.theta0 must not be empty")
    if name == "poincare" and settings.orbits > 0 and grids.iterates < 1:
        violations.append("grids.iterates must be >= 1 when experiment.orbits > 0")

    if name == "scaling":
        if uses_epsilons:
            violations.extend(_scaling_grid_problems("epsilons", grids.epsilons))
        if "R" in settings.quantities:
            violations.extend(_scaling_grid_problems("energies", grids.energies))
            if grids.energies and min(grids.energies) < regime.i_min:
                violations.append(
                    f"out of regime: grids.energies must be >= i_min = {regime.i_min!r}"
                )
            if not settings.orders:
                violations.append("experiment.orders must not be empty")
            for j, k in settings.orders:
                if j < 0 or k < 0 or j + k > MAX_ORDER:
                    violations.append(
                        f"experiment.orders ({j}, {k}) must satisfy j, k >= 0, "
                        f"j + k <= {MAX_ORDER}"
                    )
            if settings.tau == math.floor(settings.tau):
                violations.append("experiment.tau must not be an integer")

    if name == "sweep":
        if not grids.initial_conditions and grids.ic_count < 1:
            violations.append("grids.initial_conditions is empty and grids.ic_count is 0")
        if not 0 < grids.ic_energy_range[0] < grids.ic_energy_range[1]:
            violations.append("grids.ic_energy_range must satisfy 0 < low < high")
        if grids.horizon <= 0:
            violations.append("grids.horizon must be > 0")
        if settings.threshold <= 1:
            violations.append("experiment.threshold must be > 1")
        for i, ic in enumerate(grids.initial_conditions):
            if ic.x < 0 or (ic.x == 0 and ic.v <= 0):
                violations.append(
                    f"grids.initial_conditions[{i}] must have x > 0, or x = 0 and v > 0"
                )

    return violations


def validate(path: Union[str, os.PathLike]) -> ValidationReport:
    """Check a configuration file without running it; parse errors become violations."""
    try:
        config = load_config(path)
    except ConfigParseError as exc:
        violations = [
            f"line {line}: {problem}" if line is not None else problem
            for line, problem in zip(exc.problem_lines, exc.problems)
        ]
        return ValidationReport(path=str(path), violations=violations)
    return ValidationReport(path=str(path), violations=collect_violations(config))
