"""
Experiment configuration: one JSON document validated into ExperimentConfig.

    {
      "potential": {"n": 1, "coefficients": [{"a0": 0.0, "cos": [0.5]}]},
      "integrator": {"rel_tol": 1e-12, "abs_tol": 1e-12},
      "regime": {"i_min": 10.0, "fd_delta": 1e-3},
      "experiment": {"name": "poincare", "backend": "physical"},
      "grids": {"epsilons": [1e-3, 1e-4], "upsilon0": [1.0, 1.5, 2.0]},
      "output": {"directory": "out", "formats": ["csv", "svg"]},
      "validation_mode": false
    }
"""

from __future__ import annotations

import json
import os
import re
from pathlib import Path
from typing import Literal, Optional, Union, get_args

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from ..analysis import Quantity
from ..dynamics import PotentialSpec
from ..exceptions import ConfigParseError
from ..integrator import IntegratorOptions
from ..transforms import RegimeOptions

ExperimentName = Literal["gentrig-check", "orbit", "successor", "poincare", "scaling", "sweep"]
OutputFormat = Literal["csv", "svg"]
EXPERIMENT_NAMES: tuple[str, ...] = get_args(ExperimentName)


def _default_orders() -> list[tuple[int, int]]:
    return [(j, k) for j in range(4) for k in range(4 - j)]


class RegimeConfig(RegimeOptions):
    gentrig_nodes: int = Field(default=1024, ge=256)
    gentrig_tol: float = Field(default=1e-10, gt=0)

    def options(self) -> RegimeOptions:
        return RegimeOptions(**self.model_dump(include=set(RegimeOptions.model_fields)))


class InitialCondition(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    x: float
    v: float
    t: float = 0.0


class ExperimentSettings(BaseModel):
    """The experiment to run and its knobs; each experiment ignores the knobs of the others."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: ExperimentName
    # orbit and successor
    x0: float = 0.0
    v0: float = 10.0
    t0: float = 0.0
    t_end: float = 20.0
    impacts: int = Field(default=100, ge=1)
    # poincare and scaling
    backend: Literal["physical", "direct"] = "physical"
    cross_check: bool = False
    orbits: int = Field(default=0, ge=0)
    quantities: list[Quantity] = Field(default_factory=lambda: ["R", "f1", "f2"])
    orders: list[tuple[int, int]] = Field(default_factory=_default_orders)
    theta: float = 0.1
    tau: float = 0.5
    # sweep
    threshold: float = 1.5
    checkpoints: int = Field(default=10, ge=1)


class GridsConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    epsilons: list[float] = Field(default_factory=list)
    upsilon0: list[float] = Field(default_factory=lambda: [1.0, 1.25, 1.5, 1.75, 2.0])
    theta0: list[float] = Field(default_factory=lambda: [0.0, 0.2, 0.4, 0.6, 0.8])
    energies: list[float] = Field(default_factory=list)
    initial_conditions: list[InitialCondition] = Field(default_factory=list)
    ic_count: int = Field(default=20, ge=0)
    ic_energy_range: tuple[float, float] = (10.0, 1e4)
    horizon: float = 1000.0
    iterates: int = Field(default=0, ge=0)


class OutputConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    directory: str = "out"
    formats: list[OutputFormat] = Field(default_factory=lambda: ["csv", "svg"])


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    potential: PotentialSpec
    integrator: IntegratorOptions = Field(default_factory=IntegratorOptions)
    regime: RegimeConfig = Field(default_factory=RegimeConfig)
    experiment: ExperimentSettings
    grids: GridsConfig = Field(default_factory=GridsConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)
    validation_mode: bool = False
    seed: int = Field(default=0, ge=0)

    @field_validator("experiment", mode="before")
    @classmethod
    def _experiment_by_name(cls, value):
        if isinstance(value, str):
            return {"name": value}
        return value

    def with_overrides(
        self, out: Optional[Union[str, os.PathLike]] = None, seed: Optional[int] = None
    ) -> ExperimentConfig:
        """Copy with the command-line overrides applied."""
        update = {}
        if out is not None:
            update["output"] = self.output.model_copy(update={"directory": str(out)})
        if seed is not None:
            update["seed"] = seed
        return self.model_copy(update=update)


def _line_of(text: str, loc: tuple) -> Optional[int]:
    """Line of the deepest key of a pydantic error location that occurs in the document."""
    position, found = 0, False
    for part in loc:
        if not isinstance(part, str):
            continue
        match = re.compile(rf'"{re.escape(part)}"\s*:').search(text, position)
        if match is None:
            break
        position, found = match.start(), True
    return text.count("\n", 0, position) + 1 if found else None


def parse_config(text: str, path: Union[str, os.PathLike] = "<config>") -> ExperimentConfig:
    """
    Parse a JSON configuration document.

    :raises ConfigParseError: With line and column for JSON syntax errors, and with every
        failing field and the line of its key for schema errors
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigParseError(path, [exc.msg], line=exc.lineno, column=exc.colno) from exc

    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as exc:
        errors = exc.errors()
        problems = [
            f"{'.'.join(str(part) for part in error['loc']) or '<root>'}: {error['msg']}"
            for error in errors
        ]
        lines = [_line_of(text, error["loc"]) for error in errors]
        located = [line for line in lines if line is not None]
        raise ConfigParseError(
            path, problems, line=located[0] if located else None, problem_lines=lines
        ) from exc


def load_config(path: Union[str, os.PathLike]) -> ExperimentConfig:
    """Read and parse a configuration file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigParseError(path, [f"cannot read file: {exc.strerror or exc}"]) from exc
    return parse_config(text, path)
