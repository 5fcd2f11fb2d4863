"""impact_twist - Numerical experiments on a forced impact oscillator and its twist map."""

from impact_twist.dynamics import DerivedConstants, FourierSeries, PotentialSpec
from impact_twist.gentrig import GenTrigTable, build_table, eval_cs
from impact_twist.integrator import IntegratorOptions, PhaseState, integrate, successor

__version__ = "0.1.0"


__all__ = [
    "DerivedConstants",
    "FourierSeries",
    "GenTrigTable",
    "IntegratorOptions",
    "PhaseState",
    "PotentialSpec",
    "build_table",
    "eval_cs",
    "integrate",
    "successor",
]
