from .table import (
    GenTrigTable,
    beta_period,
    build_table,
    compute_period,
    eval_cs,
    event_period,
    quadrature_period,
)

__all__ = [
    "GenTrigTable",
    "beta_period",
    "build_table",
    "compute_period",
    "eval_cs",
    "event_period",
    "quadrature_period",
]
