from .backends import DirectBackend, PhysicalBackend, PoincareBackend, make_backend
from .poincare import (
    exchanged_poincare,
    intersection_check,
    iterate_map,
    map_jacobian_determinant,
)
from .rotation import invariant_curve_recurrence, rotation_number, twist_interval
from .scaling import fit_scaling
from .schemas import (
    CurveRecurrence,
    IntersectionReport,
    MapOrbit,
    Quantity,
    RotationEstimate,
    ScalingFit,
    SweepRecord,
    SweepReport,
    TwistSample,
)
from .sweep import boundedness_sweep, ordered_map, sample_initial_conditions

__all__ = [
    "CurveRecurrence",
    "DirectBackend",
    "IntersectionReport",
    "MapOrbit",
    "PhysicalBackend",
    "PoincareBackend",
    "Quantity",
    "RotationEstimate",
    "ScalingFit",
    "SweepRecord",
    "SweepReport",
    "TwistSample",
    "boundedness_sweep",
    "exchanged_poincare",
    "fit_scaling",
    "intersection_check",
    "invariant_curve_recurrence",
    "iterate_map",
    "make_backend",
    "map_jacobian_determinant",
    "ordered_map",
    "rotation_number",
    "sample_initial_conditions",
    "twist_interval",
]
