from .impact_integrator import default_time_cap, integrate, successor
from .schemas import IntegratorOptions, OrbitTrace, PhaseState

__all__ = [
    "IntegratorOptions",
    "OrbitTrace",
    "PhaseState",
    "default_time_cap",
    "integrate",
    "successor",
]
