from .potential import (
    H3Partials,
    amplitude,
    force,
    h3,
    h3_partials,
    hamiltonian,
    impact_cosine,
    impact_position,
    unperturbed_energy,
    unperturbed_flight_time,
)
from .schemas import DerivedConstants, FourierSeries, PotentialSpec

__all__ = [
    "DerivedConstants",
    "FourierSeries",
    "H3Partials",
    "PotentialSpec",
    "amplitude",
    "force",
    "h3",
    "h3_partials",
    "hamiltonian",
    "impact_cosine",
    "impact_position",
    "unperturbed_energy",
    "unperturbed_flight_time",
]
