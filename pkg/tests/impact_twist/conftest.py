"""
Shared fixtures for the impact_twist test suite.

Tables are built once per session; building one integrates the homogeneous oscillator over a
quarter period and is the slowest part of most tests.
"""

import json

import pytest

from impact_twist.dynamics import DerivedConstants, FourierSeries, PotentialSpec
from impact_twist.gentrig import build_table


@pytest.fixture(scope="session")
def table_n1():
    """(C, S) table for n = 1."""
    return build_table(1)


@pytest.fixture(scope="session")
def table_n2():
    """(C, S) table for n = 2."""
    return build_table(2)


@pytest.fixture(scope="session")
def table_n0():
    """(C, S) table for the harmonic case n = 0: (cos, -sin)."""
    return build_table(0)


@pytest.fixture(scope="session")
def consts_n1(table_n1):
    return DerivedConstants.from_table(table_n1)


@pytest.fixture(scope="session")
def consts_n2(table_n2):
    return DerivedConstants.from_table(table_n2)


@pytest.fixture(scope="session")
def unperturbed_n1():
    """x'' + x^3 = 0."""
    return PotentialSpec.unperturbed(1)


@pytest.fixture(scope="session")
def forced_n1():
    """x'' + x^3 + 0.5 cos(2 pi t) = 0."""
    return PotentialSpec(n=1, coefficients=[FourierSeries(cos=(0.5,))])


@pytest.fixture(scope="session")
def cubic_n1():
    """x'' + x^3 + 0.5 cos(2 pi t) x^2 + 0.5 cos(2 pi t) = 0."""
    harmonic = FourierSeries(cos=(0.5,))
    return PotentialSpec(n=1, coefficients=[harmonic, FourierSeries(), harmonic])


@pytest.fixture(scope="session")
def constant_p0_n1():
    """x'' + x^3 + 0.5 = 0: autonomous, so H3 is conserved along orbits."""
    return PotentialSpec(n=1, coefficients=[FourierSeries.constant(0.5)])


@pytest.fixture
def config_data():
    """A well-formed poincare configuration as a dict."""
    return {
        "potential": {"n": 1, "coefficients": [{"a0": 0.0, "cos": [0.5]}]},
        "integrator": {"rel_tol": 1e-10, "abs_tol": 1e-10},
        "regime": {"i_min": 10.0, "gentrig_nodes": 256},
        "experiment": {"name": "poincare", "backend": "physical"},
        "grids": {"epsilons": [1e-2, 1e-3], "upsilon0": [1.0, 2.0], "theta0": [0.0, 0.5]},
        "output": {"directory": "out", "formats": ["csv"]},
    }


@pytest.fixture
def write_config(tmp_path):
    """Write a configuration dict to a file and return its path."""

    def write(data, name="config.json"):
        path = tmp_path / name
        path.write_text(json.dumps(data, indent=2))
        return path

    return write
