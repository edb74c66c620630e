import pytest

from delaunaylab.bifurcation.crossing import first_bifurcation
from delaunaylab.bifurcation.symmetry import SymmetryClass
from delaunaylab.core.profile import jacobi_profile, solve_profile
from delaunaylab.utils.config import RunConfig


@pytest.fixture(scope='session')
def nodoid():
    """D_{-1} sampled at the default resolution."""
    return solve_profile(-1.0)


@pytest.fixture(scope='session')
def unduloid():
    return solve_profile(0.5)


@pytest.fixture(scope='session')
def spectral_nodoid():
    return jacobi_profile(-1.0)


@pytest.fixture(scope='session')
def crossing_2_0():
    return first_bifurcation(SymmetryClass(2, 0.0))


@pytest.fixture
def config(tmp_path):
    return RunConfig(output_dir=str(tmp_path / 'output'))
