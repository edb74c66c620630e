import numpy as np
import pytest

from delaunaylab.bifurcation.index import index, mode_cutoff, spectral_flow_table, zero_band_exclusion
from delaunaylab.bifurcation.symmetry import SymmetryClass
from delaunaylab.utils.errors import DomainError

SYM = SymmetryClass(2, 0.0)


def test_mode_cutoff():
    assert mode_cutoff(-1.2, 2) == 1
    assert mode_cutoff(-3.0, 2) == 2
    assert mode_cutoff(-3.0, 4) == 1


def test_no_index_near_the_sphere():
    report = index(-1.2, SYM)
    assert report.index == 0
    assert report.contributions == ()
    assert report.excluded_modes == (0,)


def test_index_jumps_at_the_crossing(crossing_2_0):
    assert index(crossing_2_0.tau_star + 0.05, SYM).index == 0
    report = index(crossing_2_0.tau_star - 0.05, SYM)
    assert report.index >= 1
    first = report.contributions[0]
    assert (first.n, first.k) == (1, 0)
    assert first.eigenvalue < 0


@pytest.mark.parametrize('j', [2, 3])
def test_zero_band_exclusion(j):
    for tau in np.linspace(-6, -1.5, 10):
        assert zero_band_exclusion(float(tau), j).holds


def test_spectral_flow_table():
    table = spectral_flow_table(SYM, [-1.5, -2.5])
    assert list(table.columns) == ['tau', 'n', 'k', 'lambda']
    assert set(table['k']) == {0, 1, 2}
    assert (table[table['tau'] == -2.5]['lambda'] < 0).any()
    assert table[table['tau'] == -1.5]['n'].max() == mode_cutoff(-1.5, 2)


@pytest.mark.parametrize('grid', [[-1.0, -0.5], [-1.0, 0.5], [-2.0, -2.0]])
def test_flow_grid_must_decrease(grid):
    with pytest.raises(DomainError):
        spectral_flow_table(SYM, grid)


@pytest.mark.parametrize('tau', [-2.5, -4.0])
def test_index_ignores_the_screw_direction(tau):
    forward = index(tau, SymmetryClass(3, np.pi / 6))
    backward = index(tau, SymmetryClass(3, -np.pi / 6))
    assert forward.index == backward.index
    assert [(c.n, c.k) for c in forward.contributions] == [(c.n, c.k) for c in backward.contributions]
    np.testing.assert_allclose(
        [c.eigenvalue for c in forward.contributions], [c.eigenvalue for c in backward.contributions], atol=1e-12
    )
