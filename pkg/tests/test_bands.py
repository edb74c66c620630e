import math

import numpy as np
import pytest

from delaunaylab.core.profile import jacobi_profile
from delaunaylab.spectral.bands import (
    JacobiField,
    axial_field_position,
    band_function,
    band_table,
    geometric_jacobi_fields,
    jacobi_field_residual,
    limit_band,
    nodal_domains,
)
from delaunaylab.utils.errors import DomainError


@pytest.fixture(scope='module')
def table(spectral_nodoid):
    return band_table(spectral_nodoid, k_max=4, alpha_grid=np.linspace(0, math.pi, 5))


def test_limit_bands():
    assert (limit_band(0, 0), limit_band(0, math.pi)) == (-1, -0.75)
    assert (limit_band(1, math.pi), limit_band(1, 0)) == (-0.75, 0)
    assert (limit_band(2, 0), limit_band(2, math.pi)) == (0, 1.25)
    assert limit_band(3, -1.0) == limit_band(3, 1.0)
    with pytest.raises(DomainError):
        limit_band(-1, 0.0)


def test_band_edges(table, spectral_nodoid):
    s2 = spectral_nodoid.s_tau ** 2
    assert [b.k for b in table.bands] == [0, 1, 2, 3]
    assert table.bands[1].upper == pytest.approx(-s2, abs=1e-8)
    assert table.bands[2].lower == pytest.approx(0.0, abs=1e-8)
    assert all(b.width > 0 for b in table.bands)
    chain = table.interlacing_chain()
    assert all(a <= b + 1e-9 for a, b in zip(chain, chain[1:]))


def test_band_functions_are_monotone(table):
    assert table.monotonicity_defect() <= 1e-9


def test_table_frames(table):
    frame = table.to_frame()
    assert list(frame.columns) == ['tau', 'k', 'alpha', 'lambda']
    assert len(frame) == 5 * 4
    assert list(table.bands_frame().columns) == ['k', 'lower', 'upper']
    np.testing.assert_array_equal(table.at_phase(-math.pi), table.eigenvalues[-1])


def test_grid_always_has_band_edges(spectral_nodoid):
    grid_table = band_table(spectral_nodoid, k_max=3, alpha_grid=[1.0, 2.0])
    assert grid_table.alpha_grid[0] == 0 and grid_table.alpha_grid[-1] == math.pi
    assert len(grid_table.alpha_grid) == 4


def test_band_function_matches_table(table, spectral_nodoid):
    assert band_function(spectral_nodoid, 2, math.pi) == pytest.approx(table.at_phase(math.pi)[2], abs=1e-9)


def test_too_few_bands(spectral_nodoid):
    with pytest.raises(DomainError):
        band_table(spectral_nodoid, k_max=2)


def test_convergence_to_limit_bands():
    def error(tau):
        profile = jacobi_profile(tau)
        return max(
            abs(band_function(profile, k, alpha) - limit_band(k, alpha))
            for k in range(4)
            for alpha in (0.0, math.pi / 2, math.pi)
        )

    near, far = error(-25.0), error(-50.0)
    assert far <= 5e-3
    assert 3.5 <= near / far <= 4.5


@pytest.mark.parametrize('tau', [-1.0, 0.5, -5.0])
@pytest.mark.parametrize('field', list(JacobiField))
def test_geometric_jacobi_fields(tau, field):
    assert jacobi_field_residual(jacobi_profile(tau), field) <= 1e-8


def test_axial_field_is_third_eigenvalue(spectral_nodoid):
    assert axial_field_position(spectral_nodoid) == 2


def test_nodal_domains():
    t = np.linspace(0, 2 * math.pi, 64, endpoint=False)
    assert nodal_domains(np.cos(t)) == 2
    assert nodal_domains(np.cos(2 * t)) == 4
    assert nodal_domains(np.ones(8)) == 0


def test_geometric_fields_nodal_domains(spectral_nodoid, unduloid):
    fields = geometric_jacobi_fields(spectral_nodoid)
    assert nodal_domains(fields[JacobiField.AXIAL]) == 2
    assert nodal_domains(fields[JacobiField.TRANSVERSE]) == 2
    assert nodal_domains(geometric_jacobi_fields(unduloid)[JacobiField.TRANSVERSE]) == 0
