import math

import numpy as np
import pytest

from delaunaylab.bifurcation import crossing as crossing_module
from delaunaylab.bifurcation.crossing import (
    critical_tau_star,
    crossing_function,
    first_bifurcation,
    predicted_second_tau,
    predicted_tau,
    second_crossing,
    transversality,
)
from delaunaylab.bifurcation.symmetry import SymmetryClass
from delaunaylab.utils.errors import BracketError, DomainError


def test_symmetry_class():
    sym = SymmetryClass(3, math.pi / 6)
    assert sym.beta == pytest.approx(math.pi / 2)
    assert sym.phase(2) == pytest.approx(math.pi)
    assert sym.mirrored().beta == pytest.approx(sym.beta)
    assert sym.mirrored().wrapped_phase() < 0
    assert str(SymmetryClass(2, 0.0)) == 'T(j=2, alpha=0)'
    SymmetryClass(4, -math.pi / 4)


@pytest.mark.parametrize('j,alpha', [(1, 0.0), (2.5, 0.0), (2, 2.0), (3, -1.1)])
def test_invalid_symmetry_class(j, alpha):
    with pytest.raises(DomainError):
        SymmetryClass(j, alpha)


def test_first_crossing_lies_in_bracket(crossing_2_0):
    assert -2 < crossing_2_0.tau_star < -math.sqrt(2)
    assert crossing_2_0.band_index == 0
    assert abs(crossing_2_0.residual) <= 1e-8
    assert not crossing_2_0.conjectural


def test_crossing_function_vanishes(crossing_2_0):
    flow = crossing_function(SymmetryClass(2, 0.0))
    assert abs(flow(crossing_2_0.tau_star)) <= 1e-8
    assert flow(-math.sqrt(2)) > 0 > flow(-2.0)


def test_transversality(crossing_2_0):
    assert crossing_2_0.slope < 0
    assert transversality(crossing_2_0) == pytest.approx(crossing_2_0.slope, rel=1e-6)


def test_crossing_eigenfunction(crossing_2_0):
    t = np.linspace(0, 2 * math.pi, 64, endpoint=False)
    phi = crossing_2_0.phi(t)
    assert phi[0].real > 0
    np.testing.assert_allclose(crossing_2_0.phi(t + 2 * math.pi), phi, atol=1e-12)
    row = crossing_2_0.as_row()
    assert row['j'] == 2 and row['tau'] == crossing_2_0.tau_star


def test_predictions():
    assert predicted_tau(SymmetryClass(2, 0.0)) == -2
    assert predicted_tau(SymmetryClass(2, math.pi / 4)) == pytest.approx(-2 / math.sqrt(1 - 1 / 16))
    assert predicted_second_tau(SymmetryClass(5, 0.0)) is None
    assert predicted_second_tau(SymmetryClass(2, math.pi / 4)) == pytest.approx(-2 / math.sqrt(1 - 9 / 16))


def test_missing_sign_change(monkeypatch):
    monkeypatch.setattr(crossing_module, 'crossing_function', lambda *args, **kwargs: lambda tau: 1.0)
    with pytest.raises(BracketError):
        first_bifurcation(SymmetryClass(3, 0.0))


@pytest.mark.slow
def test_large_j_bracket():
    tau = first_bifurcation(SymmetryClass(10, 0.0)).tau_star
    assert -10 < tau < -9.8995


@pytest.mark.slow
@pytest.mark.parametrize('j', [8, 16])
def test_screw_crossings_follow_asymptote(j):
    sym = SymmetryClass(j, math.pi / (2 * j))
    point = first_bifurcation(sym)
    assert abs(point.tau_star - predicted_tau(sym)) * j <= 5
    assert point.slope < 0


@pytest.mark.slow
def test_critical_tau_star():
    result = critical_tau_star(3, alpha_samples=3)
    assert -2 < result.tau_star < -math.sqrt(2)
    assert len(result.points) == 6
    assert result.maximizer.tau_star == max(p.tau_star for p in result.points)
    assert list(result.to_frame().columns)[:4] == ['j', 'alpha', 'beta', 'tau']


@pytest.mark.slow
def test_no_second_crossing_without_screw_phase():
    assert second_crossing(SymmetryClass(2, 0.0)) is None


@pytest.mark.slow
def test_second_crossing_is_conjectural_and_deeper():
    sym = SymmetryClass(16, math.pi / 32)
    point = second_crossing(sym)
    assert point is not None
    assert point.conjectural and point.band_index == 1
    assert point.tau_star == pytest.approx(-24.1557, abs=1e-3)
    assert point.tau_star < first_bifurcation(sym).tau_star
    assert point.as_row()['conjectural'] is True


def test_crossing_function_uses_ode_tolerance(monkeypatch):
    seen = []
    profile = crossing_module.jacobi_profile

    def recording_profile(tau, samples, tolerance):
        seen.append(tolerance)
        return profile(tau, samples, tolerance)

    monkeypatch.setattr(crossing_module, 'jacobi_profile', recording_profile)
    flow = crossing_function(SymmetryClass(2, 0.0), ode_tolerance=1e-10)
    assert flow(-1.5) == pytest.approx(crossing_function(SymmetryClass(2, 0.0))(-1.5), abs=1e-8)
    assert seen == [1e-10, 1e-12]
