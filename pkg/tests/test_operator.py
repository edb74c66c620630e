import math

import numpy as np
import pytest

from delaunaylab.core.profile import jacobi_profile
from delaunaylab.spectral import operator as operator_module
from delaunaylab.spectral.operator import build_operator, constant_operator, potential_samples
from delaunaylab.utils.errors import DiscretizationError, DomainError


def test_offset_is_mode_energy():
    op = build_operator(jacobi_profile(-2.0), 3, 0.0)
    assert op.offset == pytest.approx(9 * op.s_tau ** 2)
    assert op.offset == pytest.approx(2.009, abs=1e-3)
    assert op.with_mode(0).offset == 0
    assert op.with_mode(2).offset == pytest.approx(4 * op.s_tau ** 2)


def test_potential_reproduces_samples(spectral_nodoid):
    op = build_operator(spectral_nodoid, 0, 0.0)
    t = 2 * math.pi * np.arange(spectral_nodoid.samples_per_period) / spectral_nodoid.samples_per_period
    np.testing.assert_allclose(op.potential(t), potential_samples(spectral_nodoid), atol=1e-10)
    assert len(op.to_frame()) == op.coeffs.size


def test_potential_tends_to_one():
    op = build_operator(jacobi_profile(-50.0), 0, 0.0)
    t = np.linspace(0, 2 * math.pi, 33)
    np.testing.assert_allclose(op.potential(t), 1.0, atol=1e-2)


def test_phase_is_folded(spectral_nodoid):
    op = build_operator(spectral_nodoid, 0, -1.0)
    assert op.alpha == pytest.approx(1.0)
    assert op.with_phase(3 * math.pi / 2).alpha == pytest.approx(math.pi / 2)
    assert op.with_phase(-math.pi).alpha == math.pi
    assert op.with_phase(math.pi).beta == 0.5


def test_constant_operator():
    op = constant_operator()
    assert op.j == 0 and op.offset == 0
    np.testing.assert_allclose(op.potential(np.linspace(0, 6, 7)), 1.0)


def test_rejects_bad_arguments(spectral_nodoid):
    with pytest.raises(DomainError):
        build_operator(spectral_nodoid, -1, 0.0)
    with pytest.raises(DomainError):
        build_operator(spectral_nodoid, 0, 0.0, n_coeffs=8)
    with pytest.raises(DomainError):
        build_operator(spectral_nodoid, 0, 0.0, n_coeffs=300)


def test_slow_decay_is_reported(spectral_nodoid, monkeypatch):
    monkeypatch.setattr(operator_module, 'TAIL_TOLERANCE', 1e-300)
    with pytest.raises(DiscretizationError):
        build_operator(spectral_nodoid, 0, 0.0, n_coeffs=16)
