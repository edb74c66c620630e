import math

import numpy as np
import pytest
from scipy import special

from delaunaylab.core.parameter import SurfaceKind, classify, initial_sigma
from delaunaylab.core.period import (
    PeriodMethod,
    agm,
    compute_period,
    ellipk_agm,
    large_tau_period,
    period_derivative,
    small_tau_period,
)
from delaunaylab.utils.errors import DomainError


@pytest.mark.parametrize('tau', [-10, -2, -1, -0.5, 0.3, 0.7, 0.999])
def test_methods_agree(tau):
    quad = compute_period(tau, PeriodMethod.QUADRATURE).s_tau
    ell = compute_period(tau, PeriodMethod.ELLIPTIC).s_tau
    assert abs(quad - ell) / ell <= 1e-10


def test_known_values():
    assert compute_period(-1).s_tau == pytest.approx(0.834626842, abs=1e-9)
    assert compute_period(-2).s_tau == pytest.approx(0.47246, abs=2e-4)
    assert compute_period(1).s_tau == pytest.approx(1.0, abs=1e-14)
    assert abs(compute_period(0.999).s_tau - 1) < 1e-3


def test_period_is_two_pi_s_tau():
    value = compute_period(-1)
    assert value.period == pytest.approx(2 * math.pi * value.s_tau)
    assert value.method is PeriodMethod.ELLIPTIC


def test_agm():
    assert agm(1.0, 1.0) == 1.0
    assert agm(1.0, 2.0) == pytest.approx(1.4567910310469068, rel=1e-15)
    assert ellipk_agm(0.0) == pytest.approx(math.pi / 2, rel=1e-15)
    with pytest.raises(ValueError):
        ellipk_agm(1.0)


def test_large_tau_rate():
    for tau in (-10, -20, -40, -80):
        s_tau = compute_period(tau).s_tau
        assert abs(s_tau + 1 / tau) <= 1e-3
        assert s_tau == pytest.approx(large_tau_period(tau), abs=2 / abs(tau) ** 5)
    scaled = [abs(tau) ** 3 * abs(compute_period(tau).s_tau + 1 / tau) for tau in (-10, -20, -40, -80)]
    assert max(scaled) <= 1.2 * min(scaled)


@pytest.mark.parametrize('tau', [-1e-2, -1e-3, -1e-4])
def test_small_tau_growth(tau):
    s_tau = compute_period(tau).s_tau
    assert s_tau == pytest.approx(small_tau_period(tau), abs=1e-2)


def test_small_tau_remainder_stays_bounded():
    remainders = [compute_period(tau).s_tau + math.log(tau * tau) / math.pi for tau in (-1e-2, -1e-3, -1e-4)]
    assert max(remainders) - min(remainders) <= 1e-2


def test_period_increases_with_tau():
    grid = np.linspace(-40.0, -0.01, 60)
    periods = np.array([compute_period(tau).s_tau for tau in grid])
    assert np.all(np.diff(periods) > 0)


def test_period_grows_toward_the_sphere_limit():
    assert period_derivative(-1.0) > 0
    assert period_derivative(-1.0) == pytest.approx(
        (compute_period(-1.0 + 1e-6).s_tau - compute_period(-1.0 - 1e-6).s_tau) / 2e-6, rel=1e-5
    )


@pytest.mark.parametrize('tau', [0, 1.5, math.inf, math.nan])
def test_rejects_bad_tau(tau):
    with pytest.raises(DomainError):
        compute_period(tau)


def test_classify():
    assert classify(-3).kind is SurfaceKind.NODOID
    assert classify(0.4).kind is SurfaceKind.UNDULOID
    assert classify(1).kind is SurfaceKind.CYLINDER
    assert not classify(-3).embedded
    assert classify(1).embedded
    assert classify(-3).sign == -1


def test_initial_sigma():
    assert initial_sigma(-1) == pytest.approx(-0.8813736, abs=1e-7)
    assert initial_sigma(0.5) == pytest.approx(-1.3169579, abs=1e-7)
    assert initial_sigma(1) == 0


@pytest.mark.parametrize('k', [0.1, 0.5, 1 / math.sqrt(2), 0.99])
def test_agm_matches_scipy(k):
    assert ellipk_agm(k) == pytest.approx(special.ellipk(k * k), rel=1e-13)


def test_period_derivative_for_large_tau():
    assert period_derivative(-20.0) == pytest.approx(1 / 400, abs=1e-5)
