"""Period function s_tau of the Delaunay profile.

The profile sigma has period 2 pi s_tau in the isothermal variable s. Two independent evaluations are
provided: adaptive quadrature of the integral representations and the complete elliptic integral of the
first kind computed by the arithmetic-geometric mean. They cross-validate each other.
"""
import math
from enum import Enum
from typing import NamedTuple

import numpy as np
from loguru import logger
from scipy import integrate

from delaunaylab.core.parameter import classify
from delaunaylab.utils.errors import ConvergenceError

QUADRATURE_TOLERANCE = 1e-12
QUADRATURE_LIMIT = 400
AGM_MAX_ITERATIONS = 64


class PeriodMethod(Enum):
    QUADRATURE = 'quadrature'
    ELLIPTIC = 'elliptic'


class PeriodValue(NamedTuple):
    tau: float
    s_tau: float
    method: PeriodMethod

    @property
    def period(self) -> float:
        """Period of sigma in s-units, 2 pi s_tau."""
        return 2 * math.pi * self.s_tau


def agm(a: float, b: float) -> float:
    """Arithmetic-geometric mean of two positive numbers."""
    for _ in range(AGM_MAX_ITERATIONS):
        if abs(a - b) <= 2 * np.finfo(float).eps * a:
            return a
        a, b = (a + b) / 2, math.sqrt(a * b)
    raise ConvergenceError('arithmetic-geometric mean did not converge', achieved=abs(a - b))


def ellipk_agm(k: float) -> float:
    """Complete elliptic integral of the first kind K(k), modulus convention, 0 <= k < 1."""
    if not 0 <= k < 1:
        raise ValueError(f'modulus must lie in [0, 1), got {k}')
    return math.pi / (2 * agm(1.0, math.sqrt((1 - k) * (1 + k))))


def _quadrature(tau: float, tolerance: float) -> float:
    if tau < 0:
        tau2 = tau * tau

        def integrand(x):
            return 1 / math.sqrt(math.cos(x) ** 2 + tau2)

    else:
        # sin x = sin(b_tau) sin(phi) with cos(b_tau) = tau removes the endpoint singularity
        tau2 = tau * tau

        def integrand(x):
            return 1 / math.sqrt(math.cos(x) ** 2 + tau2 * math.sin(x) ** 2)

    value, abserr = integrate.quad(integrand, 0, math.pi / 2, epsabs=0, epsrel=tolerance, limit=QUADRATURE_LIMIT)
    if abserr > max(tolerance * abs(value), 1e-15):
        raise ConvergenceError(f'period quadrature did not converge for tau={tau}', achieved=abserr / abs(value))
    return 2 / math.pi * value


def _elliptic(tau: float) -> float:
    if tau < 0:
        modulus = 1 / math.sqrt(1 + tau * tau)
        return 2 / math.pi * ellipk_agm(modulus) / math.sqrt(1 + tau * tau)
    return 2 / math.pi * ellipk_agm(math.sqrt((1 - tau) * (1 + tau)))


def compute_period(
    tau: float, method: PeriodMethod = PeriodMethod.ELLIPTIC, tolerance: float = QUADRATURE_TOLERANCE
) -> PeriodValue:
    param = classify(tau)
    if method is PeriodMethod.QUADRATURE:
        s_tau = _quadrature(param.tau, tolerance)
    else:
        s_tau = _elliptic(param.tau)
    logger.debug(f's_tau({param.tau:.15g}) = {s_tau:.15g} by {method.value}')
    return PeriodValue(tau=param.tau, s_tau=s_tau, method=method)


def period_derivative(tau: float, step: float = 1e-5) -> float:
    """Derivative of s_tau in tau by central differences of the elliptic form."""
    param = classify(tau)
    h = min(step * max(1.0, abs(param.tau)), abs(param.tau) / 2)
    if param.tau == 1:
        # one-sided at the cylinder
        return (_elliptic(1.0) - _elliptic(1.0 - h)) / h
    if param.tau > 0:
        h = min(h, (1 - param.tau) / 2)
    return (_elliptic(param.tau + h) - _elliptic(param.tau - h)) / (2 * h)


def large_tau_period(tau: float) -> float:
    """Two-term expansion of s_tau as tau -> -inf."""
    r = abs(tau)
    return 1 / r - 1 / (4 * r ** 3)


def small_tau_period(tau: float) -> float:
    """Leading behaviour of s_tau as tau -> 0, up to o(1)."""
    return 2 / math.pi * math.log(4) - math.log(tau * tau) / math.pi
