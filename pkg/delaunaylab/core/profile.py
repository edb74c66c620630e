"""Delaunay profile: sigma, d sigma/ds and kappa sampled over whole periods.

sigma solves sigma'' = -(tau^2/2) sinh(2 sigma) with sigma(0) = sigma_0 < 0, sigma'(0) = 0, which is the
derivative of either conservation law (sigma')^2 + tau^2 cosh^2 sigma = 1 (tau > 0) or
(sigma')^2 + tau^2 sinh^2 sigma = 1 (tau < 0). kappa is integrated alongside from
kappa' = tau^2 e^sigma cosh sigma (tau > 0) or kappa' = -tau^2 e^sigma sinh sigma (tau < 0), kappa(0) = 0.
"""
import math
from dataclasses import dataclass
from functools import cached_property
from threading import RLock
from typing import Tuple

import numpy as np
import pandas as pd
from cachetools import LRUCache, cached
from loguru import logger
from scipy.interpolate import CubicHermiteSpline

from delaunaylab.core.parameter import DelaunayParameter, classify, initial_sigma
from delaunaylab.core.period import compute_period
from delaunaylab.utils.errors import ConvergenceError, DomainError

ODE_TOLERANCE = 1e-12
DEFAULT_SAMPLES = 256
SPECTRAL_SAMPLES = 512
MIN_SAMPLES = 16
MAX_SUBSTEPS = 512
LOCAL_SUBSTEPS = 4
PERIODICITY_WARNING = 1e-8

State = Tuple[float, float, float]


def kappa_rate(sigma, tau: float):
    """d kappa / ds as a function of sigma; works on floats and arrays."""
    tau2 = tau * tau
    if tau > 0:
        return 0.5 * tau2 * (np.exp(2 * sigma) + 1)
    return 0.5 * tau2 * (1 - np.exp(2 * sigma))


def energy_defect(sigma, dsigma, tau: float):
    """Residual of the first integral, zero on exact solutions."""
    if tau > 0:
        return dsigma ** 2 + (tau * np.cosh(sigma)) ** 2 - 1
    return dsigma ** 2 + (tau * np.sinh(sigma)) ** 2 - 1


def _rk4_run(start: State, tau: float, step: float, samples: int, substeps: int) -> np.ndarray:
    """Fixed-step classical RK4 recording the state every ``substeps`` steps."""
    tau2 = tau * tau
    positive = tau > 0
    h = step / substeps

    def field(sigma: float, dsigma: float) -> State:
        e2 = math.exp(2 * sigma)
        dkappa = 0.5 * tau2 * (e2 + 1) if positive else 0.5 * tau2 * (1 - e2)
        return dsigma, -0.5 * tau2 * math.sinh(2 * sigma), dkappa

    out = np.empty((samples + 1, 3))
    sigma, dsigma, kappa = start
    out[0] = start
    for i in range(1, samples + 1):
        for _ in range(substeps):
            k1 = field(sigma, dsigma)
            k2 = field(sigma + 0.5 * h * k1[0], dsigma + 0.5 * h * k1[1])
            k3 = field(sigma + 0.5 * h * k2[0], dsigma + 0.5 * h * k2[1])
            k4 = field(sigma + h * k3[0], dsigma + h * k3[1])
            sigma += h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
            dsigma += h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
            kappa += h / 6 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
        out[i] = (sigma, dsigma, kappa)
    return out


def _rk4_local(sigma, dsigma, kappa, ds, tau: float, steps: int = LOCAL_SUBSTEPS):
    """Vectorized RK4 shot of length ``ds`` (array) from the given states."""
    tau2 = tau * tau
    h = ds / steps

    def field(s, ds_):
        return ds_, -0.5 * tau2 * np.sinh(2 * s), kappa_rate(s, tau)

    for _ in range(steps):
        k1 = field(sigma, dsigma)
        k2 = field(sigma + 0.5 * h * k1[0], dsigma + 0.5 * h * k1[1])
        k3 = field(sigma + 0.5 * h * k2[0], dsigma + 0.5 * h * k2[1])
        k4 = field(sigma + h * k3[0], dsigma + h * k3[1])
        sigma = sigma + h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        dsigma = dsigma + h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        kappa = kappa + h / 6 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
    return sigma, dsigma, kappa


@dataclass(frozen=True, eq=False)
class ProfileSolution:
    """Samples of (s, sigma, d sigma/ds, kappa) on [0, periods * 2 pi s_tau], endpoint included."""

    tau: float
    s_tau: float
    samples_per_period: int
    periods: int
    s: np.ndarray
    sigma: np.ndarray
    dsigma: np.ndarray
    kappa: np.ndarray
    substeps: int
    error_estimate: float
    tolerance: float

    @property
    def parameter(self) -> DelaunayParameter:
        return classify(self.tau)

    @property
    def period(self) -> float:
        return 2 * math.pi * self.s_tau

    @property
    def step(self) -> float:
        return self.period / self.samples_per_period

    @property
    def t(self) -> np.ndarray:
        return self.s / self.s_tau

    @property
    def s_max(self) -> float:
        return float(self.s[-1])

    def energy_defect(self) -> np.ndarray:
        return energy_defect(self.sigma, self.dsigma, self.tau)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {'s': self.s, 't': self.t, 'sigma': self.sigma, 'dsigma': self.dsigma, 'kappa': self.kappa}
        )

    def metadata(self) -> dict:
        return {
            'tau': self.tau,
            'kind': self.parameter.kind.value,
            's_tau': self.s_tau,
            'period': self.period,
            'samples_per_period': self.samples_per_period,
            'periods': self.periods,
            'ode_tolerance': self.tolerance,
            'error_estimate': self.error_estimate,
            'substeps': self.substeps,
            'max_energy_defect': float(np.max(np.abs(self.energy_defect()))),
        }

    def one_period(self) -> Tuple[np.ndarray, np.ndarray]:
        """sigma and d sigma/ds on the periodic grid of the first period, endpoint excluded."""
        n = self.samples_per_period
        return self.sigma[:n], self.dsigma[:n]

    def _check_range(self, s: np.ndarray) -> None:
        # the tolerance absorbs rounding of s_tau * t at the far end
        if np.any(np.abs(s) > self.s_max * (1 + 1e-12)):
            raise DomainError(f'|s| = {np.max(np.abs(s)):.6g} lies outside the sampled range [0, {self.s_max:.6g}]')

    @cached_property
    def _splines(self) -> Tuple[CubicHermiteSpline, CubicHermiteSpline]:
        sigma_spline = CubicHermiteSpline(self.s, self.sigma, self.dsigma)
        kappa_spline = CubicHermiteSpline(self.s, self.kappa, kappa_rate(self.sigma, self.tau))
        return sigma_spline, kappa_spline

    def interpolate(self, s) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Cubic Hermite interpolation of (sigma, d sigma/ds, kappa); negative s by evenness of sigma."""
        s = np.asarray(s, dtype=float)
        self._check_range(s)
        a = np.abs(s)
        sign = np.where(s < 0, -1.0, 1.0)
        sigma_spline, kappa_spline = self._splines
        return sigma_spline(a), sign * sigma_spline(a, 1), sign * kappa_spline(a)

    def evaluate(self, s) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(sigma, d sigma/ds, kappa) by a short RK4 shot from the nearest sample.

        Unlike ``interpolate`` this is smooth to rounding, which finite-difference verifiers rely on.
        """
        s = np.asarray(s, dtype=float)
        self._check_range(s)
        a = np.abs(s)
        sign = np.where(s < 0, -1.0, 1.0)
        idx = np.clip(np.rint(a / self.step).astype(int), 0, len(self.s) - 1)
        sigma, dsigma, kappa = _rk4_local(self.sigma[idx], self.dsigma[idx], self.kappa[idx], a - self.s[idx], self.tau)
        return sigma, sign * dsigma, sign * kappa


def solve_profile(
    tau: float, samples_per_period: int = DEFAULT_SAMPLES, periods: int = 1, tolerance: float = ODE_TOLERANCE
) -> ProfileSolution:
    """Integrate the profile ODE with step doubling until the Richardson estimate meets ``tolerance``."""
    param = classify(tau)
    if samples_per_period < MIN_SAMPLES:
        raise DomainError(f'samples_per_period must be at least {MIN_SAMPLES}, got {samples_per_period}')
    if periods < 1:
        raise DomainError(f'periods must be at least 1, got {periods}')
    s_tau = compute_period(param.tau).s_tau
    step = 2 * math.pi * s_tau / samples_per_period
    samples = samples_per_period * periods
    start = (initial_sigma(param.tau), 0.0, 0.0)

    substeps = 1
    coarse = _rk4_run(start, param.tau, step, samples, substeps)
    while True:
        fine = _rk4_run(start, param.tau, step, samples, 2 * substeps)
        # RK4 is fourth order: the fine error is about |fine - coarse| / 15
        error = float(np.max(np.abs(fine - coarse))) / 15
        substeps *= 2
        logger.debug(f'tau={param.tau:.15g}: {substeps} RK4 substeps per sample, error estimate {error:.3e}')
        if error <= tolerance:
            break
        if substeps >= MAX_SUBSTEPS:
            raise ConvergenceError(f'profile integration for tau={param.tau} did not reach {tolerance:.1e}', error)
        coarse = fine

    profile = ProfileSolution(
        tau=param.tau,
        s_tau=s_tau,
        samples_per_period=samples_per_period,
        periods=periods,
        s=step * np.arange(samples + 1),
        sigma=fine[:, 0],
        dsigma=fine[:, 1],
        kappa=fine[:, 2],
        substeps=substeps,
        error_estimate=error,
        tolerance=tolerance,
    )
    drift = abs(profile.sigma[samples_per_period] - profile.sigma[0])
    if drift > PERIODICITY_WARNING:
        logger.warning(f'tau={param.tau:.15g}: sigma drifts by {drift:.3e} over one period')
    return profile


@cached(cache=LRUCache(maxsize=256), lock=RLock())
def jacobi_profile(tau: float, samples_per_period: int = SPECTRAL_SAMPLES, tolerance: float = ODE_TOLERANCE):
    """One-period profile shared by the spectral computations; safe to call from several threads."""
    return solve_profile(tau, samples_per_period, 1, tolerance)


def gamma(tau: float, t, samples_per_period: int = SPECTRAL_SAMPLES):
    """gamma_tau(t) = tau sigma(s_tau t), 2 pi periodic in t, defined for tau < 0."""
    if classify(tau).tau > 0:
        raise DomainError(f'gamma is defined for tau < 0 only, got {tau}')
    profile = jacobi_profile(float(tau), samples_per_period)
    t = np.mod(np.asarray(t, dtype=float), 2 * math.pi)
    sigma, _, _ = profile.evaluate(profile.s_tau * t)
    return tau * sigma
