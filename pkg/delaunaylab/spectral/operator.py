"""Reduced Jacobi operator -d^2/dt^2 - q(t) + s_tau^2 j^2 with alpha-quasiperiodic boundary data."""
import math
from dataclasses import dataclass, replace

import numpy as np
import pandas as pd
from loguru import logger

from delaunaylab.core.profile import ProfileSolution
from delaunaylab.utils.errors import DiscretizationError, DomainError
from delaunaylab.utils.generic import fold_phase

DEFAULT_COEFFS = 192
MIN_COEFFS = 16
TAIL_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class QuasiPeriodicOperator:
    """Hill operator on one period of t.

    ``coeffs`` are the exponential-form Fourier coefficients of the even potential,
    q(t) = coeffs[0] + 2 sum_m coeffs[m] cos(m t).
    """

    tau: float
    j: int
    alpha: float
    s_tau: float
    coeffs: np.ndarray
    offset: float

    @property
    def beta(self) -> float:
        """Quasimomentum alpha / 2 pi in [0, 1/2]."""
        return self.alpha / (2 * math.pi)

    def potential(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        m = np.arange(1, len(self.coeffs))
        return self.coeffs[0] + 2 * np.cos(np.multiply.outer(t, m)) @ self.coeffs[1:]

    def with_phase(self, alpha: float) -> 'QuasiPeriodicOperator':
        return replace(self, alpha=fold_phase(alpha))

    def with_mode(self, j: int) -> 'QuasiPeriodicOperator':
        return replace(self, j=j, offset=(self.s_tau * j) ** 2)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({'m': np.arange(len(self.coeffs)), 'coefficient': self.coeffs})


def constant_operator(level: float = 1.0, alpha: float = 0.0, offset: float = 0.0) -> QuasiPeriodicOperator:
    """Operator with q identically ``level``; level 1 and no offset is the limit operator -d^2/dt^2 - 1."""
    return QuasiPeriodicOperator(
        tau=-math.inf, j=0, alpha=fold_phase(alpha), s_tau=0.0, coeffs=np.array([float(level)]), offset=offset
    )


def potential_samples(profile: ProfileSolution) -> np.ndarray:
    """q(t) = s_tau^2 tau^2 cosh(2 sigma(s_tau t)) on the periodic grid t_i = 2 pi i / N."""
    sigma, _ = profile.one_period()
    return (profile.s_tau * profile.tau) ** 2 * np.cosh(2 * sigma)


def build_operator(
    profile: ProfileSolution, j: int, alpha: float, n_coeffs: int = DEFAULT_COEFFS
) -> QuasiPeriodicOperator:
    if j < 0 or int(j) != j:
        raise DomainError(f'mode j must be a nonnegative integer, got {j}')
    if n_coeffs < MIN_COEFFS:
        raise DomainError(f'n_coeffs must be at least {MIN_COEFFS}, got {n_coeffs}')
    samples = profile.samples_per_period
    if n_coeffs > samples // 2:
        raise DomainError(f'n_coeffs={n_coeffs} needs at least {2 * n_coeffs} samples per period, got {samples}')

    # the trapezoidal rule on the periodic grid is the DFT
    spectrum = np.fft.rfft(potential_samples(profile)).real / samples
    scale = max(1.0, abs(spectrum[0]))
    tail = float(np.max(np.abs(spectrum[n_coeffs:]))) / scale
    if tail > TAIL_TOLERANCE:
        raise DiscretizationError(
            f'potential coefficients for tau={profile.tau} have not decayed: tail {tail:.3e} beyond {n_coeffs} terms'
        )
    folded = fold_phase(alpha)
    if folded != alpha:
        logger.debug(f'phase {alpha:.15g} folded to {folded:.15g}')
    return QuasiPeriodicOperator(
        tau=profile.tau,
        j=int(j),
        alpha=folded,
        s_tau=profile.s_tau,
        coeffs=spectrum[:n_coeffs].copy(),
        offset=(profile.s_tau * j) ** 2,
    )
