"""Band functions lambda_k(tau, alpha), band intervals and the geometric Jacobi fields."""
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, NamedTuple, Optional, Sequence

import numpy as np
import pandas as pd
from loguru import logger

from delaunaylab.core.profile import ProfileSolution
from delaunaylab.spectral.galerkin import DEFAULT_MODES, EIGEN_TOLERANCE, eigensolve_galerkin, galerkin_matrix
from delaunaylab.spectral.operator import DEFAULT_COEFFS, build_operator
from delaunaylab.utils.errors import DiscretizationError, DomainError
from delaunaylab.utils.generic import fold_phase, map_in_order

DEFAULT_KMAX = 6
ALPHA_GRID_SIZE = 11
ORDER_TOLERANCE = 1e-9
ZERO_EIGENVALUE = 1e-7


class Band(NamedTuple):
    k: int
    lower: float
    upper: float

    @property
    def width(self) -> float:
        return self.upper - self.lower


def band_function(
    profile: ProfileSolution, k: int, alpha: float, n_modes: int = DEFAULT_MODES, n_coeffs: int = DEFAULT_COEFFS
) -> float:
    """lambda_k(tau, alpha) of the j = 0 operator."""
    if k < 0:
        raise DomainError(f'band index must be nonnegative, got {k}')
    op = build_operator(profile, 0, alpha, n_coeffs)
    k_max = k + 1
    return float(eigensolve_galerkin(op, max(n_modes, 2 * k_max + 8), k_max).eigenvalues[k])


def limit_band(k: int, alpha: float) -> float:
    """lambda_k(alpha) of -d^2/dt^2 - 1: the sorted values (beta + n)^2 - 1, n integer."""
    if k < 0:
        raise DomainError(f'band index must be nonnegative, got {k}')
    beta = fold_phase(alpha) / (2 * math.pi)
    m = (k + 1) // 2
    if k % 2 == 0:
        return (beta + m) ** 2 - 1
    return (beta - m) ** 2 - 1


@dataclass(frozen=True, eq=False)
class BandTable:
    tau: float
    alpha_grid: np.ndarray
    eigenvalues: np.ndarray  # shape (len(alpha_grid), k_max)
    bands: List[Band]

    @property
    def k_max(self) -> int:
        return self.eigenvalues.shape[1]

    def at_phase(self, alpha: float) -> np.ndarray:
        index = int(np.argmin(np.abs(self.alpha_grid - fold_phase(alpha))))
        return self.eigenvalues[index]

    def interlacing_chain(self) -> List[float]:
        """lambda_0(0), lambda_0(pi), lambda_1(pi), lambda_1(0), lambda_2(0), ... in theoretical order."""
        chain = []
        for band in self.bands:
            chain.extend([band.lower, band.upper])
        return chain

    def monotonicity_defect(self) -> float:
        """Largest violation of even bands nondecreasing and odd bands nonincreasing in alpha."""
        steps = np.diff(self.eigenvalues, axis=0)
        steps[:, 1::2] *= -1
        return float(max(0.0, -steps.min())) if steps.size else 0.0

    def check(self, tolerance: float = ORDER_TOLERANCE) -> None:
        chain = self.interlacing_chain()
        scale = max(1.0, max(abs(v) for v in chain))
        for i, (a, b) in enumerate(zip(chain, chain[1:])):
            if a > b + tolerance * scale:
                raise DiscretizationError(f'interlacing fails at tau={self.tau}: position {i}: {a:.15g} > {b:.15g}')
        for band in self.bands:
            if band.width <= tolerance * scale:
                raise DiscretizationError(f'band B_{band.k} at tau={self.tau} collapses to a point ({band.width:.3e})')

    def to_frame(self) -> pd.DataFrame:
        rows = [
            (self.tau, k, alpha, self.eigenvalues[i, k])
            for i, alpha in enumerate(self.alpha_grid)
            for k in range(self.k_max)
        ]
        return pd.DataFrame(rows, columns=['tau', 'k', 'alpha', 'lambda'])

    def bands_frame(self) -> pd.DataFrame:
        return pd.DataFrame([b._asdict() for b in self.bands], columns=['k', 'lower', 'upper'])


def band_table(
    profile: ProfileSolution,
    k_max: int = DEFAULT_KMAX,
    alpha_grid: Optional[Sequence[float]] = None,
    n_modes: int = DEFAULT_MODES,
    n_coeffs: int = DEFAULT_COEFFS,
    workers: int = 1,
    tolerance: float = EIGEN_TOLERANCE,
) -> BandTable:
    """Sample lambda_0..lambda_{k_max-1} over the folded phase grid and read off the bands.

    B_k = [lambda_k(0), lambda_k(pi)] for even k and [lambda_k(pi), lambda_k(0)] for odd k; the phases 0 and
    pi are always included.
    """
    if k_max < 3:
        raise DomainError(f'k_max must be at least 3, got {k_max}')
    if alpha_grid is None:
        alpha_grid = np.linspace(0, math.pi, ALPHA_GRID_SIZE)
    grid = np.unique(np.array([0.0, math.pi] + [fold_phase(a) for a in alpha_grid]))
    base = build_operator(profile, 0, 0.0, n_coeffs)
    n_modes = max(n_modes, 2 * k_max + 8)

    def solve(alpha: float) -> np.ndarray:
        return eigensolve_galerkin(base.with_phase(alpha), n_modes, k_max, tolerance).eigenvalues

    eigenvalues = np.array(map_in_order(solve, grid, workers))
    at_zero, at_pi = eigenvalues[0], eigenvalues[-1]
    bands = [
        Band(k, float(at_zero[k]), float(at_pi[k])) if k % 2 == 0 else Band(k, float(at_pi[k]), float(at_zero[k]))
        for k in range(k_max)
    ]
    table = BandTable(tau=profile.tau, alpha_grid=grid, eigenvalues=eigenvalues, bands=bands)
    table.check()
    summary = ', '.join(f'[{b.lower:.6g}, {b.upper:.6g}]' for b in bands)
    logger.debug(f'band table for tau={profile.tau:.15g}: {summary}')
    return table


class JacobiField(Enum):
    AXIAL = 'axial'
    TRANSVERSE = 'transverse'


def geometric_jacobi_fields(profile: ProfileSolution) -> Dict[JacobiField, np.ndarray]:
    """Samples over one period of the translation fields with their expected eigenvalues.

    Axial: d/dt sigma(s_tau t), eigenvalue 0. Transverse: sinh sigma (tau < 0) or cosh sigma (tau > 0),
    eigenvalue -s_tau^2.
    """
    sigma, dsigma = profile.one_period()
    transverse = np.cosh(sigma) if profile.tau > 0 else np.sinh(sigma)
    return {JacobiField.AXIAL: profile.s_tau * dsigma, JacobiField.TRANSVERSE: transverse}


def expected_eigenvalue(profile: ProfileSolution, field: JacobiField) -> float:
    return 0.0 if field is JacobiField.AXIAL else -profile.s_tau ** 2


def nodal_domains(values: np.ndarray, tolerance: float = 1e-12) -> int:
    """Number of nodal domains of a periodic sample; 0 for a function without zeros."""
    signs = np.sign(values[np.abs(values) > tolerance * max(1.0, np.max(np.abs(values)))])
    if len(signs) == 0:
        return 0
    changes = int(np.count_nonzero(signs != np.roll(signs, 1)))
    return changes


def jacobi_field_residual(
    profile: ProfileSolution, field: JacobiField, n_modes: int = DEFAULT_MODES, n_coeffs: int = DEFAULT_COEFFS
) -> float:
    """Sup norm of (H_{0,0} - mu) applied to a geometric Jacobi field through the Galerkin matrix."""
    samples = geometric_jacobi_fields(profile)[field]
    n = len(samples)
    if n < 2 * n_modes + 2:
        raise DomainError(f'{n} samples cannot resolve {n_modes} Fourier modes')
    spectrum = np.fft.fft(samples) / n
    index = np.arange(-n_modes, n_modes + 1)
    coeffs = spectrum[index]
    op = build_operator(profile, 0, 0.0, n_coeffs)
    residual = galerkin_matrix(op, n_modes) @ coeffs - expected_eigenvalue(profile, field) * coeffs
    padded = np.zeros(n, dtype=complex)
    padded[index] = residual
    return float(np.max(np.abs(np.fft.ifft(padded) * n)))


def axial_field_position(
    profile: ProfileSolution, n_modes: int = DEFAULT_MODES, n_coeffs: int = DEFAULT_COEFFS
) -> Optional[int]:
    """Index k with lambda_k(tau, 0) = 0, the periodic eigenvalue carried by the axial field."""
    op = build_operator(profile, 0, 0.0, n_coeffs)
    values = eigensolve_galerkin(op, n_modes, 5).eigenvalues
    zeros = np.nonzero(np.abs(values) < ZERO_EIGENVALUE)[0]
    if len(zeros) == 0:
        logger.warning(f'no zero periodic eigenvalue found for tau={profile.tau:.15g}')
        return None
    return int(zeros[0])
