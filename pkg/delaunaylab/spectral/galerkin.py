"""Fourier-Galerkin (Hill's method) eigensolver for quasiperiodic operators.

Writing u = e^{i beta t} v with v 2 pi periodic, the operator acts on the basis e^{i(n + beta)t}/sqrt(2 pi),
n = -N..N, as the matrix with diagonal (n + beta)^2 + offset and off-diagonal -q_{|n - m|}. The potential is
even and real, so the matrix is real symmetric and its eigenvectors are real.
"""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from loguru import logger
from scipy import linalg

from delaunaylab.spectral.operator import QuasiPeriodicOperator
from delaunaylab.utils.errors import ConvergenceError, DomainError

EIGEN_TOLERANCE = 1e-9
DEFAULT_MODES = 64
MAX_MODES = 256
NORM = 1 / math.sqrt(2 * math.pi)


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Lowest eigenpairs of a quasiperiodic operator.

    ``coefficients[k]`` holds the Fourier coefficients of the k-th eigenfunction in the basis
    e^{i(n + beta)t}/sqrt(2 pi) with n = -n_modes..n_modes.
    """

    operator: QuasiPeriodicOperator
    eigenvalues: np.ndarray
    coefficients: np.ndarray
    n_modes: int
    shift: Optional[float] = None

    @property
    def wavenumbers(self) -> np.ndarray:
        return np.arange(-self.n_modes, self.n_modes + 1) + self.operator.beta

    def eigenfunction(self, k: int, t, derivative: int = 0) -> np.ndarray:
        """phi_k(t) or its derivative, complex valued."""
        t = np.asarray(t, dtype=float)
        waves = self.wavenumbers
        basis = np.exp(1j * np.multiply.outer(t, waves)) * NORM
        return basis @ (self.coefficients[k] * (1j * waves) ** derivative)


def galerkin_matrix(op: QuasiPeriodicOperator, n_modes: int) -> np.ndarray:
    size = 2 * n_modes + 1
    waves = np.arange(-n_modes, n_modes + 1) + op.beta
    column = np.zeros(size)
    used = min(size, len(op.coeffs))
    column[:used] = -op.coeffs[:used]
    return linalg.toeplitz(column) + np.diag(waves ** 2 + op.offset)


def _orient(coefficients: np.ndarray, waves: np.ndarray) -> np.ndarray:
    # phi(0) > 0; odd eigenfunctions vanish at 0, then phi'(0)/i > 0
    for row in coefficients:
        value = row.sum()
        if abs(value) < 1e-8:
            value = (waves * row).sum()
        if value < 0:
            row *= -1
    return coefficients


def _solve(op: QuasiPeriodicOperator, n_modes: int, k_max: int):
    matrix = galerkin_matrix(op, n_modes)
    try:
        values, vectors = linalg.eigh(matrix, subset_by_index=[0, k_max - 1])
    except linalg.LinAlgError as e:
        raise ConvergenceError(f'symmetric eigensolver failed for tau={op.tau}, alpha={op.alpha}: {e}') from e
    waves = np.arange(-n_modes, n_modes + 1) + op.beta
    return values, _orient(vectors.T.copy(), waves)


def eigensolve_galerkin(
    op: QuasiPeriodicOperator,
    n_modes: int = DEFAULT_MODES,
    k_max: int = 6,
    tolerance: float = EIGEN_TOLERANCE,
    refine: bool = True,
) -> EigenDecomposition:
    """The k_max smallest eigenpairs of ``op``.

    With ``refine`` the truncation doubles until the lowest k_max eigenvalues move by less than
    ``tolerance``; without it the given truncation is used as is.
    """
    if n_modes < 2 * k_max + 8:
        raise DomainError(f'n_modes={n_modes} is too small for k_max={k_max}; need at least {2 * k_max + 8}')
    values, vectors = _solve(op, n_modes, k_max)
    if not refine:
        return EigenDecomposition(operator=op, eigenvalues=values, coefficients=vectors, n_modes=n_modes)

    while True:
        finer = 2 * n_modes
        fine_values, fine_vectors = _solve(op, finer, k_max)
        shift = float(np.max(np.abs(fine_values - values)))
        logger.debug(f'Galerkin {n_modes} -> {finer} modes: eigenvalues move by {shift:.3e}')
        if shift <= tolerance:
            # keep the coarse pair: the finer solve only certifies it
            return EigenDecomposition(
                operator=op, eigenvalues=values, coefficients=vectors, n_modes=n_modes, shift=shift
            )
        if finer >= MAX_MODES:
            raise ConvergenceError(f'Galerkin eigenvalues for tau={op.tau} still moving at {finer} modes', shift)
        n_modes, values, vectors = finer, fine_values, fine_vectors
