"""Morse index on the symmetric subspace and the spectral flow in tau.

On T_{j,alpha}-symmetric functions the Jacobi operator splits over axial modes n != 0; the pair (n, -n) is
represented once by n >= 1 and contributes the spectrum of the operator with offset s_tau^2 n^2 j^2 and
quasiperiodicity phase fold(n j alpha).
"""
import math
from dataclasses import dataclass
from typing import List, NamedTuple, Sequence, Tuple

import numpy as np
import pandas as pd
from loguru import logger

from delaunaylab.bifurcation.symmetry import SymmetryClass
from delaunaylab.core.parameter import classify
from delaunaylab.core.profile import ODE_TOLERANCE, SPECTRAL_SAMPLES, jacobi_profile
from delaunaylab.spectral.galerkin import DEFAULT_MODES, EIGEN_TOLERANCE, eigensolve_galerkin
from delaunaylab.spectral.operator import DEFAULT_COEFFS, QuasiPeriodicOperator, build_operator
from delaunaylab.utils.errors import DomainError
from delaunaylab.utils.generic import map_in_order

INDEX_BANDS = 3


class Contribution(NamedTuple):
    n: int
    k: int
    eigenvalue: float


@dataclass(frozen=True)
class IndexReport:
    tau: float
    symmetry: SymmetryClass
    contributions: Tuple[Contribution, ...]
    n_cutoff: int
    excluded_modes: Tuple[int, ...] = (0,)

    @property
    def index(self) -> int:
        return len(self.contributions)


class ExclusionCheck(NamedTuple):
    tau: float
    j: int
    contains_zero: bool
    margin: float

    @property
    def holds(self) -> bool:
        return not self.contains_zero or self.margin > 0


def mode_cutoff(tau: float, j: int) -> int:
    """Smallest n with n j > sqrt(tau^2 + 2); no mode at or beyond it can be negative."""
    return int(math.floor(math.sqrt(tau * tau + 2) / j)) + 1


def _reduced_operator(tau: float, samples: int, n_coeffs: int, ode_tolerance: float) -> QuasiPeriodicOperator:
    return build_operator(jacobi_profile(float(tau), samples, ode_tolerance), 0, 0.0, n_coeffs)


def _mode_eigenvalues(
    base: QuasiPeriodicOperator, sym: SymmetryClass, n: int, n_modes: int, tolerance: float
) -> np.ndarray:
    op = base.with_mode(n * sym.j).with_phase(sym.phase(n))
    return eigensolve_galerkin(op, n_modes, INDEX_BANDS, tolerance).eigenvalues


def index(
    tau: float,
    sym: SymmetryClass,
    n_modes: int = DEFAULT_MODES,
    samples: int = SPECTRAL_SAMPLES,
    n_coeffs: int = DEFAULT_COEFFS,
    ode_tolerance: float = ODE_TOLERANCE,
    eigen_tolerance: float = EIGEN_TOLERANCE,
) -> IndexReport:
    """Count eigenvalues lambda_k(tau, beta_n) + s_tau^2 n^2 j^2 < 0 over n >= 1 and k = 0, 1, 2."""
    param = classify(tau)
    base = _reduced_operator(param.tau, samples, n_coeffs, ode_tolerance)
    cutoff = mode_cutoff(param.tau, sym.j)
    contributions = []
    for n in range(1, cutoff):
        for k, value in enumerate(_mode_eigenvalues(base, sym, n, n_modes, eigen_tolerance)):
            if value < 0:
                contributions.append(Contribution(n, k, float(value)))
    report = IndexReport(tau=param.tau, symmetry=sym, contributions=tuple(contributions), n_cutoff=cutoff)
    logger.debug(f'index of {sym} at tau={param.tau:.15g} is {report.index}')
    return report


def zero_band_exclusion(
    tau: float,
    j: int,
    samples: int = SPECTRAL_SAMPLES,
    n_modes: int = DEFAULT_MODES,
    n_coeffs: int = DEFAULT_COEFFS,
    ode_tolerance: float = ODE_TOLERANCE,
    eigen_tolerance: float = EIGEN_TOLERANCE,
) -> ExclusionCheck:
    """If 0 lies in B_0(tau) + j^2 s_tau^2 then B_0(tau) + 4 j^2 s_tau^2 must lie in (0, inf)."""
    base = _reduced_operator(tau, samples, n_coeffs, ode_tolerance)
    bottom = float(eigensolve_galerkin(base, n_modes, 1, eigen_tolerance).eigenvalues[0])
    top = float(eigensolve_galerkin(base.with_phase(math.pi), n_modes, 1, eigen_tolerance).eigenvalues[0])
    shift = (base.s_tau * j) ** 2
    contains_zero = bottom + shift <= 0 <= top + shift
    return ExclusionCheck(tau=base.tau, j=j, contains_zero=contains_zero, margin=bottom + 4 * shift)


def spectral_flow_table(
    sym: SymmetryClass,
    tau_grid: Sequence[float],
    n_modes: int = DEFAULT_MODES,
    samples: int = SPECTRAL_SAMPLES,
    n_coeffs: int = DEFAULT_COEFFS,
    workers: int = 1,
    ode_tolerance: float = ODE_TOLERANCE,
    eigen_tolerance: float = EIGEN_TOLERANCE,
) -> pd.DataFrame:
    """Rows (tau, n, k, lambda) with lambda = lambda_k(tau, beta_n) + s_tau^2 n^2 j^2, n up to the cutoff mode."""
    grid = [float(t) for t in tau_grid]
    if any(t >= 0 for t in grid):
        raise DomainError('spectral flow grid must lie in tau < 0')
    if any(b >= a for a, b in zip(grid, grid[1:])):
        raise DomainError('spectral flow grid must be strictly decreasing')

    def rows_at(tau: float) -> List[Tuple[float, int, int, float]]:
        base = _reduced_operator(tau, samples, n_coeffs, ode_tolerance)
        return [
            (tau, n, k, float(value))
            for n in range(1, mode_cutoff(tau, sym.j) + 1)
            for k, value in enumerate(_mode_eigenvalues(base, sym, n, n_modes, eigen_tolerance))
        ]

    rows = [row for chunk in map_in_order(rows_at, grid, workers) for row in chunk]
    return pd.DataFrame(rows, columns=['tau', 'n', 'k', 'lambda'])
