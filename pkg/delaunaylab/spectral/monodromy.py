"""Transfer-matrix oracle for quasiperiodic eigenvalues.

Independent of the Galerkin path: the eigenvalue equation u'' = -(lambda - offset + q(t)) u is integrated
numerically and eigenvalues are characterized through the Floquet discriminant. The Galerkin eigenvalues only
seed the root brackets.
"""
import math
from typing import Callable, List, Sequence, Tuple

import numpy as np
from loguru import logger
from scipy import integrate, optimize

from delaunaylab.spectral.galerkin import DEFAULT_MODES, eigensolve_galerkin
from delaunaylab.spectral.operator import QuasiPeriodicOperator
from delaunaylab.utils.errors import BracketError, ConvergenceError, DomainError

MONODROMY_RTOL = 1e-12
MONODROMY_ATOL = 1e-14
ROOT_XTOL = 1e-13
SEED_WINDOW = 1e-6
SEED_MODES = 8
DUPLICATE_TOLERANCE = 1e-9
GAP_TOLERANCE = 1e-6


def _trimmed(coeffs: np.ndarray) -> np.ndarray:
    scale = max(1.0, abs(coeffs[0]))
    significant = np.nonzero(np.abs(coeffs) > 1e-17 * scale)[0]
    last = significant[-1] + 1 if len(significant) else 1
    return coeffs[:last]


def fundamental_matrix(op: QuasiPeriodicOperator, lam: float, t_end: float) -> np.ndarray:
    """[[y1, y2], [y1', y2']] at ``t_end`` for y1(0) = y2'(0) = 1, y1'(0) = y2(0) = 0."""
    coeffs = _trimmed(op.coeffs)
    harmonics = np.arange(1, len(coeffs))
    shift = lam - op.offset + coeffs[0]
    tail = 2 * coeffs[1:]

    def rhs(t, y):
        k = shift + np.dot(np.cos(harmonics * t), tail)
        return [y[1], -k * y[0], y[3], -k * y[2]]

    sol = integrate.solve_ivp(
        rhs, (0.0, t_end), [1.0, 0.0, 0.0, 1.0], method='DOP853', rtol=MONODROMY_RTOL, atol=MONODROMY_ATOL
    )
    if not sol.success:
        raise ConvergenceError(f'transfer-matrix integration failed at lambda={lam}: {sol.message}')
    y = sol.y[:, -1]
    return np.array([[y[0], y[2]], [y[1], y[3]]])


def monodromy_matrix(op: QuasiPeriodicOperator, lam: float) -> np.ndarray:
    """Transfer matrix over one full period; its determinant is 1."""
    return fundamental_matrix(op, lam, 2 * math.pi)


def discriminant(op: QuasiPeriodicOperator, lam: float) -> float:
    """tr M(lambda), from the half period through the evenness of q."""
    half = fundamental_matrix(op, lam, math.pi)
    return 2 * (half[0, 0] * half[1, 1] + half[1, 0] * half[0, 1])


def _conditions(op: QuasiPeriodicOperator) -> List[Callable[[float], float]]:
    if op.alpha == 0:
        # periodic: even solutions have u'(pi) = 0, odd ones u(pi) = 0
        return [
            lambda lam: fundamental_matrix(op, lam, math.pi)[1, 0],
            lambda lam: fundamental_matrix(op, lam, math.pi)[0, 1],
        ]
    if op.alpha == math.pi:
        return [
            lambda lam: fundamental_matrix(op, lam, math.pi)[0, 0],
            lambda lam: fundamental_matrix(op, lam, math.pi)[1, 1],
        ]
    target = math.cos(op.alpha)
    return [lambda lam: discriminant(op, lam) / 2 - target]


def _seeds(op: QuasiPeriodicOperator, upper: float, n_modes: int) -> np.ndarray:
    k_max = SEED_MODES
    while True:
        modes = max(n_modes, 2 * k_max + 8)
        values = eigensolve_galerkin(op, modes, k_max, refine=False).eigenvalues
        if values[-1] > upper:
            return values
        k_max *= 2


def eigensolve_monodromy(
    op: QuasiPeriodicOperator, lambda_bracket: Tuple[float, float], n_modes: int = DEFAULT_MODES
) -> List[float]:
    """All eigenvalues of ``op`` in the bracket, with multiplicity, ascending.

    At alpha = 0 and alpha = pi a double eigenvalue is a simple zero of both half-period conditions and is
    reported twice. The Galerkin seeds decide membership in the bracket; a seed window may reach past its ends.
    """
    lower, upper = lambda_bracket
    if not lower < upper:
        raise DomainError(f'empty eigenvalue bracket [{lower}, {upper}]')
    seeds = [float(v) for v in _seeds(op, upper, n_modes) if lower <= v <= upper]
    if not seeds:
        raise BracketError(f'no eigenvalue of the operator lies in [{lower}, {upper}]')

    conditions = _conditions(op)
    found: List[Tuple[int, float]] = []
    for seed in seeds:
        width = SEED_WINDOW * max(1.0, abs(seed))
        a, b = seed - width, seed + width
        for index, condition in enumerate(conditions):
            fa, fb = condition(a), condition(b)
            if fa * fb > 0:
                continue
            root = a if fa == 0 else b if fb == 0 else optimize.brentq(condition, a, b, xtol=ROOT_XTOL)
            if any(i == index and abs(root - r) < DUPLICATE_TOLERANCE for i, r in found):
                continue
            found.append((index, root))
            logger.debug(f'monodromy root {root:.15g} near seed {seed:.15g}')
    if len(found) < len(seeds):
        raise BracketError(f'{len(seeds) - len(found)} eigenvalue(s) in [{lower}, {upper}] have no sign change')
    return sorted(root for _, root in found)


def gap_bracket(eigenvalues: Sequence[float], count: int, tolerance: float = GAP_TOLERANCE) -> Tuple[float, float]:
    """Bracket holding at least the lowest ``count`` eigenvalues whose upper end lies inside a spectral gap.

    Coinciding values at the cut are kept together, so the bracket may hold more than ``count`` of them.
    """
    values = np.sort(np.asarray(eigenvalues, dtype=float))
    if not 0 < count <= len(values):
        raise DomainError(f'cannot bracket {count} of {len(values)} eigenvalues')
    edge = values[count - 1]
    above = values[values > edge + tolerance]
    if not len(above):
        raise BracketError(f'no eigenvalue above {edge:.15g} to close the bracket; request more')
    return float(values[0] - 0.5), float((edge + above[0]) / 2)
