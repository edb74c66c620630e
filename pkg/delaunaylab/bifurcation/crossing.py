"""Bifurcation values tau_{j,alpha}: zeros of the spectral flow on the symmetric subspace."""
import math
from dataclasses import dataclass, replace
from typing import Callable, List, NamedTuple, Optional, Tuple

import numpy as np
import pandas as pd
from loguru import logger
from scipy import optimize

from delaunaylab.bifurcation.symmetry import SymmetryClass
from delaunaylab.core.profile import ODE_TOLERANCE, SPECTRAL_SAMPLES, jacobi_profile
from delaunaylab.spectral.galerkin import DEFAULT_MODES, EigenDecomposition, eigensolve_galerkin
from delaunaylab.spectral.operator import DEFAULT_COEFFS, build_operator
from delaunaylab.utils.errors import BracketError, DomainError
from delaunaylab.utils.generic import map_in_order

ROOT_TOLERANCE = 1e-10
ROOT_FTOLERANCE = 1e-12
POLISH_MODES = 128
ALPHA_SAMPLES = 9
TRANSVERSALITY_STEP = 1e-4
POLISH_WINDOW = 1e-6
SCAN_POINTS = 48
COLLISION_TOLERANCE = 1e-6


@dataclass(frozen=True, eq=False)
class BifurcationPoint:
    """Zero crossing of lambda_k(tau, fold(j alpha)) + s_tau^2 j^2 at tau_star."""

    symmetry: SymmetryClass
    tau_star: float
    band_index: int
    residual: float
    slope: Optional[float] = None
    eigenfunction: Optional[EigenDecomposition] = None
    conjectural: bool = False

    @property
    def beta(self) -> float:
        return self.symmetry.beta

    @property
    def conjugate(self) -> bool:
        """Use the conjugate mode so that the graph picks up the screw phase j alpha, not its negative."""
        return self.symmetry.wrapped_phase() < 0

    def phi(self, t) -> np.ndarray:
        if self.eigenfunction is None:
            raise DomainError(f'no eigenfunction stored for the crossing of {self.symmetry}')
        values = self.eigenfunction.eigenfunction(self.band_index, t)
        return np.conj(values) if self.conjugate else values

    def with_slope(self, slope: float) -> 'BifurcationPoint':
        return replace(self, slope=slope)

    def as_row(self) -> dict:
        return {
            'j': self.symmetry.j,
            'alpha': self.symmetry.alpha,
            'beta': self.beta,
            'tau': self.tau_star,
            'slope': self.slope,
            'band_index': self.band_index,
            'residual': self.residual,
            'conjectural': self.conjectural,
        }


def crossing_function(
    sym: SymmetryClass,
    band: int = 0,
    n_modes: int = DEFAULT_MODES,
    samples: int = SPECTRAL_SAMPLES,
    n_coeffs: int = DEFAULT_COEFFS,
    ode_tolerance: float = ODE_TOLERANCE,
) -> Callable[[float], float]:
    """F(tau) = lambda_band(tau, fold(j alpha)) + s_tau^2 j^2 at a fixed Galerkin truncation."""

    def flow(tau: float) -> float:
        op = build_operator(jacobi_profile(float(tau), samples, ode_tolerance), sym.j, sym.beta, n_coeffs)
        return float(eigensolve_galerkin(op, n_modes, band + 1, refine=False).eigenvalues[band])

    return flow


def predicted_tau(sym: SymmetryClass) -> float:
    """Large-j asymptote -j / sqrt(1 - (beta / 2 pi)^2) of the first crossing."""
    return -sym.j / math.sqrt(1 - (sym.beta / (2 * math.pi)) ** 2)


def predicted_second_tau(sym: SymmetryClass) -> Optional[float]:
    """Large-j asymptote of the second-band crossing; None when beta = 0 rules it out."""
    gap = 1 - (sym.beta / (2 * math.pi) - 1) ** 2
    if gap <= 1e-12:
        return None
    return -sym.j / math.sqrt(gap)


def _eigenpair(
    sym: SymmetryClass, tau: float, band: int, n_modes: int, samples: int, n_coeffs: int, ode_tolerance: float
):
    op = build_operator(jacobi_profile(float(tau), samples, ode_tolerance), sym.j, sym.beta, n_coeffs)
    return eigensolve_galerkin(op, n_modes, band + 1, refine=False)


def _polish(
    sym: SymmetryClass,
    root: float,
    band: int,
    polish_modes: int,
    samples: int,
    n_coeffs: int,
    xtol: float,
    ode_tolerance: float,
) -> float:
    fine = crossing_function(sym, band, polish_modes, samples, n_coeffs, ode_tolerance)
    width = POLISH_WINDOW * max(1.0, abs(root))
    for _ in range(3):
        a, b = root - width, root + width
        fa, fb = fine(a), fine(b)
        if fa * fb <= 0:
            return optimize.brentq(fine, a, b, xtol=xtol) if fa * fb < 0 else (a if fa == 0 else b)
        width *= 100
    logger.warning(f'{sym}: refined discretization has no sign change near {root:.15g}; keeping the coarse root')
    return root


def _locate(
    sym: SymmetryClass,
    band: int,
    bracket: Tuple[float, float],
    n_modes: int,
    polish_modes: int,
    samples: int,
    n_coeffs: int,
    xtol: float,
    ftol: float,
    ode_tolerance: float,
    conjectural: bool = False,
) -> BifurcationPoint:
    flow = crossing_function(sym, band, n_modes, samples, n_coeffs, ode_tolerance)
    root, info = optimize.brentq(flow, *bracket, xtol=xtol, full_output=True)
    logger.debug(f'{sym}: Brent converged to {root:.15g} in {info.iterations} iterations')
    if polish_modes > n_modes:
        root = _polish(sym, root, band, polish_modes, samples, n_coeffs, xtol, ode_tolerance)
    decomposition = _eigenpair(sym, root, band, max(polish_modes, n_modes), samples, n_coeffs, ode_tolerance)
    residual = float(decomposition.eigenvalues[band])
    if abs(residual) > max(ftol, xtol):
        logger.warning(f'{sym}: crossing residual {residual:.3e} at tau={root:.15g}')
    point = BifurcationPoint(
        symmetry=sym,
        tau_star=float(root),
        band_index=band,
        residual=residual,
        eigenfunction=decomposition,
        conjectural=conjectural,
    )
    return point.with_slope(transversality(point, samples=samples, n_coeffs=n_coeffs, ode_tolerance=ode_tolerance))


def first_bifurcation(
    sym: SymmetryClass,
    n_modes: int = DEFAULT_MODES,
    polish_modes: int = POLISH_MODES,
    samples: int = SPECTRAL_SAMPLES,
    n_coeffs: int = DEFAULT_COEFFS,
    xtol: float = ROOT_TOLERANCE,
    ftol: float = ROOT_FTOLERANCE,
    ode_tolerance: float = ODE_TOLERANCE,
) -> BifurcationPoint:
    """tau_{j,alpha}, the first zero of the band-0 flow as tau decreases."""
    j = sym.j
    lower, upper = -j - 1.0, -math.sqrt(max(j * j - 2, 2))
    flow = crossing_function(sym, 0, n_modes, samples, n_coeffs, ode_tolerance)
    f_lower, f_upper = flow(lower), flow(upper)
    if f_lower * f_upper > 0:
        widened = min(lower, 1.5 * predicted_tau(sym) - 1)
        logger.debug(f'{sym}: no sign change on [{lower}, {upper}], widening to {widened:.6g}')
        lower, f_lower = widened, flow(widened)
        if f_lower * f_upper > 0:
            raise BracketError(f'{sym}: crossing function keeps its sign on [{lower:.6g}, {upper:.6g}]')
    point = _locate(sym, 0, (lower, upper), n_modes, polish_modes, samples, n_coeffs, xtol, ftol, ode_tolerance)
    logger.info(f'{sym}: tau = {point.tau_star:.15g}, slope {point.slope:.6g}')
    return point


def second_crossing(
    sym: SymmetryClass,
    n_modes: int = DEFAULT_MODES,
    polish_modes: int = POLISH_MODES,
    samples: int = SPECTRAL_SAMPLES,
    n_coeffs: int = DEFAULT_COEFFS,
    xtol: float = ROOT_TOLERANCE,
    ftol: float = ROOT_FTOLERANCE,
    workers: int = 1,
    ode_tolerance: float = ODE_TOLERANCE,
) -> Optional[BifurcationPoint]:
    """Zero of the band-1 flow, found by scanning a tau grid; None when the scan sees no sign change.

    The existence of a bifurcating branch here is conjectural; the result is flagged as such.
    """
    j = sym.j
    upper = -math.sqrt(max(j * j - 2, 2))
    predicted = predicted_second_tau(sym)
    lower = -4.0 * j if predicted is None else min(-4.0 * j, 1.5 * predicted)
    grid = np.linspace(upper, lower, SCAN_POINTS)
    flow = crossing_function(sym, 1, n_modes, samples, n_coeffs, ode_tolerance)
    values = map_in_order(flow, grid, workers)
    for (a, fa), (b, fb) in zip(zip(grid, values), zip(grid[1:], values[1:])):
        if fa * fb <= 0:
            point = _locate(
                sym, 1, (b, a), n_modes, polish_modes, samples, n_coeffs, xtol, ftol, ode_tolerance, conjectural=True
            )
            logger.warning(f'{sym}: conjectural second-band crossing at tau = {point.tau_star:.15g}')
            return point
    logger.info(f'{sym}: no second-band crossing in [{lower:.6g}, {upper:.6g}]')
    return None


def transversality(
    point: BifurcationPoint,
    h: float = TRANSVERSALITY_STEP,
    n_modes: int = POLISH_MODES,
    samples: int = SPECTRAL_SAMPLES,
    n_coeffs: int = DEFAULT_COEFFS,
    ode_tolerance: float = ODE_TOLERANCE,
) -> float:
    """dF/d|tau| at the crossing by central differences; negative means eigenvalues enter (-inf, 0)."""
    flow = crossing_function(point.symmetry, point.band_index, n_modes, samples, n_coeffs, ode_tolerance)
    tau = point.tau_star
    return -(flow(tau + h) - flow(tau - h)) / (2 * h)


class TauStar(NamedTuple):
    tau_star: float
    maximizer: BifurcationPoint
    points: List[BifurcationPoint]
    collisions: List[Tuple[BifurcationPoint, BifurcationPoint]]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([p.as_row() for p in self.points])


def critical_tau_star(
    j_max: int,
    alpha_samples: int = ALPHA_SAMPLES,
    n_modes: int = DEFAULT_MODES,
    polish_modes: int = POLISH_MODES,
    samples: int = SPECTRAL_SAMPLES,
    n_coeffs: int = DEFAULT_COEFFS,
    workers: int = 1,
    xtol: float = ROOT_TOLERANCE,
    ftol: float = ROOT_FTOLERANCE,
    ode_tolerance: float = ODE_TOLERANCE,
) -> TauStar:
    """Largest tau_{j,alpha} over 2 <= j <= j_max and a uniform alpha grid on [-pi/j, pi/j]."""
    if j_max < 2:
        raise DomainError(f'j_max must be at least 2, got {j_max}')
    classes = [
        SymmetryClass(j, float(a))
        for j in range(2, j_max + 1)
        for a in np.linspace(-math.pi / j, math.pi / j, alpha_samples)
    ]
    # tau_{j,alpha} depends on alpha only through the folded phase
    unique = {}
    for sym in classes:
        unique.setdefault((sym.j, round(sym.beta, 12)), sym)
    keys = list(unique)
    found = map_in_order(
        lambda key: first_bifurcation(unique[key], n_modes, polish_modes, samples, n_coeffs, xtol, ftol, ode_tolerance),
        keys,
        workers,
    )
    by_key = dict(zip(keys, found))
    points = [replace(by_key[(sym.j, round(sym.beta, 12))], symmetry=sym) for sym in classes]

    collisions = []
    for i, a in enumerate(found):
        for b in found[i + 1 :]:
            if abs(a.tau_star - b.tau_star) < COLLISION_TOLERANCE:
                logger.warning(f'crossings of {a.symmetry} and {b.symmetry} collide at tau = {a.tau_star:.15g}')
                collisions.append((a, b))
    maximizer = max(points, key=lambda p: p.tau_star)
    logger.info(f'tau_* = {maximizer.tau_star:.15g} attained by {maximizer.symmetry}')
    return TauStar(tau_star=maximizer.tau_star, maximizer=maximizer, points=points, collisions=collisions)
