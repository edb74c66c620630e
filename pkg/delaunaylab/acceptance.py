"""Acceptance checks run by ``delaunay verify``.

Each check returns a CheckResult; a check that raises counts as failed.
"""
import math
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence

import numpy as np
from loguru import logger

from delaunaylab.bifurcation.crossing import critical_tau_star, first_bifurcation
from delaunaylab.bifurcation.index import index, zero_band_exclusion
from delaunaylab.bifurcation.symmetry import SymmetryClass
from delaunaylab.core.period import PeriodMethod, compute_period
from delaunaylab.core.profile import gamma, jacobi_profile, solve_profile
from delaunaylab.spectral.bands import limit_band
from delaunaylab.spectral.galerkin import eigensolve_galerkin
from delaunaylab.spectral.monodromy import eigensolve_monodromy, gap_bracket
from delaunaylab.spectral.operator import build_operator
from delaunaylab.surface.curvature import mean_curvature_numeric
from delaunaylab.surface.mesh import PerturbationSpec, delaunay_normal, delaunay_pointmap, mesh_delaunay, normal_graph
from delaunaylab.utils.config import RunConfig
from delaunaylab.utils.errors import DelaunayLabError

RATIO_RANGE = (3.5, 4.5)


class CheckResult(NamedTuple):
    number: int
    name: str
    passed: bool
    detail: str


def _ratio_ok(ratio: float) -> bool:
    return RATIO_RANGE[0] <= ratio <= RATIO_RANGE[1]


def _crossing(config: RunConfig, sym: SymmetryClass):
    return first_bifurcation(
        sym,
        config.n_modes,
        config.polish_modes,
        config.spectral_samples,
        config.n_coeffs,
        config.root_tolerance,
        config.root_ftolerance,
        config.ode_tolerance,
    )


def _index(config: RunConfig, tau: float, sym: SymmetryClass) -> int:
    return index(
        tau,
        sym,
        config.n_modes,
        config.spectral_samples,
        config.n_coeffs,
        config.ode_tolerance,
        config.eigen_tolerance,
    ).index


def _j0_crossings(config: RunConfig, js: Sequence[int]) -> Dict[int, float]:
    return {j: _crossing(config, SymmetryClass(j, 0.0)).tau_star for j in js}


def check_period_agreement(config: RunConfig):
    worst = 0.0
    for tau in (-10, -2, -1, -0.5, 0.3, 0.7, 0.999):
        quad = compute_period(tau, PeriodMethod.QUADRATURE, config.quadrature_tolerance).s_tau
        ell = compute_period(tau, PeriodMethod.ELLIPTIC).s_tau
        worst = max(worst, abs(quad - ell) / ell)
    s_minus_one = compute_period(-1).s_tau
    s_near_one = compute_period(0.999).s_tau
    passed = worst <= 1e-10 and abs(s_minus_one - 0.834626842) < 1e-9 and abs(s_near_one - 1) < 1e-3
    return passed, f'max relative difference {worst:.3e}, s(-1) = {s_minus_one:.12g}, s(0.999) = {s_near_one:.9g}'


def check_energy_drift(config: RunConfig):
    drift = {
        tau: float(np.max(np.abs(solve_profile(tau, 256, 4, config.ode_tolerance).energy_defect())))
        for tau in (-5, -1, 0.5)
    }
    return max(drift.values()) <= 1e-10, ', '.join(f'tau={t}: {d:.3e}' for t, d in drift.items())


def check_large_tau_rates(config: RunConfig):
    t = np.linspace(0, 2 * math.pi, 721)
    sup = {tau: float(np.max(np.abs(gamma(tau, t, config.spectral_samples) - np.cos(t)))) for tau in (-20, -40)}
    ratio = sup[-20] / sup[-40]
    remainders = [abs(compute_period(tau).s_tau + 1 / tau) for tau in (-10, -20, -40, -80)]
    cubic = [r * abs(tau) ** 3 for r, tau in zip(remainders, (-10, -20, -40, -80))]
    square = [r * tau ** 2 for r, tau in zip(remainders, (-10, -20, -40, -80))]
    cubic_flat = max(cubic) <= 1.2 * min(cubic)
    square_bounded = all(b <= a for a, b in zip(square, square[1:]))
    passed = _ratio_ok(ratio) and cubic_flat and square_bounded
    return passed, f'gamma error ratio {ratio:.4g}, |tau|^3 |s + 1/tau| in [{min(cubic):.4g}, {max(cubic):.4g}]'


def check_exact_eigenvalues(config: RunConfig):
    worst = 0.0
    for tau in (-0.5, -1, -2, -5):
        profile = jacobi_profile(float(tau), config.spectral_samples)
        values = eigensolve_galerkin(build_operator(profile, 0, 0.0, config.n_coeffs), 64, 3, refine=False).eigenvalues
        worst = max(worst, abs(values[1] + profile.s_tau ** 2), abs(values[2]))
    for tau in (0.3, 0.7, 1.0):
        profile = jacobi_profile(float(tau), config.spectral_samples)
        values = eigensolve_galerkin(build_operator(profile, 0, 0.0, config.n_coeffs), 64, 3, refine=False).eigenvalues
        worst = max(worst, abs(values[0] + profile.s_tau ** 2))
    return worst <= 1e-8, f'max identity error {worst:.3e}'


def check_ground_state_bounds(config: RunConfig):
    slack = 1e-10
    for tau in (-0.5, -1, -2, -5):
        profile = jacobi_profile(float(tau), config.spectral_samples)
        base = build_operator(profile, 0, 0.0, config.n_coeffs)
        s2 = profile.s_tau ** 2
        for alpha in (0, math.pi / 2, math.pi):
            lam = eigensolve_galerkin(base.with_phase(alpha), config.n_modes, 1).eigenvalues[0]
            b2 = (alpha / (2 * math.pi)) ** 2
            if not -2 * s2 + b2 - tau * tau * s2 - slack <= lam <= b2 - tau * tau * s2 + slack:
                return False, f'lambda_0({tau}, {alpha:.6g}) = {lam:.15g} outside its bounds'
    return True, 'all bounds hold'


def _limit_error(config: RunConfig, tau: float) -> float:
    base = build_operator(jacobi_profile(float(tau), config.spectral_samples), 0, 0.0, config.n_coeffs)
    worst = 0.0
    for alpha in (0, math.pi / 2, math.pi):
        values = eigensolve_galerkin(base.with_phase(alpha), config.n_modes, 4).eigenvalues
        worst = max(worst, max(abs(values[k] - limit_band(k, alpha)) for k in range(4)))
    return worst


def check_limit_bands(config: RunConfig):
    near, far = _limit_error(config, -25), _limit_error(config, -50)
    ratio = near / far
    return far <= 5e-3 and _ratio_ok(ratio), f'error {far:.3e} at tau=-50, ratio {ratio:.4g}'


def check_oracle_equivalence(config: RunConfig):
    worst = 0.0
    for tau, alpha in ((-3, 1.0), (-1, math.pi), (-10, 0.0)):
        op = build_operator(jacobi_profile(float(tau), config.spectral_samples), 0, alpha, config.n_coeffs)
        galerkin = eigensolve_galerkin(op, config.n_modes, 8).eigenvalues
        bracket = gap_bracket(galerkin, 5)
        expected = galerkin[galerkin <= bracket[1]]
        monodromy = eigensolve_monodromy(op, bracket, config.n_modes)
        if len(monodromy) != len(expected):
            return False, (
                f'monodromy found {len(monodromy)} of {len(expected)} eigenvalues at tau={tau}, alpha={alpha:.6g}'
            )
        worst = max(worst, float(np.max(np.abs(np.array(monodromy) - expected))))
    return worst <= 1e-7, f'max disagreement {worst:.3e}'


def check_crossing_brackets(config: RunConfig):
    crossings = _j0_crossings(config, (2, 3, 4, 6, 8, 10, 12))
    outside = [j for j, tau in crossings.items() if not -j < tau < -math.sqrt(j * j - 2)]
    detail = ', '.join(f'j={j}: {tau:.10g}' for j, tau in crossings.items())
    return not outside, detail


def check_asymptotic_law(config: RunConfig):
    crossings = _j0_crossings(config, (8, 16, 32))
    scaled = [j * abs(tau + j) for j, tau in crossings.items()]
    return max(scaled) <= 2 * min(scaled), 'j |tau + j| = ' + ', '.join(f'{v:.6g}' for v in scaled)


def check_transversality(config: RunConfig):
    slopes = []
    for j in (8, 16, 32):
        for alpha in (0.0, math.pi / (2 * j)):
            point = _crossing(config, SymmetryClass(j, alpha))
            slopes.append((j, alpha, point.slope))
    passed = all(slope < 0 for _, _, slope in slopes)
    return passed, ', '.join(f'({j}, {a:.4g}): {s:.4g}' for j, a, s in slopes)


def check_index_flow(config: RunConfig):
    sym = SymmetryClass(2, 0.0)
    crossing = _j0_crossings(config, (2,))[2]
    before = _index(config, -1.2, sym)
    above = _index(config, crossing + 0.05, sym)
    below = _index(config, crossing - 0.05, sym)
    if before != 0 or above != 0 or below < 1:
        return False, f'I(-1.2) = {before}, I(tau+0.05) = {above}, I(tau-0.05) = {below}'
    for j in (2, 3):
        for tau in np.linspace(-6, -1.5, 50):
            check = zero_band_exclusion(
                float(tau),
                j,
                config.spectral_samples,
                config.n_modes,
                config.n_coeffs,
                config.ode_tolerance,
                config.eigen_tolerance,
            )
            if not check.holds:
                return False, f'zero-band exclusion fails at tau={tau:.6g}, j={j}'
    return True, f'I(-1.2) = 0, I(tau+0.05) = 0, I(tau-0.05) = {below}'


def _sample_points():
    t, theta = np.meshgrid([0.7, 2.1, 4.0, 5.3], [0.3, 1.9, 4.4], indexing='ij')
    return t.ravel(), theta.ravel()


def check_geometry(config: RunConfig):
    t, theta = _sample_points()
    profile = solve_profile(-1.0, config.samples_per_period, 1, config.ode_tolerance)
    pointmap, normal = delaunay_pointmap(profile), delaunay_normal(profile)

    def defect(h: float) -> float:
        return float(np.sum(np.abs(mean_curvature_numeric(pointmap, t, theta, h, normal) - 1)))

    fine = float(np.max(np.abs(mean_curvature_numeric(pointmap, t, theta, config.curvature_step, normal) - 1)))
    h_ratio = defect(1e-2) / defect(5e-3)
    cylinder = mesh_delaunay(solve_profile(1.0, 64, 1), 1, 16, 16)
    radius = float(np.max(np.abs(np.hypot(cylinder.vertices[:, 0], cylinder.vertices[:, 1]) - 0.5)))

    point = _crossing(config, SymmetryClass(2, 0.0))
    crossing = jacobi_profile(point.tau_star, config.spectral_samples, config.ode_tolerance)
    flat = mean_curvature_numeric(delaunay_pointmap(crossing), t, theta, 1e-3, delaunay_normal(crossing))

    def graph_defect(eta: float) -> float:
        surface = normal_graph(crossing, PerturbationSpec(point, eta))
        curved = mean_curvature_numeric(surface, t, theta, 1e-3, delaunay_normal(crossing))
        return float(np.max(np.abs(curved - flat)))

    eta_ratio = graph_defect(0.01) / graph_defect(0.005)
    passed = fine <= 1e-3 and _ratio_ok(h_ratio) and radius <= 1e-12 and _ratio_ok(eta_ratio)
    return passed, f'|H - 1| = {fine:.3e}, h ratio {h_ratio:.4g}, radius error {radius:.3e}, eta ratio {eta_ratio:.4g}'


def check_tau_star(config: RunConfig):
    result = critical_tau_star(
        3,
        config.alpha_samples,
        config.n_modes,
        config.polish_modes,
        config.spectral_samples,
        config.n_coeffs,
        config.workers,
        config.root_tolerance,
        config.root_ftolerance,
        config.ode_tolerance,
    )
    passed = -2 < result.tau_star < -math.sqrt(2) and result.maximizer.symmetry.j == 2
    return passed, f'tau_* = {result.tau_star:.15g} at {result.maximizer.symmetry}'


CHECKS: List[Callable[[RunConfig], tuple]] = [
    check_period_agreement,
    check_energy_drift,
    check_large_tau_rates,
    check_exact_eigenvalues,
    check_ground_state_bounds,
    check_limit_bands,
    check_oracle_equivalence,
    check_crossing_brackets,
    check_asymptotic_law,
    check_transversality,
    check_index_flow,
    check_geometry,
    check_tau_star,
]


def run_acceptance(config: RunConfig, selected: Optional[Sequence[int]] = None) -> List[CheckResult]:
    results = []
    for number, check in enumerate(CHECKS, start=1):
        if selected and number not in selected:
            continue
        name = check.__name__[len('check_') :]
        try:
            passed, detail = check(config)
        except DelaunayLabError as e:
            passed, detail = False, f'{type(e).__name__}: {e}'
        if passed:
            logger.success(f'[{number:2d}] {name}: {detail}')
        else:
            logger.error(f'[{number:2d}] {name}: {detail}')
        results.append(CheckResult(number, name, bool(passed), detail))
    return results
