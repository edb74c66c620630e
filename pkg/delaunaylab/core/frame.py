"""Isothermal parametrization X_tau(t, theta) and its unit normal."""
import math
from typing import NamedTuple, Tuple

import numpy as np

from delaunaylab.core.profile import ProfileSolution


class SurfaceFrame(NamedTuple):
    position: np.ndarray
    normal: np.ndarray
    t: float
    theta: float


def embedding(profile: ProfileSolution, t, theta, smooth: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    """X_tau and N_tau on the broadcast (t, theta) grid, coordinates on the last axis.

    X = (tau e^sigma cos theta, tau e^sigma sin theta, kappa) / 2 at s = s_tau t. The normal is
    (tau c cos theta, tau c sin theta, -sgn(tau) d sigma/ds) with c = cosh sigma for tau > 0 and
    c = sinh sigma for tau < 0; both forms have unit length by the first integral.
    ``smooth`` selects the RK4 evaluator instead of the Hermite interpolant.
    """
    t, theta = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(theta, dtype=float))
    sampler = profile.evaluate if smooth else profile.interpolate
    sigma, dsigma, kappa = sampler(profile.s_tau * t)
    tau = profile.tau
    cos, sin = np.cos(theta), np.sin(theta)
    radius = tau * np.exp(sigma)
    position = 0.5 * np.stack([radius * cos, radius * sin, kappa], axis=-1)
    c = tau * (np.cosh(sigma) if tau > 0 else np.sinh(sigma))
    sign = 1.0 if tau > 0 else -1.0
    normal = np.stack([c * cos, c * sin, -sign * dsigma], axis=-1)
    return position, normal


def surface_point(profile: ProfileSolution, t: float, theta: float) -> SurfaceFrame:
    theta = math.fmod(theta, 2 * math.pi)
    if theta < 0:
        theta += 2 * math.pi
    position, normal = embedding(profile, t, theta)
    return SurfaceFrame(position=position, normal=normal, t=float(t), theta=theta)


def unit_normal(profile: ProfileSolution, t, theta) -> np.ndarray:
    return embedding(profile, t, theta)[1]
