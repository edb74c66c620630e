"""Mean curvature of a parametrized surface from central differences of the pointmap."""
from typing import Callable, NamedTuple, Optional

import numpy as np

from delaunaylab.utils.errors import DiscretizationError

CURVATURE_STEP = 1e-4
DEGENERATE_METRIC = 1e-14

# (t, theta) arrays -> points with coordinates on the last axis
Pointmap = Callable[[np.ndarray, np.ndarray], np.ndarray]


class FundamentalForms(NamedTuple):
    E: np.ndarray
    F: np.ndarray
    G: np.ndarray
    e: np.ndarray
    f: np.ndarray
    g: np.ndarray
    normal: np.ndarray


def _dot(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.einsum('...i,...i->...', a, b)


def tangent_vectors(pointmap: Pointmap, t, theta, h: float = CURVATURE_STEP):
    t, theta = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(theta, dtype=float))
    x_t = (pointmap(t + h, theta) - pointmap(t - h, theta)) / (2 * h)
    x_theta = (pointmap(t, theta + h) - pointmap(t, theta - h)) / (2 * h)
    return x_t, x_theta


def fundamental_forms(
    pointmap: Pointmap, t, theta, h: float = CURVATURE_STEP, orientation: Optional[Pointmap] = None
) -> FundamentalForms:
    """First and second fundamental forms; the normal is X_t x X_theta, flipped to agree with ``orientation``."""
    t, theta = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(theta, dtype=float))
    center = pointmap(t, theta)
    x_t, x_theta = tangent_vectors(pointmap, t, theta, h)
    x_tt = (pointmap(t + h, theta) - 2 * center + pointmap(t - h, theta)) / h ** 2
    x_qq = (pointmap(t, theta + h) - 2 * center + pointmap(t, theta - h)) / h ** 2
    x_tq = (
        pointmap(t + h, theta + h)
        - pointmap(t + h, theta - h)
        - pointmap(t - h, theta + h)
        + pointmap(t - h, theta - h)
    ) / (4 * h ** 2)

    E, F, G = _dot(x_t, x_t), _dot(x_t, x_theta), _dot(x_theta, x_theta)
    det = E * G - F ** 2
    if np.any(det < DEGENERATE_METRIC):
        raise DiscretizationError(f'degenerate metric: EG - F^2 = {np.min(det):.3e}')
    normal = np.cross(x_t, x_theta)
    normal /= np.linalg.norm(normal, axis=-1, keepdims=True)
    if orientation is not None:
        flip = np.asarray(_dot(normal, orientation(t, theta)) < 0)
        normal = np.where(flip[..., None], -normal, normal)
    return FundamentalForms(E, F, G, _dot(x_tt, normal), _dot(x_tq, normal), _dot(x_qq, normal), normal)


def mean_curvature_numeric(
    pointmap: Pointmap, t, theta, h: float = CURVATURE_STEP, orientation: Optional[Pointmap] = None
):
    """H = (k1 + k2) / 2, positive when the surface bends away from the oriented normal.

    With the outer normal the round unit sphere and the cylinder of radius 1/2 both have H = 1.
    """
    forms = fundamental_forms(pointmap, t, theta, h, orientation)
    E, F, G, e, f, g = forms[:6]
    H = -(e * G - 2 * f * F + g * E) / (2 * (E * G - F ** 2))
    return float(H) if H.ndim == 0 else H
