"""Quad meshes of Delaunay surfaces and of their first-order bifurcated normal graphs."""
import math
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np
from loguru import logger

from delaunaylab.bifurcation.crossing import BifurcationPoint
from delaunaylab.core.frame import embedding
from delaunaylab.core.parameter import initial_sigma
from delaunaylab.core.profile import ProfileSolution
from delaunaylab.surface.curvature import CURVATURE_STEP, Pointmap, tangent_vectors
from delaunaylab.utils.errors import DiscretizationError, DomainError

RES_T = 48
RES_THETA = 48
MIN_RES = 16
ETA_WARNING = 0.1
TAU_MATCH = 1e-9
UNIT_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class SurfaceMesh:
    """Vertices on a uniform (t, theta) grid, row-major in t; quads wrap around in theta."""

    vertices: np.ndarray
    normals: np.ndarray
    faces: np.ndarray
    param_coords: np.ndarray
    res_t: int
    res_theta: int
    periods: int

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    def grid(self) -> np.ndarray:
        """Vertices reshaped to (rows, res_theta, 3)."""
        return self.vertices.reshape(-1, self.res_theta, 3)

    def check(self) -> None:
        if self.faces.size and (self.faces.min() < 0 or self.faces.max() >= self.vertex_count):
            raise DiscretizationError('face index out of range')
        lengths = np.linalg.norm(self.normals, axis=1)
        if np.max(np.abs(lengths - 1)) > UNIT_TOLERANCE:
            raise DiscretizationError(f'vertex normals off unit length by {np.max(np.abs(lengths - 1)):.3e}')


class PerturbationSpec:
    """Normal graph w(t, theta) = eta Re(phi(t) e^{i j theta}) over a crossing eigenfunction.

    The eigenfunction has unit L^2 norm and phi(0) > 0.
    """

    def __init__(self, point: BifurcationPoint, eta: float):
        if point.eigenfunction is None:
            raise DomainError(f'no eigenfunction stored for the crossing of {point.symmetry}')
        self.point = point
        self.symmetry = point.symmetry
        self.eta = float(eta)

    def __call__(self, t, theta) -> np.ndarray:
        t, theta = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(theta, dtype=float))
        return self.eta * np.real(self.point.phi(t) * np.exp(1j * self.symmetry.j * theta))

    def symmetry_defect(self, t, theta) -> float:
        """Largest violation of the screw, j-fold rotation and reflection conditions on w."""
        w = self(t, theta)
        j, alpha = self.symmetry.j, self.symmetry.alpha
        screw = self(np.add(t, 2 * math.pi), theta) - self(t, np.add(theta, alpha))
        rotation = self(t, np.add(theta, 2 * math.pi / j)) - w
        reflection = self(np.negative(t), np.negative(theta)) - w
        return float(max(np.max(np.abs(screw)), np.max(np.abs(rotation)), np.max(np.abs(reflection))))


def _check_resolution(res_t: int, res_theta: int, periods: int) -> None:
    if res_t < MIN_RES or res_theta < MIN_RES:
        raise DomainError(f'mesh resolution must be at least {MIN_RES} in t and theta, got {res_t} x {res_theta}')
    if periods < 1:
        raise DomainError(f'periods must be at least 1, got {periods}')


def parameter_grid(res_t: int, res_theta: int, periods: int) -> Tuple[np.ndarray, np.ndarray]:
    t = np.linspace(0, 2 * math.pi * periods, periods * res_t, endpoint=False)
    theta = np.linspace(0, 2 * math.pi, res_theta, endpoint=False)
    return np.meshgrid(t, theta, indexing='ij')


def grid_faces(rows: int, cols: int) -> np.ndarray:
    i, k = np.meshgrid(np.arange(rows - 1), np.arange(cols), indexing='ij')
    k_next = (k + 1) % cols
    quads = np.stack([i * cols + k, i * cols + k_next, (i + 1) * cols + k_next, (i + 1) * cols + k], axis=-1)
    return quads.reshape(-1, 4)


def _assemble(vertices, normals, t, theta, res_t, res_theta, periods) -> SurfaceMesh:
    normals = normals / np.linalg.norm(normals, axis=-1, keepdims=True)
    mesh = SurfaceMesh(
        vertices=vertices.reshape(-1, 3),
        normals=normals.reshape(-1, 3),
        faces=grid_faces(periods * res_t, res_theta),
        param_coords=np.stack([t.ravel(), theta.ravel()], axis=1),
        res_t=res_t,
        res_theta=res_theta,
        periods=periods,
    )
    mesh.check()
    return mesh


def mesh_delaunay(
    profile: ProfileSolution, periods: int = 1, res_t: int = RES_T, res_theta: int = RES_THETA
) -> SurfaceMesh:
    """Mesh of X_tau over ``periods`` periods in t; nodoids self-intersect and are kept as parametrized."""
    _check_resolution(res_t, res_theta, periods)
    t, theta = parameter_grid(res_t, res_theta, periods)
    position, normal = embedding(profile, t, theta)
    return _assemble(position, normal, t, theta, res_t, res_theta, periods)


def delaunay_pointmap(profile: ProfileSolution) -> Pointmap:
    """X_tau through the smooth RK4 evaluator, for finite-difference verifiers."""
    return lambda t, theta: embedding(profile, t, theta, smooth=True)[0]


def delaunay_normal(profile: ProfileSolution) -> Pointmap:
    return lambda t, theta: embedding(profile, t, theta, smooth=True)[1]


def min_radius(tau: float) -> float:
    """Smallest distance of D_tau to its axis, |tau| e^{sigma_0} / 2."""
    return abs(tau) * math.exp(initial_sigma(tau)) / 2


def mesh_perturbed(
    profile: ProfileSolution,
    point: BifurcationPoint,
    eta: float,
    res: Tuple[int, int] = (RES_T, RES_THETA),
    periods: int = 1,
    h: float = CURVATURE_STEP,
) -> SurfaceMesh:
    """Mesh of X_tau + w N_tau for the crossing mode of ``point``; eta = 0 gives the Delaunay mesh."""
    spec = PerturbationSpec(point, eta)
    if abs(profile.tau - point.tau_star) > TAU_MATCH * max(1.0, abs(point.tau_star)):
        raise DomainError(f'profile tau={profile.tau} does not match the crossing at tau={point.tau_star}')
    res_t, res_theta = res
    if eta == 0:
        return mesh_delaunay(profile, periods, res_t, res_theta)
    _check_resolution(res_t, res_theta, periods)
    limit = ETA_WARNING * min_radius(profile.tau)
    if abs(eta) > limit:
        logger.warning(f'eta={eta} exceeds {limit:.3g}; the normal graph may leave the tubular neighbourhood')

    t, theta = parameter_grid(res_t, res_theta, periods)
    position, normal = embedding(profile, t, theta)
    vertices = position + spec(t, theta)[..., None] * normal
    # normals of the graph from the smooth pointmap; negative t is covered by evenness of sigma
    x_t, x_theta = tangent_vectors(normal_graph(profile, spec), t, theta, h)
    normals = np.cross(x_t, x_theta)
    flip = np.einsum('...i,...i->...', normals, normal) < 0
    normals = np.where(flip[..., None], -normals, normals)
    return _assemble(vertices, normals, t, theta, res_t, res_theta, periods)


def normal_graph(profile: ProfileSolution, w: Callable) -> Pointmap:
    """X_tau + w N_tau for an arbitrary graph function w(t, theta)."""

    def pointmap(t, theta):
        position, normal = embedding(profile, t, theta, smooth=True)
        return position + np.asarray(w(t, theta))[..., None] * normal

    return pointmap
