import math

import numpy as np
import pytest

from delaunaylab.core.frame import embedding, surface_point, unit_normal
from delaunaylab.core.profile import solve_profile
from delaunaylab.surface.curvature import tangent_vectors
from delaunaylab.surface.mesh import delaunay_pointmap


@pytest.mark.parametrize('fixture', ['nodoid', 'unduloid'])
def test_normal_has_unit_length(fixture, request):
    profile = request.getfixturevalue(fixture)
    t = profile.t[:40]
    normal = unit_normal(profile, t[:, None], np.linspace(0, 6, 5)[None, :])
    np.testing.assert_allclose(np.linalg.norm(normal, axis=-1), 1.0, atol=1e-9)


@pytest.mark.parametrize('fixture', ['nodoid', 'unduloid'])
def test_isothermal_in_arclength(fixture, request):
    profile = request.getfixturevalue(fixture)
    t, theta = np.array([0.4, 1.7, 3.3, 5.9]), np.array([0.2, 2.5, 4.1, 5.0])
    x_t, x_theta = tangent_vectors(delaunay_pointmap(profile), t, theta, 1e-4)
    x_s = x_t / profile.s_tau
    np.testing.assert_allclose(np.linalg.norm(x_s, axis=-1), np.linalg.norm(x_theta, axis=-1), rtol=1e-6)
    np.testing.assert_allclose(np.einsum('ij,ij->i', x_s, x_theta), 0.0, atol=1e-7)
    _, normal = embedding(profile, t, theta, smooth=True)
    np.testing.assert_allclose(np.einsum('ij,ij->i', normal, x_s), 0.0, atol=1e-7)
    np.testing.assert_allclose(np.einsum('ij,ij->i', normal, x_theta), 0.0, atol=1e-7)


def test_cylinder_radius_and_normal():
    profile = solve_profile(1.0, 32)
    position, normal = embedding(profile, 1.3, 0.7)
    assert math.hypot(position[0], position[1]) == pytest.approx(0.5, abs=1e-15)
    np.testing.assert_allclose(normal, [math.cos(0.7), math.sin(0.7), 0.0], atol=1e-15)


def test_surface_point_wraps_theta(nodoid):
    frame = surface_point(nodoid, 1.0, -math.pi / 2)
    assert frame.theta == pytest.approx(3 * math.pi / 2)
    np.testing.assert_allclose(frame.position, surface_point(nodoid, 1.0, 3 * math.pi / 2).position)


def test_nodoid_neck_radius(nodoid):
    position, _ = embedding(nodoid, 0.0, 0.0)
    assert position[0] == pytest.approx(-0.5 * math.exp(-math.asinh(1.0)))
    assert position[2] == 0
