import math

import numpy as np
import pytest

from delaunaylab.surface.curvature import fundamental_forms, mean_curvature_numeric
from delaunaylab.surface.mesh import delaunay_normal, delaunay_pointmap
from delaunaylab.utils.errors import DiscretizationError

T = np.array([0.7, 2.1, 4.0, 5.3, 0.7, 2.1])
THETA = np.array([0.3, 1.9, 4.4, 0.3, 5.5, 3.0])


def sphere(t, theta):
    return np.stack([np.cos(t) * np.cos(theta), np.cos(t) * np.sin(theta), np.sin(t)], axis=-1)


def cylinder(t, theta):
    return np.stack([0.5 * np.cos(theta), 0.5 * np.sin(theta), t], axis=-1)


def test_unit_sphere():
    t, theta = np.array([-1.0, 0.2, 1.1]), np.array([0.5, 3.0, 5.0])
    np.testing.assert_allclose(mean_curvature_numeric(sphere, t, theta, orientation=sphere), 1.0, atol=1e-6)
    # X_t x X_theta points inward on this chart
    np.testing.assert_allclose(mean_curvature_numeric(sphere, t, theta), -1.0, atol=1e-6)


def test_cylinder():
    outward = lambda t, theta: cylinder(t, theta) * [2.0, 2.0, 0.0]  # noqa: E731
    assert mean_curvature_numeric(cylinder, 0.3, 1.2, orientation=outward) == pytest.approx(1.0, abs=1e-6)


def test_first_fundamental_form_of_sphere():
    forms = fundamental_forms(sphere, np.array([0.4]), np.array([1.0]))
    assert forms.E[0] == pytest.approx(1.0, abs=1e-8)
    assert forms.F[0] == pytest.approx(0.0, abs=1e-8)
    assert forms.G[0] == pytest.approx(math.cos(0.4) ** 2, abs=1e-8)
    np.testing.assert_allclose(np.linalg.norm(forms.normal, axis=-1), 1.0)


@pytest.mark.parametrize('fixture', ['nodoid', 'unduloid'])
def test_delaunay_surfaces_have_unit_mean_curvature(fixture, request):
    profile = request.getfixturevalue(fixture)
    H = mean_curvature_numeric(delaunay_pointmap(profile), T, THETA, 1e-4, delaunay_normal(profile))
    np.testing.assert_allclose(H, 1.0, atol=1e-3)


def test_second_order_convergence(nodoid):
    pointmap, normal = delaunay_pointmap(nodoid), delaunay_normal(nodoid)

    def defect(h):
        return np.sum(np.abs(mean_curvature_numeric(pointmap, T, THETA, h, normal) - 1))

    assert 3.5 <= defect(1e-2) / defect(5e-3) <= 4.5


def test_degenerate_metric():
    def segment(t, theta):
        t = np.asarray(t, dtype=float)
        return np.stack([t, np.zeros_like(t), np.zeros_like(t)], axis=-1)

    with pytest.raises(DiscretizationError):
        mean_curvature_numeric(segment, np.array([0.5]), np.array([0.5]))
