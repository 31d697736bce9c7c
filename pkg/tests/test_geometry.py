import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvprobe.geometry import (
    Cylinder,
    Sphere,
    Torus,
    curvatures,
    geometry_report,
    is_degenerate,
    quantization_gap,
    ricci_scalar,
    shape_operator,
    surface_metric,
    surface_potential,
)


def test_metric_examples():
    np.testing.assert_allclose(surface_metric(Sphere(2.0), (math.pi / 2, 0.0)), np.diag([4.0, 4.0]), atol=1e-15)
    np.testing.assert_allclose(surface_metric(Cylinder(3.0), (0.0, 1.0)), np.diag([1.0, 9.0]), atol=1e-15)
    np.testing.assert_allclose(surface_metric(Torus(1.0, 3.0), (0.0, 0.0)), np.diag([1.0, 16.0]), atol=1e-15)


def test_shape_operator_examples():
    np.testing.assert_allclose(shape_operator(Sphere(2.0), (0.7, 2.0)), 0.5 * np.eye(2), atol=1e-15)
    np.testing.assert_allclose(shape_operator(Cylinder(2.0), (1.3, 0.4)), [[0, 0], [0, 0.5]], atol=1e-15)
    np.testing.assert_allclose(shape_operator(Torus(1.0, 3.0), (math.pi / 2, 0.3)), [[1, 0], [0, 0]], atol=1e-15)


def test_surface_potential_examples():
    assert surface_potential(Sphere(1.7), (1.0, 1.0)) == pytest.approx(0.0, abs=1e-15)
    lam, M, hbar = 2.0, 3.0, 0.5
    assert surface_potential(Cylinder(lam), (0.0, 1.0), M, hbar) == pytest.approx(-hbar**2 / (8 * M * lam**2), rel=1e-14)
    r, R, th = 1.0, 3.0, 0.9
    expected = -R**2 / (8 * r**2 * (R + r * math.cos(th)) ** 2)
    assert surface_potential(Torus(r, R), (th, 0.0)) == pytest.approx(expected, rel=1e-13)


def test_ricci_examples():
    assert ricci_scalar(Sphere(2.0), (1.0, 0.0)) == pytest.approx(0.5, rel=1e-14)
    assert ricci_scalar(Cylinder(5.0), (3.0, 1.0)) == 0.0
    assert ricci_scalar(Torus(1.0, 3.0), (0.0, 0.0)) == pytest.approx(0.5, rel=1e-14)


@pytest.mark.parametrize("surface, point", [
    (Sphere(2.0), (1.0, 0.3)), (Sphere(0.5), (2.5, 4.0)),
    (Torus(1.0, 3.0), (0.0, 0.0)), (Torus(1.0, 3.0), (2.5, 1.0)), (Torus(0.5, 2.0), (4.0, 1.0)),
])
def test_christoffel_ricci_matches_closed_form(surface, point):
    exact = ricci_scalar(surface, point)
    assert ricci_scalar(surface, point, method="christoffel") == pytest.approx(exact, rel=1e-6)


def test_christoffel_ricci_cylinder_flat():
    assert abs(ricci_scalar(Cylinder(2.0), (0.3, 1.0), method="christoffel")) < 1e-9


def test_poles_are_degenerate_not_errors():
    s = Sphere(1.0)
    assert is_degenerate(s, (0.0, 0.0)) and is_degenerate(s, (math.pi, 1.0))
    assert np.isnan(shape_operator(s, (0.0, 0.0))).all()
    assert math.isnan(ricci_scalar(s, (math.pi, 0.0)))
    rep = geometry_report(s, (0.0, 0.0))
    assert rep.degenerate and math.isnan(rep.surface_potential)
    assert not is_degenerate(s, (1e-3, 0.0))


def test_chart_validation():
    with pytest.raises(ValueError):
        surface_metric(Sphere(1.0), (-0.1, 0.0))
    with pytest.raises(ValueError):
        Torus(3.0, 1.0)
    with pytest.raises(ValueError):
        Sphere(0.0)
    assert Torus(1.0, 3.0).canonical((7.0, -1.0)).u == pytest.approx(7.0 - 2 * math.pi)


def test_quantization_gap_examples():
    assert quantization_gap(Sphere(1.3), (1.0, 0.0), xi=0.0) == pytest.approx(0.0, abs=1e-15)
    lam, M = 1.5, 2.0
    cyl = Cylinder(lam)
    for xi in (-1.0, 0.0, 0.3, 2.0):
        for p in ((0.0, 0.0), (5.0, 2.0)):
            assert quantization_gap(cyl, p, xi, M) == pytest.approx(1 / (8 * M * lam**2), rel=1e-14)
    tor = Torus(1.0, 3.0)
    assert quantization_gap(tor, (0.0, 0.0), 0.5) != pytest.approx(quantization_gap(tor, (math.pi, 0.0), 0.5))


@pytest.mark.parametrize("xi", [-1.0, 0.0, 1.0 / 6.0, 1.0])
def test_torus_gap_not_constant(xi):
    tor = Torus(1.0, 3.0)
    gaps = [quantization_gap(tor, (th, 0.0), xi) for th in np.linspace(0, 2 * math.pi, 50, endpoint=False)]
    assert max(gaps) - min(gaps) > 1e-8


def test_cylinder_constants_over_chart():
    rng = np.random.default_rng(3)
    cyl = Cylinder(1.7)
    vals = [surface_potential(cyl, (z, th)) for z, th in zip(rng.normal(size=100), rng.uniform(0, 2 * math.pi, 100))]
    assert np.ptp(vals) <= 1e-14 * abs(vals[0])
    assert all(ricci_scalar(cyl, (0.1, th)) == 0.0 for th in rng.uniform(0, 2 * math.pi, 100))


surfaces = st.one_of(
    st.builds(Sphere, st.floats(0.1, 10)),
    st.builds(Cylinder, st.floats(0.1, 10)),
    st.builds(lambda r, d: Torus(r, r + d), st.floats(0.1, 5), st.floats(0.05, 5)),
)


@settings(max_examples=200, deadline=None)
@given(surfaces, st.floats(0.01, math.pi - 0.01), st.floats(0, 2 * math.pi))
def test_potential_routes_agree(surface, u, v):
    a = surface_potential(surface, (u, v), method="curvature")
    b = surface_potential(surface, (u, v), method="alpha")
    assert a <= 1e-12
    assert abs(a - b) <= 1e-12 * max(abs(a), 1e-300) or abs(a - b) < 1e-14 / surface.scale**2


@settings(max_examples=100, deadline=None)
@given(surfaces, st.floats(0.01, math.pi - 0.01), st.floats(0, 2 * math.pi))
def test_metric_symmetric_positive(surface, u, v):
    g = surface_metric(surface, (u, v))
    assert g[0, 1] == g[1, 0]
    assert np.all(np.linalg.eigvalsh(g) > 0)


def test_sphere_mean_curvature_magnitude():
    C, K = curvatures(Sphere(4.0), (1.0, 1.0))
    assert abs(C) == pytest.approx(0.25) and K == pytest.approx(1 / 16)
