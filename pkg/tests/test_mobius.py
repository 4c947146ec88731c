import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuchsian_carleson.mobius import (
    Circle,
    DiskAutomorphism,
    HyperbolicDisk,
    NoIsometricCircle,
    compose,
    fixed_points,
    hyp_distance,
    hyperbolic_to_euclidean,
    inverse,
    isometric_circle,
    pseudo_distance,
    random_automorphism,
    random_disk_points,
)

unit = st.floats(0.0, 0.97)
angle = st.floats(0.0, 2 * math.pi)


@st.composite
def automorphisms(draw):
    s = draw(unit)
    return DiskAutomorphism.translation(s, draw(angle)) @ DiskAutomorphism.rotation(draw(angle))


@st.composite
def disk_points(draw, max_abs=0.98):
    return draw(st.floats(0.0, max_abs)) * complex(math.cos(t := draw(angle)), math.sin(t))


def test_translation_coefficients():
    g = DiskAutomorphism.translation(0.6)
    assert g.a == pytest.approx(1.25)
    assert g.b == pytest.approx(0.75)
    assert g(0) == pytest.approx(0.6)
    assert g.det == pytest.approx(1.0, abs=1e-12)


def test_identity_fixes_points():
    z = 0.3 + 0.1j
    assert DiskAutomorphism.identity()(z) == z
    assert DiskAutomorphism.identity().derivative(0.4j) == 1


def test_constructor_renormalizes():
    g = DiskAutomorphism(2.5, 1.5)
    assert g.det == pytest.approx(1.0, abs=1e-12)
    assert g(0) == pytest.approx(0.6)
    with pytest.raises(ValueError):
        DiskAutomorphism(0.5, 1.0)


def test_translation_range():
    with pytest.raises(ValueError):
        DiskAutomorphism.translation(1.0)


def test_compose_with_rotation_pointwise(rng):
    g = DiskAutomorphism.translation(0.6)
    h = DiskAutomorphism.rotation(math.pi / 2)
    z = random_disk_points(rng, 100)
    np.testing.assert_allclose((g @ h)(z), g(h(z)), atol=1e-12)


def test_compose_inverse_is_identity(rng):
    for _ in range(20):
        g = random_automorphism(rng)
        assert compose(g, inverse(g)).is_identity(1e-12)
        assert compose(DiskAutomorphism.identity(), g).same_map(g, 1e-14)


def test_derivative_closed_form_and_finite_difference():
    g = DiskAutomorphism.translation(0.6)
    assert g.derivative(0) == pytest.approx(0.64)
    h = 1e-6
    fd = (g(h) - g(-h)) / (2 * h)
    assert abs(fd - 0.64) < 1e-8


def test_boundary_preserved(rng):
    theta = rng.uniform(0, 2 * math.pi, 200)
    for _ in range(10):
        g = random_automorphism(rng)
        np.testing.assert_allclose(np.abs(g(np.exp(1j * theta))), 1.0, atol=1e-12)


def test_hyp_distance_closed_forms():
    assert hyp_distance(0.3j, 0.3j) == 0.0
    assert hyp_distance(0, 0.5) == pytest.approx(math.log(3), rel=1e-14)
    # accuracy near the circle; 1 - t is exact in floating point here
    t = 1 - 1e-12
    gap = 1.0 - t
    assert hyp_distance(0, t) == pytest.approx(math.log((2 - gap) / gap), rel=1e-12)


def test_hyp_distance_vectorized(rng):
    z = random_disk_points(rng, 50)
    w = random_disk_points(rng, 50)
    out = hyp_distance(z, w)
    assert out.shape == (50,)
    assert out[3] == pytest.approx(hyp_distance(z[3], w[3]))


def test_hyperbolic_ball_at_origin():
    c, r = hyperbolic_to_euclidean(HyperbolicDisk(0, math.log(3)))
    assert abs(c) < 1e-15
    assert r == pytest.approx(0.5)


def test_hyperbolic_ball_off_center_boundary_samples():
    t = math.log(3)
    c, r = hyperbolic_to_euclidean(HyperbolicDisk(0.9, t))
    boundary = c + r * np.exp(1j * np.linspace(0, 2 * np.pi, 64, endpoint=False))
    np.testing.assert_allclose(hyp_distance(boundary, 0.9), t, atol=1e-10)


def test_hyperbolic_ball_radius_bound():
    t = math.log(3)
    ratios = []
    for m in np.linspace(0, 0.999, 200):
        c, r = hyperbolic_to_euclidean(HyperbolicDisk(m, t))
        assert abs(c) + r < 1.0
        ratios.append(r / (1 - m))
    # radius <= C(t) (1 - |center|) with C(t) = 2 tanh(t/2) / (1 - tanh(t/2)) for t = log 3
    assert max(ratios) <= 2 * 0.5 / (1 - 0.5) + 1e-12


def test_hyperbolic_disk_validation():
    with pytest.raises(ValueError):
        HyperbolicDisk(1.0, 1.0)
    with pytest.raises(ValueError):
        HyperbolicDisk(0, -1.0)


def test_isometric_circle_of_translation():
    g = DiskAutomorphism.translation(0.6)
    circ = isometric_circle(g)
    assert circ.center == pytest.approx(-5 / 3)
    assert circ.radius == pytest.approx(4 / 3)
    assert circ.orthogonality_defect() < 1e-12
    np.testing.assert_allclose(np.abs(g.derivative(circ.sample(16))), 1.0, atol=1e-12)


def test_rotation_has_no_isometric_circle():
    with pytest.raises(NoIsometricCircle):
        isometric_circle(DiskAutomorphism.rotation(0.3))


def test_isometric_circle_of_inverse_is_image(rng):
    for _ in range(5):
        g = random_automorphism(rng, 0.9)
        image = g(isometric_circle(g).sample(16))
        inv = isometric_circle(g.inverse())
        np.testing.assert_allclose(np.abs(image - inv.center), inv.radius, atol=1e-10)


def test_fixed_points_of_translation():
    attr, rep = fixed_points(DiskAutomorphism.translation(0.5))
    assert attr == pytest.approx(1.0)
    assert rep == pytest.approx(-1.0)
    with pytest.raises(ValueError):
        fixed_points(DiskAutomorphism.rotation(1.0))


def test_circle_contains():
    c = Circle(0.5, 0.25)
    assert c.contains(0.6)
    assert not c.contains(0.0)


@settings(max_examples=200, deadline=None)
@given(automorphisms(), disk_points(), disk_points())
def test_isometry_invariance(g, z, w):
    assert hyp_distance(g(z), g(w)) == pytest.approx(hyp_distance(z, w), rel=1e-9, abs=1e-10)


@settings(max_examples=200, deadline=None)
@given(automorphisms(), automorphisms(), automorphisms())
def test_associativity(f, g, h):
    assert ((f @ g) @ h).same_map(f @ (g @ h), 1e-9)
    fgh = (f @ g) @ h
    # |a|^2 - |b|^2 cancels, so det is only known to a few ulps of |a|^2
    assert fgh.det == pytest.approx(1.0, abs=max(1e-12, 8 * np.finfo(float).eps * abs(fgh.a) ** 2))


@settings(max_examples=200, deadline=None)
@given(automorphisms(), automorphisms(), disk_points(0.95))
def test_chain_rule(g, h, z):
    lhs = (g @ h).derivative(z)
    rhs = g.derivative(h(z)) * h.derivative(z)
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))


@settings(max_examples=200, deadline=None)
@given(disk_points(), disk_points(), disk_points())
def test_metric_axioms(x, y, z):
    assert hyp_distance(x, y) == pytest.approx(hyp_distance(y, x), rel=1e-14, abs=1e-15)
    assert hyp_distance(x, z) <= hyp_distance(x, y) + hyp_distance(y, z) + 1e-12
    assert pseudo_distance(x, y) < 1.0 or x == y
