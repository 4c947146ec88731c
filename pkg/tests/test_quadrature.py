import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuchsian_carleson.quadrature import _tail, _window_ratio, polar_box_integral


def one(z, omr2):
    return np.ones(z.shape)


def hyperbolic_weight(z, omr2):
    return 1.0 / omr2


def lens_area(r: float) -> float:
    """Area of B(xi, r) ∩ Δ for |xi| = 1, from the two-circle intersection formula."""
    d = R = 1.0
    a = r * r * math.acos((d * d + r * r - R * R) / (2 * d * r))
    b = R * R * math.acos((d * d + R * R - r * r) / (2 * d * R))
    c = 0.5 * math.sqrt((-d + r + R) * (d + r - R) * (d - r + R) * (d + r + R))
    return a + b - c


def test_closed_form_log():
    # ∬_{|z|<1/2} dA / (1 - |z|^2) = pi log(4/3)
    res = polar_box_integral(hyperbolic_weight, 0.0, 0.5, tol=1e-10)
    assert res.converged and not res.divergent
    assert res.value == pytest.approx(math.pi * math.log(4 / 3), abs=1e-9)


@pytest.mark.parametrize("r", [2.0**-6, 0.1, 0.5, 1.0, 1.7])
def test_lens_area(r):
    xi = np.exp(0.7j)
    res = polar_box_integral(one, xi, r, tol=1e-10)
    assert res.value == pytest.approx(lens_area(r), rel=1e-9)


def test_whole_disk_area():
    assert polar_box_integral(one, 0.0, 1.0, tol=1e-10).value == pytest.approx(math.pi, rel=1e-9)


def test_interior_disk_area():
    res = polar_box_integral(one, 0.3 - 0.2j, 0.25, tol=1e-10)
    assert res.value == pytest.approx(math.pi * 0.0625, rel=1e-9)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.0, 2 * math.pi), st.floats(0.0, 0.999), st.floats(0.01, 1.5))
def test_area_bounded_by_disk(angle, rad, r):
    xi = rad * complex(math.cos(angle), math.sin(angle))
    val = polar_box_integral(one, xi, r, tol=1e-6).value
    assert 0 < val <= min(math.pi * r * r, math.pi) * (1 + 1e-6)


def test_boundary_box_of_hyperbolic_weight_diverges():
    res = polar_box_integral(hyperbolic_weight, 1.0, 0.25, tol=1e-3)
    assert res.divergent
    assert math.isinf(res.error)


def test_invalid_arguments():
    with pytest.raises(ValueError):
        polar_box_integral(one, 0.0, 0.0)
    with pytest.raises(ValueError):
        polar_box_integral(one, 1.5, 0.1)


def test_result_unpacks():
    # the reported error covers the true error, mostly through the tail term
    value, error = polar_box_integral(one, 0.0, 0.5, tol=1e-8)
    assert abs(value - math.pi / 4) <= error < 1e-6


def test_tail_extrapolation_geometric():
    layers = 0.5 ** np.arange(22)
    tail, err, div = _tail(layers)
    assert not div
    assert tail == pytest.approx(0.5**22 / (1 - 0.5), rel=1e-12)
    assert err == pytest.approx(tail / 2)


def test_tail_flags_constant_layers():
    assert _tail(np.ones(22))[2]
    assert _window_ratio(np.zeros(12), 6) == 0.0
