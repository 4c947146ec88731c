import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fuchsian_carleson.beltrami import (
    BeltramiField,
    BeltramiSpec,
    core_sup_modulus,
    decompose,
    edge_balls,
    modulus_invariance_residual,
    sample_domain,
)
from fuchsian_carleson.domain import contains
from fuchsian_carleson.group import enumerate_orbit
from fuchsian_carleson.mobius import random_disk_points

EDGE = BeltramiSpec.edge_decay(0.5, 1.0)
CORE = BeltramiSpec.compact_core(0.5, 0.3)
FLAT = BeltramiSpec.flat(0.5)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(family="flat", k=1.0),
        dict(family="flat", k=-0.1),
        dict(family="edge_decay", k=0.5),
        dict(family="edge_decay", k=0.5, alpha=0.0),
        dict(family="compact_core", k=0.5, t=1.0),
        dict(family="wavy", k=0.5),
    ],
)
def test_spec_validation(kwargs):
    with pytest.raises(ValueError):
        BeltramiSpec(**kwargs)


def test_base_values(field_factory):
    assert field_factory(CORE).base_value(0) == 0.5
    assert field_factory(EDGE).base_value(0.8 * np.exp(1j * math.pi / 4)) == pytest.approx(0.3)
    assert field_factory(FLAT).base_value(0.2j) == 0.5


def test_compact_core_vanishes_outside_support(field_factory):
    f = field_factory(CORE)
    z = 0.9 * np.exp(1j * 0.8)  # direction of a free edge, so inside F
    assert f.base_value(z) == 0


def test_base_value_off_domain(field_factory, schottky):
    with pytest.raises(ValueError):
        field_factory(FLAT).base_value(schottky.letter(1)(0))


def test_evaluate_on_domain_is_base(field_factory, schottky_domain, rng):
    f = field_factory(EDGE)
    z = sample_domain(schottky_domain, rng, 500, max_abs=0.98)
    np.testing.assert_allclose(f.evaluate(z), f.base_value(z), atol=1e-15)


@pytest.mark.parametrize("spec", [EDGE, CORE, FLAT], ids=lambda s: s.family)
def test_equivariance_depth3(field_factory, schottky, rng, spec):
    f = field_factory(spec)
    elements = enumerate_orbit(schottky, 3).elements
    z = random_disk_points(rng, 1000, max_abs=0.95)
    mod, rule = modulus_invariance_residual(f, z, elements)
    assert mod < 1e-9
    assert rule < 1e-9


def test_modulus_bounded_by_k(field_factory, rng):
    z = random_disk_points(rng, 2000, max_abs=0.999)
    for spec in (EDGE, CORE, FLAT):
        assert np.all(field_factory(spec).evaluate_modulus(z) <= spec.k + 1e-15)


def test_density_matches_modulus(field_factory, rng):
    f = field_factory(EDGE)
    z = random_disk_points(rng, 300)
    expected = f.evaluate_modulus(z) ** 2 / (1 - np.abs(z) ** 2)
    np.testing.assert_allclose(f.density(z), expected, rtol=1e-12)


def test_zero_field_density(field_factory):
    f = field_factory(BeltramiSpec.flat(0.0))
    assert f.is_zero
    assert np.all(f.density(np.array([0.3, 0.99j])) == 0)


def test_edge_balls_cover_free_edges(schottky, schottky_domain):
    balls = edge_balls(schottky_domain, schottky)
    assert len(balls) == 4
    for ball, arc in zip(balls, schottky_domain.free_edges):
        assert ball.contains(np.exp(1j * np.linspace(arc.start, arc.end, 50))).all()
        # and stay clear of the other edges
        for other in schottky_domain.free_edges:
            if other is not arc:
                assert not ball.contains(np.exp(1j * other.midpoint))


def test_edge_balls_need_factor_above_one(schottky, schottky_domain):
    with pytest.raises(ValueError):
        edge_balls(schottky_domain, schottky, factor=1.0)


def test_decompose_partition(field_factory, schottky_domain, rng):
    f = field_factory(FLAT)
    parts = decompose(f)
    z = sample_domain(schottky_domain, rng, 10_000)
    total = parts.core.evaluate_modulus(z) + parts.edge.evaluate_modulus(z)
    np.testing.assert_allclose(total, 0.5, atol=1e-15)
    # exactly one part is active at each point
    both = (parts.core.evaluate_modulus(z) > 0) & (parts.edge.evaluate_modulus(z) > 0)
    assert not both.any()


def test_decompose_small_support_has_no_edge_part(field_factory, schottky_domain, rng):
    parts = decompose(field_factory(BeltramiSpec.compact_core(0.5, 0.1)))
    z = sample_domain(schottky_domain, rng, 10_000)
    assert np.all(parts.edge.evaluate_modulus(z) == 0)


def test_decomposed_parts_invariant(field_factory, schottky, rng):
    parts = decompose(field_factory(EDGE))
    elements = enumerate_orbit(schottky, 2).elements
    z = random_disk_points(rng, 300, max_abs=0.95)
    for part in (parts.core, parts.edge):
        mod, rule = modulus_invariance_residual(part, z, elements)
        assert mod < 1e-9 and rule < 1e-9


def test_core_is_compact(field_factory, rng):
    parts = decompose(field_factory(EDGE))
    assert core_sup_modulus(parts, rng, 50_000) < 0.99


def test_sample_domain(schottky_domain, rng):
    z = sample_domain(schottky_domain, rng, 1000, max_abs=0.5)
    assert z.size == 1000
    assert np.all(contains(schottky_domain, z)) and np.all(np.abs(z) < 0.5)


@given(st.floats(0.0, 0.999), st.floats(0.01, 4.0))
def test_edge_decay_formula(r, alpha):
    spec = BeltramiSpec.edge_decay(0.7, alpha)
    assert spec.modulus(np.array([r]), np.array([1 - r * r]))[0] == pytest.approx(0.7 * (1 - r * r) ** (alpha / 2))
