import math

import numpy as np
import pytest

from fuchsian_carleson.group import (
    Orbit,
    OrbitTooLarge,
    UncertifiedGroup,
    Word,
    blaschke_exponent_constant,
    blaschke_lower_bound,
    boundary_sum,
    dirac_carleson_norm,
    distances_from,
    dyadic_radii,
    enumerate_orbit,
    free_reduce,
    make_schottky,
    pairwise_distances,
    poincare_partial_sum,
    schottky_from_s,
    separation_delta,
    shell_size,
    translation_length_from_s,
)
from fuchsian_carleson.mobius import hyp_distance

# Frozen from enumerate_orbit at L = 4, 5, 6 (values agree to the last digit);
# equals 2 rho(0, g_i(0)) - ... in closed form only for the generators, so the
# numbers are regression guards.
DELTA_SCHOTTKY = 3.6635616461296454


def test_certificate_for_standard_group(schottky):
    cert = schottky.schottky_certificate
    assert cert is not None
    s = 0.95
    for circ in cert.circles:
        assert circ.radius == pytest.approx(math.sqrt(1 - s * s) / s)
        assert abs(circ.center) == pytest.approx(1 / s)
    assert cert.min_gap > 0


def test_cyclic_always_certified():
    for s in (0.1, 0.5, 0.99):
        assert schottky_from_s([1.0], s).certified


def test_overlapping_circles_not_certified():
    g = schottky_from_s([0.0, math.pi / 2], 0.3)
    assert not g.certified
    with pytest.raises(UncertifiedGroup):
        enumerate_orbit(g, 2)


def test_make_schottky_validates_length():
    with pytest.raises(ValueError):
        make_schottky([(0.0, 0.0)])
    g = make_schottky([(0.0, translation_length_from_s(0.95))])
    assert g.generators[0](0) == pytest.approx(0.95)


def test_word_reduction_and_parse():
    assert free_reduce((1, 2, -2, -1, 2)) == (2,)
    with pytest.raises(ValueError):
        Word((1, -1))
    w = Word((1, -2, 1))
    assert str(w) == "1.-2.1"
    assert Word.parse(str(w)) == w
    assert Word.parse("e") == Word()
    assert (w * w.inverse()) == Word()


@pytest.mark.parametrize("length,count", [(0, 1), (1, 5), (3, 53), (6, 1457)])
def test_orbit_counts(schottky, length, count):
    orbit = enumerate_orbit(schottky, length)
    assert len(orbit) == count
    shells = np.bincount(orbit.shells)
    assert list(shells) == [shell_size(2, k) for k in range(length + 1)]


def test_shell_sizes():
    assert [shell_size(2, k) for k in range(4)] == [1, 4, 12, 36]


def test_orbit_cap(schottky):
    with pytest.raises(OrbitTooLarge):
        enumerate_orbit(schottky, 6, cap=100)


def test_orbit_equivariance(schottky, rng):
    orbit = enumerate_orbit(schottky, 5)
    index = {w.letters: i for i, w in enumerate(orbit.words)}
    short = [w for w in orbit.words if len(w) <= 2]
    checked = 0
    while checked < 100:
        w = short[rng.integers(len(short))]
        v = orbit.words[rng.integers(len(orbit))]
        prod = w * v
        if prod.letters not in index:
            continue
        target = orbit.points[index[prod.letters]]
        assert orbit.elements[index[w.letters]](orbit.points[index[v.letters]]) == pytest.approx(target, abs=1e-10)
        checked += 1


def test_one_minus_r2_is_exact(schottky):
    orbit = enumerate_orbit(schottky, 4)
    np.testing.assert_allclose(orbit.one_minus_r2, 1 - np.abs(orbit.points) ** 2, rtol=1e-6, atol=1e-15)


def test_separation_two_points():
    orbit = Orbit.from_points([0, 0.5])
    assert separation_delta(orbit) == pytest.approx(math.log(3))


def test_separation_cyclic_equals_translation_length(cyclic):
    orbit = enumerate_orbit(cyclic, 5)
    assert separation_delta(orbit) == pytest.approx(translation_length_from_s(0.9), rel=1e-12)


def test_separation_stable(schottky):
    d4 = separation_delta(enumerate_orbit(schottky, 4))
    d5 = separation_delta(enumerate_orbit(schottky, 5))
    assert d4 > 0
    assert abs(d4 - d5) < 1e-9
    assert d4 == pytest.approx(DELTA_SCHOTTKY, abs=1e-9)


def test_distances_match_direct_formula(schottky):
    orbit = enumerate_orbit(schottky, 3)
    direct = hyp_distance(orbit.points[7], orbit.points)
    np.testing.assert_allclose(distances_from(orbit, 7), direct, rtol=1e-9, atol=1e-9)
    full = pairwise_distances(orbit)
    np.testing.assert_allclose(full, full.T, atol=1e-12)


def test_boundary_sum_shells_decay(schottky):
    orbit = enumerate_orbit(schottky, 6)
    ratios = boundary_sum(orbit).ratios()
    assert np.all(ratios[2:6] < 0.9)
    assert np.all(ratios[2:6] > 0)


def test_partial_sums_trivial_cases(schottky):
    orbit = Orbit.from_points([0])
    assert boundary_sum(orbit).total == 1.0
    assert poincare_partial_sum(orbit, 1.0).total == 1.0
    full = enumerate_orbit(schottky, 3)
    assert poincare_partial_sum(full, 0).total == len(full)


def test_blaschke_simple():
    orbit = Orbit.from_points([0, 0.5])
    assert blaschke_lower_bound(orbit, 0).value == pytest.approx(0.5)


def test_blaschke_coincident_flag():
    res = blaschke_lower_bound(Orbit.from_points([0.1, 0.1, 0.5]), 0)
    assert res.coincident and res.value == 0.0


def test_blaschke_base_invariance(schottky):
    # radius 7 keeps every ball inside the L = 6 truncation for these bases
    orbit = enumerate_orbit(schottky, 6)
    values = [blaschke_lower_bound(orbit, b, radius=7.0).value for b in (0, 3, 17)]
    assert max(values) / min(values) - 1 < 0.02


def test_blaschke_monotone_in_radius(schottky):
    orbit = enumerate_orbit(schottky, 5)
    vals = [blaschke_lower_bound(orbit, 0, radius=R).value for R in (4.0, 6.0, 8.0, 12.0)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_blaschke_exponential_lower_bound(schottky):
    orbit = enumerate_orbit(schottky, 5)
    c = blaschke_exponent_constant(orbit)
    res = blaschke_lower_bound(orbit, 0)
    total = boundary_sum(orbit).total - 1.0  # drop the base point itself
    assert res.log_value >= -c * total - 1e-9


def test_dirac_norm_trivial():
    orbit = Orbit.from_points([0])
    assert dirac_carleson_norm(orbit, np.linspace(0, 6, 8), [1.0, 2.0]) <= 1.0
    assert dirac_carleson_norm(orbit, [0.0], [0.1]) == 0.0


def test_dirac_norm_stable(schottky):
    angles = np.linspace(0, 2 * np.pi, 256, endpoint=False)
    radii = dyadic_radii(1, 8)
    n5 = dirac_carleson_norm(enumerate_orbit(schottky, 5), angles, radii)
    n6 = dirac_carleson_norm(enumerate_orbit(schottky, 6), angles, radii)
    assert np.isfinite(n6)
    assert abs(n6 - n5) / n5 < 0.05
