import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from symplab import invariants as inv


def test_loop_oracles():
    th = np.linspace(0, 2 * np.pi, 257)
    assert inv.maslov_frame_loop([np.array([[1.0], [0.0]])] * 257) == 0
    assert inv.maslov_frame_loop([np.array([[np.cos(t)], [np.sin(t)]]) for t in th]) == 2
    assert inv.maslov_frame_loop([np.array([[np.cos(2 * t)], [np.sin(2 * t)]]) for t in th]) == 4


def test_standard_torus_disk_has_maslov_two():
    d = inv.standard_torus_disk([1.0, 0.5, 0.7])
    assert inv.maslov_disk(d, n_theta=256, n_rad=64) == 2
    assert inv.boundary_residual(d) < 1e-12


@pytest.mark.parametrize("k,m", [(0, 1), (1, 1)])
def test_u_disks(k, m):
    assert inv.maslov_disk(inv.u_disk(1, k, m)) == 2 * (k + m)
    assert inv.maslov_disk(inv.u_disk(3, k, m)) == 0


def test_disk_areas():
    assert abs(inv.disk_area(inv.u_disk(1, 1, 1, 0.5)) - math.pi) < 1e-6
    assert abs(inv.disk_area(inv.d_prime_disk()) - math.pi / 2) < 1e-6
    for d in (inv.u_disk(2, 1, 1), inv.u_disk(3, 0, 2), inv.v1_disk(), inv.v2_disk()):
        assert abs(inv.disk_area(d)) < 1e-6


@pytest.mark.parametrize("k,m", [(0, 1), (1, 1), (0, 2)])
def test_u1_area_scales_with_radius(k, m):
    # area of u1 is 2 pi r
    for r in (0.25, 0.5, 0.75):
        assert abs(inv.disk_area(inv.u_disk(1, k, m, r)) - 2 * math.pi * r) < 1e-6


@pytest.mark.parametrize("k,m", [(k, m) for m in range(4) for k in range(m + 1) if k + m > 0])
def test_monotone_radii(k, m):
    assert inv.quadric_monotone_radius(k, m) == 1 - Fraction(1, k + m + 1)
    assert inv.projective_monotone_radius(k, m) == 1 - Fraction(2, k + m + 2)


def test_monotone_radius_validation():
    with pytest.raises(ValueError):
        inv.monotone_radius(lambda r: r * r, 2, 1, 2)
    with pytest.raises(ValueError):
        inv.monotone_radius(lambda r: Fraction(1), 2, 1, 2)
    with pytest.raises(ValueError):
        inv.monotone_radius(lambda r: 2 * (1 - r), 2, 5, 2)


def test_monotone_lambda():
    for k, m in ((0, 1), (1, 1), (0, 2)):
        r = float(inv.quadric_monotone_radius(k, m))
        lam = inv.disk_area(inv.u_disk(1, k, m, r)) / (2 * (k + m))
        assert abs(lam - math.pi / (k + m + 1)) < 1e-6
        fib = inv.disk_area(inv.fiber_disk_q(k, m, math.sqrt(2 - 2 * r))) / 2
        assert abs(lam - fib) < 1e-5


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6))
def test_minimal_maslov_from_generators(k, m):
    ents = [inv.ClassLatticeEntry("u1", 0.0, 2 * (k + m)), inv.ClassLatticeEntry("u2", 0.0, 0),
            inv.ClassLatticeEntry("u3", 0.0, 0)]
    assert inv.minimal_maslov(ents, half_class_present=True) == k + m
    assert inv.minimal_maslov(ents[::2], half_class_present=False) == 2 * (k + m)


def test_minimal_maslov_engine():
    assert inv.minimal_maslov_pr(1, 1) == 2
    assert inv.minimal_maslov_pr(0, 1) == 2
    with pytest.raises(ValueError):
        inv.minimal_maslov([inv.ClassLatticeEntry("z", 0.0, 0)], False)


def test_displaceability_threshold():
    hits = [n for n in range(1, 12) if inv.displaceability_criterion(2 * np.pi / (n + 1), np.pi, np.pi)]
    assert hits == list(range(4, 12))
    assert not inv.displaceability_criterion(0.1, np.pi, np.pi / 2)
    with pytest.raises(ValueError):
        inv.displaceability_criterion(0.0, np.pi, np.pi)


@pytest.mark.parametrize("k,m,want", [(0, 1, 0.0), (0, 2, 0.0), (1, 1, math.pi), (1, 2, math.pi)])
def test_holonomy(k, m, want):
    h = inv.holonomy_angle(inv.holonomy_disk(k, m), 2 * np.pi)
    assert abs(math.remainder(h - want, 2 * np.pi)) < 1e-8


@pytest.mark.parametrize("kind,k,m", [("Q", 0, 2), ("P", 1, 2)])
def test_displacement_certificates(kind, k, m):
    c = inv.displacement_isotopy(kind, k, m, seed=7)
    assert c.passed and c.area_drift <= 1e-6 and c.min_separation > 0.01 and not c.refused


@pytest.mark.parametrize("k,m", [(1, 1), (0, 2)])
def test_displacement_refused(k, m):
    c = inv.displacement_isotopy("P", k, m, seed=7)
    assert c.refused and not c.passed and c.diagnostic


def test_morse_critical_points():
    cps = inv.morse_critical_points(1, 1)
    assert len(cps) == inv.morse_expected_count(1, 1)
    assert all(abs(cp.hessian_min) > 1e-3 for cp in cps)


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 1), st.floats(0, 2 * np.pi))
def test_frame_family_is_lagrangian(a, theta):
    assert inv.lagrangian_family_defect(a, theta, 1, 1) < 1e-10
