import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from symplab import atlas
from symplab.geomcore import make_rng, proj_dist, r2c, rotation_e1, sample_cotangent, sample_ortho

SETTINGS = settings(max_examples=80, deadline=None)


def _unit(rng, n):
    g = rng.standard_normal(n)
    return g / np.linalg.norm(g)


def test_helper_f_values():
    assert atlas.helper_f(0.0) == 0.5
    assert abs(atlas.helper_f(0.5) - (4 - 2 * math.sqrt(3))) < 1e-15


@SETTINGS
@given(st.floats(0.0, 0.999))
def test_helper_f_identity(x):
    f = atlas.helper_f(x)
    assert abs(x * x * f + 1 / f - 2) < 1e-12


@SETTINGS
@given(st.floats(1e-6, 2e-4))
def test_helper_f_series_matches_closed_form(x):
    # rationalized closed form; the naive one cancels catastrophically here
    assert abs(atlas.helper_f(x) - 1 / (1 + math.sqrt(1 - x * x))) < 1e-15


@pytest.mark.parametrize("x", [-0.1, 1.0, 1.5])
def test_helper_f_domain(x):
    with pytest.raises(atlas.DomainError):
        atlas.helper_f(x)


@SETTINGS
@given(st.integers(0, 2**32 - 1))
def test_sphere_pair_identity(seed):
    rng = np.random.default_rng(seed)
    v, w = _unit(rng, 3), _unit(rng, 3)
    lhs = np.linalg.norm(v - w) ** 2 * np.linalg.norm(v + w) ** 2
    assert abs(lhs - 4 * np.linalg.norm(np.cross(v, w)) ** 2) < 1e-12


def test_phi2_frozen_value():
    got = atlas.eval_map("Phi2", np.array([1.0, 0, 0, 0, 1.0, 0]))
    assert np.allclose(got, np.array([0, 0, 1, 1, -1, 0]) / np.sqrt(2), atol=1e-15)


@pytest.mark.parametrize("n", [2, 3])
def test_codisk_image_in_projective_space(n):
    rng = make_rng(7, "image", n)
    for _ in range(200):
        x = sample_cotangent(n, 0.0, 0.99, rng).as_array()
        z = r2c(atlas.eval_map("PsiP", x, n=n))
        p = x[: n + 1]
        assert abs(np.vdot(z, z).real - 2) < 1e-12
        assert abs(np.sum(z * z) + 2 * math.sqrt(1 - p @ p)) < 1e-12


@pytest.mark.parametrize("n", [2, 3])
def test_inverse_roundtrip(n):
    for i, (eid, e) in enumerate(sorted(atlas.catalog(n).items())):
        if e.inverse is None:
            continue
        rng = make_rng(7, "roundtrip", 10 * n + i)
        for _ in range(50):
            x = e.sampler(rng)
            y = atlas.eval_map(eid, x, n=n)
            back = atlas.eval_inverse(eid, y, n=n)
            assert atlas.image_gap(e, atlas.eval_map(eid, back, n=n), y) < 1e-10, eid


def test_eval_map_rejects_off_domain_points():
    with pytest.raises(atlas.DomainError):
        atlas.eval_map("Psi", np.array([0.1, 0, 0, 1.0, 1.0, 0]))
    with pytest.raises(KeyError):
        atlas.eval_inverse("phi1", np.zeros(6))


def test_phi1_double_cover_and_functions():
    rng = make_rng(7, "phi1")
    for _ in range(200):
        x = atlas._sample_phi1(rng)
        y = atlas.eval_map("phi1", x)
        assert np.allclose(atlas.eval_map("phi1", -x), y, atol=1e-13)
        z1, z2 = complex(x[0], x[2]), complex(x[1], x[3])
        p, q = y[:3], y[3:]
        assert abs(np.linalg.norm(p) - (abs(z1) ** 2 + abs(z2) ** 2) / 4) < 1e-12
        assert abs(np.cross(p, q)[0] - (abs(z1) ** 2 - abs(z2) ** 2) / 4) < 1e-12


def test_phi2_pulls_back_functions():
    rng = make_rng(7, "phi2")
    for _ in range(200):
        x = atlas._sample_pair(rng)
        v, w = x[:3], x[3:]
        p, q = (y := atlas.eval_map("Phi2", x))[:3], y[3:]
        assert abs(np.linalg.norm(p) - np.linalg.norm(v + w) / 2) < 1e-12
        assert abs(np.cross(p, q)[0] - (v + w)[0] / 2) < 1e-12


def test_theta_delta_closed_form():
    rng = make_rng(7, "td")
    for _ in range(200):
        x = atlas._sample_theta_delta(rng)
        xx, y = x[:3], x[3:]
        ny = np.linalg.norm(y)
        ref = np.concatenate([(ny**2 / 2 - 1) * np.cross(xx, y / ny), y / ny])
        assert np.allclose(atlas.phi2(atlas.eval_map("ThetaDelta", x)), ref, atol=1e-12)


def test_psi_disk_equivariance():
    rng = make_rng(7, "equiv")
    for _ in range(100):
        z = complex(*(_unit(rng, 2) * rng.uniform(0, 1.4)))
        t = rng.uniform(0, 2 * np.pi)
        zt = np.exp(1j * t) * z
        lhs = atlas.psi_disk([zt.real, zt.imag])
        assert np.allclose(lhs, rotation_e1(t) @ atlas.psi_disk([z.real, z.imag]), atol=1e-12)


def test_codisk_map_is_orthogonally_equivariant():
    rng = make_rng(7, "oequiv")
    for _ in range(100):
        g = sample_ortho(4, rng).m
        x = sample_cotangent(3, 0.0, 0.99, rng).as_array()
        gx = np.concatenate([g @ x[:4], g @ x[4:]])
        assert proj_dist(r2c(atlas.psi_p(gx)), g @ r2c(atlas.psi_p(x))) < 1e-12


def test_geodesic_flow_periodic_and_moves_iota():
    rng = make_rng(7, "flow")
    for _ in range(100):
        k, m = rng.integers(0, 3, 2)
        x, y = _unit(rng, k + 1), _unit(rng, m + 1)
        r, th = rng.uniform(0.05, 0.95), rng.uniform(0, 2 * np.pi)
        pt = atlas.iota(0.0, x, y, r)
        assert np.allclose(atlas.geodesic_flow(th, pt), atlas.iota(th, x, y, r), atol=1e-12)
        assert np.allclose(atlas.geodesic_flow(2 * np.pi, pt), pt, atol=1e-12)
    with pytest.raises(atlas.DomainError):
        atlas.geodesic_flow(1.0, np.array([0, 0, 0, 1.0, 0, 0]))


@pytest.mark.parametrize("n", [2, 3])
def test_moment_maps(n):
    rng = make_rng(7, "moment", n)
    for _ in range(200):
        x = sample_cotangent(n, 0.0, 0.99, rng).as_array()
        assert np.allclose(atlas.moment_map("mu_Q", atlas.psi_q(x)), atlas.moment_map("mu_S", x), atol=1e-10)
        assert np.allclose(atlas.moment_map("Phi_C", atlas.psi_p(x)), atlas.moment_map("Phi_R", x), atol=1e-10)
        assert abs(atlas.moment_norm("Phi_R", x) - np.linalg.norm(x[: n + 1])) < 1e-10
        u = rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1)
        u = np.concatenate([(v := np.sqrt(2) * u / np.linalg.norm(u)).real, v.imag])
        assert abs(atlas.moment_norm("Phi_C", u) - atlas.projective_norm_closed_form(u)) < 1e-10


def test_catalog_covers_required_maps():
    required = {"phi1", "Phi2", "PsiP", "Phi1bar", "psi", "psiP", "ThetaDelta", "ThetaQ", "Thetap", "Psi", "h1"}
    assert required <= set(atlas.catalog(2))
