import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from symplab import atlas, lagrangians as lag
from symplab.geomcore import make_rng

SETTINGS = settings(max_examples=50, deadline=None)
ACTIONS = {"rho_EP": (lag.RHO_EP, 6), "rho_CS": (lag.RHO_CS, 6), "rho": (lag.RHO, 4), "rho_01": (lag.RHO_01, 4),
           "rho_CP2": (lag.RHO_CP2, 6)}


def _rng(tag):
    return make_rng(7, f"lagrangians-{tag}")


@SETTINGS
@given(st.sampled_from(sorted(ACTIONS)), st.floats(-4, 4), st.floats(-4, 4), st.integers(0, 2**32 - 1))
def test_circle_actions_compose(name, s, t, seed):
    act, dim = ACTIONS[name]
    x = np.random.default_rng(seed).standard_normal(dim)
    assert np.allclose(act(s, act(t, x)), act(s + t, x), atol=1e-12)


@pytest.mark.parametrize("sid", ["T_EP", "T_AF", "T_CS", "T_BC", "T_W_target", "L_P_0_1", "T_CS_P",
                                 "L_Q_k_m?k=0&m=2", "L_P_k_m?k=1&m=2", "P_k_m_r?k=1&m=1&r=0.5"])
def test_samples_satisfy_own_residuals(sid):
    spec = lag.get_spec(sid)
    rng = _rng(sid)
    assert max(lag.residual(spec, spec.sample(rng)) for _ in range(30)) < 1e-10


@pytest.mark.parametrize("pair", [("T_AF", "T_EP"), ("T_BC", "T_EP"), ("T_FOOO_target", "T_EP"),
                                  ("T_W_target", "L_P_0_1")])
def test_torus_equalities(pair):
    a, b = (lag.get_spec(s) for s in pair)
    rep = lag.set_equal(a, b, 50, 1e-10, _rng("eq" + pair[0]))
    assert rep.passed, rep


def test_mapped_equal_chekanov_schlenk():
    rep = lag.mapped_equal(atlas.pair_q, lag.t_ep(), lag.t_cs(), 50, 1e-10, _rng("cs"), inverse=atlas.pair_q)
    assert rep.passed, rep


def test_negative_control_is_detected():
    rep = lag.set_equal(lag.clifford_s2s2(), lag.t_ep(), 30, 1e-10, _rng("ctrl"))
    assert not rep.passed and rep.metric > 1e-3


def test_set_equal_rejects_mismatched_ambients():
    with pytest.raises(ValueError):
        lag.set_equal(lag.t_ep(), lag.l_p_01(), 1, 1e-10, _rng("mismatch"))


@pytest.mark.parametrize("sid", ["T_EP", "T_CS", "clifford_CP2", "L_Q_k_m?k=1&m=1", "L_P_k_m?k=0&m=2"])
def test_tori_are_lagrangian(sid):
    c = lag.lagrangian_check(lag.get_spec(sid), 10, _rng("iso" + sid))
    assert c.max_form < 1e-8 and c.rank_ok


def test_sphere_factor_is_not_lagrangian():
    assert lag.lagrangian_check(lag.get_spec("S2_factor"), 5, _rng("s2")).max_form > 0.1


def test_orbit_of_curve_c_is_t_ep():
    rep = lag.set_equal(lag.orbit_spec(lag.curve_c_spec(), lag.RHO_EP), lag.t_ep(), 10, 1e-10, _rng("orbit"))
    assert rep.passed, rep


def test_orbit_spec_requires_a_curve():
    with pytest.raises(ValueError):
        lag.orbit_spec(lag.t_ep(), lag.RHO_EP)


@pytest.mark.parametrize("k,m", [(0, 1), (1, 1), (0, 2), (1, 2)])
def test_circle_bundle_lifts(k, m):
    base = lag.sphere_pair_in_quadric(k, m)
    rq = float(lag.orbit_radius_q(k, m))
    lq = lag.circle_bundle_lift(base, math.sqrt(2 - 2 * rq), "ThetaQ")
    assert lag.set_equal(lq, lag.l_q(k, m), 20, 1e-10, _rng(f"q{k}{m}")).passed
    rp = float(lag.orbit_radius_p(k, m))
    lp = lag.circle_bundle_lift(base, math.sqrt(1 - rp), "Thetap")
    assert lag.set_equal(lp, lag.l_p(k, m), 20, 1e-10, _rng(f"p{k}{m}")).passed


def test_orbit_radii_frozen():
    assert lag.orbit_radius_q(0, 1) == Fraction(1, 2)
    assert lag.orbit_radius_q(1, 2) == Fraction(3, 4)
    assert lag.orbit_radius_p(1, 1) == Fraction(1, 2)
    assert lag.orbit_radius_p(1, 2) == Fraction(3, 5)


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.8])
def test_c_alpha_lies_on_its_level_set(alpha):
    for t in np.linspace(0, 2 * np.pi, 37):
        w = lag.c_alpha(t, alpha)
        assert abs(lag.c_alpha_residual(w, alpha)) < 1e-12


def test_get_spec_unknown():
    with pytest.raises(KeyError):
        lag.get_spec("T_nonexistent")
    assert "T_EP" in lag.spec_ids()
