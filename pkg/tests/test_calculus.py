import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from symplab import atlas
from symplab.calculus import (
    SmoothMap,
    VectorField,
    bent_plane_form,
    canonical_one_form,
    canonical_two_form,
    compose,
    disk_integral,
    euclidean_chart,
    exterior_derivative,
    fd_jacobian,
    is_simple,
    jacobian,
    lie_bracket,
    planar_area,
    pullback_one_form,
    pullback_two_form,
    sphere_area_form,
    standard_two_form,
)
from symplab.geomcore import make_rng

SETTINGS = settings(max_examples=40, deadline=None)
vec4 = st.lists(st.floats(-2, 2, allow_nan=False), min_size=4, max_size=4)


@SETTINGS
@given(vec4, vec4, vec4)
def test_pullback_antisymmetry(x, v, w):
    m = SmoothMap("sq", euclidean_chart(4), euclidean_chart(4), lambda y: np.tanh(y) + 0.1 * y[::-1] ** 2)
    form = canonical_two_form()
    x, v, w = map(np.array, (x, v, w))
    assert abs(pullback_two_form(m, form, x, v, w) + pullback_two_form(m, form, x, w, v)) < 1e-9


def test_linear_symplectic_map_exact():
    # (p, q) -> (q, -p) preserves dp ^ dq on R^2
    m = SmoothMap("J", euclidean_chart(2), euclidean_chart(2), lambda x: np.array([x[1], -x[0]]))
    form = standard_two_form()
    rng = make_rng(0, "J")
    for _ in range(20):
        x, v, w = rng.standard_normal((3, 2))
        assert abs(pullback_two_form(m, form, x, v, w) - form(x, v, w)) < 1e-8


def test_chain_rule():
    chart = euclidean_chart(3)
    f = SmoothMap("f", chart, chart, lambda x: np.array([np.sin(x[0]), x[1] * x[2], np.exp(x[2] / 3)]))
    g = SmoothMap("g", chart, chart, lambda x: np.array([x[0] + x[1] ** 2, np.cos(x[2]), x[0] * x[2]]))
    x = np.array([0.3, -0.2, 0.5])
    j = jacobian(compose(g, f), x)
    assert np.allclose(j, jacobian(g, f.fn(x)) @ jacobian(f, x), atol=1e-6)


def test_fd_jacobian_of_linear_map():
    a = np.arange(9.0).reshape(3, 3)
    assert np.allclose(fd_jacobian(lambda x: a @ x, np.ones(3)), a, atol=1e-7)


def test_exterior_derivative_of_canonical_one_form():
    lam, om = canonical_one_form(), exterior_derivative(canonical_one_form())
    ref = canonical_two_form()
    rng = make_rng(0, "d")
    for _ in range(10):
        x, v, w = rng.standard_normal((3, 6))
        assert abs(om(x, v, w) - ref(x, v, w)) < 1e-6
    assert lam is not None


def test_geodesic_flow_preserves_canonical_one_form():
    rng = make_rng(3, "flow")
    chart = atlas.cotangent_chart(2)
    m = SmoothMap("g", chart, chart, lambda x: atlas.geodesic_flow(0.7, x))
    for _ in range(20):
        q = rng.standard_normal(3)
        q /= np.linalg.norm(q)
        p = rng.standard_normal(3)
        p -= (p @ q) * q
        p *= rng.uniform(0.2, 0.9) / np.linalg.norm(p)
        x = np.concatenate([p, q])
        v = chart.project_tangent(x, rng.standard_normal(6))
        lam = canonical_one_form()
        assert abs(pullback_one_form(m, lam, x, v) - lam(x, v)) < 1e-6


def test_lie_bracket_of_rotation_fields():
    # [L1, L2] = -L3 for the left-invariant convention L_i(x) = e_i x x
    e = np.eye(3)
    fields = [VectorField(f"L{i}", (lambda i: lambda x: np.cross(e[i], x))(i)) for i in range(3)]
    x = np.array([0.3, -0.4, 0.5])
    br = lie_bracket(fields[0], fields[1], x)
    assert np.allclose(np.abs(br), np.abs(np.cross(e[2], x)), atol=1e-5)


def test_disk_integral_closed_forms():
    # unit disk, standard form: area pi
    form = standard_two_form()
    val = disk_integral(lambda s, t: np.array([s * np.cos(t), s * np.sin(t)]), form, grid=32)[0]
    assert abs(val - math.pi) < 1e-10
    exact = 2 * math.pi * special.i1(1.0)
    weighted = disk_integral(lambda s, t: np.array([s * np.cos(t), s * np.sin(t)]),
                             type(form)("w", lambda x, v, w: np.exp(x[0]) * (v[0] * w[1] - v[1] * w[0])),
                             grid=16)[0]
    assert abs(weighted - exact) < 1e-10


def test_sphere_area():
    form = sphere_area_form(1.0)
    val = disk_integral(lambda s, t: np.array([np.sin(s * np.pi) * np.cos(t), np.sin(s * np.pi) * np.sin(t),
                                                np.cos(s * np.pi)]), form, grid=48)[0]
    assert abs(abs(val) - 4 * math.pi) < 1e-8


@pytest.mark.parametrize("a", [0.1, 0.4, 0.8])
def test_bent_form_circle_area(a):
    val = planar_area(lambda t: np.array([a * np.cos(t), a * np.sin(t)]), "omegaD")
    assert abs(val - 2 * math.pi * (1 - math.sqrt(1 - a * a))) < 1e-8
    assert bent_plane_form() is not None


def test_planar_area_rejects_self_intersection():
    figure_eight = lambda t: np.array([np.sin(t), np.sin(2 * t)])
    assert not is_simple(figure_eight)
    with pytest.raises(ValueError):
        planar_area(figure_eight)
