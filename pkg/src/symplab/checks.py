"""Registry of verification checks run by the command-line tool.

Each check is a function of a :class:`Context` returning an :class:`Outcome`.
A check passes iff ``metric <= tolerance``; integer checks report the absolute
mismatch so that tolerance 0 means exact agreement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional
from urllib.parse import parse_qsl

import numpy as np
from scipy import special

from . import atlas, floerdata as fd, invariants as inv, lagrangians as lag
from .calculus import (
    SmoothMap,
    TwoForm,
    VectorField,
    bent_plane_form,
    canonical_one_form,
    compose,
    disk_integral,
    euclidean_chart,
    jacobian,
    lie_bracket,
    planar_area,
    pullback_one_form,
    pullback_two_form,
)
from .geomcore import (
    Quat,
    QI,
    QJ,
    QK,
    ProjCotangentPoint,
    CotangentPoint,
    canonicalize_proj,
    make_rng,
    proj_dist,
    quat_sandwich,
    r2c,
    sample_cotangent,
    sample_ortho,
    rotation_e1,
    sample_sphere,
)

# every module operation; the registry must reach each one
OPERATIONS = (
    "geomcore.quat_sandwich", "geomcore.proj_dist", "geomcore.sample_sphere", "geomcore.sample_cotangent",
    "geomcore.sample_ortho", "geomcore.canonicalize_proj",
    "calculus.jacobian", "calculus.pullback_two_form", "calculus.pullback_one_form", "calculus.lie_bracket",
    "calculus.disk_integral", "calculus.planar_area",
    "atlas.eval_map", "atlas.eval_inverse", "atlas.helper_f", "atlas.geodesic_flow", "atlas.moment_map",
    "atlas.moment_norm",
    "lagrangians.residual", "lagrangians.set_equal", "lagrangians.mapped_equal", "lagrangians.lagrangian_check",
    "lagrangians.circle_bundle_lift", "lagrangians.orbit_spec",
    "invariants.disk_area", "invariants.maslov_frame_loop", "invariants.maslov_disk", "invariants.monotone_radius",
    "invariants.minimal_maslov", "invariants.displaceability_criterion", "invariants.holonomy_angle",
    "invariants.displacement_isotopy", "invariants.morse_critical_points",
    "floerdata.maslov_of_class", "floerdata.area_of_class", "floerdata.enumerate_maslov2_positive",
    "floerdata.superpotential_eval", "floerdata.superpotential_grad", "floerdata.critical_points",
    "floerdata.n_parity_check",
)


class UsageError(ValueError):
    """Bad check id or parameter; reported with exit code 2."""


@dataclass(frozen=True)
class Outcome:
    metric: float
    samples: int = 0
    value: Optional[float] = None
    expected: Optional[float] = None
    notes: str = ""


@dataclass(frozen=True)
class Param:
    kind: type
    default: object = None  # None: the check runs its whole table


@dataclass(frozen=True)
class CheckDescriptor:
    id: str
    summary: str
    topic: str
    fn: Callable[["Context"], Outcome]
    tol: float
    ops: tuple
    params: dict = field(default_factory=dict)
    exact: bool = False


@dataclass
class Context:
    check_id: str
    seed: int
    samples: int
    params: dict

    def rng(self, index: int = 0) -> np.random.Generator:
        return make_rng(self.seed, self.check_id, index)

    def n(self, cap: Optional[int] = None) -> int:
        return max(1, self.samples if cap is None else min(self.samples, cap))

    def get(self, name: str):
        return self.params.get(name)


REGISTRY: dict[str, CheckDescriptor] = {}


def check(check_id: str, summary: str, topic: str, tol: float, ops, params: Optional[dict] = None,
          exact: bool = False):
    def deco(fn):
        if check_id in REGISTRY:
            raise ValueError(f"duplicate check id {check_id}")
        REGISTRY[check_id] = CheckDescriptor(check_id, summary, topic, fn, tol, tuple(ops), params or {}, exact)
        return fn

    return deco


def parse_check_id(text: str) -> tuple[CheckDescriptor, dict]:
    """Split ``name?k=0&m=1`` into a descriptor and typed parameters."""
    name, _, query = text.partition("?")
    if name not in REGISTRY:
        raise UsageError(f"unknown check id {name!r}")
    desc = REGISTRY[name]
    params = {}
    for key, raw in parse_qsl(query, keep_blank_values=True, strict_parsing=bool(query)) if query else []:
        if key not in desc.params:
            raise UsageError(f"check {name} has no parameter {key!r}")
        try:
            params[key] = desc.params[key].kind(raw)
        except ValueError as exc:
            raise UsageError(f"bad value {raw!r} for {key}") from exc
    return desc, params


def _unit(rng, n):
    g = rng.standard_normal(n)
    return g / np.linalg.norm(g)


def _tangent_pair(chart, x, rng):
    b = chart.tangent_basis(x)
    v = b @ rng.standard_normal(b.shape[1])
    w = b @ rng.standard_normal(b.shape[1])
    return v / np.linalg.norm(v), w / np.linalg.norm(w)


def _grid_km(ctx, table):
    k, m = ctx.get("k"), ctx.get("m")
    if k is None and m is None:
        return list(table)
    if k is None or m is None:
        raise UsageError("give both k and m")
    return [(k, m)]


# ================================================================ geomcore


@check("core-quat-sandwich", "conjugation by a unit quaternion is an orthogonal map with kernel +-1",
       "quaternions", 1e-12, ["geomcore.quat_sandwich"])
def _quat(ctx):
    rng = ctx.rng()
    n = ctx.n(2000)
    worst = 0.0
    for _ in range(n):
        g = _unit(rng, 4)
        xi = Quat(*g)
        imgs = np.array([quat_sandwich(xi, a) for a in (QI, QJ, QK)])
        worst = max(worst, float(np.max(np.abs(imgs @ imgs.T - np.eye(3)))))
        a = Quat.pure(rng.standard_normal(3))
        worst = max(worst, float(np.max(np.abs(quat_sandwich(-xi, a) - quat_sandwich(xi, a)))))
        z1, z2 = complex(*rng.standard_normal(2)), complex(*rng.standard_normal(2))
        # Hamilton product oracle: conj(xi) i xi = (|z1|^2 - |z2|^2) i + (2 i conj(z1) z2) j
        w2 = 2 * np.conj(z1) * z2
        ref = np.array([abs(z1) ** 2 - abs(z2) ** 2, -w2.imag, w2.real])
        worst = max(worst, float(np.max(np.abs(quat_sandwich(Quat.from_complex_pair(z1, z2), QI) - ref))))
    worst = max(worst, float(np.max(np.abs(quat_sandwich(Quat(1.0), QI) - [1, 0, 0]))))
    worst = max(worst, float(np.max(np.abs(quat_sandwich(QI, QJ) - [0, -1, 0]))))
    return Outcome(worst, n)


@check("core-proj-dist", "projective distance is phase invariant, symmetric and satisfies the triangle inequality",
       "projective points", 1e-12, ["geomcore.proj_dist"])
def _proj(ctx):
    rng = ctx.rng()
    n = ctx.n(1000)

    def pt():
        z = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        return np.sqrt(2) * z / np.linalg.norm(z)

    worst = abs(proj_dist(np.array([np.sqrt(2), 0, 0]), np.array([0, np.sqrt(2), 0])) - np.sqrt(2))
    for _ in range(n):
        a, b, c = pt(), pt(), pt()
        worst = max(worst, proj_dist(a, a), proj_dist(a, np.exp(1j * rng.uniform(0, 7)) * a),
                    abs(proj_dist(a, b) - proj_dist(b, a)),
                    max(0.0, proj_dist(a, c) - proj_dist(a, b) - proj_dist(b, c)))
    return Outcome(worst, n)


@check("core-samplers", "samplers satisfy their constraints and are reproducible per seed", "sampling", 1e-14,
       ["geomcore.sample_sphere", "geomcore.sample_cotangent", "geomcore.sample_ortho"])
def _samplers(ctx):
    n = ctx.n(2000)
    worst = 0.0
    rng = ctx.rng()
    for i in range(n):
        d = 1 + i % 4
        s = sample_sphere(d, rng).q
        c = sample_cotangent(d, 0.0, 0.99, rng)
        o = sample_ortho(d + 1, rng).m
        worst = max(worst, abs(s @ s - 1), abs(c.q @ c.q - 1), abs(c.p @ c.q),
                    float(np.max(np.abs(o.T @ o - np.eye(d + 1)))))
    a = [sample_sphere(3, ctx.rng(1)).q for _ in range(1)]
    b = [sample_sphere(3, ctx.rng(1)).q for _ in range(1)]
    if not np.array_equal(a[0], b[0]):
        return Outcome(math.inf, n, notes="streams differ for equal seeds")
    return Outcome(worst, n)


@check("core-canonicalize", "phase canonicalization and antipodal representatives are deterministic",
       "projective points", 1e-14, ["geomcore.canonicalize_proj"])
def _canon(ctx):
    rng = ctx.rng()
    n = ctx.n(1000)
    r2 = np.sqrt(2)
    worst = float(np.max(np.abs(canonicalize_proj(np.array([r2, 0, 0])) - [r2, 0, 0])))
    worst = max(worst, float(np.max(np.abs(canonicalize_proj(np.array([1j * r2, 0])) - [r2, 0]))))
    z = np.array([1, 1j])
    worst = max(worst, float(np.max(np.abs(canonicalize_proj(z * np.exp(0.7j)) - z))))
    for _ in range(n):
        u = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        u = r2 * u / np.linalg.norm(u)
        ph = np.exp(1j * rng.uniform(0, 7))
        worst = max(worst, float(np.max(np.abs(canonicalize_proj(u) - canonicalize_proj(ph * u)))))
        c = sample_cotangent(2, 0.1, 0.9, rng)
        a = ProjCotangentPoint(c)
        b = ProjCotangentPoint(CotangentPoint(-c.p, -c.q))
        if not a == b:
            worst = math.inf
    return Outcome(worst, n)


# ================================================================ pullbacks


def _pullback_residual(ctx, entry_ids, index0=0):
    n_dim = ctx.get("n") or 2
    per = ctx.n()
    worst = 0.0
    for j, eid in enumerate(entry_ids):
        e = atlas.catalog(n_dim)[eid]
        m = SmoothMap(eid, e.domain, e.codomain, e.fn)
        rng = ctx.rng(index0 + j)
        for _ in range(per):
            x = e.sampler(rng)
            v, w = _tangent_pair(e.domain, x, rng)
            worst = max(worst, abs(pullback_two_form(m, e.codomain_form, x, v, w) - e.domain_form(x, v, w)))
    return Outcome(worst, per * len(entry_ids), notes=f"maps {','.join(entry_ids)}; n={n_dim}")


def _pullback_check(check_id, ids, summary):
    check(check_id, summary, "symplectomorphisms", 1e-5, ["calculus.pullback_two_form", "atlas.eval_map"],
          {"n": Param(int, 2)})(lambda ctx, _ids=ids: _pullback_residual(ctx, _ids))


_pullback_check("lemma-2.2-pullback", ["phi1"], "quaternion ball map pulls dlambda back to the standard form")
_pullback_check("lemma-2.3-pullback", ["Phi2", "Phi2inv"], "sphere-pair map and its inverse are symplectic")
_pullback_check("prop-2.4-pullback", ["psi"], "disk-to-sphere map is symplectic")
_pullback_check("lemma-3.1-pullback", ["PsiP"], "codisk bundle of RP^n embeds symplectically in CP^n")
_pullback_check("lemma-3.4-pullback", ["Phi1bar"], "quotient map on the ball is symplectic")
_pullback_check("lemma-3.5-pullback", ["h1", "h2"], "disk charts of CP^1 are symplectic")
_pullback_check("prop-3.6-pullback", ["psiP"], "ball chart of CP^2 is symplectic")
_pullback_check("sec-4.1-pullback", ["ThetaDelta"], "tangent disk bundle map is symplectic")
_pullback_check("sec-4.2-pullback", ["ThetaQ"], "quadric disk bundle map is symplectic")
_pullback_check("sec-4.3-pullback", ["Thetap"], "projective disk bundle map is symplectic")
_pullback_check("sec-6-pullback", ["Psi"], "codisk bundle of S^n embeds symplectically in the quadric")


# ================================================================ calculus


@check("core-pullback-antisymmetry", "pulled-back two-forms are antisymmetric", "calculus", 1e-12,
       ["calculus.pullback_two_form"])
def _antisym(ctx):
    rng = ctx.rng()
    n = ctx.n(500)
    worst = 0.0
    for eid in ("Psi", "ThetaQ", "Phi2"):
        e = atlas.CATALOG[eid]
        m = SmoothMap(eid, e.domain, e.codomain, e.fn)
        for _ in range(n):
            x = e.sampler(rng)
            v, w = _tangent_pair(e.domain, x, rng)
            worst = max(worst, abs(pullback_two_form(m, e.codomain_form, x, v, w)
                                   + pullback_two_form(m, e.codomain_form, x, w, v)))
    return Outcome(worst, 3 * n)


@check("core-chain-rule", "pullback by a composition equals the iterated pullback", "calculus", 1e-6,
       ["calculus.pullback_two_form"])
def _chain(ctx):
    rng = ctx.rng()
    n = ctx.n(300)
    e = atlas.CATALOG["Psi"]
    ch = e.domain
    flow = SmoothMap("flow", ch, ch, lambda y: atlas.geodesic_flow(0.9, y))
    psi = SmoothMap("Psi", ch, e.codomain, e.fn)
    both = compose(psi, flow)
    inner = TwoForm("Psi*FS", lambda x, v, w: pullback_two_form(psi, e.codomain_form, x, v, w))
    worst = 0.0
    for _ in range(n):
        x = atlas._sample_cot(rng, 2, 0.1, 0.9)
        v, w = _tangent_pair(ch, x, rng)
        worst = max(worst, abs(pullback_two_form(both, e.codomain_form, x, v, w)
                               - pullback_two_form(flow, inner, x, v, w)))
    return Outcome(worst, n)


@check("core-jacobian", "analytic and finite-difference Jacobians agree", "calculus", 1e-6,
       ["calculus.jacobian"])
def _jac(ctx):
    rng = ctx.rng()
    n = ctx.n(100)
    ch = euclidean_chart(6)
    worst = 0.0
    for _ in range(n):
        t = rng.uniform(0, 2 * np.pi)
        rot = np.kron(np.eye(2), rotation_e1(t))
        exact = SmoothMap("rho_EP", ch, ch, lambda x, _t=t: atlas.rho_ep(_t, x), jac=lambda x, _r=rot: _r)
        fd_only = SmoothMap("rho_EP", ch, ch, lambda x, _t=t: atlas.rho_ep(_t, x))
        x = rng.standard_normal(6)
        a, b = jacobian(exact, x), jacobian(fd_only, x)
        worst = max(worst, float(np.max(np.abs(a - b)) / max(1.0, np.max(np.abs(a)))))
        # the sphere-pair map against a hand-derived Jacobian
        xx = atlas._sample_pair(rng)
        worst = max(worst, float(np.max(np.abs(jacobian(SmoothMap("Phi2", ch, ch, atlas.phi2), xx)
                                               - _phi2_jacobian(xx)))))
    return Outcome(worst, n)


def _phi2_jacobian(x):
    v, w = x[:3], x[3:]
    d = v - w
    nd = np.linalg.norm(d)
    u = d / nd
    c = np.cross(v, w)

    def skew(a):
        return np.array([[0, -a[2], a[1]], [a[2], 0, -a[0]], [-a[1], a[0], 0]])

    # d(c/nd) = dc/nd - c (u . dd)/nd^2 ; dc = dv x w + v x dw
    dcv, dcw = -skew(w), skew(v)
    jp = np.hstack([dcv / nd - np.outer(c, u) / nd**2, dcw / nd + np.outer(c, u) / nd**2])
    proj = (np.eye(3) - np.outer(u, u)) / nd
    jq = np.hstack([proj, -proj])
    return np.vstack([jp, jq])


@check("core-one-form-pullback", "the normalized geodesic flow preserves the canonical one-form", "calculus", 1e-6,
       ["calculus.pullback_one_form", "atlas.geodesic_flow"])
def _oneform(ctx):
    rng = ctx.rng()
    n = ctx.n(300)
    lam = canonical_one_form()
    ch = atlas.cotangent_chart(3)
    worst = 0.0
    for _ in range(n):
        t = rng.uniform(-3, 3)
        m = SmoothMap("flow", ch, ch, lambda y, _t=t: atlas.geodesic_flow(_t, y))
        x = atlas._sample_cot(rng, 3, 0.1, 0.9)
        b = ch.tangent_basis(x)
        v = b @ _unit(rng, b.shape[1])
        worst = max(worst, abs(pullback_one_form(m, lam, x, v) - lam(x, v)))
    return Outcome(worst, n)


@check("core-lie-bracket", "rotation fields on the sphere satisfy the so(3) bracket relations", "calculus", 1e-6,
       ["calculus.lie_bracket"])
def _bracket(ctx):
    rng = ctx.rng()
    n = ctx.n(300)
    ch = atlas.sphere_chart(2)
    e = np.eye(3)
    fields = [VectorField(f"L{i}", lambda x, _a=e[i]: np.cross(_a, x)) for i in range(3)]
    worst = 0.0
    for _ in range(n):
        x = _unit(rng, 3)
        for i in range(3):
            j, k = (i + 1) % 3, (i + 2) % 3
            # [X_a, X_b] = -X_{a x b} for X_a(x) = a x x under [X,Y] = DY.X - DX.Y
            br = lie_bracket(fields[i], fields[j], x, ch)
            worst = max(worst, float(np.max(np.abs(br + fields[k](x)))))
    return Outcome(worst, n)


@check("core-quadrature-convergence", "doubling the quadrature grid shrinks the error at least threefold",
       "quadrature", 0.0, ["calculus.disk_integral"], exact=True)
def _quad(ctx):
    form = TwoForm("e^u du dv", lambda x, v, w: np.exp(x[0]) * (v[0] * w[1] - v[1] * w[0]))
    exact = 2 * np.pi * special.i1(1.0)

    def param(s, t):
        return np.array([s * np.cos(t), s * np.sin(t)])

    errs = [abs(disk_integral(param, form, grid=g)[0] - exact) for g in (2, 4, 8)]
    bad = sum(1 for a, b in zip(errs, errs[1:]) if not (b * 3 <= a or b < 1e-13))
    return Outcome(bad, 3, notes="errors " + ", ".join(f"{e:.2e}" for e in errs))


@check("lemma-3.5-area", "curve C_alpha in the half disk encloses area pi(1 - alpha)", "areas", 1e-6,
       ["calculus.planar_area"], {"alpha": Param(float)})
def _lemma35(ctx):
    alphas = [ctx.get("alpha")] if ctx.get("alpha") is not None else [0.25, 1 / 3, 0.5]
    worst, last = 0.0, None
    for a in alphas:
        if not 0 < a < 1:
            raise UsageError("alpha must lie in (0, 1)")
        val = planar_area(lambda t, _a=a: (lag.c_alpha(t, _a).real, lag.c_alpha(t, _a).imag))
        last = (val, np.pi * (1 - a))
        worst = max(worst, abs(val - np.pi * (1 - a)))
    return Outcome(worst, len(alphas), value=last[0], expected=last[1])


def _omega_d_expected(a):
    return 2 * np.pi * (1 - np.sqrt(1 - a * a))


@check("prop-6.5-area", "centred circles of radius a have bent-form area 2 pi (1 - sqrt(1 - a^2))", "areas", 1e-6,
       ["calculus.planar_area"], {"a": Param(float)})
def _prop65(ctx):
    radii = [ctx.get("a")] if ctx.get("a") is not None else [0.2, 0.4, 0.5, np.sqrt(5) / 3, 0.9]
    worst, last = 0.0, None
    for a in radii:
        if not 0 < a < 1:
            raise UsageError("a must lie in (0, 1)")
        val = planar_area(lambda t, _a=a: (_a * np.cos(t), _a * np.sin(t)), "omegaD")
        last = (val, _omega_d_expected(a))
        worst = max(worst, abs(val - last[1]))
    return Outcome(worst, len(radii), value=last[0], expected=last[1])


@check("core-bent-primitive", "Green's-theorem primitive of the bent form matches direct quadrature", "areas", 1e-8,
       ["calculus.planar_area", "calculus.disk_integral"])
def _primitive(ctx):
    rng = ctx.rng()
    n = ctx.n(10)
    form = bent_plane_form()
    worst = 0.0
    for _ in range(n):
        cu, cv = rng.uniform(-0.3, 0.3, 2)
        base = rng.uniform(0.15, 0.3)
        amp, ph = rng.uniform(0, 0.08, 2), rng.uniform(0, 2 * np.pi, 2)

        def rad(t, _b=base, _a=amp, _p=ph):
            return _b + _a[0] * np.cos(2 * t + _p[0]) + _a[1] * np.sin(3 * t + _p[1])

        def curve(t):
            r = rad(t)
            return cu + r * np.cos(t), cv + r * np.sin(t)

        def param(s, t):
            r = rad(t)
            return np.array([cu + s * r * np.cos(t), cv + s * r * np.sin(t)])

        green = planar_area(curve, "omegaD")
        direct = disk_integral(param, form, grid=64)[0]
        worst = max(worst, abs(green - abs(direct)))
    return Outcome(worst, n)


# ================================================================ atlas


@check("eq-4-helper", "helper f: f(0) = 1/2, f(1/2) = 4 - 2 sqrt 3 and x^2 f + 1/f = 2", "atlas", 1e-12,
       ["atlas.helper_f"])
def _helper(ctx):
    xs = np.concatenate([[0.0, 1e-6, 5e-5, 1e-4, 2e-4], np.linspace(0.001, 0.999, ctx.n(1000))])
    worst = abs(atlas.helper_f(0.0) - 0.5)
    worst = max(worst, abs(atlas.helper_f(0.5) - (4 - 2 * np.sqrt(3))))
    for x in xs:
        f = atlas.helper_f(x)
        worst = max(worst, abs(x * x * f + 1 / f - 2))
    try:
        atlas.helper_f(1.0)
        worst = math.inf
    except ValueError:
        pass
    return Outcome(worst, len(xs))


@check("eq-1-identity", "|v - w|^2 |v + w|^2 = 4 |v x w|^2 on S^2 x S^2", "atlas", 1e-12, ["geomcore.sample_sphere"])
def _eq1(ctx):
    rng = ctx.rng()
    n = ctx.n()
    worst = 0.0
    for _ in range(n):
        v, w = sample_sphere(2, rng).q, sample_sphere(2, rng).q
        worst = max(worst, abs(np.sum((v - w) ** 2) * np.sum((v + w) ** 2) - 4 * np.sum(np.cross(v, w) ** 2)))
    return Outcome(worst, n)


@check("eq-5-image", "codisk image in CP^n has |z|^2 = 2 and sum z_j^2 = -2 sqrt(1 - |p|^2)", "atlas", 1e-12,
       ["atlas.eval_map"], {"n": Param(int, 2)})
def _eq5(ctx):
    rng = ctx.rng()
    n = ctx.n()
    d = ctx.get("n") or 2
    worst = 0.0
    for _ in range(n):
        x = sample_cotangent(d, 0.0, 0.999, rng)
        z = r2c(atlas.eval_map("PsiP", x.as_array(), n=d))
        s = np.sum(z * z)
        worst = max(worst, abs(np.vdot(z, z).real - 2), abs(s - (-2 * np.sqrt(1 - x.p @ x.p))))
    z = r2c(atlas.eval_map("PsiP", np.concatenate([np.zeros(d + 1), np.eye(d + 1)[0]]), n=d))
    worst = max(worst, proj_dist(z, 1j * np.sqrt(2) * np.eye(d + 1)[0]))
    return Outcome(worst, n)


@check("core-inverse-roundtrip", "catalogued inverses undo their maps", "atlas", 1e-10,
       ["atlas.eval_map", "atlas.eval_inverse"])
def _roundtrip(ctx):
    worst = 0.0
    count = 0
    per = ctx.n(200)
    for d in (2, 3):
        for i, (eid, e) in enumerate(sorted(atlas.catalog(d).items())):
            if e.inverse is None:
                continue
            rng = ctx.rng(10 * d + i)
            for _ in range(per):
                x = e.sampler(rng)
                y = atlas.eval_map(eid, x, n=d)
                back = atlas.eval_inverse(eid, y, n=d)
                worst = max(worst, atlas.image_gap(e, atlas.eval_map(eid, back, n=d), y))
                if e.codomain_kind == "euclid" and e.domain_equal is None:
                    worst = max(worst, float(np.max(np.abs(back - x))))
                count += 1
    phi = atlas.eval_map("Phi2", np.array([1.0, 0, 0, 0, 1.0, 0]))
    ref = np.array([0, 0, 1, 1, -1, 0]) / np.sqrt(2)
    worst = max(worst, float(np.max(np.abs(phi - ref))))
    return Outcome(worst, count)


@check("remark-3.2-geodesic-flow", "geodesic flow is 2 pi periodic and moves iota along its circle factor",
       "atlas", 1e-12, ["atlas.geodesic_flow"])
def _flow(ctx):
    rng = ctx.rng()
    n = ctx.n(500)
    worst = 0.0
    for _ in range(n):
        k, m = rng.integers(0, 3, 2)
        x, y = _unit(rng, k + 1), _unit(rng, m + 1)
        r, th = rng.uniform(0.05, 0.95), rng.uniform(0, 2 * np.pi)
        pt = atlas.iota(0.0, x, y, r)
        worst = max(worst, float(np.max(np.abs(atlas.geodesic_flow(th, pt) - atlas.iota(th, x, y, r)))))
        worst = max(worst, float(np.max(np.abs(atlas.geodesic_flow(0.0, pt) - pt))),
                    float(np.max(np.abs(atlas.geodesic_flow(2 * np.pi, pt) - pt))))
    try:
        atlas.geodesic_flow(1.0, np.array([0, 0, 0, 1.0, 0, 0]))
        worst = math.inf
    except ValueError:
        pass
    return Outcome(worst, n)


@check("prop-6.4-moment", "the quadric moment map pulls back to p q^T - q p^T", "moment maps", 1e-10,
       ["atlas.moment_map"], {"n": Param(int, 3)})
def _mu_q(ctx):
    rng = ctx.rng()
    n = ctx.n()
    d = ctx.get("n") or 3
    worst = 0.0
    for _ in range(n):
        x = sample_cotangent(d, 0.0, 0.99, rng).as_array()
        lhs = atlas.moment_map("mu_Q", atlas.psi_q(x))
        ph = np.exp(1j * rng.uniform(0, 7))
        z = r2c(atlas.psi_q(x)) * ph
        lhs2 = atlas.moment_map("mu_Q", np.concatenate([z.real, z.imag]))
        rhs = atlas.moment_map("mu_S", x)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))), float(np.max(np.abs(lhs2 - rhs))))
    return Outcome(worst, n)


@check("sec-7-moment", "Phi^R = Phi^C o Psi^P and the two norm formulas", "moment maps", 1e-10,
       ["atlas.moment_map", "atlas.moment_norm"], {"n": Param(int, 3)})
def _mu_c(ctx):
    rng = ctx.rng()
    n = ctx.n()
    d = ctx.get("n") or 3
    worst = 0.0
    for _ in range(n):
        x = sample_cotangent(d, 0.0, 0.99, rng).as_array()
        z = atlas.psi_p(x)
        a, b = atlas.moment_map("Phi_C", z), atlas.moment_map("Phi_R", x)
        worst = max(worst, float(np.max(np.abs(a - b))), float(np.max(np.abs(a + a.T))))
        worst = max(worst, abs(atlas.moment_norm("Phi_R", x) - np.linalg.norm(x[: d + 1])))
        u = rng.standard_normal(d + 1) + 1j * rng.standard_normal(d + 1)
        u = np.sqrt(2) * u / np.linalg.norm(u)
        ur = np.concatenate([u.real, u.imag])
        worst = max(worst, abs(atlas.moment_norm("Phi_C", ur) - atlas.projective_norm_closed_form(ur)))
    real = np.concatenate([np.sqrt(2) * _unit(rng, d + 1), np.zeros(d + 1)])
    worst = max(worst, float(np.max(np.abs(atlas.moment_map("Phi_C", real)))))
    p = np.array([0, 0.3] + [0] * (d - 1))
    worst = max(worst, abs(atlas.moment_norm("Phi_R", np.concatenate([p, np.eye(d + 1)[0]])) - 0.3))
    return Outcome(worst, n)


@check("prop-2.4-equivariance", "psi intertwines complex rotation with rotation about e1; Psi^P is O(n+1) equivariant",
       "atlas", 1e-12, ["atlas.eval_map", "geomcore.sample_ortho"])
def _equiv(ctx):
    rng = ctx.rng()
    n = ctx.n()
    worst = 0.0
    for _ in range(n):
        z = complex(*(_unit(rng, 2) * rng.uniform(0, 1.4)))
        t = rng.uniform(0, 2 * np.pi)
        zt = np.exp(1j * t) * z
        worst = max(worst, float(np.max(np.abs(atlas.psi_disk([zt.real, zt.imag])
                                               - rotation_e1(t) @ atlas.psi_disk([z.real, z.imag])))))
        g = sample_ortho(4, rng).m
        x = sample_cotangent(3, 0.0, 0.99, rng).as_array()
        gx = np.concatenate([g @ x[:4], g @ x[4:]])
        lhs = r2c(atlas.psi_p(gx))
        rhs = g @ r2c(atlas.psi_p(x))
        worst = max(worst, proj_dist(lhs, rhs))
    return Outcome(worst, n)


@check("lemma-2.2-double-cover", "phi1 is two-to-one with fibres +-xi and pulls back |p| and (p x q).e1",
       "atlas", 1e-12, ["atlas.eval_map", "geomcore.quat_sandwich"])
def _double(ctx):
    rng = ctx.rng()
    n = ctx.n()
    worst = 0.0
    distinct = math.inf
    for _ in range(n):
        x = atlas._sample_phi1(rng)
        y = atlas.eval_map("phi1", x)
        worst = max(worst, float(np.max(np.abs(atlas.eval_map("phi1", -x) - y))))
        z1, z2 = complex(x[0], x[2]), complex(x[1], x[3])
        p, q = y[:3], y[3:]
        worst = max(worst, abs(np.linalg.norm(p) - (abs(z1) ** 2 + abs(z2) ** 2) / 4),
                    abs(np.cross(p, q)[0] - (abs(z1) ** 2 - abs(z2) ** 2) / 4))
        x2 = atlas._sample_phi1(rng)
        distinct = min(distinct, float(np.max(np.abs(atlas.eval_map("phi1", x2) - y))))
    if distinct < 1e-6:
        worst = math.inf
    return Outcome(worst, n, notes=f"closest distinct image {distinct:.3g}")


@check("lemma-2.3-functions", "Phi2 pulls back |p| to |v + w|/2 and (p x q).e1 to (v + w).e1/2", "atlas", 1e-12,
       ["atlas.eval_map"])
def _phi2_fns(ctx):
    rng = ctx.rng()
    n = ctx.n()
    worst = 0.0
    for _ in range(n):
        x = atlas._sample_pair(rng)
        v, w = x[:3], x[3:]
        y = atlas.eval_map("Phi2", x)
        p, q = y[:3], y[3:]
        worst = max(worst, abs(np.linalg.norm(p) - np.linalg.norm(v + w) / 2), abs(np.cross(p, q)[0] - (v + w)[0] / 2))
    return Outcome(worst, n)


@check("sec-4.1-closed-form", "Phi2 o ThetaDelta has the closed form ((|y|^2/2 - 1) x x y/|y|, y/|y|)", "atlas",
       1e-12, ["atlas.eval_map"])
def _td_closed(ctx):
    rng = ctx.rng()
    n = ctx.n()
    worst = 0.0
    for _ in range(n):
        x = atlas._sample_theta_delta(rng)
        xx, y = x[:3], x[3:]
        ny = np.linalg.norm(y)
        ref = np.concatenate([(ny**2 / 2 - 1) * np.cross(xx, y / ny), y / ny])
        worst = max(worst, float(np.max(np.abs(atlas.phi2(atlas.eval_map("ThetaDelta", x)) - ref))))
    return Outcome(worst, n)


# ================================================================ lagrangians


def _set_check(a, b, ctx, cap=300, fmap=None, inverse=None):
    tol = 1e-10
    n = ctx.n(cap)
    if fmap is None:
        rep = lag.set_equal(a, b, n, tol, ctx.rng())
    else:
        rep = lag.mapped_equal(fmap, a, b, n, tol, ctx.rng(), inverse=inverse)
    return Outcome(rep.metric, 2 * n, notes=f"{a.id} vs {b.id}")


@check("prop-4.1-set-equal", "circle bundle over {x1 = 0} under ThetaDelta equals T_EP", "tori", 1e-10,
       ["lagrangians.set_equal", "lagrangians.residual"])
def _bc(ctx):
    return _set_check(lag.t_bc(), lag.t_ep(), ctx)


@check("prop-4.1-lift", "ThetaDelta circle-bundle lift of the equator equals T_BC", "tori", 1e-10,
       ["lagrangians.circle_bundle_lift", "lagrangians.set_equal"])
def _bc_lift(ctx):
    return _set_check(lag.circle_bundle_lift(lag.equator_x1(), 1.0, "ThetaDelta"), lag.t_bc(), ctx)


@check("thm-1.1-af", "the torus |p| = 1/2, (p x q).e1 = 0 pulled back by Phi2 equals T_EP", "tori", 1e-10,
       ["lagrangians.set_equal"])
def _af(ctx):
    return _set_check(lag.t_af(), lag.t_ep(), ctx)


@check("thm-1.1-fooo", "the fibre torus of the moment-map pair equals T_EP", "tori", 1e-10, ["lagrangians.set_equal"])
def _fooo(ctx):
    return _set_check(lag.t_fooo_target(), lag.t_ep(), ctx)


@check("prop-2.4-cs", "(Q1, Q2) carries T_EP onto the Chekanov-Schlenk torus built from Gamma = psi^-1(Gamma')",
       "tori", 1e-10, ["lagrangians.mapped_equal"])
def _cs(ctx):
    return _set_check(lag.t_ep(), lag.t_cs(), ctx, fmap=atlas.pair_q, inverse=atlas.pair_q)


@check("prop-2.4-orbit", "T_EP is the rho_EP orbit of the curve C", "tori", 1e-10,
       ["lagrangians.orbit_spec", "lagrangians.set_equal"])
def _orbit_c(ctx):
    return _set_check(lag.orbit_spec(lag.curve_c_spec(), lag.RHO_EP), lag.t_ep(), ctx)


@check("prop-2.4-area", "Gamma' encloses half-form area pi/2 and C-tilde encloses pi/3", "areas", 1e-6,
       ["calculus.disk_integral", "calculus.planar_area"])
def _gamma_area(ctx):
    # spherical cap {x3 >= 1/2} under half the area form, as a polar disk
    form = lag.gamma_prime_spec().form

    def cap(s, t):
        h = 0.5 + 0.5 * (1 - s)  # x3 from 1 down to 1/2
        rr = np.sqrt(1 - h * h)
        return np.array([rr * np.cos(t), rr * np.sin(t), h])

    a = abs(disk_integral(cap, form, grid=64)[0])
    b = planar_area(lambda t: (lag.c_tilde(t).real, lag.c_tilde(t).imag))
    return Outcome(max(abs(a - np.pi / 2), abs(b - np.pi / 3)), 2, notes=f"{a:.9f}, {b:.9f}")


@check("thm-1.2-wu", "the Wu-type torus pulled back from T*RP^2 equals L^P_{0,1}", "tori", 1e-10,
       ["lagrangians.set_equal"])
def _wu(ctx):
    return _set_check(lag.t_w_target(), lag.l_p_01(), ctx)


@check("prop-3.6-cs", "psiP Q psiP^-1 carries L^P_{0,1} onto the projective Chekanov-Schlenk torus", "tori", 1e-10,
       ["lagrangians.mapped_equal"])
def _cs_p(ctx):
    return _set_check(lag.l_p_01(), lag.t_cs_p(), ctx, fmap=lag.cs_p_map, inverse=lag.cs_p_map_inverse)


@check("prop-3.6-orbit", "L^P_{0,1} is the orbit of C_P under rotation of (z1, z2)", "tori", 1e-10,
       ["lagrangians.orbit_spec", "lagrangians.set_equal"])
def _orbit_cp(ctx):
    return _set_check(lag.orbit_spec(lag.c_p_spec(), lag.RHO_CP2), lag.l_p_01(), ctx)


_LIFT_TABLE = ((0, 1), (1, 1), (0, 2), (1, 2))


@check("thm-1.3-lift", "circle-bundle lifts of S_{k,m} at the monotone radius equal L^Q_{k,m} and L^P_{k,m}",
       "tori", 1e-10, ["lagrangians.circle_bundle_lift", "lagrangians.set_equal"],
       {"k": Param(int), "m": Param(int)})
def _lift(ctx):
    n = ctx.n(100)
    worst, count = 0.0, 0
    for i, (k, m) in enumerate(_grid_km(ctx, _LIFT_TABLE)):
        if k < 0 or m < 1 or k > m:
            raise UsageError("need 0 <= k <= m, m >= 1")
        base = lag.sphere_pair_in_quadric(k, m)
        r = float(lag.orbit_radius_q(k, m))
        lq = lag.circle_bundle_lift(base, math.sqrt(2 - 2 * r), "ThetaQ")
        worst = max(worst, lag.set_equal(lq, lag.l_q(k, m), n, 1e-10, ctx.rng(2 * i)).metric)
        rp = float(lag.orbit_radius_p(k, m))
        lp = lag.circle_bundle_lift(base, math.sqrt(1 - rp), "Thetap")
        worst = max(worst, lag.set_equal(lp, lag.l_p(k, m), n, 1e-10, ctx.rng(2 * i + 1)).metric)
        count += 4 * n
    return Outcome(worst, count)


@check("prop-6.4-set-equal", "Psi maps the radius-r orbit onto L^Q_{k,m}", "tori", 1e-10, ["lagrangians.set_equal"],
       {"k": Param(int), "m": Param(int)})
def _lq(ctx):
    n = ctx.n(100)
    worst = 0.0
    table = _grid_km(ctx, ((0, 1), (1, 1), (0, 2), (1, 2), (0, 3)))
    for i, (k, m) in enumerate(table):
        r = float(lag.orbit_radius_q(k, m))
        worst = max(worst, lag.set_equal(lag.l_q(k, m), lag.psi_p_orbit(k, m, r), n, 1e-10, ctx.rng(i)).metric)
    return Outcome(worst, 2 * n * len(table))


@check("sec-5-pointwise", "Psi o iota agrees pointwise with ThetaQ over S_{k,m}", "tori", 1e-12, ["atlas.eval_map"])
def _pointwise(ctx):
    rng = ctx.rng()
    n = ctx.n(500)
    worst = 0.0
    for i in range(n):
        k, m = _LIFT_TABLE[i % 4]
        r = rng.uniform(0.05, 0.95)
        a, b = lag.psi_iota_bundle_point(rng.uniform(0, 2 * np.pi), _unit(rng, k + 1), _unit(rng, m + 1), r)
        worst = max(worst, proj_dist(r2c(a), r2c(b)))
    return Outcome(worst, n)


_LAGRANGIANS = ("T_EP", "T_AF", "T_CS", "T_BC", "T_FOOO_target", "T_W_target", "L_P_0_1", "T_CS_P",
                "clifford_CP2", "clifford_S2xS2", "L_Q_k_m?k=0&m=2", "L_Q_k_m?k=1&m=1", "L_P_k_m?k=1&m=2",
                "P_k_m_r?k=1&m=1&r=0.5")


@check("core-lagrangian-check", "every catalogued torus is isotropic of full rank; S^2 x pt is not", "tori", 1e-8,
       ["lagrangians.lagrangian_check"])
def _iso(ctx):
    n = ctx.n(40)
    worst, notes = 0.0, []
    for i, sid in enumerate(_LAGRANGIANS):
        c = lag.lagrangian_check(lag.get_spec(sid), n, ctx.rng(i))
        worst = max(worst, c.max_form)
        if not c.rank_ok:
            worst, notes = math.inf, notes + [f"{sid} rank deficient"]
    ctrl = lag.lagrangian_check(lag.get_spec("S2_factor"), 5, ctx.rng(99))
    if ctrl.max_form < 0.1:
        worst, notes = math.inf, notes + ["control not detected"]
    return Outcome(worst, n * len(_LAGRANGIANS), notes="; ".join(notes))


@check("core-negative-control", "the Clifford torus of S^2 x S^2 is detected as different from T_EP", "tori", 0.0,
       ["lagrangians.set_equal"], exact=True)
def _control(ctx):
    rep = lag.set_equal(lag.clifford_s2s2(), lag.t_ep(), ctx.n(50), 1e-10, ctx.rng())
    return Outcome(0.0 if not rep.passed else 1.0, rep.samples, notes=f"gap {rep.metric:.3g}")


@check("sec-5-orbit-invariance", "P^r_{k,m} is invariant under the geodesic flow and SO(k+1) x SO(m+1); "
       "iota is two-to-one", "tori", 1e-10, ["lagrangians.residual", "atlas.geodesic_flow"])
def _orbit_inv(ctx):
    rng = ctx.rng()
    n = ctx.n(300)
    worst = 0.0
    for i in range(n):
        k, m = ((0, 1), (1, 1), (0, 2), (1, 2))[i % 4]
        spec = lag.p_orbit(k, m, 0.5)
        x = spec.sample(rng)
        worst = max(worst, lag.residual(spec, atlas.geodesic_flow(rng.uniform(0, 7), x)))
        g = np.zeros((k + m + 2, k + m + 2))
        g[: k + 1, : k + 1] = sample_ortho(k + 1, rng, special=True).m
        g[k + 1 :, k + 1 :] = sample_ortho(m + 1, rng, special=True).m
        h = k + m + 2
        worst = max(worst, lag.residual(spec, np.concatenate([g @ x[:h], g @ x[h:]])))
        th, u, v = rng.uniform(0, 7), _unit(rng, k + 1), _unit(rng, m + 1)
        worst = max(worst, float(np.max(np.abs(atlas.iota(th + np.pi, -u, -v, 0.5) - atlas.iota(th, u, v, 0.5)))))
    return Outcome(worst, n)


@check("core-circle-action", "circle actions compose additively", "tori", 1e-12, ["lagrangians.orbit_spec"])
def _actions(ctx):
    rng = ctx.rng()
    n = ctx.n(300)
    worst = 0.0
    dims = {"rho_EP": 6, "rho_CS": 6, "rho": 4, "rho_01": 4, "rho_CP2": 6}
    for act in (lag.RHO_EP, lag.RHO_CS, lag.RHO, lag.RHO_01, lag.RHO_CP2):
        for _ in range(n):
            x = rng.standard_normal(dims[act.name])
            s, t = rng.uniform(-4, 4, 2)
            worst = max(worst, float(np.max(np.abs(act(s, act(t, x)) - act(s + t, x)))))
    curve = lag.curve_c_spec()
    trivial = lag.orbit_spec(curve, lag.CircleAction("trivial", lambda t, x: x))
    t = rng.uniform(0, 7, 2)
    worst = max(worst, float(np.max(np.abs(trivial.point(t) - curve.point(t[:1])))))
    return Outcome(worst, 5 * n)


# ================================================================ invariants


@lru_cache(maxsize=None)
def _maslov(which: int, k: int, m: int, n_theta: int = 512) -> int:
    return inv.maslov_disk(inv.u_disk(which, k, m), n_theta=n_theta)


_MASLOV_TABLE = ((0, 1), (1, 1), (0, 2))


@check("prop-6.2-maslov", "the disk u1 has Maslov index 2(k + m)", "Maslov indices", 0, ["invariants.maslov_disk"],
       {"k": Param(int), "m": Param(int)}, exact=True)
def _mas_u1(ctx):
    bad, notes = 0, []
    for k, m in _grid_km(ctx, _MASLOV_TABLE):
        got = _maslov(1, k, m)
        notes.append(f"({k},{m}):{got}")
        bad += abs(got - 2 * (k + m))
    return Outcome(bad, len(notes), notes=" ".join(notes))


@check("sec-5-maslov-zero", "the disks u2 and u3 have Maslov index 0", "Maslov indices", 0,
       ["invariants.maslov_disk"], exact=True)
def _mas_zero(ctx):
    vals = [(3, k, m) for k, m in _MASLOV_TABLE] + [(2, 1, 1)]
    got = {v: _maslov(*v) for v in vals}
    return Outcome(sum(abs(g) for g in got.values()), len(vals),
                   notes=" ".join(f"u{w}({k},{m}):{g}" for (w, k, m), g in got.items()))


@check("core-maslov-oracle", "loop and torus oracles: constant 0, rotating line 2, standard torus disk 2",
       "Maslov indices", 0, ["invariants.maslov_frame_loop", "invariants.maslov_disk"], exact=True)
def _mas_oracle(ctx):
    th = np.linspace(0, 2 * np.pi, 257)
    const = inv.maslov_frame_loop([np.array([[1.0], [0.0]])] * 257)
    line = inv.maslov_frame_loop([np.array([[np.cos(t)], [np.sin(t)]]) for t in th])
    torus = inv.maslov_disk(inv.standard_torus_disk([1.0, 0.5, 0.7]), n_theta=256, n_rad=64)
    return Outcome(abs(const) + abs(line - 2) + abs(torus - 2), 3, notes=f"{const} {line} {torus}")


@check("core-maslov-grid", "doubling the boundary grid leaves the Maslov index unchanged", "Maslov indices", 0,
       ["invariants.maslov_disk"], exact=True)
def _mas_grid(ctx):
    a, b = _maslov(1, 0, 1), _maslov(1, 0, 1, 1024)
    return Outcome(abs(a - b), 2, notes=f"{a} {b}")


@check("sec-5-area", "u1 has area pi at r = 1/2; u2, u3 and the disks v1, v2 have area 0; D' has area pi/2",
       "areas", 1e-6, ["invariants.disk_area"])
def _areas(ctx):
    vals = {"u1": (inv.disk_area(inv.u_disk(1, 1, 1)), np.pi),
            "u2": (inv.disk_area(inv.u_disk(2, 1, 1)), 0.0),
            "u3": (inv.disk_area(inv.u_disk(3, 0, 2)), 0.0),
            "v1": (inv.disk_area(inv.v1_disk()), 0.0),
            "v2": (inv.disk_area(inv.v2_disk()), 0.0),
            "D'": (inv.disk_area(inv.d_prime_disk()), np.pi / 2)}
    worst = max(abs(a - b) for a, b in vals.values())
    bres = max(inv.boundary_residual(d) for d in (inv.u_disk(1, 1, 1), inv.v1_disk(), inv.v2_disk()))
    if bres > 1e-8:
        worst = math.inf
    return Outcome(worst, len(vals), notes=f"boundary residual {bres:.2e}")


_RADIUS_TABLE = tuple((k, m) for m in range(4) for k in range(m + 1) if k + m > 0)


@check("prop-6.3-radius", "quadric monotone radius is 1 - 1/(k + m + 1)", "monotonicity", 0,
       ["invariants.monotone_radius"], {"k": Param(int), "m": Param(int)}, exact=True)
def _rad_q(ctx):
    bad, last = 0, None
    for k, m in _grid_km(ctx, _RADIUS_TABLE):
        r = inv.quadric_monotone_radius(k, m)
        last = (r, 1 - Fraction(1, k + m + 1))
        bad += int(r != last[1])
    return Outcome(bad, 1, value=float(last[0]), expected=float(last[1]), notes=f"r = {last[0]}")


@check("prop-7.5-radius", "projective monotone radius is 1 - 2/(k + m + 2)", "monotonicity", 0,
       ["invariants.monotone_radius"], {"k": Param(int), "m": Param(int)}, exact=True)
def _rad_p(ctx):
    bad, last = 0, None
    for k, m in _grid_km(ctx, _RADIUS_TABLE):
        r = inv.projective_monotone_radius(k, m)
        last = (r, 1 - Fraction(2, k + m + 2))
        bad += int(r != last[1])
    return Outcome(bad, 1, value=float(last[0]), expected=float(last[1]), notes=f"r = {last[0]}")


@check("sec-5-minimal-maslov", "minimal Maslov number is k + m for k > 0 and 2m for k = 0", "monotonicity", 0,
       ["invariants.minimal_maslov", "invariants.maslov_disk"], {"k": Param(int), "m": Param(int)}, exact=True)
def _minmas(ctx):
    bad, notes = 0, []
    for k, m in _grid_km(ctx, _RADIUS_TABLE):
        if k + m <= 3:
            # engine values for small ambient dimension
            ents = [inv.ClassLatticeEntry("u1", 0.0, _maslov(1, k, m)), inv.ClassLatticeEntry("u3", 0.0, _maslov(3, k, m))]
            if k > 0:
                ents.append(inv.ClassLatticeEntry("u2", 0.0, _maslov(2, k, m)))
            src = "engine"
        else:
            ents = [inv.ClassLatticeEntry("u1", 0.0, 2 * (k + m)), inv.ClassLatticeEntry("u3", 0.0, 0)]
            if k > 0:
                ents.append(inv.ClassLatticeEntry("u2", 0.0, 0))
            src = "formula"
        got = inv.minimal_maslov(ents, half_class_present=k > 0)
        want = k + m if k > 0 else 2 * m
        bad += int(got != want)
        notes.append(f"({k},{m}):{got}[{src}]")
    return Outcome(bad, len(notes), notes=" ".join(notes))


@check("sec-5-monotone", "at the monotone radius area = lambda * Maslov for u1 and the fibre disk", "monotonicity",
       1e-5, ["invariants.disk_area", "invariants.monotone_radius"])
def _mono(ctx):
    worst, notes = 0.0, []
    for k, m in _MASLOV_TABLE:
        r = float(inv.quadric_monotone_radius(k, m))
        lam_u1 = inv.disk_area(inv.u_disk(1, k, m, r)) / _maslov(1, k, m)
        lam_fib = inv.disk_area(inv.fiber_disk_q(k, m, math.sqrt(2 - 2 * r))) / 2
        worst = max(worst, abs(lam_u1 - lam_fib))
        notes.append(f"({k},{m}) lambda={lam_fib:.6f}")
    return Outcome(worst, 2 * len(_MASLOV_TABLE), notes=" ".join(notes))


@check("prop-4.2-criterion", "displaceability criterion reproduces the n >= 4 threshold in CP^n", "displaceability", 0,
       ["invariants.displaceability_criterion"], exact=True)
def _crit(ctx):
    bad = 0
    for n in range(1, 10):
        bad += int(inv.displaceability_criterion(2 * np.pi / (n + 1), np.pi, np.pi) != (n >= 4))
    bad += int(inv.displaceability_criterion(0.1, np.pi, np.pi / 2))
    return Outcome(bad, 10)


@check("sec-4.4-holonomy", "holonomy of S_{k,m} is trivial for k = 0 and pi for k > 0 (fibre period 2 pi)",
       "displaceability", 1e-8, ["invariants.holonomy_angle"])
def _hol(ctx):
    worst, notes = 0.0, []
    for k, m in ((0, 1), (0, 2), (1, 1), (1, 2)):
        h = inv.holonomy_angle(inv.holonomy_disk(k, m), 2 * np.pi)
        want = 0.0 if k == 0 else np.pi
        worst = max(worst, abs(math.remainder(h - want, 2 * np.pi)))
        notes.append(f"({k},{m}):{h:.6f}")
    zero = inv.holonomy_angle(inv.u_disk(3, 0, 1), np.pi)
    worst = max(worst, abs(math.remainder(zero, 2 * np.pi)))
    return Outcome(worst, 5, notes=" ".join(notes))


@check("prop-6.5-displace", "area-preserving isotopy displaces L^Q_{0,m}", "displaceability", 1e-6,
       ["invariants.displacement_isotopy"], {"m": Param(int)})
def _disp_q(ctx):
    ms = [ctx.get("m")] if ctx.get("m") is not None else [2, 3]
    worst, notes = 0.0, []
    for m in ms:
        c = inv.displacement_isotopy("Q", 0, m, seed=ctx.seed)
        worst = max(worst, c.area_drift if c.passed else math.inf)
        notes.append(f"m={m} drift={c.area_drift:.2e} sep={c.min_separation:.3f}")
    return Outcome(worst, len(ms), notes="; ".join(notes))


@check("prop-7.6-displace", "isotopy displaces L^P_{1,2}, L^P_{0,3} and is refused for L^P_{1,1}, L^P_{0,2}",
       "displaceability", 1e-6, ["invariants.displacement_isotopy"], {"k": Param(int), "m": Param(int)})
def _disp_p(ctx):
    table = _grid_km(ctx, ((1, 2), (0, 3), (1, 1), (0, 2)))
    worst, notes = 0.0, []
    for k, m in table:
        c = inv.displacement_isotopy("P", k, m, seed=ctx.seed)
        should = k + m >= 3
        if should:
            worst = max(worst, c.area_drift if c.passed else math.inf)
            notes.append(f"({k},{m}) drift={c.area_drift:.2e} sep={c.min_separation:.3f}")
        else:
            worst = max(worst, 0.0 if c.refused else math.inf)
            notes.append(f"({k},{m}) refused")
    return Outcome(worst, len(table), notes="; ".join(notes))


@check("sec-5-morse", "critical points of f o iota sit at x, y = +-e0 with nondegenerate Hessian; f o I = f",
       "Morse function", 1e-8, ["invariants.morse_critical_points"])
def _morse(ctx):
    worst, notes = 0.0, []
    grid = inv.critical_values_grid()
    for k, m in ((0, 1), (1, 1), (0, 2)):
        cps = inv.morse_critical_points(k, m, starts=200, seed=ctx.seed)
        if len(cps) != inv.morse_expected_count(k, m):
            worst = math.inf
        for c in cps:
            off = max(np.max(np.abs(np.abs(c.x) - np.eye(k + 1)[0])), np.max(np.abs(np.abs(c.y) - np.eye(m + 1)[0])))
            worst = max(worst, off)
            if abs(np.cos(c.theta)) < 1e-6 or c.hessian_min < 1e-3:
                worst = math.inf
            cval = round(c.x[0] + c.y[0])
            worst = max(worst, min(abs(c.value - g) for g in grid[cval]))
        notes.append(f"({k},{m}):{len(cps)}")
    rng = ctx.rng()
    for _ in range(ctx.n(1000)):
        k, m = 1, 2
        pt = inv.lag.p_orbit(k, m, 0.5).sample(rng)
        worst = max(worst, abs(inv.morse_f_ambient(inv.involution_i(pt, k), k, 0.5) - inv.morse_f_ambient(pt, k, 0.5)))
    # value pattern symmetric under (x1 + y1) -> -(x1 + y1)
    worst = max(worst, max(abs(a + b) for a, b in zip(grid[2], reversed(grid[-2]))))
    return Outcome(worst, ctx.n(1000), notes=" ".join(notes))


@check("sec-5-frame-isotopy", "each plane of the interpolating family L_a is Lagrangian", "Maslov indices", 1e-10,
       ["invariants.maslov_frame_loop"])
def _frames(ctx):
    worst = 0.0
    count = 0
    for k, m in ((0, 1), (1, 1), (0, 2), (1, 2)):
        for a in (0.0, 0.25, 0.5, 0.75, 1.0):
            for th in np.linspace(0, 2 * np.pi, 64, endpoint=False):
                worst = max(worst, inv.lagrangian_family_defect(a, th, k, m))
                count += 1
    return Outcome(worst, count)


# ================================================================ floerdata


def _labels(classes):
    return sorted(c.label() for c in classes)


@check("prop-8.4-enumerate", "Maslov-2 classes with nonnegative divisor pairings in CP^3 are exactly five",
       "class lattice", 0, ["floerdata.enumerate_maslov2_positive"], exact=True)
def _enum_cp3(ctx):
    got = fd.enumerate_maslov2_positive("CP3_L11")
    boxed = fd.enumerate_maslov2_positive("CP3_L11", box=4)
    want = sorted(["D", "B-D", "B-C1-D", "B-C2-D", "B-C1-C2-D"])
    bad = int(_labels(got) != want) + int(_labels(boxed) != want)
    for c in got:
        bad += int(fd.maslov_of_class(c) != 2) + sum(1 for x in fd.pairings(c) if x < 0)
        b, d = c.coeffs[0], c.coeffs[3]
        bad += int(2 * b + d != 1)
    return Outcome(bad, len(got), notes=" ".join(_labels(got)))


@check("prop-8.2-enumerate", "the fibre class D is the only positive Maslov-2 class in CP^{m+1}", "class lattice", 0,
       ["floerdata.enumerate_maslov2_positive"], {"m": Param(int)}, exact=True)
def _enum_proj(ctx):
    ms = [ctx.get("m")] if ctx.get("m") is not None else [2, 3]
    bad = 0
    for m in ms:
        bad += int(_labels(fd.enumerate_maslov2_positive(f"CP{m + 1}_L0{m}")) != ["D"])
    return Outcome(bad, len(ms))


@check("prop-8.4-maslov", "Maslov and area homomorphisms on the CP^3 lattice", "class lattice", 0,
       ["floerdata.maslov_of_class", "floerdata.area_of_class"], exact=True)
def _mas_cls(ctx):
    lat = fd.cp3_lattice()
    ell = fd.RelClass.of(lat, ell=1)
    combo = 2 * fd.RelClass.of(lat, B=1) - fd.RelClass.of(lat, C1=1) - fd.RelClass.of(lat, C2=1)
    zero = fd.RelClass.of(lat)
    bad = int(fd.maslov_of_class(ell) != 8) + int(fd.maslov_of_class(combo) != 8) + int(fd.maslov_of_class(zero) != 0)
    bad += int(fd.maslov_of_class(fd.RelClass.of(lat, B=1)) != 4)
    bad += int(fd.area_of_class(ell, Fraction(1, 2)) != 2)
    plat = fd.projective_lattice(2)
    bad += int(fd.maslov_of_class(fd.RelClass.of(plat, ell=1)) != 8)
    bad += int(fd.maslov_of_class(fd.RelClass.of(plat, D=1)) != 2)
    return Outcome(bad, 7)


@check("prop-8.4-table", "intersection table rows and the relation ell = 2B - C1 - C2", "class lattice", 0,
       ["floerdata.maslov_of_class"], exact=True)
def _table(ctx):
    rows = fd.table_rows(fd.cp3_lattice())
    want = {"ell": (2, 1, 1, 1, 1), "C1": (0, 1, -1, 0, 0), "C2": (0, 0, 0, 1, -1), "D": (1, 0, 0, 0, 0),
            "B": (1, 1, 0, 1, 0)}
    bad = sum(int(rows[k] != v) for k, v in want.items())
    bad += int(not fd.table_consistent(fd.cp3_lattice(), 1))
    return Outcome(bad, len(want))


@check("sec-8-parity", "integrality of B.H0+ forces n = 1 in 2B = C1 + C2 + n ell", "class lattice", 0,
       ["floerdata.n_parity_check"], exact=True)
def _parity(ctx):
    bad = int(fd.n_parity_check() != 1) + int(fd.n_parity_check(c1_h0=0) != 0)
    try:
        fd.n_parity_check(c1_h0=1, c2_h0=0, ell_h0=0)
        bad += 1
    except ValueError:
        pass
    return Outcome(bad, 3)


@check("cor-8.6-critical", "closed-form critical points of W are exact for all 32 sign vectors", "superpotential",
       1e-12, ["floerdata.critical_points", "floerdata.superpotential_grad"], {"signs": Param(str)})
def _crit_w(ctx):
    if ctx.get("signs"):
        try:
            vecs = [fd.SignVector.parse(ctx.get("signs"))]
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    else:
        vecs = fd.all_sign_vectors()
    worst, count, notes = 0.0, 0, []
    for s in vecs:
        pts = fd.critical_points(s)
        if not pts or len(pts) != fd.expected_count(s) or fd.grid_critical_count(s) != len(pts):
            worst = math.inf
            notes.append(f"count mismatch for {s}")
        for p in pts:
            worst = max(worst, float(np.linalg.norm(fd.superpotential_grad(s, p))))
            count += 1
    return Outcome(worst, count, notes="; ".join(notes))


@check("cor-8.6-example", "all-plus potential: value 4 and zero gradient at (1, 1, 2); real values at real points",
       "superpotential", 1e-12, ["floerdata.superpotential_eval", "floerdata.superpotential_grad"])
def _w_example(ctx):
    s = fd.ALL_PLUS
    worst = abs(fd.superpotential_eval(s, (1, 1, 2)) - 4) + float(np.linalg.norm(fd.superpotential_grad(s, (1, 1, 2))))
    pts = fd.critical_points(s)
    for want in ((1, 1, 2), (1, 1, -2)):
        worst = max(worst, min(max(abs(a - b) for a, b in zip(p, want)) for p in pts))
    # at critical points with real coordinates the value is real
    for p in pts:
        if max(abs(c.imag) for c in p) < 1e-12:
            worst = max(worst, abs(fd.superpotential_eval(s, p).imag))
    return Outcome(worst, len(pts))


@check("cor-8.6-flip", "coordinate sign flips of W permute the sign vector", "superpotential", 1e-12,
       ["floerdata.superpotential_eval"])
def _flip(ctx):
    rng = ctx.rng()
    n = ctx.n(200)
    worst = 0.0
    vecs = fd.all_sign_vectors()
    for i in range(n):
        p = tuple(complex(*rng.uniform(0.3, 2.0, 1), 0) * np.exp(1j * rng.uniform(0, 7)) for _ in range(3))
        worst = max(worst, max(fd.flip_identities(vecs[i % 32], p).values()))
    return Outcome(worst, n)


@check("cor-8.3-no-critical", "the potential +-t_D has nowhere vanishing gradient", "superpotential", 0, (),
       exact=True)
def _nocrit(ctx):
    # on the (ell, D) lattice W = +-t_D, whose log gradient is (0, +-t_D)
    bad = int(fd.monomial_has_critical_points((0, 1))) + int(not fd.monomial_has_critical_points((0, 0)))
    rng = ctx.rng()
    n = ctx.n(200)
    for _ in range(n):
        t = complex(*rng.standard_normal(2))
        grad = np.array([0, 1]) * t
        bad += int(np.linalg.norm(grad) == 0)
    return Outcome(bad, n)


def descriptors() -> list[CheckDescriptor]:
    return [REGISTRY[k] for k in sorted(REGISTRY)]


def reachable_operations() -> set:
    return {op for d in REGISTRY.values() for op in d.ops}
