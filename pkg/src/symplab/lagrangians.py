"""Lagrangian submanifolds as (parametrization, implicit residuals) pairs.

Parameters live on products of circles and round spheres.  A parameter
vector concatenates one angle per circle factor and one unit vector per
sphere factor, so ``factors = ["circle", ("sphere", 2)]`` means a vector of
length 1 + 3.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Optional, Sequence
from urllib.parse import parse_qsl

import numpy as np
from scipy.optimize import least_squares

from . import atlas
from .calculus import (
    Chart,
    TwoForm,
    canonical_two_form,
    fd_directional,
    fubini_study,
    sphere_area_form,
    sphere_pair_form,
    standard_two_form,
)
from .geomcore import c2r, r2c, rotation_e1

Factor = object  # "circle" or ("sphere", k)

SQ3 = np.sqrt(3.0)


# -------------------------------------------------------------- parameters


def _factor_size(f) -> int:
    return 1 if f == "circle" else f[1] + 1


def _factor_dim(f) -> int:
    return 1 if f == "circle" else f[1]


def split_params(factors: Sequence[Factor], t) -> list:
    t = np.asarray(t, dtype=float)
    out, i = [], 0
    for f in factors:
        n = _factor_size(f)
        out.append(t[i] if f == "circle" else t[i : i + n])
        i += n
    return out


def sample_params(factors: Sequence[Factor], rng: np.random.Generator) -> np.ndarray:
    parts = []
    for f in factors:
        if f == "circle":
            parts.append([rng.uniform(0.0, 2 * np.pi)])
        elif f[1] == 0:
            parts.append([rng.choice([-1.0, 1.0])])
        else:
            g = rng.standard_normal(f[1] + 1)
            parts.append(g / np.linalg.norm(g))
    return np.concatenate(parts)


def param_tangents(factors: Sequence[Factor], t) -> np.ndarray:
    """Columns span the tangent space of the parameter manifold at t."""
    t = np.asarray(t, dtype=float)
    cols, i = [], 0
    size = t.shape[0]
    for f in factors:
        n = _factor_size(f)
        if f == "circle":
            e = np.zeros(size)
            e[i] = 1.0
            cols.append(e)
        elif f[1] > 0:
            x = t[i : i + n]
            _, _, vt = np.linalg.svd(x[None, :])
            for b in vt[1:]:
                e = np.zeros(size)
                e[i : i + n] = b
                cols.append(e)
        i += n
    return np.array(cols).T if cols else np.zeros((size, 0))


def _retract(factors, t):
    """Renormalize sphere blocks after a step in the ambient parameter space."""
    t = np.array(t, dtype=float)
    i = 0
    for f in factors:
        n = _factor_size(f)
        if f != "circle" and f[1] > 0:
            t[i : i + n] /= np.linalg.norm(t[i : i + n])
        i += n
    return t


# ------------------------------------------------------------------- specs


@dataclass(frozen=True)
class LagrangianSpec:
    id: str
    ambient: Chart
    param: Callable[[np.ndarray], np.ndarray]
    factors: tuple
    residuals: Optional[Callable[[np.ndarray], np.ndarray]]
    form: TwoForm
    kind: str = "euclid"  # "proj" when ambient points are lifts of projective points
    dim: int = field(default=-1)

    def __post_init__(self):
        if self.dim < 0:
            object.__setattr__(self, "dim", sum(_factor_dim(f) for f in self.factors))

    def point(self, t) -> np.ndarray:
        return np.asarray(self.param(np.asarray(t, dtype=float)), dtype=float)

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        return self.point(sample_params(self.factors, rng))


def residual(spec: LagrangianSpec, x) -> float:
    """Max of ambient constraint violation and the implicit residuals."""
    x = np.asarray(x, dtype=float)
    amb = spec.ambient.residual(x)
    if spec.residuals is None:
        return max(amb, param_distance(spec, x))
    r = np.atleast_1d(spec.residuals(x))
    return max(amb, float(np.max(np.abs(r))) if r.size else 0.0)


def _point_gap_vector(spec: LagrangianSpec, a, b) -> np.ndarray:
    if spec.kind == "proj":
        za, zb = r2c(a), r2c(b)
        ip = np.vdot(za, zb)
        c = np.conj(ip) / abs(ip) if abs(ip) > 0 else 1.0
        return c2r(za - c * zb) / np.sqrt(2.0)
    return np.asarray(a) - np.asarray(b)


def param_distance(spec: LagrangianSpec, x, grid: int = 24) -> float:
    """Distance from x to the parametrized set, by grid search then least squares.

    Only used when a spec carries no implicit residuals (e.g. orbits of curves).
    """
    x = np.asarray(x, dtype=float)
    if any(f != "circle" for f in spec.factors):
        raise ValueError("param_distance supports circle factors only")
    k = len(spec.factors)
    axes = [np.linspace(0, 2 * np.pi, grid, endpoint=False)] * k
    best, best_d = None, np.inf
    for t in np.array(np.meshgrid(*axes, indexing="ij")).reshape(k, -1).T:
        d = np.linalg.norm(_point_gap_vector(spec, spec.point(t), x))
        if d < best_d:
            best, best_d = t, d
    sol = least_squares(lambda t: _point_gap_vector(spec, spec.point(t), x), best, xtol=1e-15, ftol=1e-15,
                        gtol=1e-15, max_nfev=400)
    return float(np.linalg.norm(_point_gap_vector(spec, spec.point(sol.x), x)))


@dataclass(frozen=True)
class SetEqualReport:
    max_a_on_b: float
    max_b_on_a: float
    samples: int
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_a_on_b <= self.tol and self.max_b_on_a <= self.tol

    @property
    def metric(self) -> float:
        return max(self.max_a_on_b, self.max_b_on_a)


def set_equal(a: LagrangianSpec, b: LagrangianSpec, n_samples: int, tol: float,
              rng: np.random.Generator) -> SetEqualReport:
    """Sample each parametrization and evaluate the other's residuals."""
    if a.ambient.dim != b.ambient.dim or a.kind != b.kind:
        raise ValueError(f"ambient mismatch between {a.id} and {b.id}")
    ab = max(residual(b, a.sample(rng)) for _ in range(n_samples))
    ba = max(residual(a, b.sample(rng)) for _ in range(n_samples))
    return SetEqualReport(ab, ba, n_samples, tol)


def mapped_spec(fmap: Callable, spec: LagrangianSpec, inverse: Optional[Callable] = None,
                ambient: Optional[Chart] = None, form: Optional[TwoForm] = None,
                kind: Optional[str] = None, name: Optional[str] = None) -> LagrangianSpec:
    """Image of spec under fmap; residuals pulled back through the inverse when given."""
    res = None
    if inverse is not None and spec.residuals is not None:
        def res(x, _inv=inverse, _spec=spec):
            return np.atleast_1d(np.concatenate([[_spec.ambient.residual(_inv(x))],
                                                 np.atleast_1d(_spec.residuals(_inv(x)))]))
    return LagrangianSpec(name or f"map({spec.id})", ambient or spec.ambient,
                          lambda t, _p=spec.param: fmap(_p(t)), spec.factors, res, form or spec.form,
                          kind or spec.kind)


def mapped_equal(fmap: Callable, a: LagrangianSpec, b: LagrangianSpec, n_samples: int, tol: float,
                 rng: np.random.Generator, inverse: Optional[Callable] = None) -> SetEqualReport:
    return set_equal(mapped_spec(fmap, a, inverse, ambient=b.ambient, form=b.form, kind=b.kind), b,
                     n_samples, tol, rng)


def tangent_frame(spec: LagrangianSpec, t) -> np.ndarray:
    """Pushed-forward parameter tangents (columns), by central differences."""
    t = np.asarray(t, dtype=float)
    basis = param_tangents(spec.factors, t)
    cols = [fd_directional(lambda s: spec.point(_retract(spec.factors, s)), t, basis[:, j], h=1e-6)
            for j in range(basis.shape[1])]
    return np.array(cols).T


@dataclass(frozen=True)
class LagrangianCheck:
    max_form: float
    min_singular: float
    samples: int

    @property
    def rank_ok(self) -> bool:
        return self.min_singular > 1e-6


def lagrangian_check(spec: LagrangianSpec, n_samples: int, rng: np.random.Generator,
                     form: Optional[TwoForm] = None) -> LagrangianCheck:
    """Largest |omega(v_i, v_j)| over orthonormalized tangent frames."""
    form = form or spec.form
    worst, min_sv = 0.0, np.inf
    for _ in range(n_samples):
        t = sample_params(spec.factors, rng)
        x = spec.point(t)
        fr = tangent_frame(spec, t)
        if spec.kind == "proj":
            # drop the Hopf-fiber component before measuring rank
            z = r2c(x)
            fr = np.array([c2r(r2c(c) - (np.vdot(z, r2c(c)) / 2) * z) for c in fr.T]).T
        s = np.linalg.svd(fr, compute_uv=False)
        min_sv = min(min_sv, float(s[-1] / max(1.0, s[0])))
        q, _ = np.linalg.qr(fr)
        for i in range(q.shape[1]):
            for j in range(i + 1, q.shape[1]):
                worst = max(worst, abs(form(x, q[:, i], q[:, j])))
    return LagrangianCheck(worst, min_sv, n_samples)


# ------------------------------------------------------------ circle actions


@dataclass(frozen=True)
class CircleAction:
    name: str
    act: Callable[[float, np.ndarray], np.ndarray]

    def __call__(self, t: float, x) -> np.ndarray:
        return self.act(t, np.asarray(x, dtype=float))


RHO_EP = CircleAction("rho_EP", atlas.rho_ep)
RHO_CS = CircleAction("rho_CS", atlas.rho_cs)
RHO = CircleAction("rho", atlas.rho_c2)
RHO_01 = CircleAction("rho_01", atlas.rho_01)


def _rotate_last_pair(t, x):
    """Real rotation of (z_1, z_2) on a CP^2 lift, z_0 fixed."""
    z = r2c(x)
    c, s = np.cos(t), np.sin(t)
    return c2r(np.array([z[0], c * z[1] + s * z[2], -s * z[1] + c * z[2]]))


RHO_CP2 = CircleAction("rho_CP2", _rotate_last_pair)


def orbit_spec(curve: LagrangianSpec, action: CircleAction, residuals=None,
               name: Optional[str] = None) -> LagrangianSpec:
    """(s, t) -> action(t, curve(s)); implicit residuals are optional."""
    if curve.factors != ("circle",):
        raise ValueError("orbit_spec expects a closed curve")
    return LagrangianSpec(name or f"{action.name}.{curve.id}", curve.ambient,
                          lambda t, _c=curve, _a=action: _a(t[1], _c.point(t[:1])),
                          ("circle", "circle"), residuals, curve.form, curve.kind)


# ------------------------------------------------------------------- curves


def c_alpha(t, alpha: float):
    """Closed curve {w in H(sqrt 2) : |w^2 + 2 - |w|^2|^2 = 4(1 - alpha^2)}, t in [0, 2 pi)."""
    mu = np.sqrt(1.0 - alpha * alpha)
    d = np.sqrt(1.0 - mu**2 * np.cos(t) ** 2)
    return np.sqrt(1.0 - mu * np.cos(t)) * (mu * np.sin(t) + 1j * alpha) / d


def c_alpha_residual(w, alpha: float) -> float:
    return abs(w * w + 2.0 - abs(w) ** 2) ** 2 - 4.0 * (1.0 - alpha * alpha)


def gamma_prime(s):
    return np.array([-SQ3 / 2 * np.sin(s), -SQ3 / 2 * np.cos(s), 0.5 * np.ones_like(s)])


def curve_c(s):
    g = gamma_prime(s)
    return np.concatenate([g, np.array([-g[0], -g[1], g[2]])])


def _plane_chart(name="C"):
    return Chart(name, 2, None)


def curve_spec_planar(alpha: float, scale: float = 1.0, name: Optional[str] = None) -> LagrangianSpec:
    """C_alpha (optionally scaled) as a 1-dimensional spec in the plane."""

    def param(t):
        w = scale * c_alpha(t[0], alpha)
        return np.array([w.real, w.imag])

    def res(x):
        w = complex(x[0], x[1]) / scale
        return np.array([c_alpha_residual(w, alpha), min(0.0, w.imag)])

    return LagrangianSpec(name or f"C_alpha?alpha={alpha}", _plane_chart(), param, ("circle",), res,
                          standard_two_form())


def gamma_prime_spec() -> LagrangianSpec:
    return LagrangianSpec("Gamma_prime", atlas.sphere_chart(2), lambda t: gamma_prime(t[0]), ("circle",),
                          lambda x: np.array([x[2] - 0.5]), sphere_area_form(0.5))


def curve_c_spec() -> LagrangianSpec:
    return LagrangianSpec("C", atlas.sphere_pair_chart(), lambda t: curve_c(t[0]), ("circle",),
                          lambda x: np.array([x[0] + x[3], x[1] + x[4], x[2] - 0.5, x[5] - 0.5]),
                          sphere_pair_form())


def delta_spec(curve: LagrangianSpec, name: Optional[str] = None) -> LagrangianSpec:
    """Diagonal copy {(z, z)} of a curve in a product."""
    d = curve.ambient.dim

    def res(x):
        return np.concatenate([x[:d] - x[d:], np.atleast_1d(curve.residuals(x[:d]))])

    amb = Chart(f"{curve.ambient.name}^2", 2 * d,
                None if curve.ambient.constraints is None else
                (lambda x: np.concatenate([np.atleast_1d(curve.ambient.constraints(x[:d])),
                                           np.atleast_1d(curve.ambient.constraints(x[d:]))])))
    return LagrangianSpec(name or f"Delta({curve.id})", amb,
                          lambda t: np.concatenate([curve.point(t), curve.point(t)]), ("circle",), res, curve.form)


def c_p_spec() -> LagrangianSpec:
    """[sqrt(2 - |w|^2) : w : 0] for w on C_{0,1}."""

    def param(t):
        w = c_alpha(t[0], 1.0 / 3.0)
        return c2r(np.array([np.sqrt(2.0 - abs(w) ** 2), w, 0.0]))

    def res(x):
        z = r2c(x)
        return np.array([abs(z[2]), abs(np.sum(z * z)) - 4 * np.sqrt(2.0) / 3])

    return LagrangianSpec("C_P", atlas.projective_chart(2), param, ("circle",), res, fubini_study(), "proj")


# -------------------------------------------------------- sphere-pair tori


def _s2s2_spec(name, param, res):
    return LagrangianSpec(name, atlas.sphere_pair_chart(), param, ("circle", "circle"), res, sphere_pair_form())


def t_ep() -> LagrangianSpec:
    return _s2s2_spec("T_EP", lambda t: atlas.rho_ep(t[1], curve_c(t[0])),
                      lambda x: np.array([x[0] + x[3], x[:3] @ x[3:] + 0.5]))


def _n_dir(t):
    return np.array([0.0, np.cos(t), np.sin(t)])


def _af_cotangent(s, t, radius):
    e0 = np.array([1.0, 0.0, 0.0])
    n = _n_dir(t)
    q = np.cos(s) * e0 + np.sin(s) * n
    p = radius * (-np.sin(s) * e0 + np.cos(s) * n)
    return np.concatenate([p, q])


def t_af() -> LagrangianSpec:
    def res(x):
        pq = atlas.phi2(x)
        p, q = pq[:3], pq[3:]
        return np.array([np.linalg.norm(p) - 0.5, np.cross(p, q)[0]])

    return _s2s2_spec("T_AF", lambda t: atlas.phi2_inverse(_af_cotangent(t[0], t[1], 0.5)), res)


def t_fooo_target() -> LagrangianSpec:
    def param(t):
        c = _n_dir(t[1])
        cperp = np.array([0.0, -np.sin(t[1]), np.cos(t[1])])
        d = SQ3 / 2 * (np.cos(t[0]) * np.array([1.0, 0.0, 0.0]) + np.sin(t[0]) * cperp)
        return np.concatenate([c / 2 + d, c / 2 - d])

    def res(x):
        s = x[:3] + x[3:]
        ns = np.linalg.norm(s)
        return np.array([0.5 * ns + 0.5 * s[0] - 0.5, 1.0 - 0.5 * ns - 0.5])

    return _s2s2_spec("T_FOOO_target", param, res)


def t_cs() -> LagrangianSpec:
    """(psi x psi) of the orbit of the diagonal copy of Gamma under (e^{it}, e^{-it})."""

    def res(x):
        v, w = x[:3], x[3:]
        zeta = complex(v[1], v[2]) * complex(w[1], w[2])
        return np.array([v[0] - w[0], zeta.real - (0.5 - v[0] ** 2), zeta.imag**2 - 0.75 + v[0] ** 2])

    def param(t):
        # Gamma = psi^{-1}(Gamma'); the orbit (e^{it} z, e^{-it} z) is carried over by psi x psi
        z = complex(*atlas.psi_disk_inverse(gamma_prime(t[0])))
        a, b = z * np.exp(1j * t[1]), z * np.exp(-1j * t[1])
        return np.concatenate([atlas.psi_disk([a.real, a.imag]), atlas.psi_disk([b.real, b.imag])])

    return _s2s2_spec("T_CS", param, res)


def t_bc() -> LagrangianSpec:
    def param(t):
        x = _n_dir(t[0])
        e0 = np.array([1.0, 0.0, 0.0])
        y = np.cos(t[1]) * e0 + np.sin(t[1]) * np.cross(x, e0)
        return atlas.theta_delta(np.concatenate([x, y]))

    def res(v):
        xy = atlas.theta_delta_inverse(v)
        return np.array([xy[0], np.linalg.norm(xy[3:]) - 1.0])

    return _s2s2_spec("T_BC", param, res)


def clifford_s2s2() -> LagrangianSpec:
    def param(t):
        return np.concatenate([rotation_e1(t[0]) @ [0.0, 1.0, 0.0], rotation_e1(t[1]) @ [0.0, 1.0, 0.0]])

    return _s2s2_spec("clifford_S2xS2", param, lambda x: np.array([x[0], x[3]]))


def sphere_factor_s2s2() -> LagrangianSpec:
    """S^2 x {pt}: symplectic, used as a negative control."""
    return LagrangianSpec("S2_factor", atlas.sphere_pair_chart(),
                          lambda t: np.concatenate([t[:3], [0.0, 0.0, 1.0]]), (("sphere", 2),),
                          lambda x: x[3:] - [0.0, 0.0, 1.0], sphere_pair_form())


# ------------------------------------------------------------------- CP^2


def _cp_spec(name, n, factors, param, res):
    return LagrangianSpec(name, atlas.projective_chart(n), param, tuple(factors), res, fubini_study(), "proj")


def l_p_01() -> LagrangianSpec:
    """Level set |sum z^2| = 4 sqrt 2 / 3, Im(conj z_1 z_2) = 0 in CP^2."""

    def param(t):
        w = c_alpha(t[0], 1.0 / 3.0)
        return c2r(np.array([np.sqrt(2.0 - abs(w) ** 2), w * np.cos(t[1]), w * np.sin(t[1])]))

    def res(x):
        z = r2c(x)
        return np.array([abs(np.sum(z * z)) - 4 * np.sqrt(2.0) / 3, (np.conj(z[1]) * z[2]).imag])

    return _cp_spec("L_P_0_1", 2, ("circle", "circle"), param, res)


def t_w_target() -> LagrangianSpec:
    def param(t):
        return atlas.psi_p(_af_cotangent(t[0], t[1], 1.0 / 3.0))

    def res(x):
        z = r2c(x)
        half = 0.5 * np.sqrt(max(0.0, 4.0 - abs(np.sum(z * z)) ** 2))
        g = (np.conj(z[1]) * z[2]).imag
        return np.array([half + g - 1.0 / 3.0, 0.5 - 0.5 * half - 1.0 / 3.0])

    return _cp_spec("T_W_target", 2, ("circle", "circle"), param, res)


def c_tilde(t):
    return c_alpha(t, 1.0 / 3.0) / np.sqrt(2.0)


def t_cs_p() -> LagrangianSpec:
    """psi_P of the orbit {(e^{it} c, e^{-it} c) : c on C_{0,1} / sqrt 2}."""

    def param(t):
        c = c_tilde(t[0])
        return atlas.psi_ball(c2r(np.array([np.exp(1j * t[1]) * c, np.exp(-1j * t[1]) * c])))

    def res(x):
        z = r2c(atlas.psi_ball_inverse(x))
        pr = z[0] * z[1]
        return np.array([abs(z[0]) - abs(z[1]), abs(2 * pr + 2 - 2 * abs(pr)) ** 2 - 32.0 / 9.0])

    return _cp_spec("T_CS_P", 2, ("circle", "circle"), param, res)


def clifford_cp2() -> LagrangianSpec:
    def param(t):
        return c2r(np.sqrt(2.0 / 3.0) * np.array([np.exp(1j * t[0]), np.exp(1j * t[1]), 1.0]))

    def res(x):
        z = r2c(x)
        return np.abs(z) ** 2 - 2.0 / 3.0

    return _cp_spec("clifford_CP2", 2, ("circle", "circle"), param, res)


def cs_p_map(x) -> np.ndarray:
    """psi_P o Q o psi_P^{-1} on CP^2(sqrt 2)."""
    return atlas.psi_ball(atlas.conj_q(atlas.psi_ball_inverse(x)))


def cs_p_map_inverse(x) -> np.ndarray:
    return atlas.psi_ball(atlas.conj_q_inverse(atlas.psi_ball_inverse(x)))


# ------------------------------------------------------- (k, m) families


def _blocks(a: np.ndarray, k: int) -> np.ndarray:
    """Entries of the upper-left (k+1) and lower-right blocks."""
    return np.concatenate([a[: k + 1, : k + 1].ravel(), a[k + 1 :, k + 1 :].ravel()])


def orbit_radius_q(k: int, m: int) -> Fraction:
    return 1 - Fraction(1, k + m + 1)


def orbit_radius_p(k: int, m: int) -> Fraction:
    return 1 - Fraction(2, k + m + 2)


def p_orbit(k: int, m: int, r: float) -> LagrangianSpec:
    """Radius-r orbit in T*S^{k+m+1}: image of iota."""
    n = k + m + 1

    def param(t):
        th, x, y = split_params(("circle", ("sphere", k), ("sphere", m)), t)
        return atlas.iota(th, np.atleast_1d(x), np.atleast_1d(y), r)

    def res(x):
        p = x[: n + 1]
        return np.concatenate([[np.linalg.norm(p) - r], _blocks(atlas.mu_sphere(x), k)])

    return LagrangianSpec(f"P_k_m_r?k={k}&m={m}&r={r}", atlas.cotangent_chart(n), param,
                          ("circle", ("sphere", k), ("sphere", m)), res, canonical_two_form())


def quadric_orbit_residuals(k: int, r: float):
    def res(x):
        return np.concatenate([[atlas.moment_norm("mu_Q", x) - r], _blocks(atlas.mu_quadric(x), k)])

    return res


def psi_p_orbit(k: int, m: int, r: float) -> LagrangianSpec:
    """Psi-image of the radius-r orbit, inside Q_{k+m+2}."""
    base = p_orbit(k, m, r)
    return LagrangianSpec(f"Psi_P_k_m_r?k={k}&m={m}&r={r}", atlas.quadric_chart(k + m + 2),
                          lambda t: atlas.psi_q(base.point(t)), base.factors, quadric_orbit_residuals(k, r),
                          fubini_study(), "proj")


def l_q(k: int, m: int) -> LagrangianSpec:
    """[z0 : f(z0) x : c(z0) y] with |z0|^2 = (2 - 1/n)/n, n = k + m + 1."""
    n = k + m + 1
    a = np.sqrt((2.0 - 1.0 / n) / n)
    r = float(orbit_radius_q(k, m))

    def param(t):
        th, x, y = split_params(("circle", ("sphere", k), ("sphere", m)), t)
        z0 = a * np.exp(1j * th)
        return c2r(np.concatenate([[z0], atlas.plane_f(z0) * np.atleast_1d(x),
                                   atlas.plane_c(z0) * np.atleast_1d(y)]))

    return LagrangianSpec(f"L_Q_k_m?k={k}&m={m}", atlas.quadric_chart(k + m + 2), param,
                          ("circle", ("sphere", k), ("sphere", m)), quadric_orbit_residuals(k, r), fubini_study(),
                          "proj")


def projective_orbit_residuals(k: int, r: float):
    def res(x):
        return np.concatenate([[atlas.moment_norm("Phi_C", x) - r], _blocks(atlas.mu_projective(x), k)])

    return res


def l_p(k: int, m: int, r: Optional[float] = None) -> LagrangianSpec:
    """[v x : sqrt(2 - |v|^2) y] with v on C_r; r defaults to the monotone radius."""
    r = float(orbit_radius_p(k, m)) if r is None else r

    def param(t):
        th, x, y = split_params(("circle", ("sphere", k), ("sphere", m)), t)
        v = c_alpha(th, r)
        return c2r(np.concatenate([v * np.atleast_1d(x), np.sqrt(2.0 - abs(v) ** 2) * np.atleast_1d(y)]))

    return LagrangianSpec(f"L_P_k_m?k={k}&m={m}", atlas.projective_chart(k + m + 1), param,
                          ("circle", ("sphere", k), ("sphere", m)), projective_orbit_residuals(k, r),
                          fubini_study(), "proj")


def sphere_pair_in_quadric(k: int, m: int) -> LagrangianSpec:
    """{[ix : y]} inside Q_{k+m+1}(sqrt 2); lifts are points of P_Q."""

    def param(t):
        _, x, y = split_params(("circle", ("sphere", k), ("sphere", m)), np.concatenate([[0.0], t]))
        return c2r(np.concatenate([1j * np.atleast_1d(x), np.atleast_1d(y).astype(complex)]))

    def res(x):
        z = r2c(x)
        w1, w2 = z[: k + 1], z[k + 1 :]
        return np.concatenate([np.outer(np.conj(w1), w1).imag.ravel(), np.outer(np.conj(w2), w2).imag.ravel(),
                               [np.vdot(w1, w1).real - 1.0]])

    return LagrangianSpec(f"S_k_m?k={k}&m={m}", atlas.quadric_chart(k + m + 1), param,
                          (("sphere", k), ("sphere", m)), res, fubini_study(), "proj")


# ----------------------------------------------------- circle-bundle lifts


@dataclass(frozen=True)
class Bundle:
    name: str
    fn: Callable
    inverse: Callable
    max_radius: float
    ambient: Callable[[int], Chart]  # from the base dimension parameter


BUNDLES = {
    "ThetaQ": Bundle("ThetaQ", atlas.theta_q, atlas.theta_q_inverse, np.sqrt(2.0),
                     lambda n1: atlas.quadric_chart(n1)),
    "Thetap": Bundle("Thetap", atlas.theta_p, atlas.theta_p_inverse, 1.0,
                     lambda n1: atlas.projective_chart(n1 - 1)),
}


def circle_bundle_lift(base: LagrangianSpec, radius: float, bundle: str) -> LagrangianSpec:
    """Radius-`radius` circle bundle over `base`, pushed into the ambient by the bundle map.

    For the quadric/projective bundles `base` must live in a quadric (lifts
    of quadric points are points of P_Q).  For the sphere-pair bundle `base`
    is a curve in S^2 and the fibre circle is the unit-speed circle in x^perp.
    """
    if bundle == "ThetaDelta":
        return _delta_lift(base, radius)
    b = BUNDLES[bundle]
    if not 0 < radius < b.max_radius:
        raise ValueError(f"radius {radius} outside (0, {b.max_radius})")
    n1 = base.ambient.dim // 2

    def param(t):
        z = r2c(base.point(t[:-1]))
        ph = t[-1]
        return b.fn(np.concatenate([z.real, z.imag, [radius * np.cos(ph), radius * np.sin(ph)]]))

    def res(x):
        y = b.inverse(x)
        w = y[: 2 * n1]
        return np.concatenate([[residual(base, w)], [np.hypot(y[-2], y[-1]) - radius]])

    return LagrangianSpec(f"lift({base.id},{radius},{bundle})", b.ambient(n1), param,
                          tuple(base.factors) + ("circle",), res, fubini_study(), "proj")


def _delta_lift(base: LagrangianSpec, radius: float) -> LagrangianSpec:
    if not 0 < radius < np.sqrt(2.0):
        raise ValueError("radius outside (0, sqrt 2)")
    if base.factors != ("circle",):
        raise ValueError("sphere-pair lift expects a closed curve in S^2")

    def param(t):
        x = base.point(t[:1])
        e = fd_directional(base.point, t[:1], np.array([1.0]), h=1e-6)
        e = e - (e @ x) * x
        e /= np.linalg.norm(e)
        y = radius * (np.cos(t[1]) * e + np.sin(t[1]) * np.cross(x, e))
        return atlas.theta_delta(np.concatenate([x, y]))

    def res(v):
        xy = atlas.theta_delta_inverse(v)
        return np.array([residual(base, xy[:3]), np.linalg.norm(xy[3:]) - radius])

    return _s2s2_spec(f"lift({base.id},{radius},ThetaDelta)", param, res)


def equator_x1() -> LagrangianSpec:
    """The circle {x_1 = 0} in S^2 (the diagonal of S^2 x S^2)."""
    return LagrangianSpec("equator_x1", atlas.sphere_chart(2), lambda t: _n_dir(t[0]), ("circle",),
                          lambda x: np.array([x[0]]), sphere_area_form(1.0))


def psi_iota_bundle_point(theta: float, x, y, r: float) -> tuple[np.ndarray, np.ndarray]:
    """Both sides of Psi(iota(e^{i theta}, x, y)) = Theta_Q([(ix, y), sqrt(2 - 2r) e^{-i theta}])."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    lhs = atlas.psi_q(atlas.iota(theta, x, y, r))
    w = np.concatenate([1j * x, y.astype(complex)])
    zeta = np.sqrt(2.0 - 2.0 * r) * np.exp(-1j * theta)
    rhs = atlas.theta_q(np.concatenate([w.real, w.imag, [zeta.real, zeta.imag]]))
    return lhs, rhs


# ------------------------------------------------------------------ registry


_FIXED = {
    "T_EP": t_ep, "T_AF": t_af, "T_CS": t_cs, "T_BC": t_bc, "T_FOOO_target": t_fooo_target,
    "T_W_target": t_w_target, "L_P_0_1": l_p_01, "T_CS_P": t_cs_p, "clifford_S2xS2": clifford_s2s2,
    "clifford_CP2": clifford_cp2, "C": curve_c_spec, "Gamma_prime": gamma_prime_spec, "C_P": c_p_spec,
    "equator_x1": equator_x1, "S2_factor": sphere_factor_s2s2,
}


def _ints(q, *names):
    return [int(q[n]) for n in names]


_FAMILIES = {
    "L_Q_k_m": lambda q: l_q(*_ints(q, "k", "m")),
    "L_P_k_m": lambda q: l_p(*_ints(q, "k", "m"), float(q["r"]) if "r" in q else None),
    "P_k_m_r": lambda q: p_orbit(*_ints(q, "k", "m"), float(q["r"])),
    "Psi_P_k_m_r": lambda q: psi_p_orbit(*_ints(q, "k", "m"), float(q["r"])),
    "S_k_m": lambda q: sphere_pair_in_quadric(*_ints(q, "k", "m")),
    "C_alpha": lambda q: curve_spec_planar(float(q["alpha"])),
}


def get_spec(spec_id: str) -> LagrangianSpec:
    """Look up a spec by id; families take query parameters, e.g. ``L_Q_k_m?k=0&m=2``."""
    name, _, query = spec_id.partition("?")
    if name in _FIXED and not query:
        return _FIXED[name]()
    if name in _FAMILIES:
        return _FAMILIES[name](dict(parse_qsl(query)))
    raise KeyError(f"unknown Lagrangian id {spec_id!r}")


def spec_ids() -> list[str]:
    return sorted(_FIXED) + sorted(f"{k}?..." for k in _FAMILIES)


__all__ = [
    "LagrangianSpec", "SetEqualReport", "CircleAction", "residual", "set_equal", "mapped_equal", "mapped_spec",
    "lagrangian_check", "circle_bundle_lift", "orbit_spec", "get_spec", "replace",
]
