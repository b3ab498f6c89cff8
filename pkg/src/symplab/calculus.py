"""Charts, Jacobians, differential forms, pullbacks, brackets and quadrature.

Every chart lives in a real ambient space.  Complex coordinates are flattened
as ``[Re z, Im z]`` so that the standard form reads ``sum dx_j ^ dy_j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

TOL_FD = 1e-6
TOL_BASE = 1e-8


# ---------------------------------------------------------------------- charts


@dataclass(frozen=True)
class Chart:
    """A submanifold of R^dim cut out by ``constraints(x) == 0``."""

    name: str
    dim: int
    constraints: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def residual(self, x) -> float:
        if self.constraints is None:
            return 0.0
        r = np.atleast_1d(self.constraints(np.asarray(x, dtype=float)))
        return float(np.max(np.abs(r))) if r.size else 0.0

    def constraint_jacobian(self, x) -> np.ndarray:
        if self.constraints is None:
            return np.zeros((0, self.dim))
        return fd_jacobian(self.constraints, x)

    def tangent_basis(self, x) -> np.ndarray:
        """Orthonormal basis (columns) of the tangent space at x."""
        cj = self.constraint_jacobian(x)
        if cj.shape[0] == 0:
            return np.eye(self.dim)
        _, s, vt = np.linalg.svd(cj)
        rank = int(np.sum(s > 1e-7 * max(1.0, s[0])))
        return vt[rank:].T

    def project_tangent(self, x, v) -> np.ndarray:
        b = self.tangent_basis(x)
        return b @ (b.T @ np.asarray(v, dtype=float))


def euclidean_chart(dim: int, name: str = "R") -> Chart:
    return Chart(f"{name}{dim}", dim, None)


@dataclass(frozen=True)
class TangentVec:
    base: np.ndarray
    dir: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "base", np.asarray(self.base, dtype=float))
        object.__setattr__(self, "dir", np.asarray(self.dir, dtype=float))

    def check(self, chart: Chart, tol: float = 1e-7) -> bool:
        """Linearized constraints vanish on dir."""
        cj = chart.constraint_jacobian(self.base)
        return bool(cj.size == 0 or np.max(np.abs(cj @ self.dir)) <= tol * max(1.0, np.linalg.norm(self.dir)))


# ---------------------------------------------------------------- derivatives


def fd_step(x) -> float:
    return 1e-5 * max(1.0, float(np.linalg.norm(x)))


def fd_jacobian(fn: Callable, x, h: float | None = None) -> np.ndarray:
    """Central-difference Jacobian of fn at x."""
    x = np.asarray(x, dtype=float)
    h = fd_step(x) if h is None else h
    cols = []
    for i in range(x.shape[0]):
        e = np.zeros_like(x)
        e[i] = h
        cols.append((np.asarray(fn(x + e), dtype=float) - np.asarray(fn(x - e), dtype=float)) / (2 * h))
    return np.stack(cols, axis=-1)


def fd_directional(fn: Callable, x, v, h: float | None = None) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    nv = np.linalg.norm(v)
    if nv == 0:
        return np.zeros_like(np.asarray(fn(x), dtype=float))
    h = fd_step(x) if h is None else h
    d = v * (h / nv)
    return (np.asarray(fn(x + d), dtype=float) - np.asarray(fn(x - d), dtype=float)) * (nv / (2 * h))


@dataclass(frozen=True)
class SmoothMap:
    name: str
    domain: Chart
    codomain: Chart
    fn: Callable[[np.ndarray], np.ndarray]
    jac: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __call__(self, x) -> np.ndarray:
        return np.asarray(self.fn(np.asarray(x, dtype=float)), dtype=float)


def _check_base(m: SmoothMap, base, tol: float):
    r = m.domain.residual(base)
    if r > tol:
        raise ValueError(f"base is off the domain of {m.name} (residual {r:.3g})")


def jacobian(m: SmoothMap, base, tol: float = TOL_BASE) -> np.ndarray:
    _check_base(m, base, tol)
    if m.jac is not None:
        return np.asarray(m.jac(np.asarray(base, dtype=float)), dtype=float)
    return fd_jacobian(m.fn, base)


def push_forward(m: SmoothMap, base, v, tol: float = TOL_BASE) -> np.ndarray:
    """Dm(base) v (directional difference when no analytic Jacobian)."""
    _check_base(m, base, tol)
    if m.jac is not None:
        return jacobian(m, base, tol) @ np.asarray(v, dtype=float)
    return fd_directional(m.fn, base, v)


def compose(outer: SmoothMap, inner: SmoothMap, name: str | None = None) -> SmoothMap:
    return SmoothMap(name or f"{outer.name}.{inner.name}", inner.domain, outer.codomain, lambda x: outer.fn(inner.fn(x)))


# ---------------------------------------------------------------------- forms


@dataclass(frozen=True)
class OneForm:
    name: str
    fn: Callable[[np.ndarray, np.ndarray], float]

    def __call__(self, base, v) -> float:
        return float(self.fn(np.asarray(base, dtype=float), np.asarray(v, dtype=float)))

    def coefficients(self, base) -> np.ndarray:
        base = np.asarray(base, dtype=float)
        eye = np.eye(base.shape[0])
        return np.array([self.fn(base, eye[i]) for i in range(base.shape[0])])


@dataclass(frozen=True)
class TwoForm:
    name: str
    fn: Callable[[np.ndarray, np.ndarray, np.ndarray], float]

    def __call__(self, base, v, w) -> float:
        return float(self.fn(np.asarray(base, dtype=float), np.asarray(v, dtype=float), np.asarray(w, dtype=float)))

    def __add__(self, other: "TwoForm") -> "TwoForm":
        return TwoForm(f"{self.name}+{other.name}", lambda x, v, w: self.fn(x, v, w) + other.fn(x, v, w))

    def scaled(self, c: float) -> "TwoForm":
        return TwoForm(f"{c}*{self.name}", lambda x, v, w: c * self.fn(x, v, w))


def exterior_derivative(alpha: OneForm) -> TwoForm:
    """d(alpha) from a central-difference Jacobian of its coefficient vector."""

    def d(x, v, w):
        jm = fd_jacobian(alpha.coefficients, x)  # jm[i, j] = d_j a_i
        return w @ jm @ v - v @ jm @ w

    return TwoForm(f"d({alpha.name})", d)


# built-in forms -----------------------------------------------------------


def _split(x):
    h = x.shape[0] // 2
    return x[:h], x[h:]


def canonical_one_form() -> OneForm:
    """p . dq on T*R^N with ambient coordinates [p, q]."""
    return OneForm("lambda", lambda x, v: _split(x)[0] @ _split(v)[1])


def canonical_two_form() -> TwoForm:
    """dp ^ dq."""

    def f(x, v, w):
        a1, b1 = _split(v)
        a2, b2 = _split(w)
        return a1 @ b2 - a2 @ b1

    return TwoForm("dlambda", f)


def real_part_one_form() -> OneForm:
    """sum x_j dy_j on C^N."""
    return OneForm("xdy", lambda x, v: _split(x)[0] @ _split(v)[1])


def standard_two_form() -> TwoForm:
    """sum dx_j ^ dy_j on C^N, i.e. Im(conj(v) . w)."""

    def f(x, v, w):
        vx, vy = _split(v)
        wx, wy = _split(w)
        return vx @ wy - vy @ wx

    return TwoForm("std", f)


def fubini_study() -> TwoForm:
    """Reduced form on CP^n(sqrt 2), evaluated at a lift with |z|^2 = 2."""

    def f(x, v, w):
        z = x[: x.shape[0] // 2] + 1j * x[x.shape[0] // 2 :]
        zv = v[: v.shape[0] // 2] + 1j * v[v.shape[0] // 2 :]
        zw = w[: w.shape[0] // 2] + 1j * w[w.shape[0] // 2 :]
        hv = zv - (np.vdot(z, zv) / 2) * z
        hw = zw - (np.vdot(z, zw) / 2) * z
        return np.vdot(hv, hw).imag

    return TwoForm("fs", f)


def sphere_area_form(scale: float = 1.0) -> TwoForm:
    """scale * x . (a x b) on S^2."""
    return TwoForm(f"{scale}*omega_s2", lambda x, a, b: scale * (x @ np.cross(a, b)))


def sphere_pair_form() -> TwoForm:
    """Half area form on each factor of S^2 x S^2, coordinates (v, w) in R^6."""

    def f(x, a, b):
        return 0.5 * (x[:3] @ np.cross(a[:3], b[:3])) + 0.5 * (x[3:] @ np.cross(a[3:], b[3:]))

    return TwoForm("Omega", f)


def bent_plane_form() -> TwoForm:
    """du ^ dv / (1 - v^2) on the unit disk."""
    return TwoForm("omegaD", lambda x, a, b: (a[0] * b[1] - a[1] * b[0]) / (1.0 - x[1] ** 2))


# ----------------------------------------------------------------- pullbacks


def pullback_two_form(m: SmoothMap, form: TwoForm, base, v, w) -> float:
    fx = m(base)
    return form(fx, push_forward(m, base, v), push_forward(m, base, w))


def pullback_one_form(m: SmoothMap, form: OneForm, base, v) -> float:
    return form(m(base), push_forward(m, base, v))


# --------------------------------------------------------------- vector fields


@dataclass(frozen=True)
class VectorField:
    name: str
    fn: Callable[[np.ndarray], np.ndarray]

    def __call__(self, x) -> np.ndarray:
        return np.asarray(self.fn(np.asarray(x, dtype=float)), dtype=float)


def lie_bracket(x_field: VectorField, y_field: VectorField, base, chart: Chart | None = None) -> np.ndarray:
    """[X, Y] = DY.X - DX.Y, projected to the chart's tangent space."""
    base = np.asarray(base, dtype=float)
    xv, yv = x_field(base), y_field(base)
    if np.linalg.norm(xv) < 1e-12 and np.linalg.norm(yv) < 1e-12:
        raise ValueError("both fields vanish at the base point")
    out = fd_directional(y_field, base, xv) - fd_directional(x_field, base, yv)
    return chart.project_tangent(base, out) if chart is not None else out


# ----------------------------------------------------------------- quadrature


@lru_cache(maxsize=None)
def _gauss(n: int):
    return np.polynomial.legendre.leggauss(n)


def _gl_nodes(a: float, b: float, n: int):
    x, w = _gauss(n)
    return 0.5 * (b - a) * x + 0.5 * (b + a), 0.5 * (b - a) * w


def _pulled_density(param: Callable, form: TwoForm, s: float, t: float, hs: float, ht: float) -> float:
    x = np.asarray(param(s, t), dtype=float)
    ds = (np.asarray(param(s + hs, t)) - np.asarray(param(s - hs, t))) / (2 * hs)
    dt = (np.asarray(param(s, t + ht)) - np.asarray(param(s, t - ht))) / (2 * ht)
    return form(x, ds, dt)


def _tensor_rule(param, form, s_range, t_range, n):
    s_nodes, s_w = _gl_nodes(*s_range, n)
    t_nodes, t_w = _gl_nodes(*t_range, n)
    hs = 1e-6 * max(1.0, abs(s_range[1] - s_range[0]))
    ht = 1e-6 * max(1.0, abs(t_range[1] - t_range[0]))
    total = 0.0
    for s, ws in zip(s_nodes, s_w):
        for t, wt in zip(t_nodes, t_w):
            total += ws * wt * _pulled_density(param, form, s, t, hs, ht)
    return total


def disk_integral(param: Callable, form: TwoForm, grid: int = 64, radius: float = 1.0,
                  rect: tuple | None = None) -> tuple[float, float]:
    """Integrate form pulled back by param(s, t).

    Default region is the polar rectangle s in [0, radius], t in [0, 2 pi]
    (param receives polar coordinates).  Returns (value, error estimate), the
    estimate being the change from a half-resolution grid.
    """
    if rect is None:
        s_range, t_range = (0.0, radius), (0.0, 2 * np.pi)
    else:
        s_range, t_range = rect
    fine = _tensor_rule(param, form, s_range, t_range, grid)
    coarse = _tensor_rule(param, form, s_range, t_range, max(2, grid // 2))
    err = abs(fine - coarse)
    if not np.isfinite(fine):
        raise ValueError("integrand is singular on the region")
    return float(fine), float(err)


# ------------------------------------------------------------- planar curves


def _standard_primitive(u, v):
    return -0.5 * v, 0.5 * u


def _bent_primitive(u, v):
    # d(u / (1 - v^2) dv) = du ^ dv / (1 - v^2)
    return np.zeros_like(u), u / (1.0 - v**2)


PRIMITIVES = {"standard": _standard_primitive, "omegaD": _bent_primitive}


def _segments_cross(pts: np.ndarray) -> bool:
    a = pts
    b = np.roll(pts, -1, axis=0)
    n = a.shape[0]

    def orient(p, q, r):
        return (q[..., 0] - p[..., 0]) * (r[..., 1] - p[..., 1]) - (q[..., 1] - p[..., 1]) * (r[..., 0] - p[..., 0])

    i, j = np.triu_indices(n, k=2)
    keep = ~((i == 0) & (j == n - 1))
    i, j = i[keep], j[keep]
    d1 = orient(a[i], b[i], a[j])
    d2 = orient(a[i], b[i], b[j])
    d3 = orient(a[j], b[j], a[i])
    d4 = orient(a[j], b[j], b[i])
    return bool(np.any((d1 * d2 < 0) & (d3 * d4 < 0)))


def is_simple(curve: Callable, n_check: int = 512) -> bool:
    t = np.linspace(0.0, 2 * np.pi, n_check, endpoint=False)
    u, v = curve(t)
    return not _segments_cross(np.column_stack([u, v]))


def planar_area(curve: Callable, form: str | Callable = "standard", n: int = 4096,
                check_simple: bool = True) -> float:
    """Area enclosed by a closed curve t -> (u(t), v(t)), t in [0, 2 pi].

    Uses Green's theorem with a primitive ``(P, Q)`` of the chosen form; the
    periodic trapezoid rule converges spectrally for smooth curves.
    """
    prim = PRIMITIVES[form] if isinstance(form, str) else form
    if check_simple and not is_simple(curve):
        raise ValueError("curve is not simple")
    t = np.linspace(0.0, 2 * np.pi, n, endpoint=False)
    h = 1e-6
    u, v = curve(t)
    up, vp = curve(t + h)
    um, vm = curve(t - h)
    du, dv = (np.asarray(up) - um) / (2 * h), (np.asarray(vp) - vm) / (2 * h)
    pp, qq = prim(np.asarray(u), np.asarray(v))
    return float(abs(np.sum(pp * du + qq * dv) * (2 * np.pi / n)))
