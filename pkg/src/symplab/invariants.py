"""Disk areas, Maslov indices, monotonicity data, displaceability certificates."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import least_squares

from . import atlas
from .calculus import (
    TwoForm,
    canonical_two_form,
    disk_integral,
    fubini_study,
    is_simple,
    sphere_area_form,
)
from .geomcore import c2r, r2c
from . import lagrangians as lag


class MaslovError(RuntimeError):
    """Continuation or unwrapping could not be made reliable."""


# ------------------------------------------------------------------- ambients


@dataclass(frozen=True)
class SymplecticAmbient:
    """Submanifold of R^D cut out by constraints, with omega(a, b) = a^T J b restricted."""

    name: str
    dim: int
    normals: Optional[Callable[[np.ndarray], np.ndarray]] = None  # (T, D) -> (T, c, D)

    @property
    def J(self) -> np.ndarray:
        h = self.dim // 2
        j = np.zeros((self.dim, self.dim))
        j[:h, h:] = np.eye(h)
        j[h:, :h] = -np.eye(h)
        return j

    def omega(self, a, b) -> np.ndarray:
        """Batched omega over the last axis."""
        h = self.dim // 2
        return np.sum(a[..., :h] * b[..., h:] - a[..., h:] * b[..., :h], axis=-1)

    def project(self, x: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Orthogonal projection of v (T, k, D) to the tangent spaces at x (T, D)."""
        if self.normals is None:
            return v
        n = self.normals(x)
        g = np.einsum("tcd,ted->tce", n, n)
        coef = np.linalg.solve(g, np.einsum("tcd,tkd->tck", n, v))
        return v - np.einsum("tck,tcd->tkd", coef, n)


def _cotangent_normals(x):
    h = x.shape[-1] // 2
    p, q = x[..., :h], x[..., h:]
    return np.stack([np.concatenate([np.zeros_like(q), q], -1), np.concatenate([q, p], -1)], axis=-2)


def cotangent_ambient(n: int) -> SymplecticAmbient:
    """T*S^n inside R^{2n+2} with d(p dq)."""
    return SymplecticAmbient(f"TS{n}", 2 * n + 2, _cotangent_normals)


def flat_ambient(n_complex: int) -> SymplecticAmbient:
    """C^N in [Re, Im] layout with the standard form."""
    return SymplecticAmbient(f"C{n_complex}", 2 * n_complex, None)


# --------------------------------------------------------------------- disks


@dataclass(frozen=True)
class DiskSpec:
    """Map (s, theta) of the closed unit disk, polar coordinates, into an ambient chart.

    ``boundary`` is the Lagrangian containing the image of the unit circle and
    ``boundary_params(theta)`` gives its parameter vector at u(1, theta).
    """

    id: str
    fn: Callable[[float, float], np.ndarray]
    form: TwoForm
    boundary: Optional[lag.LagrangianSpec] = None
    boundary_params: Optional[Callable[[float], np.ndarray]] = None
    symplectic: Optional[SymplecticAmbient] = None
    boundary_frame: Optional[Callable[[float], np.ndarray]] = None  # overrides the Lagrangian's frame

    def __call__(self, s, theta) -> np.ndarray:
        return np.asarray(self.fn(s, theta), dtype=float)


def boundary_residual(d: DiskSpec, n: int = 64) -> float:
    if d.boundary is None:
        return 0.0
    th = np.linspace(0, 2 * np.pi, n, endpoint=False)
    return max(lag.residual(d.boundary, d(1.0, t)) for t in th)


def disk_area(d: DiskSpec, grid: int = 64) -> float:
    val, _ = disk_integral(d.fn, d.form, grid=grid)
    return val


def _u_vec(n_amb: int, entries: dict) -> np.ndarray:
    v = np.zeros(n_amb)
    for i, x in entries.items():
        v[i] = x
    return v


def u_disk(which: int, k: int, m: int, r: float = 0.5) -> DiskSpec:
    """The generator disks u1, u2, u3 in T*S^{k+m+1} with boundary on the radius-r orbit."""
    n = k + m + 1
    dim = n + 1
    L = lag.p_orbit(k, m, r)
    e0x = _u_vec(k + 1, {0: 1.0})
    e0y = _u_vec(m + 1, {0: 1.0})
    if which == 1:
        def fn(s, th):
            p = np.zeros(dim); q = np.zeros(dim)
            p[0], p[k + 1] = -r * s * np.sin(th), r * s * np.cos(th)
            q[0], q[k + 1] = s * np.cos(th), s * np.sin(th)
            q[-1] += np.sqrt(max(0.0, 1.0 - s * s))
            return np.concatenate([p, q])

        def params(th):
            return np.concatenate([[th], e0x, e0y])
    elif which == 2:
        if k < 1:
            raise ValueError("u2 needs k >= 1: S^0 carries no loop")

        def fn(s, th):
            p = np.zeros(dim); q = np.zeros(dim)
            p[0], p[1] = r * s * np.cos(th), r * s * np.sin(th)
            q[-1] = 1.0
            return np.concatenate([p, q])

        def params(th):
            x = np.zeros(k + 1); x[0], x[1] = -np.cos(th), -np.sin(th)
            return np.concatenate([[np.pi / 2], x, _u_vec(m + 1, {m: 1.0})])
    elif which == 3:
        if m < 1:
            raise ValueError("u3 needs m >= 1")

        def fn(s, th):
            p = np.zeros(dim); q = np.zeros(dim)
            p[k + 1], p[k + 2] = r * s * np.cos(th), r * s * np.sin(th)
            q[0] = 1.0
            return np.concatenate([p, q])

        def params(th):
            y = np.zeros(m + 1); y[0], y[1] = np.cos(th), np.sin(th)
            return np.concatenate([[0.0], e0x, y])
    else:
        raise ValueError("which must be 1, 2 or 3")
    return DiskSpec(f"u{which}?k={k}&m={m}&r={r}", fn, canonical_two_form(), L, params, cotangent_ambient(n))


def standard_torus_disk(radii: Sequence[float]) -> DiskSpec:
    """z -> (r_1 z, r_2, ..., r_N) with boundary on the product torus."""
    radii = np.asarray(radii, float)
    N = radii.shape[0]

    def fn(s, th):
        z = radii.astype(complex)
        z[0] = radii[0] * s * np.exp(1j * th)
        return c2r(z)

    def frame(th):
        z = r2c(fn(1.0, th))
        return np.array([c2r(np.where(np.arange(N) == j, 1j * z, 0)) for j in range(N)]).T

    return DiskSpec(f"torus_disk{tuple(radii)}", fn, _flat_form(),
                    None, None, flat_ambient(N), frame)


def _flat_form() -> TwoForm:
    def f(x, a, b):
        h = x.shape[0] // 2
        return float(a[:h] @ b[h:] - a[h:] @ b[:h])

    return TwoForm("std", f)


def d_prime_disk() -> DiskSpec:
    """Disk in S^2 bounded by the circle at height 1/2; half the area form."""

    def fn(s, ph):
        return np.array([np.sqrt(3) / 2 * s * np.sin(ph), -np.sqrt(3) / 2 * s * np.cos(ph),
                         np.sqrt(1 - 0.75 * s * s)])

    return DiskSpec("D_prime", fn, sphere_area_form(0.5), None)


def fiber_disk_q(k: int, m: int, rho: float) -> DiskSpec:
    """Radius-rho disk fibre of the quadric bundle over [(i e0, e0)], pushed into Q_{k+m+2}."""
    w = np.concatenate([1j * _u_vec(k + 1, {0: 1.0}), _u_vec(m + 1, {0: 1.0})])

    def fn(s, th):
        z = rho * s * np.exp(1j * th)
        return atlas.theta_q(np.concatenate([w.real, w.imag, [z.real, z.imag]]))

    return DiskSpec(f"fiberQ?k={k}&m={m}&rho={rho}", fn, fubini_study(), None)


def fiber_disk_p(k: int, m: int, rho: float) -> DiskSpec:
    w = np.concatenate([1j * _u_vec(k + 1, {0: 1.0}), _u_vec(m + 1, {0: 1.0})])

    def fn(s, th):
        z = rho * s * np.exp(1j * th)
        return atlas.theta_p(np.concatenate([w.real, w.imag, [z.real, z.imag]]))

    return DiskSpec(f"fiberP?k={k}&m={m}&rho={rho}", fn, fubini_study(), None)


S_MINUS = math.sqrt(1 - math.sqrt(3) / 2)


def v1_disk() -> DiskSpec:
    """Zero-area disk in CP^3 with boundary on the (1,1) torus."""
    sm = S_MINUS

    def fn(s, th):
        return c2r(np.array([1j * sm * s * np.cos(th), 1j * sm * s * np.sin(th),
                             np.sqrt(2 - (s * sm) ** 2), 0.0]))

    return DiskSpec("v1", fn, fubini_study(), lag.l_p(1, 1))


def v2_disk() -> DiskSpec:
    sm = S_MINUS

    def fn(s, th):
        return c2r(np.array([1j * np.sqrt(2 - (s * sm) ** 2), 0.0, sm * s * np.cos(th), sm * s * np.sin(th)]))

    return DiskSpec("v2", fn, fubini_study(), lag.l_p(1, 1))


def holonomy_disk(k: int, m: int) -> DiskSpec:
    """Explicit disk in Q_{k+m+1}(sqrt 2) with boundary on {[ix : y]}.

    k = 0: a hemisphere of the conic {z0^2 = z1^2 + z2^2 ...}; k > 0: half of
    the isotropic line through (i, 0, 1, 0) and (0, i, 0, 1).
    """
    N = k + m + 2
    S = lag.sphere_pair_in_quadric(k, m)
    if k == 0:
        def fn(s, th):
            zeta = s * np.exp(1j * th)
            a, b = 1 - zeta, 1j * (1 + zeta)
            return c2r(_conic(a, b, N))
    else:
        A = np.zeros(N, complex); B = np.zeros(N, complex)
        A[0], A[k + 1] = 1j, 1.0
        B[1], B[k + 2] = 1j, 1.0

        def fn(s, th):
            # upper hemisphere of the line: [1 : w] with |w| <= 1 mapped by a Cayley transform
            zeta = s * np.exp(1j * th)
            a, b = 1 + zeta, 1j * (1 - zeta)
            z = a * A + b * B
            return c2r(np.sqrt(2.0) * z / np.linalg.norm(z))
    return DiskSpec(f"hol_disk?k={k}&m={m}", fn, fubini_study(), S)


def _conic(a, b, N):
    """[i(a^2 + b^2) : a^2 - b^2 : 2ab : 0 ...] / norm; boundary lands on [ix : y] when [a : b] is on the right circle."""
    z = np.zeros(N, complex)
    z[0] = 1j * (a * a + b * b)
    z[1] = a * a - b * b
    z[2] = 2 * a * b
    return np.sqrt(2.0) * z / np.linalg.norm(z)


# ----------------------------------------------------------------- Maslov


def maslov_frame_loop(frames: Sequence[np.ndarray], lag_tol: float = 1e-8, snap_tol: float = 0.01) -> int:
    """Maslov index of a closed loop of Lagrangian frames (X; Y) in a Darboux basis.

    Winding number of det(U)^2 with U = Z (Z* Z)^{-1/2}, Z = X + iY.
    """
    frames = [np.asarray(f, dtype=float) for f in frames]
    if not frames:
        raise ValueError("empty loop")
    n = frames[0].shape[1]
    phases = []
    for f in frames:
        x, y = f[:n], f[n:]
        scale = max(1.0, float(np.linalg.norm(f)) ** 2)
        if np.max(np.abs(x.T @ y - y.T @ x)) > lag_tol * scale:
            raise ValueError("frame does not span a Lagrangian plane")
        d = np.linalg.det(x + 1j * y)
        if abs(d) < 1e-12 * scale ** (n / 2):
            raise ValueError("frame is rank deficient")
        phases.append(2.0 * np.angle(d))
    ph = np.asarray(phases)
    steps = np.angle(np.exp(1j * (np.roll(ph, -1) - ph)))
    if np.max(np.abs(steps)) > np.pi / 2:
        raise MaslovError("grid too coarse: unwrap step exceeds pi/2")
    w = float(np.sum(steps)) / (2 * np.pi)
    if abs(w - round(w)) > snap_tol:
        raise MaslovError(f"winding {w:.4f} is not near an integer")
    return int(round(w))


def _symplectic_gs(amb: SymplecticAmbient, E: np.ndarray, F: np.ndarray):
    """In-place batched symplectic Gram-Schmidt on pairs (E_i, F_i), shape (T, n, D)."""
    n = E.shape[1]
    for i in range(n):
        e, f = E[:, i], F[:, i]
        for j in range(i):
            e = e - amb.omega(e, F[:, j])[:, None] * E[:, j] + amb.omega(e, E[:, j])[:, None] * F[:, j]
            f = f - amb.omega(f, F[:, j])[:, None] * E[:, j] + amb.omega(f, E[:, j])[:, None] * F[:, j]
        e = e / np.linalg.norm(e, axis=-1, keepdims=True)
        w = amb.omega(e, f)
        if np.min(np.abs(w)) < 1e-8:
            raise MaslovError("degenerate pair during symplectic Gram-Schmidt")
        E[:, i], F[:, i] = e, f / w[:, None]
    return E, F


def _initial_frame(amb: SymplecticAmbient, x0: np.ndarray):
    """Darboux basis at a single point, by pivoted Gram-Schmidt on an orthonormal tangent basis."""
    D = amb.dim
    if amb.normals is None:
        T = np.eye(D)
    else:
        N = amb.normals(x0[None])[0]
        _, _, vt = np.linalg.svd(N)
        T = vt[N.shape[0]:].T
    cols = [T[:, i] for i in range(T.shape[1])]
    E, F = [], []
    while cols:
        e = cols.pop(0)
        for a, b in zip(E, F):
            e = e - amb.omega(e, b) * a + amb.omega(e, a) * b
        if np.linalg.norm(e) < 1e-10:
            continue
        e = e / np.linalg.norm(e)
        scores = [abs(amb.omega(e, c)) for c in cols]
        f = cols.pop(int(np.argmax(scores)))
        for a, b in zip(E, F):
            f = f - amb.omega(f, b) * a + amb.omega(f, a) * b
        E.append(e)
        F.append(f / amb.omega(e, f))
    return np.array(E), np.array(F)


def _continue_frames(d: DiskSpec, n_theta: int, n_rad: int, jump: float = 0.3):
    amb = d.symplectic
    th = np.linspace(0.0, 2 * np.pi, n_theta, endpoint=False)
    e0, f0 = _initial_frame(amb, d(0.0, 0.0))
    E = np.repeat(e0[None], n_theta, axis=0)
    F = np.repeat(f0[None], n_theta, axis=0)
    for s in np.linspace(0.0, 1.0, n_rad + 1)[1:]:
        x = np.array([d(s, t) for t in th])
        En = amb.project(x, E.copy())
        Fn = amb.project(x, F.copy())
        En, Fn = _symplectic_gs(amb, En, Fn)
        cos_e = np.abs(np.sum(En * E, -1)) / (np.linalg.norm(En, axis=-1) * np.linalg.norm(E, axis=-1))
        if np.max(np.arccos(np.clip(cos_e, -1, 1))) > jump:
            return None
        E, F = En, Fn
    return th, E, F


def maslov_disk(d: DiskSpec, n_theta: int = 512, n_rad: int = 256, max_refine: int = 4) -> int:
    """Maslov index of a disk in a constrained flat ambient with boundary on a Lagrangian."""
    if d.symplectic is None:
        raise ValueError("disk has no symplectic ambient for the Maslov engine")
    factor = 1
    while True:
        res = _continue_frames(d, n_theta, n_rad * factor)
        if res is not None:
            break
        factor *= 2
        if factor > max_refine:
            raise MaslovError("trivialization keeps jumping after refinement")
    th, E, F = res
    amb = d.symplectic
    frames = []
    for i, t in enumerate(th):
        if d.boundary_frame is not None:
            V = d.boundary_frame(t)
        else:
            V = lag.tangent_frame(d.boundary, d.boundary_params(t))
        V = amb.project(d(1.0, t)[None], V.T[None])[0]  # (n, D)
        X = amb.omega(V[None, :, :], F[i][:, None, :])  # X_jk = omega(v_k, f_j)
        Y = amb.omega(E[i][:, None, :], V[None, :, :])
        frames.append(np.vstack([X, Y]))
    try:
        return maslov_frame_loop(frames)
    except MaslovError:
        if n_theta >= 4 * 512:
            raise
        return maslov_disk(d, n_theta * 2, n_rad, max_refine)


# ------------------------------------------------------------ monotonicity


def monotone_radius(fiber_area: Callable[[Fraction], Fraction], fiber_maslov: int, line_area, line_maslov: int
                    ) -> Fraction:
    """Radius r where fiber_area(r) / fiber_maslov = line_area / line_maslov.

    Areas are exact multiples of pi (pass Fractions); fiber_area must be affine.
    """
    c0 = Fraction(fiber_area(Fraction(0)))
    c1 = Fraction(fiber_area(Fraction(1))) - c0
    if Fraction(fiber_area(Fraction(1, 2))) != c0 + c1 / 2:
        raise ValueError("fiber area is not affine in r")
    if c1 == 0:
        raise ValueError("fiber area does not depend on r")
    r = (Fraction(line_area) * fiber_maslov / line_maslov - c0) / c1
    if not 0 < r < 1:
        raise ValueError(f"no monotone radius in (0, 1): got {r}")
    return r


def quadric_monotone_radius(k: int, m: int) -> Fraction:
    return monotone_radius(lambda r: 2 * (1 - r), 2, 2, 2 * (k + m + 1))


def projective_monotone_radius(k: int, m: int) -> Fraction:
    return monotone_radius(lambda r: 1 - r, 2, 2, 2 * (k + m + 2))


@dataclass(frozen=True)
class ClassLatticeEntry:
    id: str
    area: float
    maslov: int


def minimal_maslov(entries: Sequence[ClassLatticeEntry], half_class_present: bool) -> int:
    """Positive generator of the Maslov image of the class lattice."""
    vals = [abs(e.maslov) for e in entries]
    if half_class_present:
        total = sum(e.maslov for e in entries)
        if total % 2:
            raise ValueError("half class needs an even Maslov sum")
        vals.append(abs(total // 2))
    g = reduce(math.gcd, vals, 0)
    if g == 0:
        raise ValueError("all Maslov values vanish")
    return g


def generator_entries(k: int, m: int, r: float = 0.5) -> list[ClassLatticeEntry]:
    """u1, u2, u3 with Maslov values from the engine (u2 omitted when k = 0)."""
    out = [ClassLatticeEntry("u1", disk_area(u_disk(1, k, m, r)), maslov_disk(u_disk(1, k, m, r)))]
    if k >= 1:
        out.append(ClassLatticeEntry("u2", disk_area(u_disk(2, k, m, r)), maslov_disk(u_disk(2, k, m, r))))
    out.append(ClassLatticeEntry("u3", disk_area(u_disk(3, k, m, r)), maslov_disk(u_disk(3, k, m, r))))
    return out


def minimal_maslov_pr(k: int, m: int) -> int:
    return minimal_maslov(generator_entries(k, m), half_class_present=k > 0)


# --------------------------------------------------------- displaceability


def displaceability_criterion(alpha: float, tau: float, area_image_generator: float) -> bool:
    """alpha < tau/2 and the area image generator is an integer multiple of tau."""
    if alpha <= 0 or tau <= 0:
        raise ValueError("alpha and tau must be positive")
    ratio = area_image_generator / tau
    return alpha < tau / 2 and abs(ratio - round(ratio)) <= 1e-12


def holonomy_angle(u: DiskSpec, tau: float, grid: int = 64) -> float:
    a = (2 * np.pi / tau) * disk_area(u, grid)
    h = math.fmod(a, 2 * np.pi)
    if h < 0:
        h += 2 * np.pi
    # fold values within rounding of 2 pi back to 0
    return 0.0 if abs(h - 2 * np.pi) < 1e-9 else h


# ------------------------------------------------------ displacement isotopy


@dataclass(frozen=True)
class RectModel:
    """Area-preserving chart of a planar domain onto a rectangle in (h, v)."""

    name: str
    h_range: tuple
    v_range: tuple
    to_domain: Callable  # (h, v) -> complex point of the original domain
    half_total: float

    @property
    def center(self) -> tuple:
        return (sum(self.h_range) / 2, sum(self.v_range) / 2)


def _omega_d_model() -> RectModel:
    # (U, V) = (u / sqrt(1 - v^2), arcsin v) flattens du dv / (1 - v^2)
    return RectModel("omegaD", (-1.0, 1.0), (-np.pi / 2, np.pi / 2),
                     lambda h, v: h * np.cos(v) + 1j * np.sin(v), np.pi)


def _half_disk_model() -> RectModel:
    # (phi, s) = (arg w, |w|^2 / 2) on the radius-sqrt 2 upper half disk
    return RectModel("H", (0.0, np.pi), (0.0, 1.0), lambda h, v: np.sqrt(2 * v) * np.exp(1j * h), np.pi / 2)


@dataclass
class IsotopyCertificate:
    target: str
    initial_area: float
    area_drift: float
    min_separation: float
    steps: int
    all_simple: bool
    inside: bool
    refused: bool = False
    diagnostic: str = ""
    curve_gap: float = float("nan")  # planar distance between initial and final curves

    @property
    def passed(self) -> bool:
        return (not self.refused and self.area_drift <= 1e-6 and self.min_separation > 0.01
                and self.curve_gap > 0 and self.all_simple and self.inside)

    def as_dict(self) -> dict:
        return {"target": self.target, "area_drift": self.area_drift, "min_separation": self.min_separation,
                "curve_gap": self.curve_gap, "steps": self.steps, "refused": self.refused,
                "diagnostic": self.diagnostic}


class _PolarFamily:
    """Regions {psi in arc(s), a_s(psi) < rho < b_s(psi)} in polar coordinates about the blob centre.

    s = 0 is the star-shaped initial region; s = 1 is an annular sector
    wrapped around it, leaving a gap of angle ``gap`` where the ring is thinnest.  The outer radius is
    rescaled per step so the standard area stays fixed.  The container is a
    superellipse inscribed in the rectangle, so the ray distance is smooth.
    """

    def __init__(self, model: RectModel, implicit: Callable, margin: float, gap: float = 0.3,
                 nodes: int = 512, power: int = 16):
        self.model, self.implicit, self.m, self.gap = model, implicit, margin, gap
        self.cx, self.cy = model.center
        self.X = (model.h_range[1] - model.h_range[0]) / 2
        self.Y = (model.v_range[1] - model.v_range[0]) / 2
        self.p = power
        u, w = np.polynomial.legendre.leggauss(nodes)
        self.u, self.wu = (u + 1) / 2, w / 2
        # open the gap where the surrounding ring is thinnest: it wastes the least area
        probe = np.linspace(0.0, 2 * np.pi, 720, endpoint=False)
        ring = self.container(probe) ** 2 - self.blob_radius(probe) ** 2
        self.gap_dir = float(probe[np.argmin(ring)]) - gap / 2

    def container(self, psi):
        c, s = np.abs(np.cos(psi)) / self.X, np.abs(np.sin(psi)) / self.Y
        return (c**self.p + s**self.p) ** (-1.0 / self.p)

    def blob_radius(self, psi):
        """Ray distance to the initial curve, by vectorized bisection on the implicit equation."""
        psi = np.asarray(psi, float)
        lo, hi = np.zeros_like(psi), self.container(psi)
        for _ in range(64):
            mid = (lo + hi) / 2
            inside = self.implicit(self.cx + mid * np.cos(psi), self.cy + mid * np.sin(psi)) < 0
            lo, hi = np.where(inside, mid, lo), np.where(inside, hi, mid)
        return (lo + hi) / 2

    def _arc(self, s):
        start = self.gap_dir + s * self.gap / 2
        return start, 2 * np.pi - s * self.gap

    def raw(self, s, u):
        start, span = self._arc(s)
        psi = start + u * span
        r0 = self.blob_radius(psi)
        a = s * (r0 + self.m)
        b = (1 - s) * r0 + s * (self.container(psi) - self.m)
        return psi, a, b

    def raw_area(self, s) -> float:
        _, a, b = self.raw(s, self.u)
        return float(0.5 * np.sum(self.wu * (b * b - a * a)) * self._arc(s)[1])

    def region(self, s, target_area):
        kappa = target_area / self.raw_area(s)

        def radii(u):
            psi, a, b = self.raw(s, u)
            return psi, a, np.sqrt(a * a + kappa * (b * b - a * a))

        return radii, kappa

    def area(self, radii, s) -> float:
        _, a, b = radii(self.u)
        return float(0.5 * np.sum(self.wu * (b * b - a * a)) * self._arc(s)[1])

    def boundary(self, radii, s, n: int = 256):
        """Closed polygon in (h, v): outer arc forward, inner arc back (just the outer curve at s = 0)."""
        if s == 0:
            u = np.linspace(0.0, 1.0, n, endpoint=False)
            psi, _, b = radii(u)
            rho, ang = b, psi
        else:
            u = np.linspace(0.0, 1.0, n)
            psi, a, b = radii(u)
            rho, ang = np.concatenate([b, a[::-1]]), np.concatenate([psi, psi[::-1]])
        return self.cx + rho * np.cos(ang), self.cy + rho * np.sin(ang)


def _poly_simple(hs, vs) -> bool:
    pts = np.column_stack([hs, vs])
    return is_simple(lambda t, _p=pts: _p[np.round(t / (2 * np.pi) * len(_p)).astype(int) % len(_p)].T,
                     n_check=len(pts))


def _lift_samples(kind: str, k: int, m: int, pts: np.ndarray, rng, per_point: int = 2) -> np.ndarray:
    out = []
    for g in pts:
        for _ in range(per_point):
            x = rng.standard_normal(k + 1); x /= np.linalg.norm(x)
            y = rng.standard_normal(m + 1); y /= np.linalg.norm(y)
            if kind == "Q":
                z = np.concatenate([[g], atlas.plane_f(g) * x, atlas.plane_c(g) * y])
            else:
                z = np.concatenate([g * x, np.sqrt(2 - abs(g) ** 2) * y])
            out.append(z)
    return np.array(out)


def _min_proj_distance(a: np.ndarray, b: np.ndarray) -> float:
    ip = np.abs(np.conj(a) @ b.T)
    return float(np.min(np.sqrt(np.maximum(0.0, 2.0 - ip))))


def displacement_isotopy(kind: str, k: int, m: int, steps: int = 64, seed: int = 0,
                         margin: float = 0.02) -> IsotopyCertificate:
    """Area-preserving curve isotopy displacing L^Q_{0,m} (kind "Q") or L^P_{k,m} (kind "P")."""
    if kind == "Q":
        if k != 0 or m < 2:
            raise ValueError("quadric targets are L^Q_{0,m} with m >= 2")
        n = k + m + 1
        a = math.sqrt((2 - 1 / n) / n)
        model = _omega_d_model()
        A = 2 * np.pi * (1 - math.sqrt(1 - a * a))

        def implicit(h, v):
            return (h * np.cos(v)) ** 2 + np.sin(v) ** 2 - a * a
    elif kind == "P":
        if k + m < 1:
            raise ValueError("need k + m >= 1")
        alpha = float(lag.orbit_radius_p(k, m))
        model = _half_disk_model()
        A = np.pi * (1 - alpha)

        def implicit(h, v):
            return lag.c_alpha_residual(model.to_domain(h, v), alpha)
    else:
        raise ValueError("kind must be 'Q' or 'P'")
    target = f"L_{kind}_k_m?k={k}&m={m}"
    if A >= model.half_total - 1e-12:
        return IsotopyCertificate(target, A, float("nan"), float("nan"), 0, False, False, True,
                                  f"enclosed area {A:.6f} is not below half the total {model.half_total:.6f}")
    fam = _PolarFamily(model, implicit, margin)
    if fam.raw_area(1.0) < A:
        return IsotopyCertificate(target, A, float("nan"), float("nan"), 0, False, False, True,
                                  "final region cannot hold the enclosed area")
    drift, simple, inside = 0.0, True, True
    (h0, h1), (v0, v1) = model.h_range, model.v_range
    for s in np.linspace(0.0, 1.0, steps + 1):
        radii, _ = fam.region(s, A)
        drift = max(drift, abs(fam.area(radii, s) - A))
        hs, vs = fam.boundary(radii, s)
        simple = simple and _poly_simple(hs, vs)
        inside = inside and bool(np.all((hs > h0) & (hs < h1) & (vs > v0) & (vs < v1)))
    rng = np.random.default_rng(seed)
    c0 = np.array(fam.boundary(fam.region(0.0, A)[0], 0.0, 1024))
    c1 = np.array(fam.boundary(fam.region(1.0, A)[0], 1.0, 1024))
    gap = float(np.min(np.linalg.norm(c0[:, :, None] - c1[:, None, :], axis=0)))
    g0 = model.to_domain(*c0[:, ::5])
    g1 = model.to_domain(*c1[:, ::10])
    sep = _min_proj_distance(_lift_samples(kind, k, m, g0, rng), _lift_samples(kind, k, m, g1, rng))
    return IsotopyCertificate(target, A, drift, sep, steps, simple, inside, curve_gap=gap)


# ------------------------------------------------------------------ Morse


def morse_f_iota(theta, x, y) -> float:
    return 5 * np.sin(2 * theta) + np.cos(theta) * (x[0] + y[0])


def morse_f_ambient(pt, k: int, r: float) -> float:
    """Extension to T*S^{k+m+1} agreeing with the pullback formula on the radius-r orbit."""
    h = pt.shape[0] // 2
    p, q = pt[:h], pt[h:]
    return float(-(10 / r) * (p[: k + 1] @ q[: k + 1]) + q[0] + p[k + 1] / r)


def involution_i(pt, k: int) -> np.ndarray:
    """Cotangent lift of the reflection fixing coordinates 0 and k+1."""
    h = pt.shape[0] // 2
    sgn = -np.ones(h)
    sgn[0] = sgn[k + 1] = 1.0
    return np.concatenate([sgn * pt[:h], sgn * pt[h:]])


def _morse_residual(v, k, m):
    th, x, y = v[0], v[1 : k + 2], v[k + 2 :]
    g_th = 10 * np.cos(2 * th) - np.sin(th) * (x[0] + y[0])
    ex = np.zeros(k + 1); ex[0] = 1
    ey = np.zeros(m + 1); ey[0] = 1
    gx = np.cos(th) * (ex - x[0] * x)
    gy = np.cos(th) * (ey - y[0] * y)
    return np.concatenate([[g_th], gx, gy, [x @ x - 1, y @ y - 1]])


@dataclass(frozen=True)
class CriticalPoint:
    theta: float
    x: np.ndarray
    y: np.ndarray
    value: float
    hessian_min: float


def _riemannian_hessian_min(theta, x, y) -> float:
    """Smallest |eigenvalue| of the Hessian in exponential coordinates around the point."""
    def frame(u):
        _, _, vt = np.linalg.svd(u[None, :])
        return vt[1:]

    bx, by = frame(x), frame(y)
    dimx, dimy = bx.shape[0], by.shape[0]
    nd = 1 + dimx + dimy

    def f(c):
        a = c[1 : 1 + dimx] @ bx if dimx else np.zeros_like(x)
        b = c[1 + dimx :] @ by if dimy else np.zeros_like(y)
        na, nb = np.linalg.norm(a), np.linalg.norm(b)
        xx = x * np.cos(na) + (a / na * np.sin(na) if na > 0 else 0)
        yy = y * np.cos(nb) + (b / nb * np.sin(nb) if nb > 0 else 0)
        return morse_f_iota(theta + c[0], xx, yy)

    h = 1e-4
    H = np.zeros((nd, nd))
    for i in range(nd):
        for j in range(i, nd):
            ei = np.zeros(nd); ei[i] = h
            ej = np.zeros(nd); ej[j] = h
            H[i, j] = H[j, i] = (f(ei + ej) - f(ei - ej) - f(-ei + ej) + f(-ei - ej)) / (4 * h * h)
    return float(np.min(np.abs(np.linalg.eigvalsh(H))))


def morse_critical_points(k: int, m: int, starts: int = 400, seed: int = 0) -> list[CriticalPoint]:
    """Critical points of f o iota on S^1 x S^k x S^m by multi-start root finding."""
    if k + m > 3:
        raise ValueError("restricted to k + m <= 3")
    rng = np.random.default_rng(seed)
    found: list[CriticalPoint] = []
    factors = ("circle", ("sphere", k), ("sphere", m))
    for _ in range(starts):
        v0 = lag.sample_params(factors, rng)
        sol = least_squares(_morse_residual, v0, args=(k, m), xtol=1e-15, ftol=1e-15, gtol=1e-15)
        if np.max(np.abs(sol.fun)) > 1e-10:
            continue
        th = math.remainder(sol.x[0], 2 * np.pi) % (2 * np.pi)
        x = sol.x[1 : k + 2] / np.linalg.norm(sol.x[1 : k + 2])
        y = sol.x[k + 2 :] / np.linalg.norm(sol.x[k + 2 :])
        if any(abs(math.remainder(th - c.theta, 2 * np.pi)) < 1e-7 and np.allclose(x, c.x, atol=1e-7)
               and np.allclose(y, c.y, atol=1e-7) for c in found):
            continue
        found.append(CriticalPoint(th, x, y, float(morse_f_iota(th, x, y)), _riemannian_hessian_min(th, x, y)))
    return sorted(found, key=lambda c: (c.value, c.theta))


def morse_expected_count(k: int, m: int) -> int:
    """Four theta-roots for each of the four sign choices of (x, y) = (+-e0, +-e0)."""
    return 16


def critical_values_grid(n: int = 200000) -> dict:
    """Oracle: critical values of 5 sin 2t + c cos t for c in {-2, 0, 2}, via derivative sign changes."""
    t = np.linspace(0, 2 * np.pi, n, endpoint=False)
    out = {}
    for c in (-2, 0, 2):
        g = 10 * np.cos(2 * t) - c * np.sin(t)
        idx = np.nonzero(np.sign(g) != np.sign(np.roll(g, -1)))[0]
        vals = []
        for i in idx:
            a, b = t[i], t[i] + 2 * np.pi / n
            ga, gb = g[i], g[(i + 1) % n]
            tt = a - ga * (b - a) / (gb - ga)
            vals.append(5 * np.sin(2 * tt) + c * np.cos(tt))
        out[c] = sorted(vals)
    return out


def lagrangian_family_frame(a: float, theta: float, k: int, m: int) -> np.ndarray:
    """Columns spanning the interpolating plane at u3(e^{i theta}) for parameter a in [0, 1]."""
    n = k + m + 1
    dim = n + 1
    e0 = np.zeros(k + 1); e0[0] = 1
    vm = np.zeros(m + 1); vm[0], vm[1] = np.cos(theta), np.sin(theta)
    cols = []
    # t direction
    p = np.concatenate([-(1 - a) / 2 * e0, a * vm])
    q = np.concatenate([np.zeros(k + 1), (1 - a) * vm])
    cols.append(np.concatenate([p, q]))
    for xv in np.linalg.svd(e0[None])[2][1:]:
        cols.append(np.concatenate([a * xv, np.zeros(m + 1), (1 - a) * xv, np.zeros(m + 1)]))
    for yv in np.linalg.svd(vm[None])[2][1:]:
        cols.append(np.concatenate([np.zeros(k + 1), yv, np.zeros(dim)]))
    return np.array(cols).T


def lagrangian_family_defect(a: float, theta: float, k: int, m: int) -> float:
    """max |omega(c_i, c_j)| over the spanning columns, plus a tangency check to T*S^n."""
    F = lagrangian_family_frame(a, theta, k, m)
    h = F.shape[0] // 2
    om = F[:h].T @ F[h:] - F[h:].T @ F[:h]
    # tangency at u3(e^{i theta}) = ((0, v_m / 2), (e0, 0))
    vm = np.zeros(m + 1); vm[0], vm[1] = np.cos(theta), np.sin(theta)
    pt = np.concatenate([np.zeros(k + 1), vm / 2, np.eye(k + 1)[0], np.zeros(m + 1)])
    N = _cotangent_normals(pt[None])[0]
    return float(max(np.max(np.abs(om)), np.max(np.abs(N @ F))))
