"""Catalog of explicit symplectic maps, plus flows, circle actions and moment maps.

Every map acts on flat real vectors so the calculus layer can difference it.
Layouts:

* cotangent bundle of S^n: ``[p, q]`` in R^{2n+2}
* complex space / projective lifts: ``[Re z, Im z]``; projective outputs are
  lifts of squared norm 2
* S^2 x S^2: ``[v, w]`` in R^6
* quaternion ball: ``[x1, x2, y1, y2]`` for ``z1 + z2 j`` with ``z_k = x_k + i y_k``
* principal-bundle domains ``P x D``: ``[u, v, a, b]`` with ``w = u + i v`` in
  P_Q and ``zeta = a + i b``
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .calculus import (
    Chart,
    OneForm,
    TwoForm,
    canonical_two_form,
    euclidean_chart,
    exterior_derivative,
    fubini_study,
    sphere_area_form,
    sphere_pair_form,
    standard_two_form,
)
from .geomcore import Quat, QJ, QK, c2r, proj_dist, quat_sandwich, r2c, rotation_e1

SINGULAR_MARGIN = 1e-3
_SERIES_CUTOFF = 1e-4


class DomainError(ValueError):
    """Point outside a map's domain or too close to its singular locus."""


# ------------------------------------------------------------------ helpers


def helper_f(x: float) -> float:
    """(1 - sqrt(1 - x^2)) / x^2, extended smoothly by 1/2 at x = 0."""
    x = float(x)
    if not 0.0 <= x < 1.0:
        raise DomainError(f"helper_f needs 0 <= x < 1, got {x}")
    if x < _SERIES_CUTOFF:
        x2 = x * x
        return 0.5 + x2 / 8.0 + x2 * x2 / 16.0
    # rationalized form avoids cancellation for moderate x
    return 1.0 / (1.0 + np.sqrt(1.0 - x * x))


def plane_f(z: complex) -> complex:
    """Map D(1) -> closed upper half disk used to build quadric Lagrangians."""
    a, b = z.real, z.imag
    s = np.sqrt(1.0 - b * b)
    return complex(-a * b / s, s)


def plane_c(z: complex) -> float:
    """Positive completion so that |z|^2 + |f|^2 + c^2 = 2."""
    return float(np.sqrt(2.0 - abs(z) ** 2 - abs(plane_f(z)) ** 2))


def _proj_normalize(z: np.ndarray) -> np.ndarray:
    return np.sqrt(2.0) * z / np.linalg.norm(z)


def _gauge_real(z: np.ndarray, j: int = 0) -> np.ndarray:
    """Rotate the lift so that coordinate j is real and nonnegative."""
    if abs(z[j]) == 0:
        return z
    return z * np.exp(-1j * np.angle(z[j]))


def _gauge_negsquares(z: np.ndarray) -> np.ndarray:
    """Rotate the lift so that sum z_j^2 is real and negative."""
    s = np.sum(z * z)
    if abs(s) == 0:
        raise DomainError("sum of squares vanishes; phase is undetermined")
    return z * np.exp(1j * (np.pi - np.angle(s)) / 2)


def _cot_split(x):
    h = x.shape[0] // 2
    return x[:h], x[h:]


def cotangent_chart(n: int, name: str = "TS") -> Chart:
    def cons(x):
        p, q = _cot_split(x)
        return np.array([q @ q - 1.0, p @ q])

    return Chart(f"{name}{n}", 2 * n + 2, cons)


def sphere_pair_chart() -> Chart:
    return Chart("S2xS2", 6, lambda x: np.array([x[:3] @ x[:3] - 1.0, x[3:] @ x[3:] - 1.0]))


def sphere_chart(n: int = 2) -> Chart:
    return Chart(f"S{n}", n + 1, lambda x: np.array([x @ x - 1.0]))


def projective_chart(n: int, name: str = "CP") -> Chart:
    """Lifts of squared norm 2 in C^{n+1}."""

    def cons(x):
        z = r2c(x)
        return np.array([np.vdot(z, z).real - 2.0])

    return Chart(f"{name}{n}", 2 * n + 2, cons)


def quadric_chart(n: int) -> Chart:
    def cons(x):
        z = r2c(x)
        s = np.sum(z * z)
        return np.array([np.vdot(z, z).real - 2.0, s.real, s.imag])

    return Chart(f"Q{n}", 2 * n + 2, cons)


def bundle_chart(n_plus_1: int, name: str = "PQxD") -> Chart:
    """P_Q x C with P_Q = {u + iv : |u| = |v| = 1, u.v = 0} in C^N."""
    n = n_plus_1

    def cons(x):
        u, v = x[:n], x[n : 2 * n]
        return np.array([u @ u - 1.0, v @ v - 1.0, u @ v])

    return Chart(f"{name}{n}", 2 * n + 2, cons)


def disk_bundle_chart() -> Chart:
    """Tangent disk bundle of S^2 as pairs (x, y) with |x| = 1, x.y = 0."""
    return Chart("DS2", 6, lambda x: np.array([x[:3] @ x[:3] - 1.0, x[:3] @ x[3:]]))


# ---------------------------------------------------------------- the maps


def phi1(x) -> np.ndarray:
    """Quaternion ball B^4(2) minus 0 -> unit codisk bundle of S^2 (two-to-one)."""
    x = np.asarray(x, dtype=float)
    xi = Quat(x[0], x[2], x[1], x[3])
    n2 = xi.norm2()
    if n2 < SINGULAR_MARGIN**2 or n2 >= 4.0:
        raise DomainError("phi1 needs 0 < |xi| < 2")
    p = -quat_sandwich(xi, QK) / 4.0
    q = quat_sandwich(xi, QJ) / n2
    return np.concatenate([p, q])


def phi2(x) -> np.ndarray:
    """S^2 x S^2 minus diagonal -> unit codisk bundle of S^2."""
    v, w = np.asarray(x[:3], float), np.asarray(x[3:], float)
    d = np.linalg.norm(v - w)
    if d < SINGULAR_MARGIN:
        raise DomainError("phi2 is singular on the diagonal")
    return np.concatenate([np.cross(v, w) / d, (v - w) / d])


def phi2_inverse(x) -> np.ndarray:
    p, q = np.asarray(x[:3], float), np.asarray(x[3:], float)
    pp = p @ p
    if pp >= 1.0:
        raise DomainError("phi2 inverse needs |p| < 1")
    s = np.sqrt(1.0 - pp)
    qp = np.cross(q, p)
    return np.concatenate([s * q - qp, -s * q - qp])


def psi_disk(x) -> np.ndarray:
    """B^2(sqrt 2) -> S^2 minus {-e1}."""
    a, b = float(x[0]), float(x[1])
    r2 = a * a + b * b
    if r2 >= 2.0:
        raise DomainError("psi needs |z| < sqrt 2")
    s = np.sqrt(2.0 - r2)
    return np.array([1.0 - r2, a * s, b * s])


def psi_disk_inverse(x) -> np.ndarray:
    x = np.asarray(x, float)
    if x[0] <= -1.0 + SINGULAR_MARGIN**2:
        raise DomainError("psi inverse is singular at -e1")
    return x[1:] / np.sqrt(1.0 + x[0])


def psi_p(x) -> np.ndarray:
    """Codisk bundle of S^n -> CP^n(sqrt 2), (p, q) -> [sqrt(f) p + i q / sqrt(f)]."""
    p, q = _cot_split(np.asarray(x, float))
    np_ = np.linalg.norm(p)
    fv = helper_f(np_)
    sf = np.sqrt(fv)
    return c2r(sf * p + 1j * q / sf)


def psi_p_inverse(x) -> np.ndarray:
    """Representative (p, q) of the antipodal class; q's largest entry made positive."""
    z = _gauge_negsquares(r2c(x))
    u, v = z.real, z.imag
    nv = np.linalg.norm(v)
    p, q = nv * u, v / nv
    j = int(np.argmax(np.abs(q)))
    if q[j] < 0:
        p, q = -p, -q
    return np.concatenate([p, q])


def canonical_antipodal(x) -> np.ndarray:
    """Lexicographically larger of (p, q) and (-p, -q)."""
    x = np.asarray(x, float)
    return x if tuple(x) >= tuple(-x) else -x


def phi1_bar(x) -> np.ndarray:
    """phi1 followed by the canonical antipodal representative (T*RP^2 model)."""
    return canonical_antipodal(phi1(x))


def h1(x) -> np.ndarray:
    """D(sqrt 2) -> CP^1(sqrt 2)."""
    zeta = complex(x[0], x[1])
    s = abs(zeta) ** 2
    if s >= 2.0:
        raise DomainError("h1 needs |zeta| < sqrt 2")
    a = np.sqrt(1.0 - s / 2.0)
    r = zeta / np.sqrt(2.0)
    return c2r(np.array([1j * (a + r), a - r]))


def h2(x) -> np.ndarray:
    """D(sqrt 2) -> CP^1(sqrt 2), w -> [w : sqrt(2 - |w|^2)]."""
    w = complex(x[0], x[1])
    s = abs(w) ** 2
    if s >= 2.0:
        raise DomainError("h2 needs |w| < sqrt 2")
    return c2r(np.array([w, np.sqrt(2.0 - s)]))


def psi_ball(x) -> np.ndarray:
    """B^{2n}(sqrt 2) -> CP^n(sqrt 2), z -> [sqrt(2 - |z|^2) : z]."""
    z = r2c(x)
    s = float(np.vdot(z, z).real)
    if s >= 2.0:
        raise DomainError("ball map needs |z| < sqrt 2")
    return c2r(np.concatenate([[np.sqrt(2.0 - s)], z]))


def psi_ball_inverse(x) -> np.ndarray:
    z = r2c(x)
    if abs(z[0]) < SINGULAR_MARGIN:
        raise DomainError("point lies on the hyperplane at infinity")
    z = _gauge_real(_proj_normalize(z), 0)
    return c2r(z[1:])


def theta_delta(x) -> np.ndarray:
    """Tangent disk bundle D_{sqrt 2} S^2 -> S^2 x S^2 minus antidiagonal."""
    xx, y = np.asarray(x[:3], float), np.asarray(x[3:], float)
    s = y @ y
    if s >= 2.0:
        raise DomainError("theta_delta needs |y| < sqrt 2")
    a, b = 1.0 - s / 2.0, np.sqrt(1.0 - s / 4.0)
    return np.concatenate([a * xx + b * y, a * xx - b * y])


def theta_delta_inverse(x) -> np.ndarray:
    v, w = np.asarray(x[:3], float), np.asarray(x[3:], float)
    sm = np.linalg.norm(v + w)
    if sm < SINGULAR_MARGIN:
        raise DomainError("antidiagonal is not in the image")
    return np.concatenate([(v + w) / sm, (v - w) / np.sqrt(2.0 + sm)])


def _bundle_split(x):
    x = np.asarray(x, float)
    n = (x.shape[0] - 2) // 2
    return x[:n] + 1j * x[n : 2 * n], complex(x[2 * n], x[2 * n + 1])


def theta_q(x) -> np.ndarray:
    """P_Q x D(sqrt 2) -> quadric Q_{n+1}(sqrt 2)."""
    w, zeta = _bundle_split(x)
    s = abs(zeta) ** 2
    if s >= 2.0:
        raise DomainError("theta_q needs |zeta| < sqrt 2")
    head = np.sqrt(1.0 - s / 4.0) * zeta
    tail = (1.0 - s / 4.0) * w - zeta**2 * np.conj(w) / 4.0
    return c2r(np.concatenate([[head], tail]))


def theta_q_inverse(x) -> np.ndarray:
    """Representative with zeta real and nonnegative."""
    z = _gauge_real(_proj_normalize(r2c(x)), 0)
    tail = z[1:]
    re, im = tail.real, tail.imag
    nre = np.linalg.norm(re)
    if nre < SINGULAR_MARGIN:
        raise DomainError("point lies on the excluded sphere")
    r = np.sqrt(max(0.0, 2.0 - 2.0 * nre))
    return np.concatenate([re / nre, im, [r, 0.0]])


def theta_p(x) -> np.ndarray:
    """P_Q x D(1) -> CP^n(sqrt 2); descends to the quotient by w ~ -w."""
    w, zeta = _bundle_split(x)
    s = abs(zeta) ** 2
    if s >= 1.0:
        raise DomainError("theta_p needs |zeta| < 1")
    return c2r(np.sqrt(1.0 - s / 2.0) * w - zeta * np.conj(w) / np.sqrt(2.0))


def theta_p_inverse(x) -> np.ndarray:
    """Representative with zeta real and nonnegative (w fixed up to sign)."""
    z = _gauge_negsquares(_proj_normalize(r2c(x)))
    re, im = z.real, z.imag
    nre, nim = np.linalg.norm(re), np.linalg.norm(im)
    if nre < SINGULAR_MARGIN:
        raise DomainError("boundary of the disk bundle is not in the image")
    r = (nim - nre) / np.sqrt(2.0)
    u, v = re / nre, im / nim
    j = int(np.argmax(np.abs(u)))
    if u[j] < 0:
        u, v = -u, -v
    return np.concatenate([u, v, [r, 0.0]])


def psi_q(x) -> np.ndarray:
    """Codisk bundle of S^n -> quadric Q_{n+1}(sqrt 2), (p, q) -> [sqrt(1-|p|^2) : p + iq]."""
    p, q = _cot_split(np.asarray(x, float))
    pp = p @ p
    if pp >= 1.0:
        raise DomainError("psi_q needs |p| < 1")
    return c2r(np.concatenate([[np.sqrt(1.0 - pp)], p + 1j * q]))


def psi_q_inverse(x) -> np.ndarray:
    z = _gauge_real(_proj_normalize(r2c(x)), 0)
    if z[0].real < SINGULAR_MARGIN:
        raise DomainError("hyperplane section is not in the image")
    return np.concatenate([z[1:].real, z[1:].imag])


def iota(theta: float, x, y, r: float) -> np.ndarray:
    """S^1 x S^k x S^m -> T*S^{k+m+1}, two-to-one onto the radius-r orbit."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    c, s = np.cos(theta), np.sin(theta)
    p = np.concatenate([-r * s * x, r * c * y])
    q = np.concatenate([c * x, s * y])
    return np.concatenate([p, q])


# ---------------------------------------------------------------- domain forms


def _sigma_coeff(radial: Callable[[float], float]) -> OneForm:
    """radial(|zeta|^2) * sum(v du - u dv) on [u, v, a, b]."""

    def fn(x, t):
        n = (x.shape[0] - 2) // 2
        u, v = x[:n], x[n : 2 * n]
        s = x[2 * n] ** 2 + x[2 * n + 1] ** 2
        return radial(s) * (v @ t[:n] - u @ t[n : 2 * n])

    return OneForm("sigma", fn)


def _fiber_area() -> TwoForm:
    def fn(x, a, b):
        n = (x.shape[0] - 2) // 2
        return a[2 * n] * b[2 * n + 1] - a[2 * n + 1] * b[2 * n]

    return TwoForm("da^db", fn)


def quadric_bundle_form() -> TwoForm:
    """Pullback of the disk-bundle form for the quadric embedding."""
    return exterior_derivative(_sigma_coeff(lambda s: (s - 2.0) / 4.0)) + _fiber_area()


def projective_bundle_form() -> TwoForm:
    """Pullback of the disk-bundle form for the projective embedding."""
    return exterior_derivative(_sigma_coeff(lambda s: (s - 1.0) / 2.0)) + _fiber_area()


def disk_bundle_primitive() -> OneForm:
    """eta(a, b) = (1/2 - 1/|y|^2) b.(x cross y), off the zero section."""

    def fn(x, t):
        xx, y = x[:3], x[3:]
        return (0.5 - 1.0 / (y @ y)) * (t[3:] @ np.cross(xx, y))

    return OneForm("eta", fn)


# ------------------------------------------------------------------ samplers


def _unit(rng, n):
    g = rng.standard_normal(n)
    return g / np.linalg.norm(g)


def _orthonormal_pair(rng, n):
    u = _unit(rng, n)
    g = rng.standard_normal(n)
    v = g - (g @ u) * u
    return u, v / np.linalg.norm(v)


def _sample_cot(rng, n, r_lo, r_hi):
    q = _unit(rng, n + 1)
    g = rng.standard_normal(n + 1)
    g -= (g @ q) * q
    p = rng.uniform(r_lo, r_hi) * g / np.linalg.norm(g)
    return np.concatenate([p, q])


def _sample_disk(rng, r_lo, r_hi):
    r = rng.uniform(r_lo, r_hi)
    t = rng.uniform(0, 2 * np.pi)
    return np.array([r * np.cos(t), r * np.sin(t)])


def _sample_bundle(rng, n1, r_lo, r_hi):
    u, v = _orthonormal_pair(rng, n1)
    return np.concatenate([u, v, _sample_disk(rng, r_lo, r_hi)])


def _sample_phi1(rng):
    return _unit(rng, 4) * rng.uniform(0.1, 1.9)


def _sample_phi1_bar(rng):
    # keep away from the tie set where the antipodal representative flips
    while True:
        x = _sample_phi1(rng)
        if abs(phi1(x)[0]) > 10 * SINGULAR_MARGIN:
            return x


def _sample_pair(rng):
    while True:
        v, w = _unit(rng, 3), _unit(rng, 3)
        if np.linalg.norm(v - w) > 0.05:
            return np.concatenate([v, w])


def _sample_theta_delta(rng):
    x = _unit(rng, 3)
    g = rng.standard_normal(3)
    g -= (g @ x) * x
    y = rng.uniform(0.1, 1.35) * g / np.linalg.norm(g)
    return np.concatenate([x, y])


# ------------------------------------------------------------------ catalog


@dataclass(frozen=True)
class MapCatalogEntry:
    id: str
    domain: Chart
    codomain: Chart
    fn: Callable[[np.ndarray], np.ndarray]
    domain_form: TwoForm
    codomain_form: TwoForm
    sampler: Callable[[np.random.Generator], np.ndarray]
    inverse: Optional[Callable[[np.ndarray], np.ndarray]] = None
    summary: str = ""
    # equality in the codomain: "euclid" or "proj"
    codomain_kind: str = "euclid"
    # equality in the domain when the map only descends to a quotient
    domain_equal: Optional[Callable[[np.ndarray, np.ndarray], float]] = field(default=None)


def _proj_gap(a, b) -> float:
    return proj_dist(r2c(a), r2c(b))


def _build_catalog(n: int = 2) -> dict[str, MapCatalogEntry]:
    std, dlam, fs = standard_two_form(), canonical_two_form(), fubini_study()
    cat = [
        MapCatalogEntry("phi1", euclidean_chart(4), cotangent_chart(2), phi1, std, dlam, _sample_phi1,
                        summary="quaternion ball to codisk bundle of S^2, double cover"),
        MapCatalogEntry("Phi2", sphere_pair_chart(), cotangent_chart(2), phi2, sphere_pair_form(), dlam,
                        _sample_pair, inverse=phi2_inverse,
                        summary="S^2 x S^2 minus diagonal to codisk bundle of S^2"),
        MapCatalogEntry("Phi2inv", cotangent_chart(2), sphere_pair_chart(), phi2_inverse, dlam,
                        sphere_pair_form(), lambda rng: _sample_cot(rng, 2, 0.02, 0.97), inverse=phi2,
                        summary="inverse of Phi2"),
        MapCatalogEntry("psi", euclidean_chart(2), sphere_chart(2), psi_disk, std, sphere_area_form(0.5),
                        lambda rng: _sample_disk(rng, 0.0, 1.38), inverse=psi_disk_inverse,
                        summary="disk of radius sqrt 2 onto the sphere minus a point"),
        MapCatalogEntry("PsiP", cotangent_chart(n), projective_chart(n), psi_p, dlam, fs,
                        lambda rng: _sample_cot(rng, n, 0.0, 0.97), inverse=psi_p_inverse, codomain_kind="proj",
                        domain_equal=lambda a, b: min(np.max(np.abs(a - b)), np.max(np.abs(a + b))),
                        summary="codisk bundle of RP^n onto CP^n minus the quadric"),
        MapCatalogEntry("Phi1bar", euclidean_chart(4), cotangent_chart(2), phi1_bar, std, dlam,
                        _sample_phi1_bar, summary="phi1 on the quotient by multiplication by i"),
        MapCatalogEntry("h1", euclidean_chart(2), projective_chart(1), h1, std, fs,
                        lambda rng: _sample_disk(rng, 0.0, 1.38), codomain_kind="proj",
                        summary="disk of radius sqrt 2 into CP^1"),
        MapCatalogEntry("h2", euclidean_chart(2), projective_chart(1), h2, std, fs,
                        lambda rng: _sample_disk(rng, 0.0, 1.38), codomain_kind="proj",
                        summary="disk of radius sqrt 2 into CP^1, affine chart"),
        MapCatalogEntry("psiP", euclidean_chart(4), projective_chart(2), psi_ball, std, fs,
                        lambda rng: _unit(rng, 4) * rng.uniform(0.0, 1.38), inverse=psi_ball_inverse,
                        codomain_kind="proj", summary="ball of radius sqrt 2 into CP^2, affine chart"),
        MapCatalogEntry("ThetaDelta", disk_bundle_chart(), sphere_pair_chart(), theta_delta,
                        exterior_derivative(disk_bundle_primitive()), sphere_pair_form(), _sample_theta_delta,
                        inverse=theta_delta_inverse,
                        summary="tangent disk bundle of S^2 onto S^2 x S^2 minus antidiagonal"),
        MapCatalogEntry("ThetaQ", bundle_chart(n + 1), quadric_chart(n + 1), theta_q, quadric_bundle_form(), fs,
                        lambda rng: _sample_bundle(rng, n + 1, 0.05, 1.35), inverse=theta_q_inverse,
                        codomain_kind="proj", summary="disk bundle over a quadric into the next quadric"),
        MapCatalogEntry("Thetap", bundle_chart(n + 1), projective_chart(n), theta_p, projective_bundle_form(), fs,
                        lambda rng: _sample_bundle(rng, n + 1, 0.05, 0.95), inverse=theta_p_inverse,
                        codomain_kind="proj", summary="disk bundle over a quadric into CP^n"),
        MapCatalogEntry("Psi", cotangent_chart(n), quadric_chart(n + 1), psi_q, dlam, fs,
                        lambda rng: _sample_cot(rng, n, 0.0, 0.97), inverse=psi_q_inverse, codomain_kind="proj",
                        summary="codisk bundle of S^n into the quadric Q_{n+1}"),
    ]
    return {e.id: e for e in cat}


CATALOG: dict[str, MapCatalogEntry] = _build_catalog(2)


def catalog(n: int = 2) -> dict[str, MapCatalogEntry]:
    """Catalog with the dimension-dependent entries built for S^n / CP^n."""
    return CATALOG if n == 2 else _build_catalog(n)


def eval_map(map_id: str, point, n: int = 2, tol: float = 1e-8) -> np.ndarray:
    e = catalog(n)[map_id]
    res = e.domain.residual(point)
    if res > tol:
        raise DomainError(f"point is off the domain of {map_id} (residual {res:.3g})")
    return e.fn(np.asarray(point, float))


def eval_inverse(map_id: str, point, n: int = 2, tol: float = 1e-8) -> np.ndarray:
    e = catalog(n)[map_id]
    if e.inverse is None:
        raise KeyError(f"{map_id} has no inverse")
    res = e.codomain.residual(point)
    if res > tol:
        raise DomainError(f"point is off the image chart of {map_id} (residual {res:.3g})")
    return e.inverse(np.asarray(point, float))


def image_gap(entry: MapCatalogEntry, a, b) -> float:
    """Distance between two codomain points in the entry's notion of equality."""
    if entry.codomain_kind == "proj":
        return _proj_gap(a, b)
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


# ---------------------------------------------------------------- flows


def geodesic_flow(t: float, x, tol: float = 1e-12) -> np.ndarray:
    """Unit-speed geodesic flow on T*S^n in [p, q] layout."""
    p, q = _cot_split(np.asarray(x, float))
    r = np.linalg.norm(p)
    if r < tol:
        raise DomainError("geodesic flow is undefined on the zero section")
    e = p / r
    c, s = np.cos(t), np.sin(t)
    qt = c * q + s * e
    pt = r * (c * e - s * q)
    # re-project onto the constraints
    qt /= np.linalg.norm(qt)
    pt -= (pt @ qt) * qt
    return np.concatenate([pt, qt])


# ---------------------------------------------------------------- circle actions

Q_U2 = np.array([[1.0, -1j], [1.0, 1j]]) / np.sqrt(2.0)
Q1_SO3 = np.eye(3)
Q2_SO3 = np.diag([-1.0, -1.0, 1.0])


def rho_ep(t: float, x) -> np.ndarray:
    r = rotation_e1(t)
    return np.concatenate([r @ x[:3], r @ x[3:]])


def rho_cs(t: float, x) -> np.ndarray:
    return np.concatenate([rotation_e1(t) @ x[:3], rotation_e1(-t) @ x[3:]])


def rho_c2(t: float, x) -> np.ndarray:
    """diag(e^{it}, e^{-it}) on C^2 in [Re, Im] layout."""
    z = r2c(x)
    return c2r(np.array([np.exp(1j * t) * z[0], np.exp(-1j * t) * z[1]]))


def rho_01(t: float, x) -> np.ndarray:
    """Real rotation [[c, s], [-s, c]] on C^2."""
    z = r2c(x)
    c, s = np.cos(t), np.sin(t)
    return c2r(np.array([c * z[0] + s * z[1], -s * z[0] + c * z[1]]))


def conj_q(x) -> np.ndarray:
    """Apply the unitary conjugating the two C^2 circle actions."""
    return c2r(Q_U2 @ r2c(x))


def conj_q_inverse(x) -> np.ndarray:
    return c2r(Q_U2.conj().T @ r2c(x))


def pair_q(x) -> np.ndarray:
    """Apply (Q1, Q2) in SO(3) x SO(3)."""
    return np.concatenate([Q1_SO3 @ x[:3], Q2_SO3 @ x[3:]])


# ---------------------------------------------------------------- moment maps


def mu_sphere(x) -> np.ndarray:
    """O(n+1) moment map on T*S^n: p q^T - q p^T."""
    p, q = _cot_split(np.asarray(x, float))
    return np.outer(p, q) - np.outer(q, p)


def mu_projective(x) -> np.ndarray:
    """Im(conj(z) z^T) on a lift."""
    z = r2c(x)
    return np.outer(np.conj(z), z).imag


def mu_quadric(x) -> np.ndarray:
    """Im(conj(z') z'^T) over the coordinates after z_0."""
    z = r2c(x)[1:]
    return np.outer(np.conj(z), z).imag


MOMENT_MAPS = {"mu_Q": mu_quadric, "Phi_C": mu_projective, "Phi_R": mu_sphere, "mu_S": mu_sphere}


def moment_map(map_id: str, x) -> np.ndarray:
    a = MOMENT_MAPS[map_id](x)
    # exact antisymmetry
    return 0.5 * (a - a.T)


def moment_inner(a, b) -> float:
    return float(np.trace(np.asarray(a).T @ np.asarray(b)) / 2.0)


def moment_norm(map_id: str, x) -> float:
    a = moment_map(map_id, x)
    return float(np.sqrt(max(0.0, moment_inner(a, a))))


def projective_norm_closed_form(x) -> float:
    """1/2 sqrt(4 - |sum z_j^2|^2) on a lift of squared norm 2."""
    z = r2c(x)
    return 0.5 * float(np.sqrt(max(0.0, 4.0 - abs(np.sum(z * z)) ** 2)))
