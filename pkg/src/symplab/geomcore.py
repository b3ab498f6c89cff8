"""Ambient linear algebra, quaternions, point types and seeded sampling.

Complex vectors are stored as complex numpy arrays here; the calculus layer
flattens them to ``[Re z, Im z]`` when a real chart is needed.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

TOL_POINT = 1e-10
_MAX_REDRAWS = 16


def _frozen(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    if not np.all(np.isfinite(arr)):
        raise ValueError("non-finite entries")
    arr.setflags(write=False)
    return arr


def rvec(values) -> np.ndarray:
    """Read-only finite real vector."""
    return _frozen(values, float)


def cvec(values) -> np.ndarray:
    """Read-only finite complex vector."""
    return _frozen(values, complex)


def c2r(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    return np.concatenate([z.real, z.imag])


def r2c(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    h = x.shape[0] // 2
    return x[:h] + 1j * x[h:]


# ---------------------------------------------------------------- quaternions


@dataclass(frozen=True)
class Quat:
    w: float
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_complex_pair(cls, z1: complex, z2: complex) -> "Quat":
        # z1 + z2 j, with (a + bi) j = a j + b k
        return cls(z1.real, z1.imag, z2.real, z2.imag)

    @classmethod
    def pure(cls, v) -> "Quat":
        return cls(0.0, float(v[0]), float(v[1]), float(v[2]))

    def __mul__(self, o: "Quat") -> "Quat":
        a1, b1, c1, d1 = self.w, self.x, self.y, self.z
        a2, b2, c2, d2 = o.w, o.x, o.y, o.z
        return Quat(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    def __neg__(self) -> "Quat":
        return Quat(-self.w, -self.x, -self.y, -self.z)

    def conj(self) -> "Quat":
        return Quat(self.w, -self.x, -self.y, -self.z)

    def norm2(self) -> float:
        return self.w**2 + self.x**2 + self.y**2 + self.z**2

    def imag(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


QI = Quat(0.0, 1.0, 0.0, 0.0)
QJ = Quat(0.0, 0.0, 1.0, 0.0)
QK = Quat(0.0, 0.0, 0.0, 1.0)


def quat_sandwich(xi: Quat, a: Quat) -> np.ndarray:
    """Imaginary part of conj(xi) * a * xi for a pure quaternion a."""
    if abs(a.w) > TOL_POINT:
        raise ValueError("quat_sandwich expects a pure-imaginary quaternion")
    out = xi.conj() * a * xi
    return out.imag()


# ---------------------------------------------------------------- point types


@dataclass(frozen=True)
class SpherePoint:
    q: np.ndarray

    def __post_init__(self):
        q = rvec(self.q)
        if abs(q @ q - 1.0) > TOL_POINT:
            raise ValueError("not on the unit sphere")
        object.__setattr__(self, "q", q)

    @classmethod
    def project(cls, q) -> "SpherePoint":
        q = np.asarray(q, dtype=float)
        return cls(q / np.linalg.norm(q))


@dataclass(frozen=True)
class CotangentPoint:
    p: np.ndarray
    q: np.ndarray
    radius_bound: float | None = None

    def __post_init__(self):
        p, q = rvec(self.p), rvec(self.q)
        if p.shape != q.shape:
            raise ValueError("p and q differ in length")
        if abs(q @ q - 1.0) > TOL_POINT or abs(p @ q) > TOL_POINT:
            raise ValueError("not a cotangent vector to the unit sphere")
        if self.radius_bound is not None and not np.linalg.norm(p) < self.radius_bound:
            raise ValueError("|p| exceeds the radius bound")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @classmethod
    def project(cls, p, q, radius_bound=None) -> "CotangentPoint":
        q = np.asarray(q, dtype=float)
        q = q / np.linalg.norm(q)
        p = np.asarray(p, dtype=float)
        p = p - (p @ q) * q
        return cls(p, q, radius_bound)

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.p, self.q])

    @property
    def n(self) -> int:
        return self.q.shape[0] - 1


@dataclass(frozen=True)
class ProjCotangentPoint:
    """Point of T*RP^n; stores the lexicographically larger of (p, q), (-p, -q)."""

    rep: CotangentPoint

    def __post_init__(self):
        r = self.rep
        flat = tuple(np.concatenate([r.p, r.q]))
        neg = tuple(-c for c in flat)
        if neg > flat:
            object.__setattr__(self, "rep", CotangentPoint(-r.p, -r.q, r.radius_bound))

    def __eq__(self, other):
        if not isinstance(other, ProjCotangentPoint):
            return NotImplemented
        a, b = self.rep.as_array(), other.rep.as_array()
        return bool(np.max(np.abs(a - b)) <= TOL_POINT)

    __hash__ = None


@dataclass(frozen=True)
class ProjPoint:
    """Point of CP^n(sqrt 2) given by a lift of squared norm 2."""

    rep: np.ndarray

    def __post_init__(self):
        z = cvec(self.rep)
        if abs(np.vdot(z, z).real - 2.0) > TOL_POINT:
            raise ValueError("lift must have squared norm 2")
        object.__setattr__(self, "rep", z)

    @classmethod
    def project(cls, z) -> "ProjPoint":
        z = np.asarray(z, dtype=complex)
        return cls(np.sqrt(2.0) * z / np.linalg.norm(z))

    def __eq__(self, other):
        if not isinstance(other, ProjPoint):
            return NotImplemented
        return proj_dist(self, other) <= np.sqrt(TOL_POINT)

    __hash__ = None


@dataclass(frozen=True)
class QuadricPoint:
    base: ProjPoint

    def __post_init__(self):
        z = self.base.rep
        if abs(np.sum(z * z)) > TOL_POINT:
            raise ValueError("point does not lie on the quadric")


@dataclass(frozen=True)
class OrthoMatrix:
    m: np.ndarray
    special: bool = False

    def __post_init__(self):
        m = rvec(self.m)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("orthogonal matrix must be square")
        if np.max(np.abs(m.T @ m - np.eye(m.shape[0]))) > TOL_POINT:
            raise ValueError("matrix is not orthogonal")
        if self.special and np.linalg.det(m) < 0:
            raise ValueError("determinant is -1")
        object.__setattr__(self, "m", m)


def _as_lift(a) -> np.ndarray:
    return a.rep if isinstance(a, ProjPoint) else np.asarray(a, dtype=complex)


def proj_dist(a, b) -> float:
    """Phase-invariant distance between lifts of squared norm 2."""
    za, zb = _as_lift(a), _as_lift(b)
    ip = np.vdot(za, zb)
    if abs(ip) < 1e-300:
        return float(np.sqrt(2.0))
    # sqrt(2 - |<a,b>|) rewritten as a best-phase difference to avoid cancellation
    c = np.conj(ip) / abs(ip)
    return float(np.linalg.norm(za - c * zb) / np.sqrt(2.0))


def canonicalize_proj(a, gauge: str = "maxmod"):
    """Fix the phase of a lift.

    ``maxmod``: first coordinate of maximal modulus made real and nonnegative.
    ``negsquares``: sum of squares made real and negative (two choices; the
    maxmod coordinate then gets nonnegative real part).
    """
    z = _as_lift(a)
    j = int(np.argmax(np.abs(z)))
    if gauge == "maxmod":
        out = z * np.exp(-1j * np.angle(z[j])) if abs(z[j]) > 0 else z
    elif gauge == "negsquares":
        s = np.sum(z * z)
        out = z * np.exp(1j * (np.pi - np.angle(s)) / 2) if abs(s) > 0 else z
        if out[j].real < 0:
            out = -out
    else:
        raise ValueError(f"unknown gauge {gauge!r}")
    return ProjPoint(out) if isinstance(a, ProjPoint) else out


# ------------------------------------------------------------------- sampling


def derive_seed(root_seed: int, check_id: str = "", index: int = 0) -> int:
    """128-bit key from (root seed, check id, index)."""
    digest = hashlib.sha256(f"{root_seed}|{check_id}|{index}".encode()).digest()
    return int.from_bytes(digest[:16], "little")


def make_rng(root_seed: int, check_id: str = "", index: int = 0) -> np.random.Generator:
    """Counter-based Philox stream keyed by ``derive_seed``."""
    return np.random.Generator(np.random.Philox(key=derive_seed(root_seed, check_id, index)))


def _gaussian_direction(dim: int, rng: np.random.Generator) -> np.ndarray:
    for _ in range(_MAX_REDRAWS):
        g = rng.standard_normal(dim)
        nrm = np.linalg.norm(g)
        if nrm > 1e-8:
            return g / nrm
    raise RuntimeError("degenerate Gaussian draws")


def sample_sphere(n: int, rng: np.random.Generator) -> SpherePoint:
    return SpherePoint(_gaussian_direction(n + 1, rng))


def sample_cotangent(n: int, r_min: float, r_max: float, rng: np.random.Generator) -> CotangentPoint:
    if not 0 <= r_min <= r_max:
        raise ValueError("need 0 <= r_min <= r_max")
    q = _gaussian_direction(n + 1, rng)
    for _ in range(_MAX_REDRAWS):
        g = rng.standard_normal(n + 1)
        g = g - (g @ q) * q
        nrm = np.linalg.norm(g)
        if nrm > 1e-8:
            break
    else:
        raise RuntimeError("degenerate Gaussian draws")
    r = rng.uniform(r_min, r_max)
    p = (r / nrm) * g
    p = p - (p @ q) * q
    return CotangentPoint(p, q)


def sample_ortho(n: int, rng: np.random.Generator, special: bool = False) -> OrthoMatrix:
    """Haar-distributed n x n orthogonal matrix (QR with sign fix)."""
    g = rng.standard_normal((n, n))
    qm, rm = np.linalg.qr(g)
    qm = qm * np.sign(np.diag(rm))
    if special and np.linalg.det(qm) < 0:
        qm[:, 0] = -qm[:, 0]
    return OrthoMatrix(qm, special)


def sample_ball(dim: int, radius: float, rng: np.random.Generator, r_min: float = 0.0) -> np.ndarray:
    """Uniform-radius point in a real ball shell (used for chart bases)."""
    d = _gaussian_direction(dim, rng)
    return rng.uniform(r_min, radius) * d


def rotation_e1(t: float) -> np.ndarray:
    """Rotation of R^3 by angle t about e_1."""
    c, s = np.cos(t), np.sin(t)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])
