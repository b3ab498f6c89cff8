"""Relative homology classes, divisor pairings, Maslov-2 enumeration, and the superpotential."""

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

# ------------------------------------------------------------------ lattices


@dataclass(frozen=True)
class Lattice:
    """Named basis with Maslov values and divisor pairings (all exact integers)."""

    id: str
    basis: tuple
    maslov: dict
    divisors: tuple
    pairings: dict  # basis name -> tuple aligned with divisors
    derived: dict  # extra named classes as basis combinations


@dataclass(frozen=True)
class RelClass:
    lattice: Lattice
    coeffs: tuple

    @classmethod
    def of(cls, lat: Lattice, **kw) -> "RelClass":
        c = {b: 0 for b in lat.basis}
        for name, v in kw.items():
            if name in c:
                c[name] += int(v)
            elif name in lat.derived:
                for b, w in lat.derived[name].items():
                    c[b] += int(v) * w
            else:
                raise KeyError(f"{name} is not a class of {lat.id}")
        return cls(lat, tuple(c[b] for b in lat.basis))

    def __add__(self, other: "RelClass") -> "RelClass":
        return RelClass(self.lattice, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "RelClass") -> "RelClass":
        return RelClass(self.lattice, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rmul__(self, k: int) -> "RelClass":
        return RelClass(self.lattice, tuple(k * a for a in self.coeffs))

    def label(self) -> str:
        parts = []
        for name, c in zip(self.lattice.basis, self.coeffs):
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = "" if abs(c) == 1 else str(abs(c))
            parts.append(f"{sign}{mag}{name}")
        s = "".join(parts) or "0"
        return s[1:] if s.startswith("+") else s


def cp3_lattice(n: int = 1) -> Lattice:
    """H_2(CP^3, T^3) for the (1,1) torus: basis B, C1, C2, D with ell = 2B - C1 - C2."""
    pair = {
        "B": (1, 1, 0, 1, 0),
        "C1": (0, 1, -1, 0, 0),
        "C2": (0, 0, 0, 1, -1),
        "D": (1, 0, 0, 0, 0),
    }
    return Lattice("CP3_L11", ("B", "C1", "C2", "D"), {"B": 4, "C1": 0, "C2": 0, "D": 2},
                   ("Q", "H0+", "H0-", "H2+", "H2-"), pair, {"ell": {"B": 2, "C1": -1, "C2": -1}})


ELL_ROW_CP3 = (2, 1, 1, 1, 1)


def projective_lattice(m: int) -> Lattice:
    """H_2(CP^{m+1}, L_{0,m}) with basis ell, D."""
    if m < 1:
        raise ValueError("m >= 1")
    return Lattice(f"CP{m + 1}_L0{m}", ("ell", "D"), {"ell": 2 * (m + 2), "D": 2}, ("Q", "H"),
                   {"ell": (2, 1), "D": (1, 0)}, {})


def lattice_for(ambient_id: str) -> Lattice:
    if ambient_id == "CP3_L11":
        return cp3_lattice()
    if ambient_id.startswith("CP") and "_L0" in ambient_id:
        m = int(ambient_id.split("_L0")[1])
        if ambient_id != f"CP{m + 1}_L0{m}":
            raise ValueError(f"inconsistent ambient id {ambient_id}")
        return projective_lattice(m)
    raise KeyError(f"unknown ambient {ambient_id!r}")


def maslov_of_class(a: RelClass) -> int:
    return sum(c * a.lattice.maslov[b] for b, c in zip(a.lattice.basis, a.coeffs))


def area_of_class(a: RelClass, lam: Fraction) -> Fraction:
    """Monotone area: lambda * maslov / 2."""
    return Fraction(lam) * maslov_of_class(a) / 2


def pairings(a: RelClass) -> tuple:
    lat = a.lattice
    return tuple(sum(c * lat.pairings[b][j] for b, c in zip(lat.basis, a.coeffs)) for j in range(len(lat.divisors)))


def table_rows(lat: Lattice) -> dict:
    """Intersection table including derived classes (ell in CP^3)."""
    rows = {b: lat.pairings[b] for b in lat.basis}
    for name in lat.derived:
        rows[name] = pairings(RelClass.of(lat, **{name: 1}))
    return rows


# -------------------------------------------------------------- enumeration


def _derived_bounds(lat: Lattice) -> dict:
    """Coefficient ranges forced by Maslov 2 and positivity.

    CP^3: 2b + d = 1; Q gives b + d >= 0 so b <= 1; H0+ and H0- give
    -b <= c1 <= 0 so b >= 0; likewise -b <= c2 <= 0.  CP^{m+1}: d = 1 - (m+2)a,
    Q gives 2a + d >= 0 so m a <= 1, H gives a >= 0.
    """
    if lat.id == "CP3_L11":
        return {"B": range(0, 2), "C1": range(-1, 1), "C2": range(-1, 1)}
    m = lat.maslov["ell"] // 2 - 2
    return {"ell": range(0, 1 // m + 1)}


def _solve_last(lat: Lattice, partial: dict) -> Optional[int]:
    """Coefficient of D fixed by Maslov 2, or None when not integral."""
    rest = sum(partial[b] * lat.maslov[b] for b in partial)
    num = 2 - rest
    if num % lat.maslov["D"]:
        return None
    return num // lat.maslov["D"]


def enumerate_maslov2_positive(ambient_id: str, box: Optional[int] = None) -> list[RelClass]:
    """All Maslov-2 classes pairing nonnegatively with every divisor.

    With ``box`` the free coefficients range over [-box, box] instead of the
    derived bounds; used as a brute-force cross-check.
    """
    lat = lattice_for(ambient_id)
    free = [b for b in lat.basis if b != "D"]
    bounds = _derived_bounds(lat) if box is None else {b: range(-box, box + 1) for b in free}
    out = []
    for combo in itertools.product(*(bounds[b] for b in free)):
        partial = dict(zip(free, combo))
        d = _solve_last(lat, partial)
        if d is None:
            continue
        cls = RelClass.of(lat, D=d, **partial)
        if maslov_of_class(cls) == 2 and all(x >= 0 for x in pairings(cls)):
            out.append(cls)
    return sorted(out, key=lambda c: c.coeffs)


def n_parity_check(c1_h0: int = 1, c2_h0: int = 0, ell_h0: int = 1) -> int:
    """n in {0, 1} with 2B = C1 + C2 + n ell and B . H0+ integral."""
    ok = [n for n in (0, 1) if (c1_h0 + c2_h0 + n * ell_h0) % 2 == 0]
    if not ok:
        raise ValueError("B . H0+ would be a half-integer for every n")
    if len(ok) > 1:
        raise ValueError("pairing does not determine n")
    return ok[0]


def table_consistent(lat: Lattice, n: int) -> bool:
    """Check 2B = C1 + C2 + n ell row-wise against the stored table."""
    if lat.id != "CP3_L11":
        return True
    rows = lat.pairings
    return all(2 * rows["B"][j] == rows["C1"][j] + rows["C2"][j] + n * ELL_ROW_CP3[j]
               for j in range(len(lat.divisors)))


# ---------------------------------------------------------- superpotential

# monomials of W as exponent vectors in (x, y, z), indexed by the sign slot
MONOMIALS = ((1, 0, -1), (1, -1, -1), (-1, 1, -1), (-1, 0, -1), (0, 0, 1))


@dataclass(frozen=True)
class SignVector:
    eps: tuple

    def __post_init__(self):
        if len(self.eps) != 5 or any(e not in (-1, 1) for e in self.eps):
            raise ValueError("sign vectors have five entries in {-1, +1}")

    @classmethod
    def parse(cls, text: str) -> "SignVector":
        return cls(tuple(int(t + "1") if t in "+-" else int(t) for t in text.replace(" ", "").split(",")))

    def __str__(self) -> str:
        return ",".join("+" if e > 0 else "-" for e in self.eps)


ALL_PLUS = SignVector((1, 1, 1, 1, 1))


def all_sign_vectors() -> list[SignVector]:
    return [SignVector(e) for e in itertools.product((1, -1), repeat=5)]


def _check_point(p):
    p = tuple(complex(v) for v in p)
    if any(v == 0 for v in p):
        raise ValueError("character coordinates must be nonzero")
    return p


def _terms(signs: SignVector, p) -> np.ndarray:
    x, y, z = _check_point(p)
    return np.array([e * x**a * y**b * z**c for e, (a, b, c) in zip(signs.eps, MONOMIALS)])


def superpotential_eval(signs: SignVector, p) -> complex:
    return complex(np.sum(_terms(signs, p)))


def superpotential_grad(signs: SignVector, p) -> np.ndarray:
    """(x dW/dx, y dW/dy, z dW/dz)."""
    t = _terms(signs, p)
    return np.array(MONOMIALS, dtype=float).T @ t


def _log_hessian(signs: SignVector, p) -> np.ndarray:
    t = _terms(signs, p)
    e = np.array(MONOMIALS, dtype=float)
    return (e.T * t) @ e


def closed_form_candidates(signs: SignVector) -> list[tuple]:
    e1, e2, e3, e4, e5 = signs.eps
    out = []
    for x in (cmath.sqrt(e1 * e4), -cmath.sqrt(e1 * e4)):
        for y in (cmath.sqrt(e1 * e2 * e3 * e4), -cmath.sqrt(e1 * e2 * e3 * e4)):
            if abs(y + e1 * e2) < 1e-12:
                continue  # z would vanish
            z2 = 2 * e4 * e5 * (y + e1 * e2) / (x * y)
            for z in (cmath.sqrt(z2), -cmath.sqrt(z2)):
                out.append((x, y, z))
    return out


def newton_polish(signs: SignVector, p, iters: int = 20) -> tuple:
    """Damped Newton on the log gradient in log coordinates."""
    logs = np.log(np.array(_check_point(p), dtype=complex))
    g = superpotential_grad(signs, np.exp(logs))
    for _ in range(iters):
        if np.linalg.norm(g) <= 1e-15:
            break
        step = np.linalg.solve(_log_hessian(signs, np.exp(logs)), -g)
        lam = 1.0
        while lam > 1e-4:
            trial = logs + lam * step
            gt = superpotential_grad(signs, np.exp(trial))
            if np.linalg.norm(gt) < np.linalg.norm(g):
                break
            lam /= 2
        else:
            break
        logs, g = trial, gt
    return tuple(complex(v) for v in np.exp(logs))


def critical_points(signs: SignVector) -> list[tuple]:
    return [newton_polish(signs, c) for c in closed_form_candidates(signs)]


def expected_count(signs: SignVector) -> int:
    e1, e2, e3, e4, _ = signs.eps
    y_roots = 1 if e1 * e2 * e3 * e4 == 1 else 2
    return 2 * y_roots * 2


def grid_critical_count(signs: SignVector, n: int = 256) -> int:
    """Independent count: minima of the (x, y)-gradient numerators on the |x| = |y| = 1 torus.

    z is eliminated (z^2 = S / eps5 has two roots whenever S != 0).
    """
    e1, e2, e3, e4, e5 = signs.eps
    a = np.linspace(0, 2 * np.pi, n, endpoint=False)
    X, Y = np.exp(1j * a)[:, None], np.exp(1j * a)[None, :]

    def numerators(x, y):
        nx = e1 * x + e2 * x / y - e3 * y / x - e4 / x
        ny = -e2 * x / y + e3 * y / x
        return nx, ny

    nx, ny = numerators(X, Y)
    g = np.abs(nx) ** 2 + np.abs(ny) ** 2
    is_min = np.ones_like(g, bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di or dj:
                is_min &= g <= np.roll(np.roll(g, di, 0), dj, 1)
    found = []
    for i, j in zip(*np.nonzero(is_min & (g < 0.5))):
        # polish the angles with a few Newton steps on the real 2x2 system
        th = np.array([a[i], a[j]])
        for _ in range(50):
            x, y = np.exp(1j * th[0]), np.exp(1j * th[1])
            f0 = np.array(numerators(x, y))
            h = 1e-7
            J = np.zeros((4, 2))
            for k in range(2):
                d = np.zeros(2); d[k] = h
                fp = np.array(numerators(np.exp(1j * (th + d)[0]), np.exp(1j * (th + d)[1])))
                J[:, k] = np.concatenate([(fp - f0).real, (fp - f0).imag]) / h
            step = np.linalg.lstsq(J, -np.concatenate([f0.real, f0.imag]), rcond=None)[0]
            th = th + step
            if np.linalg.norm(step) < 1e-14:
                break
        x, y = np.exp(1j * th[0]), np.exp(1j * th[1])
        if np.linalg.norm(numerators(x, y)) > 1e-9:
            continue
        s_val = e1 * x + e2 * x / y + e3 * y / x + e4 / x
        if abs(s_val) < 1e-9:
            continue
        if not any(abs(x - u) < 1e-6 and abs(y - v) < 1e-6 for u, v in found):
            found.append((x, y))
    return 2 * len(found)


def monomial_has_critical_points(exponent: Iterable[int]) -> bool:
    """A single Laurent monomial c t^e has log-gradient c t^e e: critical iff e = 0."""
    return all(e == 0 for e in exponent)


def flip_identities(signs: SignVector, p) -> dict:
    """Residuals of the coordinate sign-flip identities of W.

    x -> -x flips eps1..eps4, y -> -y flips eps2 and eps3, and both together
    flip eps1 and eps4.
    """
    x, y, z = _check_point(p)
    e = np.array(signs.eps)

    def flipped(idx):
        f = e.copy()
        f[list(idx)] *= -1
        return SignVector(tuple(int(v) for v in f))

    w = superpotential_eval
    return {
        "x": abs(w(signs, (-x, y, z)) - w(flipped((0, 1, 2, 3)), (x, y, z))),
        "y": abs(w(signs, (x, -y, z)) - w(flipped((1, 2)), (x, y, z))),
        "xy": abs(w(signs, (-x, -y, z)) - w(flipped((0, 3)), (x, y, z))),
    }
