"""The symmetrized polydisc G_n = pi_n(D^n).

A point z = (z_1, ..., z_n) is identified with the monic polynomial
w^n - z_1 w^(n-1) + z_2 w^(n-2) - ... + (-1)^n z_n, whose roots are the
preimages mu under the symmetrization map. Hence z lies in G_n exactly when
all of those roots lie in the open unit disc.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import tolerances
from .polynomial import MonicPolynomial, Verdict, max_root_modulus, roots, schur_codes, schur_inside_disc


class DomainError(ValueError):
    pass


class Ambiguous(ValueError):
    """A root modulus sits on the edge of the boundary band."""


@dataclass(frozen=True)
class SymPoint:
    coords: tuple[complex, ...]

    def __post_init__(self) -> None:
        coords = tuple(complex(c) for c in self.coords)
        if not coords:
            raise ValueError("SymPoint needs at least one coordinate")
        object.__setattr__(self, "coords", coords)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __getitem__(self, k: int) -> complex:
        return self.coords[k]

    def __iter__(self):
        return iter(self.coords)

    def array(self) -> np.ndarray:
        return np.array(self.coords, dtype=complex)

    def associated_poly(self) -> MonicPolynomial:
        return MonicPolynomial(tuple((-1) ** k * zk for k, zk in enumerate(self.coords, start=1)))

    def padded(self, n: int) -> "SymPoint":
        if n < self.dim:
            raise ValueError("cannot pad to a smaller dimension")
        return SymPoint(self.coords + (0j,) * (n - self.dim))


def vieta_signs(n: int) -> np.ndarray:
    return (-1.0) ** np.arange(1, n + 1)


def sym(mu: Sequence[complex]) -> SymPoint:
    """Elementary symmetric functions of ``mu``, by multiplying out prod (w - mu_j)."""
    return SymPoint(tuple(sym_array(np.asarray(mu, dtype=complex))))


def sym_array(mu: np.ndarray) -> np.ndarray:
    """Batched symmetrization: shape (..., n) -> (..., n)."""
    mu = np.asarray(mu, dtype=complex)
    n = mu.shape[-1]
    e = np.zeros(mu.shape[:-1] + (n + 1,), dtype=complex)
    e[..., 0] = 1.0
    for j in range(n):
        m = mu[..., j : j + 1]
        e[..., 1 : j + 2] = e[..., 1 : j + 2] + m * e[..., 0 : j + 1]
    return e[..., 1:]


def membership(z: SymPoint) -> Verdict:
    return schur_inside_disc(z.associated_poly()).verdict


def inside_mask(z: np.ndarray) -> np.ndarray:
    """Strict interior test for a batch of points, shape (..., n) -> bool.

    Near-boundary points (within the boundary band) count as outside.
    """
    z = np.asarray(z, dtype=complex)
    c = z * vieta_signs(z.shape[-1])
    return schur_codes(c, 1.0 - tolerances.current().boundary) == 1


class BoundaryKind(enum.Enum):
    INTERIOR = "interior"
    REGULAR = "regular"
    NONREGULAR = "nonregular"
    EXTERIOR = "exterior"


@dataclass(frozen=True)
class BoundaryClass:
    kind: BoundaryKind
    roots: tuple[complex, ...] = ()  # unimodular root first for REGULAR


def classify_boundary_G2(z: SymPoint) -> BoundaryClass:
    if z.dim != 2:
        raise ValueError("classify_boundary_G2 expects a point of C^2")
    eps = tolerances.current().boundary
    rs = roots(z.associated_poly())
    for r in rs:
        gap = abs(abs(abs(r) - 1.0) - eps)
        if gap <= 1e-3 * eps:
            raise Ambiguous(f"root modulus {abs(r)!r} is on the boundary band edge")
    on = [r for r in rs if abs(abs(r) - 1.0) <= eps]
    inner = [r for r in rs if abs(r) < 1.0 - eps]
    if len(inner) == 2:
        return BoundaryClass(BoundaryKind.INTERIOR, tuple(rs))
    if len(on) == 2:
        return BoundaryClass(BoundaryKind.NONREGULAR, tuple(on))
    if len(on) == 1 and len(inner) == 1:
        return BoundaryClass(BoundaryKind.REGULAR, (on[0], inner[0]))
    return BoundaryClass(BoundaryKind.EXTERIOR, tuple(rs))


def rho(lam: complex, z: SymPoint) -> SymPoint:
    """Quasi-homogeneous scaling: z_k -> lam**k z_k."""
    return SymPoint(tuple(lam ** k * zk for k, zk in enumerate(z.coords, start=1)))


def h(z: SymPoint) -> float:
    """Largest modulus among the symmetrization preimages of ``z``."""
    return max_root_modulus(z.associated_poly())


def g(z: SymPoint) -> float:
    hz = h(z)
    if hz >= 1.0:
        raise DomainError(f"g is only defined on G_n, got h = {hz}")
    return 1.0 / (1.0 - hz)


def homeo(z: SymPoint) -> SymPoint:
    """The homeomorphism G_n -> C^n, z -> rho(g(z), z)."""
    hz = h(z)
    if hz >= 1.0 - tolerances.current().boundary:
        raise DomainError(f"point is not inside G_n (h = {hz})")
    return rho(1.0 / (1.0 - hz), z)


def homeo_inv(w: SymPoint) -> SymPoint:
    # h(rho(lam, z)) = |lam| h(z) gives the closed-form inverse
    return rho(1.0 / (1.0 + h(w)), w)


def starlike_profile(z: SymPoint, m: int) -> list[Verdict]:
    """Membership verdicts along the segment s*z, s = k/(m-1)."""
    if m < 2:
        raise ValueError("need m >= 2 samples")
    base = z.array()
    return [membership(SymPoint(tuple(s * base))) for s in np.linspace(0.0, 1.0, m)]


def starlike_violations(points: np.ndarray, m: int) -> int:
    """How many rows z of ``points`` have some s*z (s on an m-point grid of [0, 1]) not inside G_n."""
    s = np.linspace(0.0, 1.0, m)
    seg = s[None, :, None] * np.asarray(points, dtype=complex)[:, None, :]
    return int((~inside_mask(seg)).any(axis=1).sum())


def find_starlike_violation(
    n: int, radii: Sequence[float] = (0.9, 0.99, 0.999), m: int = 201
) -> tuple[float, float] | None:
    """First (r, s) with s*sym(r, r, r, 0, ...) outside G_n although sym(r, r, r, 0, ...) is inside.

    Returns None if no violation shows up on the grid (expected for n = 2).
    """
    k = min(n, 3)
    for r in radii:
        z = sym([r] * k + [0.0] * (n - k))
        for s, v in zip(np.linspace(0.0, 1.0, m), starlike_profile(z, m)):
            if v is Verdict.OUTSIDE:
                return float(r), float(s)
    return None


def sample_disc(rng: np.random.Generator, size, radius: float = 1.0) -> np.ndarray:
    """Area-uniform samples from the open disc of the given radius."""
    r = radius * np.sqrt(rng.random(size))
    return r * np.exp(2j * np.pi * rng.random(size))


def sample_interior(rng: np.random.Generator, n: int, count: int) -> np.ndarray:
    """Interior points of G_n as a (count, n) array, pushed forward from D^n."""
    return sym_array(sample_disc(rng, (count, n)))


# The disconnected slices of G_n, n >= 3 ----------------------------------------


def _check_t_n(t: float, n: int) -> None:
    if n < 3:
        raise ValueError("the construction needs n >= 3")
    if not 0.0 < t < 1.0:
        raise ValueError("t must lie in (0, 1)")


def counterexample_points(t: float, n: int = 3) -> tuple[SymPoint, SymPoint]:
    """a_t = sym(t, t, t, 0, ...) and b_t = sym(-t, -t, -t, 0, ...)."""
    _check_t_n(t, n)
    pad = (0j,) * (n - 3)
    a = SymPoint((3 * t, 3 * t * t, t ** 3) + pad)
    b = SymPoint((-3 * t, 3 * t * t, -(t ** 3)) + pad)
    return a, b


def c_t_lambda(t: float, lam: complex, n: int = 3) -> SymPoint:
    """The point of the line through a_t (lam = 0) and b_t (lam = 1)."""
    _check_t_n(t, n)
    return SymPoint((3 * t * (1 - 2 * lam), 3 * t * t, t ** 3 * (1 - 2 * lam)) + (0j,) * (n - 3))


@dataclass(frozen=True)
class MidlineResult:
    verdict: Verdict
    bound: float              # t**2 must stay below this for the point to be inside
    analytically_excluded: bool


def midline_exclusion(t: float, tau: float, n: int = 3) -> MidlineResult:
    """Membership of c_{t, 1/2 + i tau}, the point midway between a_t and b_t in the real direction."""
    z = c_t_lambda(t, 0.5 + 1j * tau, n)
    bound = 3.0 / (36.0 * tau * tau + 6.0)
    return MidlineResult(membership(z), bound, t * t >= bound)


SQRT_HALF = math.sqrt(0.5)
