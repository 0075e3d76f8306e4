"""Monic complex polynomials, simultaneous root finding and unit-disc root location.

Coefficients are stored without the leading 1:
``MonicPolynomial((c1, ..., cn))`` is ``w**n + c1*w**(n-1) + ... + cn``.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import tolerances

MAX_ITER = 200
_START_ANGLE = 0.4  # rotates the initial circle off the real axis


class NonConvergence(ArithmeticError):
    """Aberth iteration failed to reach the residual tolerance."""


class Verdict(enum.Enum):
    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class RootLocation:
    verdict: Verdict
    max_modulus: float | None = None  # only filled when roots were actually computed


@dataclass(frozen=True)
class MonicPolynomial:
    coeffs: tuple[complex, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(complex(c) for c in self.coeffs)
        if not coeffs:
            raise ValueError("a monic polynomial needs degree >= 1")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_roots(cls, roots: Iterable[complex]) -> "MonicPolynomial":
        full = [1 + 0j]
        for r in roots:
            nxt = full + [0j]
            for k in range(1, len(nxt)):
                nxt[k] -= r * full[k - 1]
            full = nxt
        return cls(tuple(full[1:]))

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def scale(self) -> float:
        return max(1.0, max(abs(c) for c in self.coeffs))

    def full_coeffs(self) -> np.ndarray:
        """Descending coefficient array including the leading 1."""
        return np.array((1 + 0j,) + self.coeffs, dtype=complex)

    def __call__(self, w):
        return eval_poly(self, w)


def eval_poly(p: MonicPolynomial, w):
    """Horner evaluation; ``w`` may be a scalar or a numpy array."""
    acc = w * 0 + 1
    for c in p.coeffs:
        acc = acc * w + c
    return acc


def _residual_bound(p: MonicPolynomial, z: np.ndarray) -> np.ndarray:
    tol = tolerances.current().residual
    return tol * p.scale() * np.maximum(1.0, np.abs(z)) ** p.degree


def roots(p: MonicPolynomial) -> list[complex]:
    """All roots with multiplicity, by Aberth-Ehrlich iteration.

    Raises NonConvergence if some root still has a residual above the
    rounding-aware bound after MAX_ITER sweeps.
    """
    # exact zero trailing coefficients are roots at the origin; split them off
    zeros = 0
    while zeros < p.degree and p.coeffs[p.degree - 1 - zeros] == 0:
        zeros += 1
    if zeros:
        rest = roots(MonicPolynomial(p.coeffs[: p.degree - zeros])) if zeros < p.degree else []
        return rest + [0j] * zeros
    n = p.degree
    if n == 1:
        return [-p.coeffs[0]]
    a = p.full_coeffs()
    da = a[:-1] * np.arange(n, 0, -1)
    radius = 1.0 + max(abs(c) ** (1.0 / k) for k, c in enumerate(p.coeffs, start=1))
    z = radius * np.exp(1j * (2 * np.pi * np.arange(n) / n + _START_ANGLE))
    eye = np.eye(n, dtype=bool)
    eps = np.finfo(float).eps
    for _ in range(MAX_ITER):
        pv = np.polyval(a, z)
        dv = np.polyval(da, z)
        diff = z[:, None] - z[None, :]
        diff[eye] = 1.0
        inv = 1.0 / diff
        inv[eye] = 0.0
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = pv / dv
            corr = ratio / (1.0 - ratio * inv.sum(axis=1))
        corr = np.where(pv == 0, 0, corr)
        if not np.all(np.isfinite(corr)):
            # coincident iterates; nudge and continue
            corr = np.where(np.isfinite(corr), corr, 1e-8 * radius)
        z = z - corr
        if np.all(np.abs(corr) <= 4 * eps * np.maximum(1.0, np.abs(z))):
            break
    res = np.abs(np.polyval(a, z))
    if not np.all(res <= _residual_bound(p, z)) or not np.all(np.isfinite(z)):
        raise NonConvergence(f"Aberth residual {res.max():.3e} above tolerance for {p}")
    return [complex(r) for r in z]


def max_root_modulus(p: MonicPolynomial) -> float:
    return max(abs(r) for r in roots(p))


# Schur-Cohn recursion -------------------------------------------------------

_IN, _UNDECIDED, _OUT = 1, 0, -1


def schur_codes(coeffs: np.ndarray, radius: float = 1.0, pivot_tol: float | None = None) -> np.ndarray:
    """Vectorised Schur-Cohn test on the disc of the given radius.

    ``coeffs`` has shape (..., n) and holds c1..cn of monic polynomials.
    Returns an int8 array: 1 when every root has modulus < radius, -1 when some
    root has modulus > radius, 0 when a pivot fell inside the pivot tolerance
    (a root within tolerance of the circle, or a singular configuration).
    """
    if pivot_tol is None:
        pivot_tol = tolerances.current().pivot
    c = np.asarray(coeffs, dtype=complex)
    n = c.shape[-1]
    shape = c.shape[:-1]
    # p(radius * w) / radius**n keeps monicity and rescales the circle to |w| = 1;
    # one contiguous array per coefficient keeps the ufuncs on unit stride
    a = [np.ones(shape, dtype=complex)] + [c[..., k] / radius ** (k + 1) for k in range(n)]
    status = np.full(shape, _IN, dtype=np.int8)
    live = np.ones(shape, dtype=bool)
    with np.errstate(all="ignore"):  # retired entries may overflow; they are masked out
        while len(a) > 1:
            lead = np.where(live, a[0], 1.0)
            const = a[-1] / lead
            pivot = 1.0 - (const.real ** 2 + const.imag ** 2)
            out = live & (pivot < -pivot_tol)
            flat = live & (np.abs(pivot) <= pivot_tol)
            status[out] = _OUT
            status[flat] = _UNDECIDED
            live &= ~(out | flat)
            if not live.any():
                break
            m = len(a)
            a = [(a[k] - const * np.conj(a[m - 1 - k])) / lead for k in range(m - 1)]
    return status


def schur_inside_disc(p: MonicPolynomial) -> RootLocation:
    """Three-way unit-disc location of the roots of ``p`` without solving for them.

    INSIDE when every root has modulus < 1 - eps, OUTSIDE when some root has
    modulus > 1 + eps, BOUNDARY otherwise (eps is the boundary tolerance).
    """
    eps = tolerances.current().boundary
    c = np.asarray(p.coeffs, dtype=complex)
    if schur_codes(c, 1.0 - eps) == _IN:
        return RootLocation(Verdict.INSIDE)
    if schur_codes(c, 1.0 + eps) == _OUT:
        return RootLocation(Verdict.OUTSIDE)
    return RootLocation(Verdict.BOUNDARY)


def verdict_from_modulus(m: float) -> Verdict:
    eps = tolerances.current().boundary
    if m < 1.0 - eps:
        return Verdict.INSIDE
    if m > 1.0 + eps:
        return Verdict.OUTSIDE
    return Verdict.BOUNDARY


def root_location(p: MonicPolynomial) -> RootLocation:
    """Same three-way verdict as schur_inside_disc, via the root solver."""
    m = max_root_modulus(p)
    return RootLocation(verdict_from_modulus(m), m)


def principal_arg(w: complex) -> float:
    """Argument of ``w`` in [0, 2*pi)."""
    a = cmath.phase(w)
    return a + 2 * math.pi if a < 0 else a


def sorted_by_modulus(rs: Sequence[complex]) -> list[complex]:
    """Largest modulus first; ties broken by smallest argument in [0, 2*pi)."""
    return sorted(rs, key=lambda r: (-round(abs(r), 12), principal_arg(r)))
