"""Complex affine lines and hyperplanes, the Moebius disc image and the slope discs of G_2.

Hyperplane certificates use the normal form {w : p_w(lam) = 0}: every point of
such a hyperplane is the coefficient vector of a polynomial that vanishes at
``lam``, so it cannot lie in G_n once |lam| >= 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import tolerances
from .polynomial import Verdict, roots, sorted_by_modulus
from .symdisc import SymPoint, membership


class DegenerateLine(ValueError):
    pass


class NotUnimodular(ValueError):
    pass


class BetaInsideDisc(ValueError):
    pass


class OutsideDisc(ValueError):
    pass


class InsidePoint(ValueError):
    pass


def _vec(p) -> np.ndarray:
    if isinstance(p, SymPoint):
        return p.array()
    return np.atleast_1d(np.asarray(p, dtype=complex))


@dataclass(frozen=True)
class ComplexLine:
    base: np.ndarray
    dir: np.ndarray

    def __post_init__(self) -> None:
        base, d = _vec(self.base), _vec(self.dir)
        if base.shape != d.shape:
            raise ValueError("base and direction must have the same dimension")
        if np.linalg.norm(d) <= 1e-12:
            raise DegenerateLine("direction vector is zero")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "dir", d)

    @property
    def dim(self) -> int:
        return self.base.shape[0]

    def at(self, lam):
        """Point(s) base + lam*dir; an array of lam gives shape lam.shape + (n,)."""
        lam = np.asarray(lam, dtype=complex)
        return self.base + lam[..., None] * self.dir


@dataclass(frozen=True)
class ComplexHyperplane:
    """The locus sum_k normal[k] * w[k] = offset."""

    normal: np.ndarray
    offset: complex

    def __post_init__(self) -> None:
        normal = _vec(self.normal)
        if not np.any(normal):
            raise ValueError("hyperplane normal must be nonzero")
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", complex(self.offset))

    @property
    def dim(self) -> int:
        return self.normal.shape[0]

    def sample(self, rng: np.random.Generator, count: int, spread: float = 2.0) -> np.ndarray:
        """Random points of the hyperplane, shape (count, n).

        All coordinates but one are complex Gaussian; the one with the largest
        normal coefficient is solved for.
        """
        k = int(np.argmax(np.abs(self.normal)))
        w = spread * (rng.standard_normal((count, self.dim)) + 1j * rng.standard_normal((count, self.dim)))
        rest = w @ self.normal - w[:, k] * self.normal[k]
        w[:, k] = (self.offset - rest) / self.normal[k]
        return w


@dataclass(frozen=True)
class Disc:
    center: complex
    radius: float
    open: bool = True

    def __post_init__(self) -> None:
        if self.radius < 0:
            raise ValueError("radius must be nonnegative")

    def contains(self, w, margin: float = 0.0):
        """Pointwise containment; a positive margin tolerates points just outside."""
        d = np.abs(np.asarray(w) - self.center)
        if self.open:
            return d < self.radius + margin
        return d <= self.radius + margin


def line_through(p, q) -> ComplexLine:
    p, q = _vec(p), _vec(q)
    if np.linalg.norm(q - p) <= 1e-12:
        raise DegenerateLine("points coincide")
    return ComplexLine(p, q - p)


def tangent_line_regular(mu1: complex) -> ComplexLine:
    """{pi_2(mu1, lam) : lam in C} for a unimodular mu1."""
    if abs(abs(mu1) - 1.0) > tolerances.current().boundary:
        raise NotUnimodular(f"|mu1| = {abs(mu1)} is not 1")
    return ComplexLine(np.array([mu1, 0]), np.array([1, mu1]))


def mobius_disc_image(alpha: complex, beta: complex) -> Disc:
    """Image of the unit disc under z -> (z - alpha)/(z - beta), |beta| > 1."""
    if abs(beta) <= 1.0 + tolerances.current().boundary:
        raise BetaInsideDisc(f"|beta| = {abs(beta)} must exceed 1")
    b2 = abs(beta) ** 2
    return Disc((1 - alpha * np.conj(beta)) / (1 - b2), abs(alpha - beta) / (b2 - 1))


def mobius(alpha: complex, beta: complex, z):
    return (z - alpha) / (z - beta)


def _check_in_disc(*lams: complex) -> None:
    eps = tolerances.current().boundary
    for lam in lams:
        if abs(lam) >= 1.0 - eps:
            raise OutsideDisc(f"|{lam}| is not inside the unit disc")


def bad_slope(lam1: complex, lam2: complex, x: float) -> complex:
    """Slope of the line through pi_2(mu) (mu1 + mu2 = 2x, mu1 mu2 = 1) and pi_2(lam1, lam2)."""
    _check_in_disc(lam1, lam2)
    return (lam1 + lam2 - 2 * x) / (lam1 * lam2 - 1)


def slope_disc(lam1: complex, x: float) -> Disc:
    """The disc swept by bad_slope(lam1, ., x) as the second argument runs over the unit disc."""
    _check_in_disc(lam1)
    d = 1 - abs(lam1) ** 2
    return Disc(complex((2 * x - 2 * np.real(lam1)) / d), abs(2 * x * lam1 - lam1 ** 2 - 1) / d)


def slope_disc_arrays(lam1: np.ndarray, x: float) -> tuple[np.ndarray, np.ndarray]:
    """Centers and radii of slope_disc for an array of lam1."""
    lam1 = np.asarray(lam1, dtype=complex)
    d = 1 - np.abs(lam1) ** 2
    return (2 * x - 2 * lam1.real) / d, np.abs(2 * x * lam1 - lam1 ** 2 - 1) / d


def certificate_root(z: SymPoint) -> complex:
    """Largest-modulus root of p_z (ties: smallest argument)."""
    return sorted_by_modulus(roots(z.associated_poly()))[0]


def root_hyperplane(lam: complex, n: int) -> ComplexHyperplane:
    """{w in C^n : p_w(lam) = 0}."""
    k = np.arange(1, n + 1)
    return ComplexHyperplane((-1.0) ** k * lam ** (n - k), -(lam ** n))


def separating_hyperplane(z: SymPoint) -> tuple[ComplexHyperplane, complex]:
    """A complex hyperplane through ``z`` missing G_n, with its root witness.

    Raises InsidePoint if ``z`` lies in G_n.
    """
    if membership(z) is Verdict.INSIDE:
        raise InsidePoint("points of G_n admit no separating hyperplane")
    lam = certificate_root(z)
    return root_hyperplane(lam, z.dim), lam


def parametric_hyperplane_points(lam: complex, w: np.ndarray) -> np.ndarray:
    """(lam + w1, lam w1 + w2, ..., lam w_{n-1}) for rows w of shape (m, n-1)."""
    w = np.atleast_2d(np.asarray(w, dtype=complex))
    m, k = w.shape
    out = np.zeros((m, k + 1), dtype=complex)
    out[:, :k] += w
    out[:, 0] += lam
    out[:, 1:] += lam * w
    return out


def hyperplane_contains(H: ComplexHyperplane, w) -> bool:
    w = _vec(w)
    lhs = complex(np.dot(H.normal, w))
    slack = tolerances.current().plane * (1 + np.abs(H.normal).max() * np.abs(w).max())
    return abs(lhs - H.offset) <= slack


def hyperplane_residuals(H: ComplexHyperplane, w: np.ndarray) -> np.ndarray:
    return np.abs(np.asarray(w) @ H.normal - H.offset)


def points_on_line_outside(line: ComplexLine, lams: Sequence[complex]) -> bool:
    """True if no parameter in ``lams`` gives a point of G_n."""
    return all(membership(SymPoint(tuple(line.at(l)))) is not Verdict.INSIDE for l in lams)
