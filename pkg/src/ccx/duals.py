"""Balanced domains, their dual complements and biduals.

For an open balanced domain D = {q < 1} the pairing values <z, w> over D fill
the open disc of radius s(w) = sup_{z in D} |<z, w>|, so

    D* = {w : <z, w> != 1 for all z in D} = {w : s(w) <= 1}.

D* is again balanced with gauge s, which is a seminorm whether or not D is
convex. The pairing is bilinear: <z, w> = sum z_k w_k.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import tolerances
from .polynomial import Verdict

Gauge = Callable[[np.ndarray], np.ndarray]


class NumericalFailure(ArithmeticError):
    pass


def pairing(z, w):
    """Bilinear pairing along the last axis."""
    return np.sum(np.asarray(z) * np.asarray(w), axis=-1)


def _pnorm(p: float) -> Gauge:
    def gauge(z):
        a = np.abs(np.asarray(z, dtype=complex))
        return np.sum(a ** p, axis=-1) ** (1.0 / p)

    return gauge


def _maxnorm(z):
    return np.max(np.abs(np.asarray(z, dtype=complex)), axis=-1)


def _l1norm(z):
    return np.sum(np.abs(np.asarray(z, dtype=complex)), axis=-1)


def _l2norm(z):
    return np.linalg.norm(np.asarray(z, dtype=complex), axis=-1)


@dataclass(frozen=True)
class BalancedDomain:
    """{z : gauge(z) < 1} (open) or {z : gauge(z) <= 1} (closed).

    ``gauge`` must be vectorised over the last axis and absolutely homogeneous.
    """

    dim: int
    gauge: Gauge = field(repr=False)
    kind: str = "custom"
    p: float | None = None
    is_open: bool = True

    def q(self, z):
        return self.gauge(np.asarray(z, dtype=complex))

    def contains(self, z) -> Verdict:
        return _band(float(self.q(z)))


def polydisc(n: int) -> BalancedDomain:
    return BalancedDomain(n, _maxnorm, "polydisc")


def euclidean_ball(n: int) -> BalancedDomain:
    return BalancedDomain(n, _l2norm, "euclidean_ball")


def p_quasiball(n: int, p: float) -> BalancedDomain:
    """{(sum |z_k|^p)^(1/p) < 1}; not convex for p < 1."""
    if p <= 0:
        raise ValueError("p must be positive")
    g = _l1norm if p == 1 else _pnorm(p)
    return BalancedDomain(n, g, "p_quasiball", p=p)


def custom(n: int, gauge: Gauge) -> BalancedDomain:
    return BalancedDomain(n, gauge, "custom")


def closed_form_support(D: BalancedDomain) -> Gauge | None:
    """Support function of a catalog domain, or None for custom ones."""
    if D.kind == "polydisc":
        return _l1norm
    if D.kind == "euclidean_ball":
        return _l2norm
    if D.kind == "p_quasiball":
        if D.p <= 1:
            return _maxnorm
        return _pnorm(D.p / (D.p - 1.0))
    return None


# Numerical support -------------------------------------------------------------


def _complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _unit(u: np.ndarray) -> np.ndarray:
    return u / np.linalg.norm(u, axis=-1, keepdims=True)


def _candidates(u: np.ndarray, sigma: np.ndarray, rng: np.random.Generator, lam: int) -> np.ndarray:
    """Trial directions around each chain, shape (chains, lam, n).

    A third are isotropic Gaussian steps; the rest rotate the phase or rescale
    the modulus of one coordinate, which keeps the other moduli fixed and lets
    the search slide along the ridges of max-type gauges.
    """
    c, n = u.shape
    third = lam // 3
    rest = lam - third
    iso = u[:, None, :] + sigma[:, None, None] * _complex_normal(rng, (c, third, n))
    coord = rng.integers(0, n, size=(c, rest))
    onehot = np.arange(n) == coord[..., None]
    amount = sigma[:, None] * rng.standard_normal((c, rest))
    factor = np.where(np.arange(rest) < rest // 2, np.exp(1j * amount), np.exp(amount))
    local = np.where(onehot, u[:, None, :] * factor[..., None], u[:, None, :])
    return _unit(np.concatenate([iso, local], axis=1))


def numeric_support(
    gauge: Gauge,
    w: np.ndarray,
    starts: int = 32,
    samples: int = 4096,
    seed: int = 0,
    xtol: float = 1e-13,
    max_iter: int = 2000,
    warmup: int = 50,
    survivors: int = 4,
) -> np.ndarray:
    """sup |<u, w>| / gauge(u) over directions u, for each row of ``w``.

    Coarse sampling picks the best ``starts`` directions per row, which are
    then refined by a multi-start (1+12) evolution strategy on the unit sphere
    until the step size drops below ``xtol``; after ``warmup`` iterations only
    the ``survivors`` best chains of each row keep climbing. An independent
    sample batch cross-checks the result.
    """
    w = np.atleast_2d(np.asarray(w, dtype=complex))
    m, n = w.shape
    rng = np.random.default_rng(seed)

    dirs = _unit(_complex_normal(rng, (samples, n)))
    coarse = np.abs(w @ dirs.T) / gauge(dirs)[None, :]
    k = min(starts, samples)
    top = np.argpartition(-coarse, k - 1, axis=1)[:, :k]
    row = np.repeat(np.arange(m), k)
    u = dirs[top.ravel()]
    f = np.abs(np.sum(u * w[row], axis=-1)) / gauge(u)
    sigma = np.full(row.shape, 0.2)
    lam = 12
    for it in range(max_iter):
        if it == warmup:
            # keep the ``survivors`` best chains of each row
            rank = np.argsort(np.argsort(-f.reshape(m, k), axis=1), axis=1).ravel()
            sigma = np.where(rank < survivors, sigma, 0.0)
        idx = np.flatnonzero(sigma > xtol)
        if idx.size == 0:
            break
        cand = _candidates(u[idx], sigma[idx], rng, lam)
        fc = np.abs(np.sum(cand * w[row[idx]][:, None, :], axis=-1)) / gauge(cand)
        best = np.argmax(fc, axis=1)
        fbest = fc[np.arange(idx.size), best]
        win = fbest > f[idx]
        u[idx[win]] = cand[np.flatnonzero(win), best[win]]
        f[idx[win]] = fbest[win]
        sigma[idx] = np.where(win, np.minimum(sigma[idx] * 1.5, 0.5), sigma[idx] * 0.8)
    result = np.full(m, -np.inf)
    np.maximum.at(result, row, f)

    check_dirs = _unit(_complex_normal(np.random.default_rng(seed + 1), (samples, n)))
    check = (np.abs(w @ check_dirs.T) / gauge(check_dirs)[None, :]).max(axis=1)
    gap = check - result
    if np.any(gap > 1e-4 * np.maximum(1.0, result)):
        raise NumericalFailure(f"ascent stalled {gap.max():.3e} below dense sampling")
    return result


@dataclass(frozen=True)
class SupportValue:
    w: tuple[complex, ...]
    s: float
    attained: bool = False


def support_values(D: BalancedDomain, w, method: str = "auto", **kw) -> np.ndarray:
    """Vectorised support function over rows of ``w``."""
    w = np.asarray(w, dtype=complex)
    closed = closed_form_support(D)
    if method == "closed" or (method == "auto" and closed is not None):
        if closed is None:
            raise ValueError(f"no closed form for {D.kind} domains")
        return closed(w)
    if method not in ("auto", "numeric"):
        raise ValueError(f"unknown method {method!r}")
    flat = w.reshape(-1, D.dim)
    out = np.zeros(flat.shape[0])
    nz = np.any(flat != 0, axis=1)
    if nz.any():
        out[nz] = numeric_support(D.gauge, flat[nz], **kw)
    return out.reshape(w.shape[:-1])


def support(D: BalancedDomain, w, method: str = "auto", **kw) -> SupportValue:
    w = np.asarray(w, dtype=complex)
    s = float(support_values(D, w[None, :], method, **kw)[0])
    # a closed, bounded domain attains its supremum
    return SupportValue(tuple(complex(x) for x in w), s, attained=not D.is_open)


def dual_domain(D: BalancedDomain) -> BalancedDomain:
    """D* as a balanced domain; the dual of an open domain is closed and vice versa."""
    is_open = not D.is_open
    if D.kind == "polydisc":
        return BalancedDomain(D.dim, _l1norm, "p_quasiball", p=1.0, is_open=is_open)
    if D.kind == "euclidean_ball":
        return BalancedDomain(D.dim, _l2norm, "euclidean_ball", is_open=is_open)
    if D.kind == "p_quasiball" and D.p <= 1:
        return BalancedDomain(D.dim, _maxnorm, "polydisc", is_open=is_open)
    if D.kind == "p_quasiball":
        q = D.p / (D.p - 1.0)
        return BalancedDomain(D.dim, _pnorm(q), "p_quasiball", p=q, is_open=is_open)

    def gauge(w):
        return support_values(D, w, method="numeric")

    return BalancedDomain(D.dim, gauge, "custom", is_open=is_open)


def _band(s: float) -> Verdict:
    eps = tolerances.current().boundary
    if s < 1.0 - eps:
        return Verdict.INSIDE
    if s > 1.0 + eps:
        return Verdict.OUTSIDE
    return Verdict.BOUNDARY


def dual_membership(D: BalancedDomain, w) -> Verdict:
    """Whether <z, w> avoids 1 on D. BOUNDARY means s(w) is within tolerance of 1."""
    return _band(support(D, w).s)


def bidual_membership(D: BalancedDomain, z) -> Verdict:
    """Whether <z, w> avoids 1 for every w in D*, i.e. z in D**."""
    return _band(support(dual_domain(D), z).s)


@dataclass(frozen=True)
class ConvexityViolation:
    w1: tuple[complex, ...]
    w2: tuple[complex, ...]
    t: float
    value: float  # gauge at the convex combination


def sample_domain(D: BalancedDomain, rng: np.random.Generator, count: int) -> np.ndarray:
    """Points with gauge <= 1: random direction rescaled to a random gauge level."""
    u = _complex_normal(rng, (count, D.dim))
    level = rng.random(count) ** (1.0 / (2 * D.dim))
    return u * (level / D.gauge(u))[:, None]


def convexity_probe(D: BalancedDomain, m: int, rng: np.random.Generator, slack: float = 1e-6) -> list[ConvexityViolation]:
    """Random chords of {gauge <= 1} whose sampled point leaves the set."""
    if m < 1:
        raise ValueError("need at least one sample")
    w1 = sample_domain(D, rng, m)
    w2 = sample_domain(D, rng, m)
    t = rng.uniform(0.0, 1.0, m)
    mid = t[:, None] * w1 + (1 - t)[:, None] * w2
    vals = D.gauge(mid)
    bad = np.flatnonzero(vals > 1.0 + slack)
    return [
        ConvexityViolation(tuple(w1[i]), tuple(w2[i]), float(t[i]), float(vals[i]))
        for i in bad
    ]


def bidual_gap_witnesses(D: BalancedDomain, rng: np.random.Generator, count: int, excess: float = 0.1) -> np.ndarray:
    """Sampled points in D** whose gauge exceeds 1 + excess (so they miss D)."""
    dd = dual_domain(dual_domain(D))
    u = _complex_normal(rng, (count, D.dim))
    z = u * (rng.uniform(0.0, 1.0 - 1e-3, count) / dd.gauge(u))[:, None]
    keep = D.gauge(z) > 1.0 + excess
    return z[keep]
