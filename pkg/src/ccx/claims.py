"""One experiment per geometric claim, each producing a ClaimReport.

Every experiment is a pure function of its RunConfig: randomness comes from a
generator seeded by (seed, claim id), so reruns give identical metrics.
"""
from __future__ import annotations

import math
import zlib
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import duals, raster, tolerances
from .lines import (
    ComplexLine,
    bad_slope,
    hyperplane_contains,
    hyperplane_residuals,
    line_through,
    separating_hyperplane,
    slope_disc,
    slope_disc_arrays,
)
from .polynomial import Verdict
from .symdisc import (
    SQRT_HALF,
    SymPoint,
    counterexample_points,
    find_starlike_violation,
    homeo,
    homeo_inv,
    inside_mask,
    midline_exclusion,
    rho,
    sample_disc,
    sample_interior,
    starlike_violations,
    sym,
    sym_array,
)

DEFAULT_SEED = 0x5D15C0DE


@dataclass(frozen=True)
class RunConfig:
    seed: int = DEFAULT_SEED
    resolution: int = 512
    n: tuple[int, ...] = ()
    t: tuple[float, ...] = (0.71, 0.75, 0.8, 0.9)
    x: tuple[float, ...] = (-1.0, -0.5, 0.0, 0.5, 1.0)
    lines: int = 200
    samples: int | None = None
    grid: int = 64
    base: tuple[complex, ...] = ()
    dir: tuple[complex, ...] = ()

    def __post_init__(self) -> None:
        if self.resolution < 64:
            raise ValueError("resolution must be at least 64")

    def rng(self, claim: str) -> np.random.Generator:
        return np.random.default_rng([self.seed & 0xFFFFFFFFFFFFFFFF, zlib.crc32(claim.encode())])

    def resolutions(self) -> tuple[int, int]:
        return self.resolution, 2 * self.resolution

    def as_dict(self) -> dict:
        tol = tolerances.current()
        return {
            "seed": self.seed,
            "resolution": self.resolution,
            "n": list(self.n),
            "t": list(self.t),
            "x": list(self.x),
            "lines": self.lines,
            "samples": self.samples,
            "grid": self.grid,
            "base": [[z.real, z.imag] for z in self.base],
            "dir": [[z.real, z.imag] for z in self.dir],
            "tolerances": {
                "boundary": tol.boundary,
                "residual": tol.residual,
                "pivot": tol.pivot,
                "plane": tol.plane,
            },
        }


@dataclass
class Artifact:
    name: str            # file name relative to the output directory
    payload: bytes


@dataclass
class ClaimReport:
    claim: str
    passed: bool
    metrics: dict[str, float] = field(default_factory=dict)
    artifacts: list[Artifact] = field(default_factory=list)
    rows: list[dict] = field(default_factory=list)  # sweep table, written as CSV

    def to_dict(self, config: RunConfig) -> dict:
        return {
            "claim": self.claim,
            "pass": self.passed,
            "metrics": self.metrics,
            "artifacts": [a.name for a in self.artifacts],
            "config": config.as_dict(),
        }


# Slice topology -----------------------------------------------------------------


@dataclass
class SliceResult:
    window: raster.Window | None
    grids: dict[int, raster.RasterGrid] = field(default_factory=dict)
    reports: dict[int, raster.TopologyReport] = field(default_factory=dict)

    @property
    def empty(self) -> bool:
        return self.window is None or all(r.component_count == 0 for r in self.reports.values())

    def euler_consistent(self) -> bool:
        return all(
            self.reports[res].euler == raster.euler_characteristic(self.grids[res].cells) for res in self.reports
        )


def slice_predicate(line: ComplexLine) -> raster.Predicate:
    return lambda lam: inside_mask(line.at(lam))


def analyze_slice(
    line: ComplexLine,
    resolutions: Sequence[int],
    marks: tuple[complex, ...] = (),
    fit: bool = True,
    magnify: raster.Magnifier | None = None,
    bridge: bool = True,
) -> SliceResult:
    """Rasterize G_n intersected with ``line`` in the parameter plane at each resolution.

    With ``magnify`` the raster lives in the magnifier's coordinates: a cell
    centre xi stands for the line parameter magnify(xi).
    """
    pred = slice_predicate(line)
    window = raster.slice_window(line)
    if magnify is not None:
        pred = (lambda p, f: lambda xi: p(f(xi)))(pred, magnify)
        window = magnify.cover(window)
    if fit:
        window = raster.fit_window(pred, window, must_contain=marks)
    result = SliceResult(window)
    if window is None:
        return result
    for res in resolutions:
        grid = raster.rasterize(pred, window, res)
        if bridge:
            grid = raster.bridge_thin_features(pred, grid)
        result.grids[res] = grid
        result.reports[res] = raster.analyze(grid)
    return result


def slice_artifacts(stem: str, res: SliceResult, resolution: int) -> list[Artifact]:
    rep = res.reports[resolution]
    return [
        Artifact(f"{stem}.svg", raster.to_svg(rep, title=stem).encode()),
        Artifact(f"{stem}.pgm", raster.to_pgm(rep)),
    ]


# Claims ---------------------------------------------------------------------------


def verify_g2_lines(lines: Sequence[ComplexLine], resolutions: Sequence[int]) -> tuple[dict, list[SliceResult]]:
    metrics = {"lines": len(lines), "empty_slices": 0, "contractible": 0, "max_components": 0, "max_holes": 0,
               "euler_mismatches": 0}
    results = []
    for line in lines:
        res = analyze_slice(line, resolutions, marks=(0j, 1 + 0j))
        results.append(res)
        if res.empty:
            metrics["empty_slices"] += 1
            continue
        comps = [r.component_count for r in res.reports.values()]
        holes = [r.hole_count for r in res.reports.values()]
        metrics["max_components"] = max(metrics["max_components"], *comps)
        metrics["max_holes"] = max(metrics["max_holes"], *holes)
        if all(r.contractible for r in res.reports.values()):
            metrics["contractible"] += 1
        if not res.euler_consistent():
            metrics["euler_mismatches"] += 1
    return metrics, results


def cmd_verify_g2_cconvex(config: RunConfig) -> ClaimReport:
    """Random lines through two interior points of G_2 all cut it in a contractible slice."""
    if config.lines < 1:
        raise ValueError("need at least one line")
    rng = config.rng("thm1i-slices")
    ends = sample_interior(rng, 2, 2 * config.lines).reshape(config.lines, 2, 2)
    lines = [line_through(p, q) for p, q in ends]
    metrics, results = verify_g2_lines(lines, config.resolutions())
    nonempty = metrics["lines"] - metrics["empty_slices"]
    passed = metrics["contractible"] == nonempty and metrics["euler_mismatches"] == 0
    first = next((r for r in results if not r.empty), None)
    arts = slice_artifacts("thm1i-slice-0", first, config.resolution) if first else []
    return ClaimReport("thm1i-slices", passed, metrics, arts)


def slope_set_grid(x: float, m: int, window: raster.Window, resolution: int) -> raster.RasterGrid:
    """Union of the slope discs over an m-by-m polar grid of lam1 with |lam1| <= 1 - 1/m."""
    if m < 16:
        raise ValueError("polar grid needs m >= 16")
    radii = np.arange(m) / m
    angles = 2 * np.pi * np.arange(m) / m
    lam1 = (radii[:, None] * np.exp(1j * angles[None, :])).ravel()
    centers, rads = slope_disc_arrays(lam1, x)
    return raster.rasterize_disc_union(centers, rads, window, resolution)


SLOPE_WINDOW = raster.Window(-3.0, 3.0, -3.0, 3.0)


def slope_containment_failures(rng: np.random.Generator, count: int, margin: float = 1e-9) -> int:
    lam = sample_disc(rng, (count, 2), radius=1.0 - 1e-6)
    xs = rng.uniform(-1.0, 1.0, count)
    bad = 0
    for (l1, l2), x in zip(lam, xs):
        if not slope_disc(l1, x).contains(bad_slope(l1, l2, x), margin=margin):
            bad += 1
    return bad


def cmd_gamma_union(config: RunConfig) -> ClaimReport:
    """The slope set A (union of the slope discs) is connected and simply connected."""
    rng = config.rng("thm1i-slope-set")
    metrics: dict[str, float] = {}
    arts: list[Artifact] = []
    rows = []
    passed = True
    for x in config.x:
        if not -1.0 <= x <= 1.0:
            raise ValueError("x must lie in [-1, 1]")
        for res in config.resolutions():
            rep = raster.analyze(slope_set_grid(x, config.grid, SLOPE_WINDOW, res))
            ok = rep.contractible
            passed &= ok
            rows.append({"x": x, "resolution": res, "components": rep.component_count, "holes": rep.hole_count})
            metrics[f"x={x:g}/res={res}/components"] = rep.component_count
            metrics[f"x={x:g}/res={res}/holes"] = rep.hole_count
            if res == config.resolution:
                arts.append(Artifact(f"slope-set-x{x:g}.svg", raster.to_svg(rep, title=f"slope set x={x:g}").encode()))
        a0 = slope_disc(0j, x)
        metrics[f"x={x:g}/a0_center"] = a0.center.real
        metrics[f"x={x:g}/a0_radius"] = a0.radius
    count = config.samples or 10_000
    failures = slope_containment_failures(rng, count)
    metrics["slope_samples"] = count
    metrics["slope_containment_failures"] = failures
    passed &= failures == 0
    return ClaimReport("thm1i-slope-set", passed, metrics, arts, rows)


def exterior_samples(rng: np.random.Generator, n: int, m: int) -> np.ndarray:
    """Interior samples of D^n with the first root pushed out to modulus 1/u, u ~ U(0.3, 0.95)."""
    mu = sample_disc(rng, (m, n))
    u = rng.uniform(0.3, 0.95, m)
    mu[:, 0] = np.exp(1j * np.angle(mu[:, 0])) / u
    return mu


def certify_point(z: SymPoint, rng: np.random.Generator, checks: int = 100) -> dict:
    H, lam = separating_hyperplane(z)
    pts = H.sample(rng, checks)
    powers = lam ** np.arange(z.dim - 1, -1, -1)
    signs = (-1.0) ** np.arange(1, z.dim + 1)
    p_at_lam = lam ** z.dim + (pts * signs) @ powers
    scale = np.maximum(1.0, np.abs(pts).max(axis=1))
    return {
        "contains_z": hyperplane_contains(H, z),
        "max_root_residual": float((np.abs(p_at_lam) / scale).max()),
        "plane_residual": float(hyperplane_residuals(H, pts).max()),
        "inside_hits": int(inside_mask(pts).sum()),
        "witness_modulus": abs(lam),
    }


def cmd_linconvex_certify(config: RunConfig) -> ClaimReport:
    """Every sampled exterior point of G_n carries a hyperplane through it missing G_n."""
    m = config.samples or 1000
    if m < 1:
        raise ValueError("need at least one point")
    rng = config.rng("thm1ii-linear-convexity")
    metrics: dict[str, float] = {}
    passed = True
    for n in config.n or (3,):
        if n < 2:
            raise ValueError("n must be at least 2")
        failures = 0
        worst = 0.0
        min_mod = math.inf
        for mu in exterior_samples(rng, n, m):
            cert = certify_point(sym(mu), rng)
            worst = max(worst, cert["max_root_residual"])
            min_mod = min(min_mod, cert["witness_modulus"])
            ok = cert["contains_z"] and cert["max_root_residual"] <= 1e-9 and cert["inside_hits"] == 0
            failures += not ok
        metrics[f"n={n}/points"] = m
        metrics[f"n={n}/failed_certificates"] = failures
        metrics[f"n={n}/max_root_residual"] = worst
        metrics[f"n={n}/min_witness_modulus"] = min_mod
        passed &= failures == 0
    return ClaimReport("thm1ii-linear-convexity", passed, metrics)


TAU_GRID = np.linspace(-5.0, 5.0, 101)


def counterexample_row(n: int, t: float, resolutions: Sequence[int]) -> tuple[list[dict], SliceResult]:
    a, b = counterexample_points(t, n)
    # a_t and b_t sit at parameters 0 and 1; their components shrink like (1 - t)**3
    zoom = raster.Magnifier((0j, 1 + 0j), radius=0.45, power=3.0)
    res = analyze_slice(line_through(a, b), resolutions, marks=(0j, 1 + 0j), magnify=zoom)
    rows = []
    for r, rep in res.reports.items():
        la = raster.component_of(res.grids[r], rep, 0j)
        lb = raster.component_of(res.grids[r], rep, 1 + 0j)
        rows.append({
            "t": t, "components": rep.component_count, "holes": rep.hole_count,
            "separated": bool(la and lb and la != lb), "n": n, "resolution": r,
            "a_labelled": la is not None, "b_labelled": lb is not None,
        })
    return rows, res


def cmd_counterexample(config: RunConfig) -> ClaimReport:
    """G_n meets the line through a_t and b_t in a disconnected set once t >= 1/sqrt(2)."""
    metrics: dict[str, float] = {}
    arts: list[Artifact] = []
    all_rows: list[dict] = []
    passed = True
    for n in config.n or (3,):
        for t in config.t:
            rows, res = counterexample_row(n, t, config.resolutions())
            all_rows.extend(rows)
            mid = [midline_exclusion(t, tau, n).verdict for tau in TAU_GRID]
            outside = sum(v is Verdict.OUTSIDE for v in mid)
            key = f"n={n}/t={t:g}"
            metrics[f"{key}/midline_outside"] = outside
            for row in rows:
                metrics[f"{key}/res={row['resolution']}/components"] = row["components"]
                metrics[f"{key}/res={row['resolution']}/separated"] = int(row["separated"])
            if t >= SQRT_HALF:
                ok = all(r["components"] >= 2 and r["separated"] for r in rows) and outside == len(TAU_GRID)
                passed &= ok
            arts.extend(slice_artifacts(f"counterexample-n{n}-t{t:g}", res, config.resolution))
    return ClaimReport("thm1ii-disconnect", passed, metrics, arts, all_rows)


def cmd_starlike(config: RunConfig) -> ClaimReport:
    """G_2 is starlike about 0; G_n for n >= 3 is not."""
    rng = config.rng("remark-starlike")
    count = config.samples or 1000
    metrics: dict[str, float] = {}
    passed = True
    for n in config.n or (2, 3, 4):
        if n == 2:
            bad = starlike_violations(sample_interior(rng, 2, count), 101)
            metrics["n=2/samples"] = count
            metrics["n=2/violations"] = bad
            passed &= bad == 0
        else:
            hit = find_starlike_violation(n)
            metrics[f"n={n}/violation_found"] = int(hit is not None)
            if hit is not None:
                metrics[f"n={n}/r"], metrics[f"n={n}/s"] = hit
            passed &= hit is not None
    return ClaimReport("remark-starlike", passed, metrics)


def quasi_homogeneity_error(rng: np.random.Generator, count: int, max_dim: int = 6) -> float:
    worst = 0.0
    for n in range(1, max_dim + 1):
        mu = sample_disc(rng, (count // max_dim, n), radius=2.0)
        lam = sample_disc(rng, count // max_dim, radius=2.0)
        lhs = sym_array(lam[:, None] * mu)
        rhs = sym_array(mu) * lam[:, None] ** np.arange(1, n + 1)
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    return worst


def cmd_homeo_roundtrip(config: RunConfig) -> ClaimReport:
    """homeo_inv(homeo(z)) == z on samples of G_n, plus quasi-homogeneity of sym."""
    rng = config.rng("remark-homeomorphism")
    count = config.samples or 1000
    metrics: dict[str, float] = {}
    passed = True
    for n in config.n or (2, 3, 4):
        err = 0.0
        for z in sample_interior(rng, n, count):
            p = SymPoint(tuple(z))
            back = homeo_inv(homeo(p))
            err = max(err, float(np.abs(back.array() - z).max()))
        metrics[f"n={n}/max_roundtrip_error"] = err
        passed &= err <= 1e-8
    qh = quasi_homogeneity_error(rng, 10 * count)
    metrics["quasi_homogeneity_error"] = qh
    passed &= qh <= 1e-10
    return ClaimReport("remark-homeomorphism", passed, metrics)


GAP_WITNESS = (0.4 + 0j, 0.4 + 0j)


def dual_suite(rng: np.random.Generator, count: int, bidual_count: int, numeric_count: int = 64) -> dict:
    metrics: dict[str, float] = {}
    catalog = {"polydisc": duals.polydisc(2), "euclidean_ball": duals.euclidean_ball(2),
               "p_quasiball(0.5)": duals.p_quasiball(2, 0.5)}
    for name, D in catalog.items():
        w = rng.standard_normal((count, 2)) + 1j * rng.standard_normal((count, 2))
        w2 = rng.standard_normal((count, 2)) + 1j * rng.standard_normal((count, 2))
        lam = sample_disc(rng, count, radius=3.0)
        t = rng.uniform(0, 1, count)
        s1, s2 = duals.support_values(D, w), duals.support_values(D, w2)
        s_mix = duals.support_values(D, t[:, None] * w + (1 - t)[:, None] * w2)
        s_lam = duals.support_values(D, lam[:, None] * w)
        metrics[f"{name}/homogeneity_error"] = float(np.abs(s_lam - np.abs(lam) * s1).max())
        metrics[f"{name}/subadditivity_excess"] = float(max(0.0, (s_mix - t * s1 - (1 - t) * s2).max()))
        metrics[f"{name}/dual_convexity_violations"] = len(duals.convexity_probe(duals.dual_domain(D), count, rng))
        wn = w[:numeric_count]
        metrics[f"{name}/numeric_vs_closed"] = float(
            np.abs(duals.support_values(D, wn, method="numeric") - duals.support_values(D, wn)).max()
        )
    eps = tolerances.current().boundary
    for name in ("polydisc", "euclidean_ball"):
        D = catalog[name]
        z = rng.standard_normal((bidual_count, 2)) + 1j * rng.standard_normal((bidual_count, 2))
        z *= (rng.uniform(0.0, 2.0, bidual_count) / np.linalg.norm(z, axis=1))[:, None]
        q = D.q(z)
        keep = np.abs(q - 1) > eps
        disagree = sum(
            (duals.bidual_membership(D, zi) is Verdict.INSIDE) != (qi < 1) for zi, qi in zip(z[keep], q[keep])
        )
        metrics[f"{name}/bidual_disagreements"] = int(disagree)
    Q = catalog["p_quasiball(0.5)"]
    # violating chords of the quasi-ball are rare, so this probe never runs small
    metrics["p_quasiball(0.5)/direct_convexity_violations"] = len(duals.convexity_probe(Q, max(count, 10_000), rng))
    metrics["gap_witness/in_bidual"] = int(duals.bidual_membership(Q, GAP_WITNESS) is Verdict.INSIDE)
    metrics["gap_witness/q"] = float(Q.q(GAP_WITNESS))
    metrics["gap_witness/sampled_witnesses"] = int(len(duals.bidual_gap_witnesses(Q, rng, count)))
    return metrics


def dual_suite_passes(m: dict) -> bool:
    names = ("polydisc", "euclidean_ball", "p_quasiball(0.5)")
    ok = all(
        m[f"{k}/homogeneity_error"] <= 1e-6
        and m[f"{k}/subadditivity_excess"] <= 1e-6
        and m[f"{k}/dual_convexity_violations"] == 0
        and m[f"{k}/numeric_vs_closed"] <= 1e-6
        for k in names
    )
    ok &= m["polydisc/bidual_disagreements"] == 0 and m["euclidean_ball/bidual_disagreements"] == 0
    ok &= m["gap_witness/in_bidual"] == 1 and m["gap_witness/q"] > 1
    ok &= m["gap_witness/sampled_witnesses"] > 0 and m["p_quasiball(0.5)/direct_convexity_violations"] > 0
    return bool(ok)


def cmd_dual_demo(config: RunConfig) -> ClaimReport:
    """Duals of balanced domains are balanced and convex; the p = 1/2 quasi-ball shows D != D**."""
    rng = config.rng("prop2-dual-convexity")
    count = config.samples or 10_000
    metrics = dual_suite(rng, count, max(1, count // 10))
    return ClaimReport("prop2-dual-convexity", dual_suite_passes(metrics), metrics)


def cmd_slice(config: RunConfig) -> ClaimReport:
    """Topology of G_n along base + lam * dir; reported, not asserted."""
    if not config.base or len(config.base) != len(config.dir):
        raise ValueError("slice needs --base and --dir of equal length")
    if config.n and config.n != (len(config.base),):
        raise ValueError(f"--n {config.n} does not match the {len(config.base)}-dimensional base point")
    line = ComplexLine(np.array(config.base), np.array(config.dir))
    res = analyze_slice(line, (config.resolution,), fit=False)
    rep = res.reports[config.resolution]
    metrics = {
        "components": rep.component_count,
        "holes": rep.hole_count,
        "euler": raster.euler_characteristic(res.grids[config.resolution].cells),
    }
    metrics.update(zip(("re_min", "re_max", "im_min", "im_max"), res.window.as_tuple()))
    return ClaimReport("slice", True, metrics, slice_artifacts("slice", res, config.resolution))


COMMANDS: dict[str, Callable[[RunConfig], ClaimReport]] = {
    "verify-g2": cmd_verify_g2_cconvex,
    "gamma-union": cmd_gamma_union,
    "linconvex": cmd_linconvex_certify,
    "counterexample": cmd_counterexample,
    "starlike": cmd_starlike,
    "homeo": cmd_homeo_roundtrip,
    "dual-demo": cmd_dual_demo,
    "slice": cmd_slice,
}
