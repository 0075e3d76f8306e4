"""Acceptance criteria, run at full size with their runtime budgets.

Each test records a PASS/FAIL line that is printed in the terminal summary.
"""
import json
import subprocess
import sys
import time

import numpy as np
import pytest

from ccx import claims
from ccx.claims import RunConfig
from ccx.lines import mobius, mobius_disc_image
from ccx.polynomial import MonicPolynomial, Verdict, max_root_modulus, schur_inside_disc
from conftest import ACCEPTANCE, random_disc


def record(number, title, ok, seconds, budget, detail=""):
    ok = bool(ok) and seconds < budget
    ACCEPTANCE.append(f"{'PASS' if ok else 'FAIL'} [{number:>2}] {title}: {detail} ({seconds:.1f}s / {budget:.0f}s)")
    return ok


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start


def test_01_membership_oracle_equivalence():
    rng = np.random.default_rng(1)
    checked = disagreements = 0
    with Timer() as t:
        for _ in range(10_000):
            n = int(rng.integers(1, 7))
            p = MonicPolynomial(tuple(random_disc(rng, n, 3.0)))
            m = max_root_modulus(p)
            if abs(m - 1) <= 1e-6:
                continue
            checked += 1
            disagreements += schur_inside_disc(p).verdict is not (Verdict.INSIDE if m < 1 else Verdict.OUTSIDE)
    assert record(1, "Schur-Cohn vs root solver", disagreements == 0, t.seconds, 10,
                  f"{disagreements} disagreements on {checked} polynomials")


def test_02_g2_slices_contractible():
    with Timer() as t:
        r = claims.cmd_verify_g2_cconvex(RunConfig(lines=200))
    m = r.metrics
    assert record(2, "G_2 line slices contractible at 512 and 1024", r.passed and m["empty_slices"] == 0, t.seconds, 120,
                  f"{m['contractible']}/{m['lines']} contractible, max components {m['max_components']}, "
                  f"max holes {m['max_holes']}")


def test_03_slope_set():
    with Timer() as t:
        r = claims.cmd_gamma_union(RunConfig(x=(-1, -0.5, 0, 0.5, 1), samples=10_000))
    worst = max(v for k, v in r.metrics.items() if k.endswith("/components"))
    holes = max(v for k, v in r.metrics.items() if k.endswith("/holes"))
    assert record(3, "slope set connected and simply connected", r.passed, t.seconds, 60,
                  f"max components {worst}, max holes {holes}, "
                  f"{r.metrics['slope_containment_failures']} containment failures of 10^4")


def test_04_disconnected_slices():
    with Timer() as t:
        r = claims.cmd_counterexample(RunConfig(n=(3, 4, 5), t=(0.71, 0.75, 0.8, 0.9)))
    seps = sum(row["separated"] for row in r.rows)
    midline = min(v for k, v in r.metrics.items() if k.endswith("midline_outside"))
    assert record(4, "G_n meets L_t in a disconnected set", r.passed, t.seconds, 120,
                  f"{seps}/{len(r.rows)} rasters separate a_t from b_t, midline outside on {midline}/101")


def test_05_linear_convexity_certificates():
    with Timer() as t:
        r = claims.cmd_linconvex_certify(RunConfig(n=(3,), samples=1000))
    m = r.metrics
    ok = r.passed and m["n=3/max_root_residual"] <= 1e-9
    assert record(5, "separating hyperplanes for exterior points of G_3", ok, t.seconds, 30,
                  f"{m['n=3/failed_certificates']} failed, max residual {m['n=3/max_root_residual']:.1e}")


def test_06_mobius_disc_image():
    rng = np.random.default_rng(6)
    bad = 0
    with Timer() as t:
        for _ in range(1000):
            alpha = random_disc(rng, 1, 3.0)[0]
            beta = np.exp(2j * np.pi * rng.random()) * rng.uniform(1 + 1e-3, 4)
            d = mobius_disc_image(alpha, beta)
            img = mobius(alpha, beta, random_disc(rng, 1000))
            bad += not d.contains(img, margin=1e-9 * (1 + d.radius)).all()
        d0 = mobius_disc_image(0, 2)
        exact = abs(d0.center + 1 / 3) < 1e-15 and abs(d0.radius - 2 / 3) < 1e-15
    assert record(6, "Moebius image of the disc", bad == 0 and exact, t.seconds, 10,
                  f"{bad} of 1000 pairs escaped; alpha=0, beta=2 gives ({d0.center.real:.6f}, {d0.radius:.6f})")


def test_07_homeomorphism():
    with Timer() as t:
        r = claims.cmd_homeo_roundtrip(RunConfig(n=(2, 3, 4), samples=1000))
    worst = max(v for k, v in r.metrics.items() if k.endswith("roundtrip_error"))
    assert record(7, "homeomorphism round trip and quasi-homogeneity", r.passed, t.seconds, 10,
                  f"round trip {worst:.1e}, quasi-homogeneity {r.metrics['quasi_homogeneity_error']:.1e}")


def test_08_starlike_dichotomy():
    with Timer() as t:
        r = claims.cmd_starlike(RunConfig(n=(2, 3, 4), samples=1000))
    m = r.metrics
    assert record(8, "starlike iff n = 2", r.passed, t.seconds, 30,
                  f"n=2 violations {m['n=2/violations']}; n=3 witness ({m['n=3/r']}, {m['n=3/s']:.3f}); "
                  f"n=4 witness ({m['n=4/r']}, {m['n=4/s']:.3f})")


def test_09_dual_suite():
    with Timer() as t:
        r = claims.cmd_dual_demo(RunConfig(samples=10_000))
    m = r.metrics
    sub = max(v for k, v in m.items() if k.endswith("subadditivity_excess"))
    hom = max(v for k, v in m.items() if k.endswith("homogeneity_error"))
    assert record(9, "duals convex and balanced, quasi-ball bidual gap", r.passed, t.seconds, 30,
                  f"subadditivity excess {sub:.1e}, homogeneity {hom:.1e}, "
                  f"witness (0.4, 0.4) in bidual={m['gap_witness/in_bidual']} q={m['gap_witness/q']:.2f}")


def test_10_determinism(tmp_path):
    args = ["all", "--no-timestamp", "--lines", "20", "--samples", "500", "--resolution", "128"]
    with Timer() as t:
        for d in ("a", "b"):
            proc = subprocess.run([sys.executable, "-m", "ccx.cli", *args, "--out", str(tmp_path / d)],
                                  capture_output=True, text=True)
            assert proc.returncode == 0, proc.stderr
        reports = sorted(p.name for p in (tmp_path / "a").glob("*.json"))
        same = all((tmp_path / "a" / n).read_bytes() == (tmp_path / "b" / n).read_bytes() for n in reports)
        for n in reports:
            json.loads((tmp_path / "a" / n).read_text("utf-8"))
    assert record(10, "identical JSON for identical seeds", same and len(reports) == 7, t.seconds, 60,
                  f"{len(reports)} reports compared")
