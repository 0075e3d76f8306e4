"""Monic polynomials, the Aberth solver and the Schur-Cohn disc test."""
import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import linear_sum_assignment

from ccx import tolerances
from ccx.polynomial import (
    MonicPolynomial,
    Verdict,
    eval_poly,
    max_root_modulus,
    root_location,
    roots,
    schur_codes,
    schur_inside_disc,
    sorted_by_modulus,
)
from conftest import random_disc

P_2_HALF = MonicPolynomial((-2.5, 1.0))     # (w - 2)(w - 0.5)
P_CUBE = MonicPolynomial((-3.0, 3.0, -1.0))  # (w - 1)^3


def matched_error(found, expected):
    found, expected = np.asarray(found), np.asarray(expected)
    cost = np.abs(found[:, None] - expected[None, :])
    i, j = linear_sum_assignment(cost)
    return cost[i, j].max()


def oracle_modulus(p):
    # companion-matrix eigenvalues, independent of the Aberth iteration
    return np.abs(np.roots(p.full_coeffs())).max()


complex_in = lambda r: st.builds(  # noqa: E731
    lambda m, a: m * np.exp(2j * np.pi * a), st.floats(0, r), st.floats(0, 1)
)


class TestMonicPolynomial:
    def test_degree_is_coefficient_count(self):
        assert MonicPolynomial((1, 2, 3)).degree == 3

    def test_rejects_degree_zero(self):
        with pytest.raises(ValueError):
            MonicPolynomial(())

    def test_from_roots_expands_product(self):
        p = MonicPolynomial.from_roots([2, 0.5])
        assert np.allclose(p.coeffs, (-2.5, 1.0))

    def test_scale(self):
        assert P_2_HALF.scale() == 2.5
        assert MonicPolynomial((0.1, 0.2)).scale() == 1.0


class TestEval:
    @pytest.mark.parametrize("p, w", [(P_2_HALF, 2), (MonicPolynomial((0, 0, 0)), 0), (P_CUBE, 1)])
    def test_known_zeros(self, p, w):
        assert eval_poly(p, w) == 0

    def test_matches_numpy_polyval(self, rng):
        p = MonicPolynomial(tuple(random_disc(rng, 5, 3)))
        w = random_disc(rng, 50, 2)
        assert np.allclose(eval_poly(p, w), np.polyval(p.full_coeffs(), w), atol=1e-12)


class TestRoots:
    def test_simple_pair(self):
        assert matched_error(roots(P_2_HALF), [2, 0.5]) < 1e-12

    def test_triple_root(self):
        # cluster accuracy degrades like eps**(1/3)
        assert matched_error(roots(P_CUBE), [1, 1, 1]) < 1e-4

    def test_degree_one(self):
        assert roots(MonicPolynomial((-0.3j,))) == pytest.approx([0.3j])

    @given(st.lists(complex_in(2.0), min_size=1, max_size=8))
    def test_round_trip(self, rs):
        # separated roots; clusters are covered by the residual property below
        pairs = itertools.combinations(rs, 2)
        if any(abs(a - b) < 1e-3 for a, b in pairs):
            return
        p = MonicPolynomial.from_roots(rs)
        assert matched_error(roots(p), rs) < 1e-8

    @given(st.lists(complex_in(3.0), min_size=1, max_size=8))
    def test_residual_bounded(self, cs):
        p = MonicPolynomial(tuple(cs))
        for r in roots(p):
            assert abs(eval_poly(p, r)) <= 1e-8 * p.scale() * max(1.0, abs(r)) ** p.degree

    def test_agrees_with_companion_eigenvalues(self, rng):
        for _ in range(200):
            n = rng.integers(1, 9)
            p = MonicPolynomial(tuple(random_disc(rng, n, 3)))
            assert matched_error(roots(p), np.roots(p.full_coeffs())) < 1e-7


class TestMaxModulus:
    @pytest.mark.parametrize(
        "p, m", [(P_2_HALF, 2.0), (MonicPolynomial((0, 0, 0, 0)), 0.0), (MonicPolynomial((-1.0, 0.0)), 1.0)]
    )
    def test_examples(self, p, m):
        assert max_root_modulus(p) == pytest.approx(m, abs=1e-8)


class TestSchur:
    def test_inside(self):
        assert schur_inside_disc(MonicPolynomial((0.0, -0.5))).verdict is Verdict.INSIDE

    def test_outside(self):
        assert schur_inside_disc(P_2_HALF).verdict is Verdict.OUTSIDE

    def test_triple_root_on_circle(self):
        assert schur_inside_disc(P_CUBE).verdict is Verdict.BOUNDARY

    def test_unimodular_simple_root_is_boundary(self):
        assert schur_inside_disc(MonicPolynomial.from_roots([1j, 0.3])).verdict is Verdict.BOUNDARY

    def test_band_follows_tolerance(self):
        p = MonicPolynomial.from_roots([1 - 1e-7, 0.2])
        assert schur_inside_disc(p).verdict is Verdict.INSIDE
        with tolerances.override(boundary=1e-6):
            assert schur_inside_disc(p).verdict is Verdict.BOUNDARY

    def test_batched_codes_match_scalar(self, rng):
        c = random_disc(rng, (300, 4), 2)
        codes = schur_codes(c, 1.0)
        for row, code in zip(c, codes):
            m = oracle_modulus(MonicPolynomial(tuple(row)))
            if abs(m - 1) > 1e-6:
                assert code == (1 if m < 1 else -1)

    @given(st.lists(complex_in(3.0), min_size=1, max_size=6))
    def test_agrees_with_eigenvalue_oracle(self, cs):
        p = MonicPolynomial(tuple(cs))
        m = oracle_modulus(p)
        if abs(m - 1) <= 1e-6:
            return
        assert schur_inside_disc(p).verdict is (Verdict.INSIDE if m < 1 else Verdict.OUTSIDE)

    @given(st.lists(complex_in(0.999), min_size=1, max_size=6))
    def test_products_of_disc_roots_are_inside(self, rs):
        assert schur_inside_disc(MonicPolynomial.from_roots(rs)).verdict is Verdict.INSIDE


def test_root_location_reports_modulus():
    loc = root_location(P_2_HALF)
    assert loc.verdict is Verdict.OUTSIDE
    assert loc.max_modulus == pytest.approx(2.0)


def test_sorted_by_modulus_breaks_ties_by_argument():
    assert sorted_by_modulus([1j, -1, 1, 0.5]) == [1, 1j, -1, 0.5]
