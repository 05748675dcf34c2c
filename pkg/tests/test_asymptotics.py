import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from linedelta.asymptotics import (AsymptoticPrediction, angle_distance, correction_factors,
                                   correction_factors_explicit, fit_rate, match_roots, order_check,
                                   predict_roots, strip_trend)
from linedelta.errors import AmbiguousMatching, OrderUnsupported, PreconditionError
from linedelta.findiff import q_n_roots_closed_form
from linedelta.poly import Polynomial, from_coefficients, from_roots

from conftest import polynomials

HALF_PI = math.pi / 2
X2P1 = from_coefficients([1, 0, 1])


class TestPredict:
    def test_benchmark_values(self):
        preds = predict_roots(X2P1, HALF_PI, 10, order=2)
        top = preds[0]
        assert top.k == 1
        assert abs(top.value - 9.95) < 1e-12
        assert abs(top.value - math.sqrt(99)) < 2e-4

    def test_order_zero_is_closed_form(self):
        for n in (2, 5, 9):
            for theta in (0.0, 0.4, HALF_PI):
                h = 3.0
                preds = predict_roots(Polynomial.monomial(n), theta, h, order=0)
                want = q_n_roots_closed_form(n, theta, h)
                assert [p.value for p in preds] == [h * lam for lam in q_n_roots_closed_form(n, theta, 1.0)]
                assert np.allclose([p.value for p in preds], want, rtol=1e-14)

    def test_theta_zero_has_n_minus_one(self):
        assert len(predict_roots(Polynomial.monomial(5), 0.0, 2.0)) == 4
        assert len(predict_roots(Polynomial.monomial(5), 0.3, 2.0)) == 5

    def test_shifted_power_is_exact(self):
        c = 1.7
        for n in (3, 4, 6):
            p = from_roots([c] * n)
            for h in (2.0, 15.0):
                pr = predict_roots(p, 0.8, h, order=3)
                want = [h * lam + c for lam in q_n_roots_closed_form(n, 0.8, 1.0)]
                assert np.allclose([x.partial(1) for x in pr], want, atol=1e-9)
                assert np.allclose([x.value for x in pr], want, atol=1e-9)

    def test_vanishing_terms(self):
        pr = predict_roots(X2P1, HALF_PI, 10)
        assert 3 in pr[0].vanishing_terms and pr[0].terms[3] == 0

    def test_order_range(self):
        with pytest.raises(OrderUnsupported):
            predict_roots(X2P1, HALF_PI, 10, order=4)

    def test_partial_sums(self):
        a = AsymptoticPrediction(1, (1.0, 2.0, 3.0, 4.0), 2)
        assert a.value == 6 and a.partial(0) == 1 and a.partial(3) == 10

    @given(polynomials(min_degree=3, max_degree=10))
    def test_coefficient_forms_agree(self, p):
        a, b = correction_factors(p), correction_factors_explicit(p)
        scale = max(1.0, max(abs(complex(c)) for c in p.coeffs) / abs(p.leading)) ** 3 * abs(p.leading)
        for u, v in zip(a, b):
            assert abs(u - v) <= 1e-12 * max(abs(u), abs(v), scale)


class TestMatching:
    def test_identity(self):
        assert match_roots([0, 10, 20], [20.1, -0.1, 9.9]) == [1, 2, 0]

    def test_mismatch(self):
        with pytest.raises(AmbiguousMatching):
            match_roots([0, 1], [0])
        with pytest.raises(AmbiguousMatching):
            match_roots([0, 0.4], [0.5, 10])


class TestOrderCheck:
    def test_benchmark_against_exact_roots(self):
        # exact roots are +-sqrt(h^2 - 1): order 2 leaves -1/(8 h^3)
        for h in (10, 20, 40, 80):
            top = predict_roots(X2P1, HALF_PI, h)[0]
            exact = math.sqrt(h * h - 1)
            assert abs(abs(top.value - exact) - 1 / (8 * h ** 3)) <= 1e-3 / h ** 3

    def test_benchmark_rates(self):
        rep = order_check(X2P1, HALF_PI, 1.0, [10, 20, 40, 80])
        assert 2.7 <= rep.estimated_rates[3] <= 3.3
        assert 2.7 <= rep.estimated_rates[2] <= 3.3
        assert 0.7 <= rep.estimated_rates[0] <= 1.3
        # the 1/h term vanishes at n = 2, so order 1 gains nothing over order 0
        assert 0.7 <= rep.estimated_rates[1] <= 1.3
        for i in range(4):
            errs = [rep.errors_by_order[r][i] for r in range(4)]
            assert all(b <= a * (1 + 1e-9) for a, b in zip(errs, errs[1:]))

    def test_generic_rates(self, rng):
        c = rng.normal(size=6) + 1j * rng.normal(size=6)
        p = from_coefficients(list(c))
        rep = order_check(p, 1.1, np.exp(0.4j), [40, 80, 160, 320])
        for r in range(4):
            assert abs(rep.estimated_rates[r] - r) <= 0.3

    def test_degenerate(self):
        rep = order_check(from_roots([0.5] * 3), 0.9, 1.0, [10, 20, 40])
        assert all(rep.degenerate[r] for r in (1, 2, 3))
        assert math.isnan(rep.estimated_rates[3])
        assert rep.to_json()["estimated_rates"]["3"] is None

    def test_preconditions(self):
        with pytest.raises(PreconditionError):
            order_check(X2P1, HALF_PI, 1.0, [1])
        with pytest.raises(PreconditionError):
            order_check(X2P1, HALF_PI, 1.0, [10, 5, 20])

    def test_fit_rate(self):
        hs = [1, 2, 4, 8]
        assert abs(fit_rate(hs, [3 * h ** -2.5 for h in hs]) - 2.5) < 1e-12


class TestStripTrend:
    def test_degree_12_shrinks(self):
        p = from_roots([complex(k) for k in range(1, 5)] + [complex(0, -k) for k in range(1, 9)])
        ray = complex(math.cos(math.pi / 3), math.sin(math.pi / 3))
        rep = strip_trend(p, 0.0, ray, [10, 50])
        assert rep.deviation[0] / rep.deviation[1] >= 4
        assert rep.angle_errors()[1] < rep.angle_errors()[0] < 0.2
        csv = rep.to_csv()
        lines = csv.strip().split("\n")
        assert lines[0] == "h_magnitude,root_index,re,im,line_phi,line_offset,deviation"
        assert len(lines) == 1 + 2 * 11
        assert len(rep.rows_for(10.0)) == 11

    def test_monomial_on_ray(self):
        ray = np.exp(0.7j)
        rep = strip_trend(Polynomial.monomial(6), 0.5, ray, [1, 5, 25])
        assert max(rep.deviation) < 1e-9 * 25
        assert max(rep.angle_errors()) < 1e-9

    def test_real_hyperbolic_stays_real(self):
        rep = strip_trend(from_roots([-1, 0.5, 2, 3]), 0.3, 1.0, [1, 10, 100])
        assert max(rep.deviation) < 1e-8 * 300
        assert max(rep.angle_errors()) < 1e-12

    def test_angle_distance(self):
        assert angle_distance(0.1, math.pi + 0.1) < 1e-15
        assert abs(angle_distance(0.0, math.pi - 0.1) - 0.1) < 1e-15
