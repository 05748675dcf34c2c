import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from linedelta.errors import DegreeMismatch, DegreeTooLow, NoSolution, NotHyperbolic
from linedelta.findiff import delta_theta
from linedelta.geometry import mesh
from linedelta.poly import Polynomial, from_coefficients, from_roots
from linedelta.roots import find_roots
from linedelta.walsh import (apolar_pair, apolarity_pairing, construct_apolar,
                             delta_as_convolution_residual, is_apolar, verify_oishi_bounds,
                             walsh_convolve)

from conftest import polynomials, root_lists


def derivative_pairing(p, q):
    # oracle: differentiate repeatedly and evaluate at zero
    n = p.degree
    return sum((-1) ** k * p.derivative(k)(0) * q.derivative(n - k)(0) for k in range(n + 1))


def derivative_convolution(p, q):
    n = p.degree
    out = Polynomial.constant(0)
    for k in range(n + 1):
        out = out + q.derivative(n - k) * complex(p.derivative(k)(0))
    return out


@st.composite
def same_degree_pair(draw, max_degree=8, real=False):
    p = draw(polynomials(max_degree=max_degree, real=real))
    q = draw(polynomials(min_degree=p.degree, max_degree=p.degree, real=real))
    return p, q


class TestPairing:
    def test_examples(self):
        assert apolarity_pairing(from_coefficients([1, 0, -1]), from_coefficients([1, 0, 1])) == 0
        x2 = Polynomial.monomial(2)
        assert apolarity_pairing(x2, x2) == 0
        p = from_coefficients([1, 0, 1])
        assert apolarity_pairing(p, p) == 4
        assert not is_apolar(p, p)
        assert is_apolar(from_coefficients([1, 0, -1]), p)

    def test_degree_mismatch(self):
        with pytest.raises(DegreeMismatch):
            apolarity_pairing(from_coefficients([1, 0]), from_coefficients([1, 0, 0]))

    @given(same_degree_pair())
    def test_matches_derivative_oracle(self, pq):
        p, q = pq
        ref = derivative_pairing(p, q)
        scale = p.norm * q.norm * math.factorial(p.degree)
        assert abs(apolarity_pairing(p, q) - ref) <= 1e-12 * scale

    @given(same_degree_pair())
    def test_symmetry(self, pq):
        p, q = pq
        n = p.degree
        scale = p.norm * q.norm * math.factorial(n)
        assert abs(apolarity_pairing(p, q) - (-1) ** n * apolarity_pairing(q, p)) <= 1e-11 * scale
        assert apolar_pair(p, q).is_apolar == apolar_pair(q, p).is_apolar


class TestConvolution:
    def test_examples(self):
        x2 = Polynomial.monomial(2)
        assert np.allclose([complex(c) for c in walsh_convolve(x2, x2).coeffs], [2, 0, 0])
        p = from_coefficients([1, 0, -1])
        r = walsh_convolve(p, p)
        assert np.allclose([complex(c) for c in r.coeffs], [2, 0, -4])

    def test_strict_degree(self):
        with pytest.raises(DegreeMismatch):
            walsh_convolve(from_coefficients([1, 0]), from_coefficients([1, 0, 0]))
        padded = walsh_convolve(from_coefficients([1, 0]), from_coefficients([1, 0, 0]), degree=2)
        assert padded.degree <= 2

    @given(same_degree_pair())
    def test_matches_derivative_oracle(self, pq):
        p, q = pq
        got, ref = walsh_convolve(p, q), derivative_convolution(p, q)
        assert got.coefficient_distance(ref) <= 1e-11 * max(ref.norm, 1) * math.factorial(p.degree)

    @given(same_degree_pair(max_degree=10))
    def test_commutative(self, pq):
        p, q = pq
        a, b = walsh_convolve(p, q), walsh_convolve(q, p)
        assert a.coefficient_distance(b) <= 1e-11 * max(a.norm, 1)

    @settings(max_examples=30)
    @given(same_degree_pair(max_degree=6))
    def test_root_equivalence(self, pq):
        # (p [+] q)(x0) = 0 exactly when p(-x) and q(x + x0) are apolar
        p, q = pq
        r = walsh_convolve(p, q)
        if r.degree < 1:
            return
        for root in find_roots(r).roots:
            x0 = complex(root.location)
            a, b = p.affine_substitute(-1, 0), q.shift(-x0)
            scale = a.norm * b.norm * math.factorial(p.degree)
            assert abs(apolarity_pairing(a, b)) <= 1e-7 * scale * (1 + abs(x0)) ** p.degree


class TestDeltaIdentity:
    def test_example(self):
        assert delta_as_convolution_residual(Polynomial.monomial(2), 0, 1) <= 1e-12

    def test_random_degree_8(self, rng):
        p = from_coefficients(rng.normal(size=9) + 1j * rng.normal(size=9))
        assert delta_as_convolution_residual(p, math.pi / 3, 2) <= 1e-10

    def test_constant_rejected(self):
        with pytest.raises(DegreeTooLow):
            delta_as_convolution_residual(from_coefficients([3]), 0, 1)

    @given(polynomials(max_degree=12), st.floats(0, 2 * math.pi), st.floats(0.1, 10))
    def test_property(self, p, theta, h):
        assert delta_as_convolution_residual(p, theta, h) <= 1e-10


class TestOishi:
    def test_examples(self):
        p = from_coefficients([1, 0, -1])
        chk = verify_oishi_bounds(p, p)
        assert chk.ok and chk.interval == pytest.approx((-2, 2))
        chk = verify_oishi_bounds(from_roots([1, 1]), from_roots([2, 2]))
        assert chk.ok and chk.interval == pytest.approx((3, 3))
        with pytest.raises(NotHyperbolic):
            verify_oishi_bounds(from_coefficients([1, 0, 1]), p)

    @settings(max_examples=40)
    @given(root_lists(min_size=1, max_size=8, real=True), st.data())
    def test_random_pairs(self, xs, data):
        ys = data.draw(root_lists(min_size=len(xs), max_size=len(xs), real=True))
        p, q = from_roots(xs).realified(), from_roots(ys).realified()
        assert verify_oishi_bounds(p, q).ok
        r = find_roots(walsh_convolve(p, q))
        good = [m for m in (mesh(find_roots(p)) if p.degree > 1 else math.inf,
                            mesh(find_roots(q)) if q.degree > 1 else math.inf)]
        if p.degree > 1:
            assert mesh(r) >= max(good) - 1e-6 * r.scale


class TestConstructApolar:
    def test_example_quadratic(self):
        q = construct_apolar(from_coefficients([1, 0, -1]), [Polynomial.monomial(2), Polynomial.constant(1)])
        assert np.allclose([complex(c) for c in q.coeffs], [1, 0, 1])

    def test_monomial(self):
        n = 4
        q = construct_apolar(Polynomial.monomial(n), [Polynomial.constant(1), Polynomial.monomial(1)], degree=n)
        assert q.degree == 1 and abs(q.coeffs[-1]) < 1e-14

    def test_degenerate(self):
        with pytest.raises(NoSolution):
            construct_apolar(from_coefficients([1, 0, -1]), [Polynomial.monomial(2), Polynomial.monomial(2, 2)])
        with pytest.raises(NoSolution):
            construct_apolar(from_coefficients([1, 0, -1]), [Polynomial.monomial(2)])

    @settings(max_examples=40)
    @given(root_lists(min_size=2, max_size=8, real=True), st.data())
    def test_grace(self, xs, data):
        # every disk holding the roots of p also holds a root of any apolar q
        p = from_roots(xs).realified()
        n = p.degree
        seed = data.draw(st.integers(0, 2 ** 31))
        rng = np.random.default_rng(seed)
        family = [from_coefficients(list(rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)))
                  for _ in range(3)]
        family = [f for f in family if f.degree == n]
        if len(family) < 2:
            return
        q = construct_apolar(p, family)
        assert q.degree == n and is_apolar(p, q)
        lo, hi = min(xs), max(xs)
        centre, radius = (lo + hi) / 2, (hi - lo) / 2
        z = find_roots(q).locations
        assert np.min(np.abs(z - centre)) <= radius + 1e-6 * (1 + radius)
