"""Apolarity and the Walsh convolution ``p [+] q (x) = sum_k p^(k)(0) q^(n-k)(x)``.

Derivatives at zero come straight from the coefficients, ``p^(k)(0) = k! a_k``
(ascending index), so nothing is differentiated repeatedly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import DegreeMismatch, DegreeTooLow, NoSolution, NotHyperbolic, NotReal
from .findiff import delta_theta
from .geometry import REALITY_TOL, _real_parts
from .poly import Polynomial
from .roots import SolverConfig, find_roots

APOLAR_RTOL = 1e-10
EXACT_FACTORIAL_MAX = 20


def _ascending(p: Polynomial, n: int) -> np.ndarray:
    a = np.zeros(n + 1, dtype=complex)
    asc = [complex(c) for c in p.ascending()]
    a[:len(asc)] = asc
    return a


def _common_degree(p: Polynomial, q: Polynomial, degree: Optional[int]) -> int:
    if degree is None:
        if p.degree != q.degree:
            raise DegreeMismatch(f"degrees {p.degree} and {q.degree} differ")
        degree = p.degree
    elif max(p.degree, q.degree) > degree:
        raise DegreeMismatch(f"formal degree {degree} is below an actual degree")
    if degree < 1:
        raise DegreeTooLow("need degree >= 1")
    return degree


def _factorial(n: int) -> float:
    # beyond 20 go through log-gamma so large n overflow gracefully to inf
    if n <= EXACT_FACTORIAL_MAX:
        return float(math.factorial(n))
    try:
        return math.exp(math.lgamma(n + 1))
    except OverflowError:
        return math.inf


def apolarity_pairing(p: Polynomial, q: Polynomial, degree: Optional[int] = None) -> complex:
    """``sum_k (-1)^k p^(k)(0) q^(n-k)(0)``.

    Both polynomials must share degree ``n``; pass ``degree`` to treat either one
    as a degree-``n`` polynomial with vanishing leading coefficients.
    """
    n = _common_degree(p, q, degree)
    a, b = _ascending(p, n), _ascending(q, n)
    # k! (n-k)! = n! / C(n, k)
    total = sum((-1) ** k * a[k] * b[n - k] / math.comb(n, k) for k in range(n + 1))
    return complex(total * _factorial(n))


@dataclass(frozen=True)
class ApolarPair:
    p: Polynomial
    q: Polynomial
    n: int
    pairing_value: complex

    @property
    def is_apolar(self) -> bool:
        bound = APOLAR_RTOL * self.p.norm * self.q.norm * _factorial(self.n)
        return abs(self.pairing_value) <= bound


def apolar_pair(p: Polynomial, q: Polynomial, degree: Optional[int] = None) -> ApolarPair:
    n = _common_degree(p, q, degree)
    return ApolarPair(p, q, n, apolarity_pairing(p, q, n))


def is_apolar(p: Polynomial, q: Polynomial, degree: Optional[int] = None) -> bool:
    return apolar_pair(p, q, degree).is_apolar


def walsh_convolve(p: Polynomial, q: Polynomial, degree: Optional[int] = None) -> Polynomial:
    """``sum_k p^(k)(0) q^(n-k)(x)`` for polynomials of common degree ``n``.

    ``degree`` pads either argument to a formal degree, which is needed when
    one side has lost its top coefficients (for instance ``Delta_{0,h}(x^n)``).
    """
    n = _common_degree(p, q, degree)
    a, b = _ascending(p, n), _ascending(q, n)
    out = np.zeros(n + 1, dtype=complex)
    for k in range(n + 1):
        if a[k] == 0:
            continue
        r = n - k
        pk = math.factorial(k) * a[k]
        for s in range(k + 1):   # q^(r) has degree n - r = k
            out[s] += pk * b[s + r] * (math.factorial(s + r) // math.factorial(s))
    return Polynomial._make(list(out[::-1]))


def delta_as_convolution_residual(p: Polynomial, theta: float, h: complex) -> float:
    """Normalised distance between ``Delta_{theta,h}(p)`` and ``p [+] Delta_{theta,h}(x^n) / n!``."""
    n = p.degree
    if n < 1:
        raise DegreeTooLow("need degree >= 1")
    lhs = delta_theta(theta, h, p)
    kernel = delta_theta(theta, h, Polynomial.monomial(n))
    rhs = walsh_convolve(p, kernel, degree=n) / math.factorial(n)
    return lhs.coefficient_distance(rhs) / lhs.norm


@dataclass
class OishiCheck:
    ok: bool
    interval: Tuple[float, float]
    roots: List[complex] = field(default_factory=list)
    excess: float = 0.0          # how far a root leaves the interval (<= 0 inside)
    max_imag: float = 0.0


def _real_roots(p: Polynomial, cfg, reality_tol) -> np.ndarray:
    rs = find_roots(p, cfg)
    try:
        return _real_parts(rs, reality_tol)
    except NotReal as exc:
        raise NotHyperbolic(str(exc)) from exc


def verify_oishi_bounds(p: Polynomial, q: Polynomial, cfg: Optional[SolverConfig] = None,
                        tol: float = REALITY_TOL) -> OishiCheck:
    """Roots of ``p [+] q`` against ``[alpha + gamma, beta + delta]``."""
    _common_degree(p, q, None)
    x, y = _real_roots(p, cfg, tol), _real_roots(q, cfg, tol)
    lo, hi = x[0] + y[0], x[-1] + y[-1]
    rs = find_roots(walsh_convolve(p, q), cfg)
    z = rs.locations
    # endpoints come from clustered roots, so they carry the cluster radius too
    radius = (cfg or SolverConfig()).cluster_radius
    slack = max(tol, 2 * radius) * max(rs.scale, 1.0 + abs(lo), 1.0 + abs(hi))
    imag = float(np.max(np.abs(z.imag)))
    excess = float(max(np.max(z.real - hi), np.max(lo - z.real)))
    ok = bool(imag <= tol * rs.scale and excess <= slack)
    return OishiCheck(ok, (float(lo), float(hi)), [complex(v) for v in z], excess, imag)


def construct_apolar(p: Polynomial, family: Sequence[Polynomial], degree: Optional[int] = None,
                     rank_tol: float = 1e-12) -> Polynomial:
    """A nonzero combination of ``family`` that is apolar to ``p``.

    The pairing is one linear functional on coefficient space; restricted to
    the span of ``family`` (at least two-dimensional) it has a nontrivial kernel.
    """
    n = p.degree if degree is None else degree
    if n < 1:
        raise DegreeTooLow("need degree >= 1")
    if any(f.degree > n for f in family):
        raise DegreeMismatch("family member exceeds the target degree")
    F = np.array([_ascending(f, n) for f in family]) if family else np.zeros((0, n + 1))
    if F.shape[0] < 2:
        raise NoSolution("family spans fewer than two dimensions")
    _, s, vh = np.linalg.svd(F)
    rank = int(np.sum(s > rank_tol * s[0])) if s.size and s[0] > 0 else 0
    if rank < 2:
        raise NoSolution("family spans fewer than two dimensions")
    basis = vh[:rank]                       # orthonormal rows spanning the family
    a = _ascending(p, n)
    # pairing(p, q) = sum_j w_j b_j with b ascending
    w = np.array([(-1) ** (n - j) * a[n - j] / math.comb(n, j) for j in range(n + 1)])
    row = basis @ w
    _, _, vh2 = np.linalg.svd(row[None, :])
    y = vh2[-1].conj()
    q = y @ basis
    q = Polynomial._make(list(q[::-1]))
    return q / q.leading
