"""Linear finite-difference operators with constant coefficients.

An operator ``T(p)(x) = sum_{k=l}^{m} a_k p(x - k h)`` is a
``FiniteDifferenceOperator``.  The central operator

    Delta_{theta,h} p(x) = (e^{i theta} p(x + i h) - e^{-i theta} p(x - i h)) / (2i)

is the ``l = -1, m = 1`` instance with step ``i h``; ``delta_theta_operator`` and
``delta_parameters`` convert between the two notations.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import mpmath

from .errors import EmptyRootList, InvalidOperator, NotUnitCircle, OutOfRange, ZeroStep
from .poly import Polynomial, _context, unit
from .roots import SolverConfig, find_roots

TWO_PI = 2 * math.pi


def _phase(theta: float, dps: Optional[int]):
    if dps:
        q = theta / (math.pi / 2)
        if q == round(q):
            return mpmath.mpc(unit(theta))
        return mpmath.expj(theta)
    return unit(theta)


@dataclass(frozen=True)
class FiniteDifferenceOperator:
    l: int
    m: int
    coeffs: Tuple[complex, ...]  # a_l, a_{l+1}, ..., a_m
    step: complex

    def __post_init__(self):
        if self.l > self.m:
            raise InvalidOperator("need l <= m")
        if len(self.coeffs) != self.m - self.l + 1:
            raise InvalidOperator("coefficient count must be m - l + 1")
        if self.coeffs[0] == 0 or self.coeffs[-1] == 0:
            raise InvalidOperator("a_l and a_m must be nonzero")
        if self.step == 0:
            raise ZeroStep("step must be nonzero")

    @classmethod
    def from_map(cls, coeffs: Dict[int, complex], step: complex) -> "FiniteDifferenceOperator":
        ks = [k for k, v in coeffs.items() if v != 0]
        if not ks:
            raise InvalidOperator("operator has no nonzero coefficient")
        l, m = min(ks), max(ks)
        return cls(l, m, tuple(complex(coeffs.get(k, 0)) for k in range(l, m + 1)), complex(step))

    def coefficient(self, k: int) -> complex:
        return self.coeffs[k - self.l] if self.l <= k <= self.m else 0j

    def items(self):
        return [(k, self.coefficient(k)) for k in range(self.l, self.m + 1)]

    def to_json(self) -> dict:
        return {"l": self.l, "m": self.m,
                "coeffs": [[c.real, c.imag] for c in self.coeffs],
                "step": [self.step.real, self.step.imag]}

    @classmethod
    def from_json(cls, obj) -> "FiniteDifferenceOperator":
        from .poly import parse_complex
        try:
            l, m = int(obj["l"]), int(obj["m"])
            coeffs = tuple(parse_complex(c) for c in obj["coeffs"])
            step = parse_complex(obj["step"])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"bad operator JSON: {exc}") from exc
        return cls(l, m, coeffs, step)


def apply(T: FiniteDifferenceOperator, p: Polynomial) -> Polynomial:
    """``sum_k a_k p(x - k h)``, trimmed against the size of the summed terms."""
    dps = p.dps
    with _context(dps):
        n = len(p.coeffs)
        acc = [0 * p.coeffs[0]] * n if n else []
        ref = [0.0] * n
        for k, a in T.items():
            if a == 0:
                continue
            a = mpmath.mpc(a) if dps else a
            term = p.shift(k * (mpmath.mpc(T.step) if dps else T.step)).coeffs
            for j in range(n):
                t = a * term[j]
                acc[j] = acc[j] + t
                ref[j] = ref[j] + abs(t)
        return Polynomial._make(acc, dps, reference=ref)


def delta_theta(theta: float, h: complex, p: Polynomial) -> Polynomial:
    """Central operator ``(e^{i theta} p(x+ih) - e^{-i theta} p(x-ih)) / (2i)``.

    For real ``h`` and real ``p`` the output is real up to rounding and is
    returned with exactly real coefficients.
    """
    if h == 0:
        raise ZeroStep("step must be nonzero")
    dps = p.dps
    theta = math.fmod(theta, TWO_PI)
    with _context(dps):
        if p.is_zero:
            return p
        ih = 1j * (mpmath.mpc(h) if dps else complex(h))
        e = _phase(theta, dps)
        fwd = p.shift(-ih).coeffs   # p(x + ih)
        bwd = p.shift(ih).coeffs    # p(x - ih)
        two_i = 2j if not dps else mpmath.mpc(0, 2)
        out = [(e * u - v / e) / two_i for u, v in zip(fwd, bwd)]
        ref = [(abs(u) + abs(v)) / 2 for u, v in zip(fwd, bwd)]
        q = Polynomial._make(out, dps, reference=ref)
    if complex(h).imag == 0 and p.is_real():
        q = q.realified(1e-12)
    return q


def delta_theta_operator(theta: float, h: complex) -> FiniteDifferenceOperator:
    """``Delta_{theta,h}`` written as ``T`` with ``l=-1, m=1`` and step ``i h``."""
    if h == 0:
        raise ZeroStep("step must be nonzero")
    e = unit(math.fmod(theta, TWO_PI))
    return FiniteDifferenceOperator(-1, 1, (e / 2j, 0j, -(1 / e) / 2j), 1j * complex(h))


def delta_parameters(T: FiniteDifferenceOperator, tol: float = 1e-12) -> Tuple[float, complex]:
    """Inverse of ``delta_theta_operator``: recover ``(theta mod 2pi, h)``."""
    if (T.l, T.m) != (-1, 1) or abs(T.coefficient(0)) > tol:
        raise InvalidOperator("operator is not of central form")
    e = 2j * T.coefficient(-1)   # e^{i theta}
    if abs(abs(e) - 1) > tol or abs(T.coefficient(1) + (1 / e) / 2j) > tol:
        raise InvalidOperator("coefficients are not e^{i theta}/(2i), -e^{-i theta}/(2i)")
    return cmath.phase(e) % TWO_PI, T.step / 1j


def forward_operator(h: complex = 1.0) -> FiniteDifferenceOperator:
    """``p(x + h) - p(x)``."""
    return FiniteDifferenceOperator(-1, 0, (1 + 0j, -1 + 0j), complex(h))


# ---------------------------------------------------------------- symbols
@dataclass(frozen=True)
class OperatorSymbol:
    """``Q(t) = t^offset * q(t)`` with ``q(0) != 0``."""

    q: Polynomial
    offset: int

    def __call__(self, t):
        return t ** self.offset * self.q(t)


def symbol(T: FiniteDifferenceOperator) -> OperatorSymbol:
    return OperatorSymbol(Polynomial(tuple(reversed(T.coeffs))), T.l)


@dataclass(frozen=True)
class ShiftFactorization:
    """``T = leading * S_h^power * prod_k (S_h - e^{i angle_k} I)``."""

    power: int
    factors: Tuple[float, ...]
    step: complex
    leading: complex

    def recompose(self) -> FiniteDifferenceOperator:
        q = Polynomial.from_roots([cmath.exp(1j * a) for a in self.factors], self.leading)
        cs = tuple(complex(c) for c in reversed(q.coeffs))
        return FiniteDifferenceOperator(self.power, self.power + len(self.factors), cs, self.step)


def factor_into_shifts(T: FiniteDifferenceOperator, tol: float = 1e-8,
                       cfg: Optional[SolverConfig] = None) -> ShiftFactorization:
    """Split ``T`` into unit-phase shift factors; ``NotUnitCircle`` if impossible."""
    sym = symbol(T)
    if sym.q.degree == 0:
        return ShiftFactorization(T.l, (), T.step, T.coeffs[-1])
    rs = find_roots(sym.q, cfg)
    angles = []
    for r in rs.roots:
        dev = abs(abs(r.location) - 1)
        if dev > tol:
            raise NotUnitCircle(f"symbol root {r.location:.6g} is off the unit circle by {dev:.3g}")
        angles.extend([cmath.phase(r.location) % TWO_PI] * r.multiplicity)
    fac = ShiftFactorization(T.l, tuple(sorted(angles)), T.step, T.coeffs[-1])
    back = fac.recompose()
    err = max(abs(a - b) for a, b in zip(back.coeffs, T.coeffs))
    if err > 1e-10 * max(abs(c) for c in T.coeffs):
        raise NotUnitCircle(f"factorisation does not reproduce the operator (error {err:.3g})")
    return fac


# -------------------------------------------------------------- Q_n family
def _reduce_pi(theta: float) -> float:
    t = math.fmod(theta, math.pi)
    if t < 0:
        t += math.pi
    if math.isclose(t, math.pi, rel_tol=0, abs_tol=1e-15):
        t = 0.0
    return t


def q_n(n: int, theta: float) -> Polynomial:
    """``Q_n = Delta_{theta,1}(x^n)`` from its binomial expansion (real coefficients)."""
    if n < 1:
        raise OutOfRange("n must be >= 1")
    e = unit(math.fmod(theta, TWO_PI))
    s, c = e.imag, e.real
    if _reduce_pi(theta) == 0.0:
        s, c = 0.0, math.copysign(1.0, c)
    coeffs = [0.0] * (n + 1)   # index = n - power
    for k in range(n // 2 + 1):
        coeffs[2 * k] += s * (-1) ** k * math.comb(n, 2 * k)
    for k in range((n - 1) // 2 + 1):
        coeffs[2 * k + 1] += c * (-1) ** k * math.comb(n, 2 * k + 1)
    return Polynomial._make(coeffs, rtol=0)


def q_n_roots_closed_form(n: int, theta: float, h: float = 1.0) -> List[float]:
    """Roots of ``Delta_{theta,h}(x^n)`` in decreasing order."""
    if n < 1:
        raise OutOfRange("n must be >= 1")
    t = _reduce_pi(theta)
    if t == 0.0:
        return [h / math.tan(math.pi * k / n) if 2 * k != n else 0.0 for k in range(1, n)]
    return [h / math.tan((math.pi * k - t) / n) for k in range(1, n + 1)]


def extremal_qn_roots(n: int, theta: float) -> Tuple[float, float]:
    """(min, max) root of ``Q_n``."""
    t = _reduce_pi(theta)
    if t == 0.0:
        if n < 2:
            raise EmptyRootList("Q_1 has no roots when theta = 0")
        return -1 / math.tan(math.pi / n), 1 / math.tan(math.pi / n)
    if n < 1:
        raise OutOfRange("n must be >= 1")
    return -1 / math.tan(t / n), 1 / math.tan((math.pi - t) / n)


# ----------------------------------------------- forward differences, Stirling
def forward_difference(p: Polynomial, m: int = 1) -> Polynomial:
    """``Delta^m p(z) = sum_k (-1)^k C(m,k) p(z + m - k)`` with step 1."""
    if m < 0:
        raise OutOfRange("m must be >= 0")
    if m == 0:
        return p
    T = FiniteDifferenceOperator.from_map({-(m - k): (-1) ** k * math.comb(m, k) for k in range(m + 1)}, 1.0)
    return apply(T, p)


def delta_power_exact(n: int, m: int) -> List[int]:
    """Exact integer coefficients (descending) of ``Delta^m z^n``; ``[]`` if m > n."""
    if n < 0 or m < 0:
        raise OutOfRange("n, m must be >= 0")
    asc = [0] * (n + 1)
    for k in range(m + 1):
        sign = (-1) ** (m - k) * math.comb(m, k)
        for j in range(n + 1):
            asc[j] += sign * math.comb(n, j) * k ** (n - j)
    while asc and asc[-1] == 0:
        asc.pop()
    return list(reversed(asc))


def stirling2(n: int, m: int) -> int:
    """Stirling number of the second kind via the exact alternating binomial sum."""
    if not (isinstance(n, int) and isinstance(m, int)) or n < 2 or not 1 <= m <= n - 1:
        raise OutOfRange("need 1 <= m <= n - 1")
    total = sum((-1) ** (m - k) * math.comb(m, k) * k ** n for k in range(m + 1))
    q, r = divmod(total, math.factorial(m))
    assert r == 0
    return q


def s_nm(n: int, m: int) -> Polynomial:
    """``S_nm(z) = (1/m!) sum_k (-1)^k C(m,k) (m z - k)^n``, degree ``n - m``."""
    if n < 2 or not 1 <= m <= n - 1:
        raise OutOfRange("need 1 <= m <= n - 1")
    asc = [0] * (n + 1)
    for k in range(m + 1):
        sign = (-1) ** k * math.comb(m, k)
        for j in range(n + 1):
            asc[j] += sign * math.comb(n, j) * m ** j * (-k) ** (n - j)
    fact = math.factorial(m)
    coeffs = [float(Fraction(c, fact)) for c in reversed(asc)]
    return Polynomial._make(coeffs, rtol=0)


def delta_zn_roots_closed_form(n: int) -> List[complex]:
    """Roots ``-1/2 - (i/2) cot(pi k / n)`` of ``Delta z^n``, k = 1..n-1."""
    if n < 2:
        raise OutOfRange("n must be >= 2")
    out = []
    for k in range(1, n):
        cot = 0.0 if 2 * k == n else 1 / math.tan(math.pi * k / n)
        out.append(complex(-0.5, -0.5 * cot))
    return out
