"""Dense complex polynomials stored in descending powers.

Coefficients are kept as a tuple ``(a0, a1, ..., an)`` with ``a0`` the leading
coefficient.  Two scalar modes exist: *standard* (Python ``complex``) and
*extended* (``mpmath.mpc`` at ``dps`` significant digits).  A polynomial carries
its mode; every operation keeps it and runs at the polynomial's own precision,
so extended values never silently collapse to the global mpmath setting.
"""
from __future__ import annotations

import cmath
import math
from contextlib import contextmanager, nullcontext
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import mpmath
import numpy as np

from .errors import AllZero, DegenerateAffine, InvalidLeading

STANDARD = "standard"
EXTENDED = "extended"
EXTENDED_DPS = 50

# relative trimming threshold for leading coefficients
TRIM_RTOL = 1e-13
# absolute floor applied only to user-supplied coefficient lists
INPUT_ATOL = 1e-15

Scalar = Union[complex, float, int, "mpmath.mpc", "mpmath.mpf"]


def is_mp(x) -> bool:
    return isinstance(x, (mpmath.mpc, mpmath.mpf))


@contextmanager
def extended_precision(dps: int = EXTENDED_DPS):
    """Run a block with mpmath working at (at least) ``dps`` digits."""
    with mpmath.workdps(max(dps, mpmath.mp.dps)):
        yield


def _context(dps: Optional[int]):
    return mpmath.workdps(dps) if dps else nullcontext()


def _to_scalar(c, dps: Optional[int]):
    if dps:
        return mpmath.mpc(c)
    c = complex(c)
    if not (math.isfinite(c.real) and math.isfinite(c.imag)):
        raise ValueError(f"non-finite coefficient {c!r}")
    return c


def _default_rtol(dps: Optional[int]) -> float:
    if dps:
        return mpmath.mpf(10) ** (-(dps - 8))
    return TRIM_RTOL


@dataclass(frozen=True)
class Polynomial:
    """Complex polynomial ``a0 x^n + ... + an``.

    The zero polynomial is the empty tuple (degree -1).  It only appears as an
    output of differentiation or of cancelling operators; root-level code
    rejects it.
    """

    coeffs: tuple
    dps: Optional[int] = None

    # ---------------------------------------------------------------- building
    @classmethod
    def _make(cls, coeffs: Sequence, dps: Optional[int] = None, *, reference=None,
              rtol=None, atol=0.0) -> "Polynomial":
        """Trim leading coefficients and build (zero polynomial allowed).

        ``reference`` gives, per coefficient, the magnitude of the terms that
        were summed to produce it, so that cancellation noise can be recognised
        even when the surviving coefficients span many orders of magnitude.
        Without it the reference is ``max|coeffs|``.
        """
        with _context(dps):
            cs = [_to_scalar(c, dps) for c in coeffs]
            if rtol is None:
                rtol = _default_rtol(dps)
            if not cs:
                return cls((), dps)
            absval = [abs(c) for c in cs]
            if reference is None:
                ref = [max(absval)] * len(cs)
            elif np.isscalar(reference) or is_mp(reference):
                ref = [reference] * len(cs)
            else:
                ref = list(reference)
                if len(ref) != len(cs):
                    raise ValueError("reference length must match coefficients")
            start = 0
            while start < len(cs) and absval[start] <= max(rtol * ref[start], atol):
                start += 1
            return cls(tuple(cs[start:]), dps)

    @classmethod
    def from_coefficients(cls, coeffs: Iterable, *, rtol: Optional[float] = None,
                          atol: float = INPUT_ATOL, dps: Optional[int] = None) -> "Polynomial":
        """Canonical polynomial from descending coefficients.

        Raises ``AllZero`` if nothing survives trimming.
        """
        coeffs = list(coeffs)
        if dps is None and any(is_mp(c) for c in coeffs):
            dps = EXTENDED_DPS
        p = cls._make(coeffs, dps, rtol=rtol, atol=atol)
        if p.is_zero:
            raise AllZero("every coefficient trims to zero")
        return p

    @classmethod
    def from_roots(cls, roots: Iterable, leading: Scalar = 1.0, *,
                   dps: Optional[int] = None) -> "Polynomial":
        roots = list(roots)
        if dps is None and (is_mp(leading) or any(is_mp(r) for r in roots)):
            dps = EXTENDED_DPS
        with _context(dps):
            lead = _to_scalar(leading, dps)
            if lead == 0:
                raise InvalidLeading("leading coefficient must be nonzero")
            cs = [lead]
            for r in roots:
                r = _to_scalar(r, dps)
                nxt = cs + [0 * lead]
                for i in range(1, len(nxt)):
                    nxt[i] = nxt[i] - r * cs[i - 1]
                cs = nxt
            return cls(tuple(cs), dps)

    @classmethod
    def constant(cls, c: Scalar, dps: Optional[int] = None) -> "Polynomial":
        return cls._make([c], dps)

    @classmethod
    def monomial(cls, n: int, c: Scalar = 1.0, dps: Optional[int] = None) -> "Polynomial":
        return cls._make([c] + [0] * n, dps)

    # ------------------------------------------------------------- properties
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self):
        return self.coeffs[0]

    @property
    def precision(self) -> str:
        return EXTENDED if self.dps else STANDARD

    @property
    def norm(self) -> float:
        """max |coefficient| (0 for the zero polynomial)."""
        if not self.coeffs:
            return 0.0
        return float(max(abs(c) for c in self.coeffs))

    def ascending(self) -> tuple:
        return tuple(reversed(self.coeffs))

    def coefficient(self, power: int):
        """Coefficient of ``x**power`` (0 outside the support)."""
        if power < 0 or power > self.degree:
            return 0
        return self.coeffs[self.degree - power]

    def as_array(self) -> np.ndarray:
        return np.array([complex(c) for c in self.coeffs], dtype=complex)

    # -------------------------------------------------------- precision modes
    def to_extended(self, dps: int = EXTENDED_DPS) -> "Polynomial":
        with mpmath.workdps(dps):
            return Polynomial(tuple(mpmath.mpc(c) for c in self.coeffs), dps)

    def to_standard(self) -> "Polynomial":
        return Polynomial(tuple(complex(c) for c in self.coeffs), None)

    def with_precision(self, dps: Optional[int]) -> "Polynomial":
        return self.to_extended(dps) if dps else self.to_standard()

    # ------------------------------------------------------------- evaluation
    def evaluate(self, z):
        """Horner evaluation; ``z`` may be a scalar or (standard mode) an array."""
        if not self.coeffs:
            return 0 * z
        with _context(self.dps):
            if self.dps:
                z = mpmath.mpc(z)
            acc = self.coeffs[0] + 0 * z
            for c in self.coeffs[1:]:
                acc = acc * z + c
            return acc

    __call__ = evaluate

    def eval_with_derivative(self, z):
        """(p(z), p'(z)) by a single Horner sweep."""
        with _context(self.dps):
            if self.dps:
                z = mpmath.mpc(z)
            if not self.coeffs:
                return 0 * z, 0 * z
            p = self.coeffs[0] + 0 * z
            dp = 0 * z
            for c in self.coeffs[1:]:
                dp = dp * z + p
                p = p * z + c
            return p, dp

    def abs_scale(self, z) -> float:
        """sum |a_j| |z|^(n-j): the magnitude scale of an evaluation at z."""
        r = abs(z)
        acc = 0.0
        for c in self.coeffs:
            acc = acc * r + abs(c)
        return acc

    # --------------------------------------------------------------- calculus
    def derivative(self, k: int = 1) -> "Polynomial":
        if k < 0:
            raise ValueError("derivative order must be non-negative")
        if k == 0:
            return self
        n = self.degree
        if k > n:
            return Polynomial((), self.dps)
        with _context(self.dps):
            cs = [c * math.perm(n - i, k) for i, c in enumerate(self.coeffs[: n - k + 1])]
            return Polynomial(tuple(cs), self.dps)

    def shift(self, lam: Scalar) -> "Polynomial":
        """``p(x - lam)`` by repeated synthetic division (Taylor recentering)."""
        if not self.coeffs:
            return self
        with _context(self.dps):
            mu = -_to_scalar(lam, self.dps)
            a = list(self.coeffs)
            n = len(a) - 1
            if mu != 0:
                for k in range(n):
                    for j in range(1, n - k + 1):
                        a[j] = a[j] + mu * a[j - 1]
            return Polynomial(tuple(a), self.dps)

    def affine_substitute(self, a: Scalar, b: Scalar) -> "Polynomial":
        """``p(a x + b)``."""
        with _context(self.dps):
            a = _to_scalar(a, self.dps)
            if a == 0:
                raise DegenerateAffine("affine map needs a != 0")
            q = self.shift(-_to_scalar(b, self.dps))
            n = q.degree
            cs = [c * a ** (n - i) for i, c in enumerate(q.coeffs)]
            return Polynomial(tuple(cs), self.dps)

    def reflect(self) -> "Polynomial":
        """``p(-x)``."""
        n = self.degree
        return Polynomial(tuple(c if (n - i) % 2 == 0 else -c for i, c in enumerate(self.coeffs)),
                          self.dps)

    # ------------------------------------------------------------- arithmetic
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        return Polynomial.constant(other, self.dps)

    def _padded_pair(self, other: "Polynomial"):
        n = max(len(self.coeffs), len(other.coeffs))
        zero = mpmath.mpc(0) if self.dps else 0j
        a = [zero] * (n - len(self.coeffs)) + list(self.coeffs)
        b = [zero] * (n - len(other.coeffs)) + list(other.coeffs)
        return a, b

    def __add__(self, other):
        other = self._coerce(other)
        dps = self.dps or other.dps
        with _context(dps):
            a, b = self._padded_pair(other)
            ref = [abs(x) + abs(y) for x, y in zip(a, b)]
            return Polynomial._make([x + y for x, y in zip(a, b)], dps, reference=ref)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(tuple(-c for c in self.coeffs), self.dps)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            with _context(self.dps):
                s = _to_scalar(other, self.dps)
                if s == 0:
                    return Polynomial((), self.dps)
                return Polynomial(tuple(c * s for c in self.coeffs), self.dps)
        dps = self.dps or other.dps
        if self.is_zero or other.is_zero:
            return Polynomial((), dps)
        with _context(dps):
            out = [0 * self.coeffs[0]] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, x in enumerate(self.coeffs):
                for j, y in enumerate(other.coeffs):
                    out[i + j] = out[i + j] + x * y
            return Polynomial._make(out, dps, rtol=0)

    __rmul__ = __mul__

    def __truediv__(self, s):
        with _context(self.dps):
            s = _to_scalar(s, self.dps)
            return Polynomial(tuple(c / s for c in self.coeffs), self.dps)

    def monic(self) -> "Polynomial":
        return self / self.leading

    # ---------------------------------------------------------------- reality
    def is_real(self, rtol: float = 1e-13) -> bool:
        tol = rtol * self.norm
        return all(abs(complex(c).imag) <= tol for c in self.coeffs)

    def realified(self, rtol: float = 1e-13) -> "Polynomial":
        """Drop imaginary parts when all are within ``rtol * norm``."""
        if not self.is_real(rtol):
            return self
        with _context(self.dps):
            if self.dps:
                cs = tuple(mpmath.mpc(mpmath.re(c), 0) for c in self.coeffs)
            else:
                cs = tuple(complex(c.real, 0.0) for c in self.coeffs)
            return Polynomial(cs, self.dps)

    # ------------------------------------------------------------------- misc
    def coefficient_distance(self, other: "Polynomial") -> float:
        """max |a_j - b_j| with degree padding."""
        a, b = self._padded_pair(other)
        return float(max((abs(x - y) for x, y in zip(a, b)), default=0.0))

    def to_json(self) -> dict:
        return {"coeffs": [[float(mpmath.re(c)), float(mpmath.im(c))] if is_mp(c)
                           else [c.real, c.imag] for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj, *, dps: Optional[int] = None) -> "Polynomial":
        """Parse ``{"coeffs": [[re, im], ...]}``; bare reals stand for ``[re, 0]``."""
        if not isinstance(obj, dict) or "coeffs" not in obj:
            raise ValueError('polynomial JSON needs a "coeffs" list')
        return cls.from_coefficients([parse_complex(c) for c in obj["coeffs"]], dps=dps)

    def __repr__(self) -> str:
        mode = f", dps={self.dps}" if self.dps else ""
        body = ", ".join(_fmt(c) for c in self.coeffs)
        return f"Polynomial([{body}]{mode})"


def parse_complex(c) -> complex:
    if isinstance(c, bool):
        raise ValueError("boolean is not a coefficient")
    if isinstance(c, (int, float)):
        return complex(c)
    if isinstance(c, (list, tuple)) and len(c) == 2 and all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in c):
        return complex(c[0], c[1])
    raise ValueError(f"cannot read complex number from {c!r}")


def _fmt(c) -> str:
    c = complex(c)
    if c.imag == 0:
        return f"{c.real:.6g}"
    return f"{c.real:.6g}{c.imag:+.6g}j"


# functional aliases matching the operation names used across the package
def from_coefficients(coeffs, **kw) -> Polynomial:
    return Polynomial.from_coefficients(coeffs, **kw)


def from_roots(roots, leading=1.0, **kw) -> Polynomial:
    return Polynomial.from_roots(roots, leading, **kw)


def evaluate(p: Polynomial, z):
    return p.evaluate(z)


def derivative(p: Polynomial, k: int = 1) -> Polynomial:
    return p.derivative(k)


def shift(p: Polynomial, lam) -> Polynomial:
    return p.shift(lam)


def affine_substitute(p: Polynomial, a, b) -> Polynomial:
    return p.affine_substitute(a, b)


def unit(theta: float) -> complex:
    """e^{i theta} with exact values at multiples of pi/2."""
    q = theta / (math.pi / 2)
    if q == round(q):
        return (1, 1j, -1, -1j)[int(round(q)) % 4]
    return cmath.exp(1j * theta)
