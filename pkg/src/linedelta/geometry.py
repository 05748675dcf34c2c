"""Where roots sit: lines, strips, mesh, extremal roots, simplicity and interlacing."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import LengthMismatch, NotReal, OutOfRange, Underdetermined
from .poly import Polynomial, unit
from .roots import RootSet, SolverConfig, find_roots

REALITY_TOL = 1e-8
SEPARATION_TOL = 1e-6
LINE_EQ_TOL = 1e-9


def _canonical(phi: float, d: float) -> Tuple[float, float]:
    """Bring ``phi`` into [0, pi); flipping the direction flips the offset sign."""
    k = math.floor(phi / math.pi)
    phi -= k * math.pi
    if k % 2:
        d = -d
    if phi >= math.pi - 1e-15:
        phi, d = 0.0, -d
    return phi, d


@dataclass(frozen=True)
class Line:
    """``{z : Im(e^{-i phi} z) = offset}``, i.e. ``a e^{i phi} + c`` for real ``a``."""

    phi: float
    offset: float

    def __post_init__(self):
        phi, d = _canonical(self.phi, self.offset)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "offset", d)

    @classmethod
    def through(cls, c: complex, phi: float) -> "Line":
        return cls(phi, (unit(-phi) * c).imag)

    @property
    def direction(self) -> complex:
        return unit(self.phi)

    def normal_coordinate(self, z):
        return (np.exp(-1j * self.phi) * np.asarray(z)).imag

    def distance(self, z):
        return np.abs(self.normal_coordinate(z) - self.offset)

    def point(self, a: float = 0.0) -> complex:
        return (a + 1j * self.offset) * self.direction

    def shifted(self, delta: float) -> "Line":
        return Line(self.phi, self.offset + delta)

    def same_as(self, other: "Line", tol: float = LINE_EQ_TOL) -> bool:
        dphi = abs(self.phi - other.phi)
        if dphi <= tol:
            return abs(self.offset - other.offset) <= tol
        if abs(dphi - math.pi) <= tol:   # phi near 0 on one side and near pi on the other
            return abs(self.offset + other.offset) <= tol
        return False


@dataclass(frozen=True)
class Strip:
    """Closed strip ``d_low <= Im(e^{-i phi} z) <= d_high``."""

    phi: float
    d_low: float
    d_high: float

    def __post_init__(self):
        if self.d_low > self.d_high:
            raise ValueError("d_low must not exceed d_high")
        phi, lo = _canonical(self.phi, self.d_low)
        _, hi = _canonical(self.phi, self.d_high)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "d_low", min(lo, hi))
        object.__setattr__(self, "d_high", max(lo, hi))

    @classmethod
    def horizontal(cls, r: float) -> "Strip":
        """``|Im z| <= r``."""
        return cls(0.0, -r, r)

    @property
    def width(self) -> float:
        return self.d_high - self.d_low


def _points(rs) -> np.ndarray:
    if isinstance(rs, RootSet):
        return rs.locations
    return np.asarray(rs, dtype=complex)


def _scale(rs) -> float:
    if isinstance(rs, RootSet):
        return rs.scale
    pts = _points(rs)
    return max(1.0, float(np.max(np.abs(pts)))) if pts.size else 1.0


def fit_line(rs: RootSet) -> Tuple[Line, float]:
    """Total-least-squares line through the roots, weighted by multiplicity."""
    distinct = rs.distinct if isinstance(rs, RootSet) else np.unique(_points(rs))
    if len(distinct) < 2:
        raise Underdetermined("need at least two distinct roots to fit a line")
    z = _points(rs)
    centre = z.mean()
    w = z - centre
    cov = np.array([[np.mean(w.real ** 2), np.mean(w.real * w.imag)],
                    [np.mean(w.real * w.imag), np.mean(w.imag ** 2)]])
    vals, vecs = np.linalg.eigh(cov)
    vx, vy = vecs[:, -1]
    line = Line.through(complex(centre), math.atan2(vy, vx))
    return line, float(np.max(line.distance(z)))


def on_line(rs: RootSet, line: Line, tol: float = REALITY_TOL) -> bool:
    return bool(np.all(line.distance(_points(rs)) <= tol * _scale(rs)))


def in_strip(rs: RootSet, strip: Strip, tol: float = REALITY_TOL) -> bool:
    y = Line(strip.phi, 0.0).normal_coordinate(_points(rs))
    slack = tol * _scale(rs)
    return bool(np.all((y >= strip.d_low - slack) & (y <= strip.d_high + slack)))


def strip_excess(rs: RootSet, strip: Strip) -> float:
    """Largest distance by which a root leaves the strip (<= 0 when inside)."""
    y = Line(strip.phi, 0.0).normal_coordinate(_points(rs))
    if y.size == 0:
        return -math.inf
    return float(max(np.max(y - strip.d_high), np.max(strip.d_low - y)))


def _real_parts(rs, reality_tol: float) -> np.ndarray:
    z = _points(rs)
    if z.size and np.max(np.abs(z.imag)) > reality_tol * _scale(rs):
        raise NotReal(f"root imaginary part {np.max(np.abs(z.imag)):.3g} exceeds tolerance")
    return np.sort(z.real)


def mesh(rs: RootSet, reality_tol: float = REALITY_TOL) -> float:
    """Smallest gap between consecutive real roots; inf for at most one root."""
    x = _real_parts(rs, reality_tol)
    if x.size <= 1:
        return math.inf
    if isinstance(rs, RootSet) and any(r.multiplicity > 1 for r in rs.roots):
        return 0.0
    return float(np.min(np.diff(x)))


def _reduce_pi(theta: float) -> float:
    t = math.fmod(theta, math.pi)
    if t < 0:
        t += math.pi
    return 0.0 if math.isclose(t, math.pi, rel_tol=0, abs_tol=1e-15) else t


def min_mesh_formula(n: int, theta: float, h: float = 1.0) -> float:
    """Mesh of ``Delta_{theta,h}(x^n)`` in closed form.

    With ``psi = |pi - 2 theta|`` (so ``psi = pi`` when theta = 0) the even-n value is
    ``h sin(pi/n) / (cos((pi-psi)/2n) cos((pi+psi)/2n))`` and the odd-n value is
    ``h sin(pi/n) / (cos(psi/2n) cos((2pi-psi)/2n))``.
    """
    t = _reduce_pi(theta)
    if n < 2 or (t == 0.0 and n < 3):
        raise OutOfRange("need n >= 2, or n >= 3 when theta = 0")
    if h <= 0:
        raise OutOfRange("h must be positive")
    psi = math.pi if t == 0.0 else abs(math.pi - 2 * t)
    s = math.sin(math.pi / n)
    if n % 2 == 0:
        den = math.cos((math.pi - psi) / (2 * n)) * math.cos((math.pi + psi) / (2 * n))
    else:
        den = math.cos(psi / (2 * n)) * math.cos((2 * math.pi - psi) / (2 * n))
    return h * s / den


def extremal_roots(rs: RootSet, reality_tol: float = REALITY_TOL) -> Tuple[float, float]:
    x = _real_parts(rs, reality_tol)
    if x.size == 0:
        raise ValueError("no roots")
    return float(x[0]), float(x[-1])


def min_separation(rs) -> float:
    z = _points(rs)
    if isinstance(rs, RootSet) and any(r.multiplicity > 1 for r in rs.roots):
        return 0.0
    if z.size < 2:
        return math.inf
    d = np.abs(z[:, None] - z[None, :])
    d[np.diag_indices_from(d)] = np.inf
    return float(d.min())


def is_simple(rs: RootSet, sep_tol: float = SEPARATION_TOL) -> bool:
    return min_separation(rs) > sep_tol * _scale(rs)


def interlaces(a: Sequence[float], b: Sequence[float], strict: bool = False, tol: float = 0.0) -> bool:
    """True when ``a1 <= b1 <= a2 <= ...`` or ``b1 <= a1 <= b2 <= ...``.

    Both inputs are sorted ascending and of equal length.  ``strict`` demands
    gaps larger than ``tol``; otherwise ``tol`` is allowed slack.
    """
    a, b = list(a), list(b)
    if len(a) != len(b):
        raise LengthMismatch(f"lengths {len(a)} and {len(b)} differ")

    def chain(xs, ys):
        seq = [v for pair in zip(xs, ys) for v in pair]
        gaps = np.diff(seq)
        return bool(np.all(gaps > tol)) if strict else bool(np.all(gaps >= -tol))

    return chain(a, b) or chain(b, a)


def is_self_interlacing(p: Polynomial, cfg: Optional[SolverConfig] = None,
                        reality_tol: float = REALITY_TOL, sep_tol: float = SEPARATION_TOL) -> bool:
    """Real simple roots of ``p`` strictly interlacing those of ``p(-z)``."""
    rs = find_roots(p, cfg)
    try:
        x = _real_parts(rs, reality_tol)
    except NotReal:
        return False
    if not is_simple(rs, sep_tol):
        return False
    return interlaces(x, np.sort(-x), strict=True, tol=sep_tol * rs.scale)


def count_nonreal(rs: RootSet, reality_tol: float = REALITY_TOL) -> int:
    z = _points(rs)
    return int(np.sum(np.abs(z.imag) > reality_tol * _scale(rs)))
