"""Large-step expansion of the roots of ``Delta_{theta,h}(p)`` and its empirical checks.

With ``c = -a1/(n a0)`` and ``lambda_k`` the roots of ``Q_n = Delta_{theta,1}(x^n)``,

    mu_k ~ h lambda_k + c
           - Q_n''(lambda_k) / (n! Q_n'(lambda_k)) * p^(n-2)(c) / (a0 h)
           - Q_n'''(lambda_k) / (n! Q_n'(lambda_k)) * p^(n-3)(c) / (a0 h^2)

with an error of order ``|h|^-3``.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import AmbiguousMatching, OrderUnsupported, PreconditionError
from .findiff import delta_theta, q_n, q_n_roots_closed_form
from .geometry import fit_line
from .poly import Polynomial
from .roots import SolverConfig, find_roots

MAX_ORDER = 3
QPRIME_GUARD = 1e-12
CSV_COLUMNS = ("h_magnitude", "root_index", "re", "im", "line_phi", "line_offset", "deviation")


@dataclass(frozen=True)
class AsymptoticPrediction:
    k: int                       # 1-based root index, lambda_k in decreasing order
    terms: Tuple[complex, complex, complex, complex]   # h lambda, c, 1/h term, 1/h^2 term
    truncation_order: int
    vanishing_terms: Tuple[int, ...] = ()   # orders whose term is identically zero at this n

    @property
    def value(self) -> complex:
        return sum(self.terms[: self.truncation_order + 1])

    def partial(self, order: int) -> complex:
        return sum(self.terms[: order + 1])


def _check_order(order: int):
    if not 0 <= order <= MAX_ORDER:
        raise OrderUnsupported(f"order must lie in 0..{MAX_ORDER}")


def _centre(p: Polynomial) -> complex:
    a = p.coeffs
    n = p.degree
    return complex(-a[1] / (n * a[0])) if n >= 1 else 0j


def correction_factors(p: Polynomial) -> Tuple[complex, complex]:
    """``B2 = p^(n-2)(c)/(n-2)!`` and ``B3 = p^(n-3)(c)/(n-3)!`` from derivatives of ``p``."""
    n, c = p.degree, _centre(p)
    b2 = complex(p.derivative(n - 2)(c)) / math.factorial(n - 2) if n >= 2 else 0j
    b3 = complex(p.derivative(n - 3)(c)) / math.factorial(n - 3) if n >= 3 else 0j
    return b2, b3


def correction_factors_explicit(p: Polynomial) -> Tuple[complex, complex]:
    """The same two numbers written directly in the coefficients ``a0..a3``."""
    n = p.degree
    a = [complex(x) for x in p.coeffs] + [0j] * 4
    a0, a1, a2, a3 = a[:4]
    b2 = a2 - (n - 1) * a1 ** 2 / (2 * n * a0) if n >= 2 else 0j
    b3 = (a3 - (n - 2) * a1 * a2 / (n * a0) + (n - 1) * (n - 2) * a1 ** 3 / (3 * n ** 2 * a0 ** 2)
          if n >= 3 else 0j)
    return b2, b3


def predict_roots(p: Polynomial, theta: float, h: complex, order: int = MAX_ORDER,
                  explicit: bool = False) -> List[AsymptoticPrediction]:
    """Truncated expansion for every root of ``Delta_{theta,h}(p)``.

    Terms that vanish identically for small ``n`` (``Q_n''`` or ``Q_n'''`` is the
    zero polynomial) are returned as zero and listed in ``vanishing_terms``.
    """
    _check_order(order)
    n = p.degree
    if n < 1:
        raise PreconditionError("need degree >= 1")
    h = complex(h)
    a0 = complex(p.leading)
    c = _centre(p)
    b2, b3 = correction_factors_explicit(p) if explicit else correction_factors(p)
    Q = q_n(n, theta)
    d1, d2, d3 = Q.derivative(1), Q.derivative(2), Q.derivative(3)
    vanishing = tuple(r for r, d in ((2, d2), (3, d3)) if d.is_zero)
    lams = q_n_roots_closed_form(n, theta, 1.0)
    fall2 = n * (n - 1)
    fall3 = n * (n - 1) * (n - 2)
    out = []
    for k, lam in enumerate(lams, start=1):
        qp = d1(lam)
        if abs(qp) <= QPRIME_GUARD * max(1.0, Q.norm):
            raise PreconditionError(f"Q_n' vanishes at lambda_{k}")
        t1 = h * lam
        tm1 = -(d2(lam) / qp) * b2 / (a0 * fall2 * h) if n >= 2 else 0j
        tm2 = -(d3(lam) / qp) * b3 / (a0 * fall3 * h ** 2) if n >= 3 else 0j
        out.append(AsymptoticPrediction(k, (complex(t1), c, complex(tm1), complex(tm2)), order, vanishing))
    return out


def match_roots(predicted: Sequence[complex], computed: Sequence[complex]) -> List[int]:
    """Greedy nearest matching; ``result[i]`` indexes the root paired with prediction ``i``."""
    P = np.asarray(predicted, dtype=complex)
    Z = np.asarray(computed, dtype=complex)
    if P.size != Z.size:
        raise AmbiguousMatching(f"{P.size} predictions but {Z.size} roots")
    D = np.abs(P[:, None] - Z[None, :])
    pairing = [-1] * P.size
    free_p, free_z = set(range(P.size)), set(range(Z.size))
    for flat in np.argsort(D, axis=None, kind="stable"):
        i, j = divmod(int(flat), Z.size)
        if i in free_p and j in free_z:
            pairing[i] = j
            free_p.discard(i)
            free_z.discard(j)
    nearest = D.argmin(axis=1)
    for i, j in enumerate(pairing):
        if nearest[i] != j:
            raise AmbiguousMatching(f"prediction {i} sits nearer another root than its partner")
    return pairing


@dataclass
class OrderCheckReport:
    h_values: List[float]
    errors_by_order: Dict[int, List[float]]
    estimated_rates: Dict[int, float]
    degenerate: Dict[int, bool] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"h_values": self.h_values,
                "errors_by_order": {str(k): v for k, v in self.errors_by_order.items()},
                "estimated_rates": {str(k): (None if math.isnan(v) else v)
                                    for k, v in self.estimated_rates.items()},
                "degenerate": {str(k): v for k, v in self.degenerate.items()}}


def fit_rate(h_values: Sequence[float], errors: Sequence[float]) -> float:
    """Decay rate ``r`` in ``error ~ C h^-r`` by least squares on the log-log data."""
    slope = np.polyfit(np.log(h_values), np.log(errors), 1)[0]
    return float(-slope)


def _computed_roots(p, theta, h, cfg):
    return find_roots(delta_theta(theta, h, p), cfg)


def order_check(p: Polynomial, theta: float, h_ray: complex, h_magnitudes: Sequence[float],
                cfg: Optional[SolverConfig] = None, noise_rtol: float = 1e-12) -> OrderCheckReport:
    """Max-over-roots prediction error for each order and the fitted decay rates.

    An order whose errors all sit at rounding level (relative ``noise_rtol``) is
    flagged degenerate and gets a NaN rate.
    """
    hs = [float(v) for v in h_magnitudes]
    if len(hs) < 3:
        raise PreconditionError("need at least three step magnitudes")
    if any(b <= a for a, b in zip(hs, hs[1:])) or hs[0] <= 0:
        raise PreconditionError("step magnitudes must be positive and strictly increasing")
    ray = complex(h_ray) / abs(complex(h_ray))
    errors: Dict[int, List[float]] = {r: [] for r in range(MAX_ORDER + 1)}
    noise = []
    for mag in hs:
        h = mag * ray
        preds = predict_roots(p, theta, h, MAX_ORDER)
        rs = _computed_roots(p, theta, h, cfg)
        z = rs.locations
        pairing = match_roots([pr.value for pr in preds], z)
        for r in range(MAX_ORDER + 1):
            errors[r].append(float(max(abs(pr.partial(r) - z[j]) for pr, j in zip(preds, pairing))))
        noise.append(noise_rtol * rs.scale)
    rates, degenerate = {}, {}
    for r, errs in errors.items():
        degenerate[r] = all(e <= n for e, n in zip(errs, noise))
        rates[r] = math.nan if degenerate[r] or min(errs) <= 0 else fit_rate(hs, errs)
    return OrderCheckReport(hs, errors, rates, degenerate)


@dataclass
class StripTrendRow:
    h_magnitude: float
    root_index: int
    re: float
    im: float
    line_phi: float
    line_offset: float
    deviation: float


@dataclass
class StripTrendReport:
    h_values: List[complex]
    line_phi: List[float]
    line_offset: List[float]
    deviation: List[float]
    expected_phi: float
    rows: List[StripTrendRow]
    max_residual: List[float] = field(default_factory=list)
    precision: List[str] = field(default_factory=list)

    def angle_errors(self) -> List[float]:
        return [angle_distance(phi, self.expected_phi) for phi in self.line_phi]

    def shrink_ratios(self) -> List[float]:
        d = self.deviation
        return [a / b if b > 0 else math.inf for a, b in zip(d, d[1:])]

    def rows_for(self, h_magnitude: float) -> List[StripTrendRow]:
        return [r for r in self.rows if r.h_magnitude == h_magnitude]

    def to_csv(self, rows: Optional[Sequence[StripTrendRow]] = None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in (self.rows if rows is None else rows):
            w.writerow([_g17(r.h_magnitude), r.root_index, _g17(r.re), _g17(r.im),
                        _g17(r.line_phi), _g17(r.line_offset), _g17(r.deviation)])
        return buf.getvalue()

    def summary(self) -> dict:
        return {"h": [[v.real, v.imag] for v in self.h_values],
                "line_phi": self.line_phi, "line_offset": self.line_offset,
                "deviation": self.deviation, "expected_phi": self.expected_phi,
                "angle_error": self.angle_errors(), "shrink_ratio": self.shrink_ratios(),
                "max_residual": self.max_residual, "precision": self.precision}


def _g17(x: float) -> str:
    return format(float(x), ".17g")


def angle_distance(a: float, b: float) -> float:
    """Distance between two line directions, i.e. modulo pi."""
    d = math.fmod(abs(a - b), math.pi)
    return min(d, math.pi - d)


def strip_trend(p: Polynomial, theta: float, h_ray: complex, h_magnitudes: Sequence[float],
                cfg: Optional[SolverConfig] = None) -> StripTrendReport:
    """Fit a line to the roots of ``Delta_{theta,h}(p)`` along a ray of steps.

    For large ``|h|`` the roots approach ``h lambda_k + c``, a line parallel to
    ``h``, so the expected direction is ``arg h`` modulo pi.
    """
    ray = complex(h_ray) / abs(complex(h_ray))
    expected = math.atan2(ray.imag, ray.real) % math.pi
    hs, phis, offs, devs, rows, resid, prec = [], [], [], [], [], [], []
    for mag in h_magnitudes:
        h = float(mag) * ray
        image = delta_theta(theta, h, p)
        rs = find_roots(image, cfg)
        line, dev = fit_line(rs)
        hs.append(h)
        phis.append(line.phi)
        offs.append(line.offset)
        devs.append(dev)
        resid.append(rs.max_residual)
        prec.append(rs.precision_mode)
        for idx, z in enumerate(rs.locations):
            rows.append(StripTrendRow(float(mag), idx, float(z.real), float(z.imag),
                                      line.phi, line.offset, float(line.distance(z))))
    return StripTrendReport(hs, phis, offs, devs, expected, rows, resid, prec)
