"""Evidence-gathering runs for open questions about ``Delta_{theta,h}``.

Nothing here asserts a result: every function returns counts of consistent and
inconsistent samples together with witnesses.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import ensembles as E
from .findiff import delta_theta
from .geometry import REALITY_TOL, SEPARATION_TOL, is_self_interlacing, min_separation
from .poly import Polynomial
from .roots import SolverConfig, find_roots

MAX_WITNESSES = 5


@dataclass
class Evidence:
    experiment: str
    params: dict
    consistent: int = 0
    violating: int = 0
    witnesses: List[dict] = field(default_factory=list)
    details: Dict[str, object] = field(default_factory=dict)

    def record(self, ok: bool, witness: Optional[dict] = None):
        if ok:
            self.consistent += 1
        else:
            self.violating += 1
            if witness is not None and len(self.witnesses) < MAX_WITNESSES:
                self.witnesses.append(witness)

    def to_json(self) -> dict:
        return {"experiment": self.experiment, "params": self.params, "consistent": self.consistent,
                "violating": self.violating, "witnesses": self.witnesses, "details": self.details}


def _iterate(theta, h, p, m):
    for _ in range(m):
        p = delta_theta(theta, h, p)
        if p.degree < 1:
            break
    return p


def stability(trials: int = 100, theta: float = 0.0, h: float = 1.0, seed: int = 0,
              max_degree: int = 8, cfg: Optional[SolverConfig] = None,
              tol: float = REALITY_TOL) -> Evidence:
    """Real Hurwitz-stable ``p``: do ``Delta^m p`` avoid non-real zeros with ``Re z >= 0``?"""
    ev = Evidence("stability", {"trials": trials, "theta": theta, "h": h, "seed": seed,
                                "max_degree": max_degree})
    for i in range(trials):
        rng = E.trial_rng(seed, i)
        n = int(rng.integers(2, max_degree + 1))
        pairs = int(rng.integers(0, n // 2 + 1))
        roots = [complex(-rng.uniform(0.1, 3.0)) for _ in range(n - 2 * pairs)]
        for _ in range(pairs):
            z = complex(-rng.uniform(0.1, 3.0), rng.uniform(0.1, 3.0))
            roots += [z, z.conjugate()]
        p = Polynomial.from_roots(roots).realified()
        bad = []
        for m in range(1, n):
            q = _iterate(theta, h, p, m)
            if q.degree < 1:
                break
            rs = find_roots(q, cfg)
            z = rs.locations
            hit = (np.abs(z.imag) > tol * rs.scale) & (z.real >= -tol * rs.scale)
            if np.any(hit):
                bad.append({"m": m, "roots": [[v.real, v.imag] for v in z[hit]]})
        ev.record(not bad, {"seed": seed, "trial": i, "roots": [[z.real, z.imag] for z in roots],
                            "violations": bad})
    return ev


def geometric_sum_si(n: int = 6, theta: float = 0.0, h: float = 1.0,
                     cfg: Optional[SolverConfig] = None) -> Evidence:
    """Classify ``Delta_{theta,h}(1 + x + ... + x^n)`` as SI, x times SI, or neither."""
    ev = Evidence("geometric_sum_si", {"n": n, "theta": theta, "h": h})
    p = Polynomial(tuple([1.0 + 0j] * (n + 1)))
    q = delta_theta(theta, h, p)
    label = "neither"
    if q.degree >= 1 and is_self_interlacing(q, cfg):
        label = "si"
    elif q.degree >= 2 and abs(q.coeffs[-1]) <= 1e-12 * q.norm:
        reduced = Polynomial(q.coeffs[:-1])
        if reduced.degree == 0 or is_self_interlacing(reduced, cfg):
            label = "x_times_si"
    ev.record(label != "neither", {"image": q.to_json()})
    ev.details["classification"] = label
    ev.details["image"] = q.to_json()
    return ev


def generic_simplicity(trials: int = 500, theta: float = 0.0, h: float = 1.0, seed: int = 0,
                       max_degree: int = 10, cfg: Optional[SolverConfig] = None,
                       sep_tol: float = SEPARATION_TOL) -> Evidence:
    """Random complex ``p``: how often does ``Delta_{theta,h}(p)`` have a repeated root?

    Also runs the excluded family ``q(z)(z + i k h)^2 (z + i (k+2) h)^2`` as a control.
    """
    ev = Evidence("generic_simplicity", {"trials": trials, "theta": theta, "h": h, "seed": seed,
                                         "max_degree": max_degree})
    ens = E.EnsembleConfig(2, max_degree)
    for i in range(trials):
        p, _ = E.random_coefficients(E.trial_rng(seed, i), ens)
        q = delta_theta(theta, h, p)
        if q.degree < 2:
            ev.record(True)
            continue
        rs = find_roots(q, cfg)
        gap = min_separation(rs) / rs.scale
        ev.record(gap > sep_tol, {"seed": seed, "trial": i, "polynomial": p.to_json(), "gap": gap})
    controls = []
    for k in (1, 2):
        base = Polynomial.from_roots([0.3 + 0.2j])
        p = base * Polynomial.from_roots([-1j * k * h] * 2 + [-1j * (k + 2) * h] * 2)
        rs = find_roots(delta_theta(theta, h, p), cfg)
        controls.append({"k": k, "max_multiplicity": max(r.multiplicity for r in rs.roots),
                         "min_gap": min_separation(rs)})
    ev.details["excluded_family"] = controls
    return ev


def _imag_range(rs) -> tuple:
    y = rs.locations.imag
    return float(y.min()), float(y.max())


def strip_decrease(trials: int = 100, theta: float = 0.0, h_values: Sequence[float] = (0.5, 1, 2, 4),
                   seed: int = 0, max_degree: int = 8, cfg: Optional[SolverConfig] = None,
                   tol: float = REALITY_TOL) -> Evidence:
    """Random complex ``p``: does the smallest horizontal strip holding the roots shrink?

    For each real step the image strip is compared with the strip of ``p``;
    the widths per step are kept to look at the trend in ``h``.
    """
    ev = Evidence("strip_decrease", {"trials": trials, "theta": theta, "h_values": list(h_values),
                                     "seed": seed, "max_degree": max_degree})
    widths = []
    monotone = 0
    for i in range(trials):
        rng = E.trial_rng(seed, i)
        n = int(rng.integers(2, max_degree + 1))
        roots = [complex(x, y) for x, y in zip(rng.uniform(-3, 3, n), rng.uniform(-2, 2, n))]
        p = Polynomial.from_roots(roots)
        lo, hi = _imag_range(find_roots(p, cfg))
        row, bad = [hi - lo], []
        for h in h_values:
            q = delta_theta(theta, h, p)
            if q.degree < 1:
                row.append(0.0)
                continue
            rs = find_roots(q, cfg)
            a, b = _imag_range(rs)
            row.append(b - a)
            slack = tol * rs.scale
            if a < lo - slack or b > hi + slack:
                bad.append({"h": h, "image_strip": [a, b], "strip": [lo, hi]})
        widths.append(row)
        monotone += int(all(x >= y - tol for x, y in zip(row, row[1:])))
        ev.record(not bad, {"seed": seed, "trial": i, "roots": [[z.real, z.imag] for z in roots],
                            "violations": bad})
    ev.details["mean_width"] = [float(v) for v in np.mean(np.array(widths), axis=0)]
    ev.details["monotone_in_h"] = monotone
    return ev


EXPERIMENTS = {
    "stability": stability,
    "geometric_sum_si": geometric_sum_si,
    "generic_simplicity": generic_simplicity,
    "strip_decrease": strip_decrease,
}
