"""All roots of a complex polynomial, with residuals and multiplicities.

Aberth-Ehrlich simultaneous iteration is the main route; a balanced companion
eigenvalue solve is the fallback when it stalls.  Clusters of raw roots that
numerically form one multiple root are collapsed (see ``_collapse_multiple``)
before single-linkage clustering assigns multiplicities.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence

import mpmath
import numpy as np

from .errors import DegreeTooLow, NoConvergence
from .poly import EXTENDED, EXTENDED_DPS, STANDARD, Polynomial

PRECISIONS = (STANDARD, EXTENDED, "auto")
# points closer than this (relative to scale) are tested as one multiple root;
# rounding splits an m-fold root by about eps**(1/m)
MULTIPLE_SUSPECT = 1e-2


@dataclass(frozen=True)
class SolverConfig:
    max_iterations: int = 200
    convergence_tol: float = 1e-14
    # relative to RootSet.scale
    cluster_radius: float = 1e-7
    # "auto" engages extended precision for degree > 30 or ill-conditioned roots
    precision: str = "auto"
    seed: int = 0
    residual_tol: float = 1e-9
    extended_dps: int = EXTENDED_DPS
    extended_degree: int = 30
    condition_limit: float = 1e12
    # derivative test threshold for accepting a cluster as one multiple root
    multiplicity_tol: float = 1e-12

    def __post_init__(self):
        if self.precision not in PRECISIONS:
            raise ValueError(f"precision must be one of {PRECISIONS}")
        for name in ("convergence_tol", "cluster_radius", "residual_tol", "multiplicity_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


def config_from_env(cfg: Optional[SolverConfig] = None) -> SolverConfig:
    """Apply the LINEDELTA_PRECISION override, if set."""
    cfg = cfg or SolverConfig()
    env = os.environ.get("LINEDELTA_PRECISION")
    if env:
        cfg = replace(cfg, precision=env.strip().lower())
    return cfg


@dataclass(frozen=True)
class Root:
    location: complex
    multiplicity: int
    residual: float


@dataclass(frozen=True)
class RootSet:
    roots: tuple
    scale: float
    precision_mode: str = STANDARD
    diagnostics: dict = field(default_factory=dict, compare=False)

    @property
    def degree(self) -> int:
        return sum(r.multiplicity for r in self.roots)

    @property
    def distinct(self) -> np.ndarray:
        return np.array([r.location for r in self.roots], dtype=complex)

    @property
    def locations(self) -> np.ndarray:
        """Locations repeated by multiplicity."""
        return np.array([r.location for r in self.roots for _ in range(r.multiplicity)],
                        dtype=complex)

    @property
    def max_residual(self) -> float:
        return max((r.residual for r in self.roots), default=0.0)

    def sorted_real(self) -> np.ndarray:
        return np.sort(self.locations.real)

    def to_json(self) -> dict:
        return {"roots": [{"re": r.location.real, "im": r.location.imag,
                           "mult": r.multiplicity, "residual": r.residual}
                          for r in self.roots],
                "scale": self.scale, "precision": self.precision_mode}

    @classmethod
    def from_json(cls, obj) -> "RootSet":
        roots = tuple(Root(complex(r["re"], r["im"]), int(r["mult"]), float(r.get("residual", 0.0)))
                      for r in obj["roots"])
        return cls(roots, _scale(r.location for r in roots), obj.get("precision", STANDARD))

    @classmethod
    def from_locations(cls, points: Sequence[complex], radius: float = 1e-7) -> "RootSet":
        """Exactly known roots (e.g. an ensemble's construction) as a RootSet."""
        return cluster_multiplicities(list(points), radius)


def _scale(points) -> float:
    return max([1.0] + [abs(complex(z)) for z in points])


# ------------------------------------------------------------------ clustering
def _single_linkage(points: Sequence[complex], radius: float) -> List[List[int]]:
    n = len(points)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(points[i] - points[j]) <= radius:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [groups[k] for k in sorted(groups)]


def cluster_multiplicities(raw: Sequence[complex], radius: float,
                           residuals: Optional[Sequence[float]] = None,
                           precision_mode: str = STANDARD) -> RootSet:
    """Single-linkage clustering of raw roots.

    ``radius`` is absolute.  Cluster centres are weighted by inverse Newton
    residual when residuals are given (plain mean otherwise); the recorded
    residual of a cluster is the smallest member residual.
    """
    if not radius > 0:
        raise ValueError("cluster radius must be positive")
    pts = [complex(z) for z in raw]
    res = list(residuals) if residuals is not None else [0.0] * len(pts)
    out = []
    for g in _single_linkage(pts, radius):
        if len(g) == 1:
            out.append(Root(pts[g[0]], 1, float(res[g[0]])))
            continue
        w = np.array([1.0 / (res[i] + 1e-300) for i in g]) if residuals is not None else np.ones(len(g))
        if not np.all(np.isfinite(w)):
            w = np.ones(len(g))
        centre = complex(np.sum(w * np.array([pts[i] for i in g])) / np.sum(w))
        out.append(Root(centre, len(g), float(min(res[i] for i in g))))
    out.sort(key=lambda r: (r.location.real, r.location.imag))
    return RootSet(tuple(out), _scale(r.location for r in out), precision_mode)


# ---------------------------------------------------------------- iterations
def _initial_guesses(a: Sequence, n: int, rng: np.random.Generator):
    """Circle around the centroid with a Fujiwara-type radius, jittered angles."""
    a0 = complex(a[0])
    centre = -complex(a[1]) / (n * a0)
    shifted = Polynomial(tuple(complex(c) for c in a)).shift(-centre).coeffs
    bound = 0.0
    for k in range(1, n + 1):
        ratio = abs(shifted[k] / a0)
        if k == n:
            ratio /= 2.0
        bound = max(bound, ratio ** (1.0 / k))
    radius = 2.0 * bound if bound > 0 else 1.0
    jitter = rng.uniform(-0.25, 0.25, size=n)
    angles = 2 * np.pi * (np.arange(n) + 0.5 + jitter) / n + 0.4
    return centre + radius * np.exp(1j * angles)


def _horner_pair(a: np.ndarray, z: np.ndarray):
    p = np.full_like(z, a[0])
    dp = np.zeros_like(z)
    for c in a[1:]:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _abs_horner(a_abs: np.ndarray, r: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(r)
    for c in a_abs:
        acc = acc * r + c
    return acc


def _aberth_standard(a: np.ndarray, z: np.ndarray, cfg: SolverConfig):
    n = len(z)
    a_abs = np.abs(a)
    eps = np.finfo(float).eps
    active = np.ones(n, dtype=bool)
    it = 0
    for it in range(1, cfg.max_iterations + 1):
        p, dp = _horner_pair(a, z)
        # residual already at rounding level: nothing left to gain
        active &= np.abs(p) > 4 * n * eps * _abs_horner(a_abs, np.abs(z))
        if not active.any():
            return z, True, it
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        s = inv.sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            denom = dp / p - s
            w = np.where(p == 0, 0.0, 1.0 / denom)
        bad = ~np.isfinite(w)
        if bad.any():
            w[bad] = 1e-8 * (1 + np.abs(z[bad]))
        w = np.where(active, w, 0.0)
        z = z - w
        active &= np.abs(w) > cfg.convergence_tol * (1 + np.abs(z))
        if not active.any():
            return z, True, it
    return z, False, it


def _aberth_extended(a: list, z: list, cfg: SolverConfig):
    n = len(z)
    tol = mpmath.mpf(10) ** (-(mpmath.mp.dps - 5))
    eps = mpmath.mpf(2) ** (-mpmath.mp.prec)
    a_abs = [abs(c) for c in a]
    active = [True] * n
    it = 0
    for it in range(1, 4 * cfg.max_iterations + 1):
        for k in range(n):
            if not active[k]:
                continue
            zk = z[k]
            p = a[0]
            dp = mpmath.mpc(0)
            for c in a[1:]:
                dp = dp * zk + p
                p = p * zk + c
            r = abs(zk)
            floor = mpmath.mpf(0)
            for c in a_abs:
                floor = floor * r + c
            if abs(p) <= 4 * n * eps * floor:
                active[k] = False
                continue
            s = mpmath.fsum(1 / (zk - z[j]) for j in range(n) if j != k)
            denom = dp / p - s
            w = 1 / denom if denom != 0 else mpmath.mpf(10) ** (-20) * (1 + abs(zk))
            z[k] = zk - w
            if abs(w) <= tol * (1 + abs(z[k])):
                active[k] = False
        if not any(active):
            return z, True, it
    return z, False, it


def _newton_polish(poly: Polynomial, z, steps: int = 2):
    """A few Newton steps, each kept only if the residual does not grow."""
    out = []
    for zk in z:
        best = zk
        pv, dv = poly.eval_with_derivative(best)
        for _ in range(steps):
            if dv == 0 or pv == 0:
                break
            cand = best - pv / dv
            pc, dc = poly.eval_with_derivative(cand)
            if abs(pc) <= abs(pv):
                best, pv, dv = cand, pc, dc
            else:
                break
        out.append(best)
    return out


def _taylor_coeffs(poly: Polynomial, c, upto: int):
    """Taylor coefficients p^(j)(c)/j! and their magnitude scales, j < upto."""
    vals, scales = [], []
    q = poly
    for j in range(upto):
        if q.is_zero:
            break
        vals.append(abs(q(c)) / math.factorial(j))
        scales.append(q.abs_scale(c) / math.factorial(j))
        q = q.derivative()
    return vals, scales


def _collapse_multiple(poly: Polynomial, z: list, scale: float, cfg: SolverConfig, suspect: float):
    """Replace clusters that behave like one multiple root by their mean.

    Rounding splits an m-fold root into m points roughly eps**(1/m) apart, far
    outside the clustering radius.  The mean of the cluster is accurate to
    O(eps), so the cluster is accepted as an m-fold root at the mean when all
    Taylor coefficients of order < m vanish there relative to their scale.  A
    cluster that fails is split again at a smaller linkage radius, since a
    multiple root may sit close to an unrelated simple one.
    """
    pts = [complex(v) for v in z]
    out = list(z)
    collapsed = 0
    floor = cfg.cluster_radius * scale
    pending = [(g, suspect * scale) for g in _single_linkage(pts, suspect * scale)]
    while pending:
        g, radius = pending.pop()
        if len(g) < 2:
            continue
        centre = _multiple_centre(poly, [z[i] for i in g], suspect * scale, cfg.multiplicity_tol)
        if centre is not None:
            for i in g:
                out[i] = centre
            collapsed += 1
            continue
        radius /= 4
        if radius < floor:
            continue
        sub = _single_linkage([pts[i] for i in g], radius)
        pending.extend(([g[j] for j in part], radius) for part in sub)
    return out, collapsed


def _multiple_centre(poly: Polynomial, members: list, limit: float, tol: float):
    """Centre of a cluster if it passes as one multiple root, else None."""
    m = len(members)
    with mpmath.workdps(poly.dps) if poly.dps else _null():
        centre = sum(members) / m
        # p^(m-1) has a simple root at an m-fold root of p
        lo, hi = poly.derivative(m - 1), poly.derivative(m)
        for _ in range(4):
            d = hi(centre)
            if d == 0:
                break
            step = lo(centre) / d
            if not abs(step) <= limit:
                break
            centre = centre - step
    vals, scales = _taylor_coeffs(poly, centre, m)
    if all(v <= tol * s for v, s in zip(vals, scales)):
        return centre
    return None


def _null():
    from contextlib import nullcontext
    return nullcontext()


def _condition(poly: Polynomial, roots: RootSet) -> float:
    worst = 0.0
    dp = poly.derivative()
    for r in roots.roots:
        if r.multiplicity > 1:
            continue
        d = abs(complex(dp(r.location)))
        num = poly.abs_scale(r.location)
        worst = max(worst, math.inf if d == 0 else num / (d * roots.scale))
    return worst


def _residual(poly: Polynomial, z) -> float:
    return float(abs(poly(z))) / poly.norm


def _certified(poly: Polynomial, z, res: float, cfg: SolverConfig) -> bool:
    return res <= cfg.residual_tol * (1 + abs(complex(z))) ** poly.degree


def _solve(poly: Polynomial, cfg: SolverConfig) -> RootSet:
    n = poly.degree
    rng = np.random.default_rng(cfg.seed)
    a = [complex(c) for c in poly.coeffs]
    start = _initial_guesses(a, n, rng)
    diag = {"iterations": 0, "fallback": False}
    if poly.dps:
        mode = EXTENDED
        with mpmath.workdps(poly.dps):
            z0 = [mpmath.mpc(v) for v in start]
            z, ok, it = _aberth_extended(list(poly.coeffs), z0, cfg)
            diag["iterations"] = it
            if not ok:
                diag["fallback"] = True
                try:
                    z = list(mpmath.polyroots(list(poly.coeffs), maxsteps=400, extraprec=2 * poly.dps))
                except mpmath.libmp.libhyper.NoConvergence:
                    pass
            z = _newton_polish(poly, [mpmath.mpc(v) for v in z])
        suspect = MULTIPLE_SUSPECT
    else:
        mode = STANDARD
        arr = np.array(a, dtype=complex)
        z, ok, it = _aberth_standard(arr, start, cfg)
        diag["iterations"] = it
        if not ok:
            diag["fallback"] = True
            z = np.linalg.eigvals(_companion(arr))
        z = _newton_polish(poly, [complex(v) for v in z])
        suspect = MULTIPLE_SUSPECT
    scale = _scale(complex(v) for v in z)
    z, diag["collapsed"] = _collapse_multiple(poly, z, scale, cfg, suspect)
    residuals = [_residual(poly, v) for v in z]
    rs = cluster_multiplicities([complex(v) for v in z], cfg.cluster_radius * scale, residuals, mode)
    # a simple root keeps the residual of its unrounded iterate; merged centres are re-evaluated
    final = tuple(r if r.multiplicity == 1 else
                  Root(r.location, r.multiplicity, _residual(poly, _lift(r.location, poly.dps)))
                  for r in rs.roots)
    rs = RootSet(final, rs.scale, mode, diag)
    bad = [r for r in rs.roots if not _certified(poly, r.location, r.residual, cfg)]
    if bad:
        raise NoConvergence(f"{len(bad)} root(s) failed residual certification",
                            partial=rs, diagnostics=diag)
    return rs


def _lift(z: complex, dps):
    return mpmath.mpc(z) if dps else z


def _companion(a: np.ndarray) -> np.ndarray:
    n = len(a) - 1
    c = np.zeros((n, n), dtype=complex)
    c[0, :] = -a[1:] / a[0]
    c[1:, :-1] = np.eye(n - 1)
    return c


def find_roots(p: Polynomial, cfg: Optional[SolverConfig] = None) -> RootSet:
    """All ``deg p`` roots of ``p`` with multiplicities and residuals.

    Deterministic for a fixed ``cfg.seed``.  In ``auto`` mode extended precision
    is used for degree above ``cfg.extended_degree`` or when a standard solve
    yields a root condition estimate above ``cfg.condition_limit``.
    """
    cfg = cfg or SolverConfig()
    if p.is_zero or p.degree < 1:
        raise DegreeTooLow("root finding needs degree >= 1")
    if cfg.precision == EXTENDED and not p.dps:
        p = p.to_extended(cfg.extended_dps)
    elif cfg.precision == STANDARD and p.dps:
        p = p.to_standard()
    elif cfg.precision == "auto" and not p.dps and p.degree > cfg.extended_degree:
        p = p.to_extended(cfg.extended_dps)
    if p.degree == 1:
        z = -p.coeffs[1] / p.coeffs[0]
        return RootSet((Root(complex(z), 1, _residual(p, z)),), _scale([complex(z)]), p.precision)
    try:
        rs = _solve(p, cfg)
    except NoConvergence:
        if cfg.precision != "auto" or p.dps:
            raise
        return _solve(p.to_extended(cfg.extended_dps), cfg)
    if cfg.precision == "auto" and not p.dps and _condition(p, rs) > cfg.condition_limit:
        return _solve(p.to_extended(cfg.extended_dps), cfg)
    return rs
