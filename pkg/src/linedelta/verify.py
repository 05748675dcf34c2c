"""Monte-Carlo verification of the root-geometry statements.

Each check is a per-trial function ``(rng, **params) -> TrialOutcome``.  Trial
``i`` of a run seeded with ``s`` draws from ``SeedSequence([s, i])``, so a
report is the same whatever the worker count and any failure can be replayed
from its seed and index alone.
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import ensembles as E
from .errors import InvalidOperator, OutOfRange
from .findiff import (FiniteDifferenceOperator, apply, delta_theta, extremal_qn_roots,
                      factor_into_shifts)
from .geometry import (REALITY_TOL, SEPARATION_TOL, Line, Strip, count_nonreal, is_self_interlacing,
                       mesh, min_mesh_formula, min_separation, strip_excess)
from .poly import Polynomial
from .roots import SolverConfig, find_roots
from .walsh import delta_as_convolution_residual, verify_oishi_bounds, walsh_convolve

DEFAULT_THETAS = (0.0, math.pi / 4, 0.9 * math.pi)
DEFAULT_STEPS = (0.1, 1.0, 10.0)


@dataclass
class TrialOutcome:
    deviation: float
    polynomial: Polynomial
    witness: Optional[dict] = None     # None means the trial passed
    tags: Dict[str, int] = field(default_factory=dict)


@dataclass
class Failure:
    seed: int
    trial: int
    polynomial: dict
    witness: dict


@dataclass
class Report:
    check: str
    trials: int
    seed: int
    params: dict
    failures: List[Failure]
    worst_deviation: float
    tags: Dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"check": self.check, "trials": self.trials, "seed": self.seed,
                "params": self.params, "failures": [asdict(f) for f in self.failures],
                "worst_deviation": _finite(self.worst_deviation), "tags": dict(sorted(self.tags.items()))}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def _finite(x):
    return x if isinstance(x, (int, float)) and math.isfinite(x) else None


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    if hasattr(x, "to_json"):
        return x.to_json()
    if hasattr(x, "__dataclass_fields__"):
        return _jsonable(asdict(x))
    return x


def _run_one(args):
    fn, seed, i, params = args
    return fn(E.trial_rng(seed, i), **params)


def run_trials(check: str, fn: Callable[..., TrialOutcome], trials: int, seed: int,
               params: dict, workers: int = 1) -> Report:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    jobs = [(fn, seed, i, params) for i in range(trials)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            outcomes = list(ex.map(_run_one, jobs, chunksize=max(1, trials // (4 * workers))))
    else:
        outcomes = [_run_one(j) for j in jobs]
    failures, worst, tags = [], -math.inf, {}
    for i, out in enumerate(outcomes):
        worst = max(worst, out.deviation)
        for k, v in out.tags.items():
            tags[k] = tags.get(k, 0) + v
        if out.witness is not None:
            failures.append(Failure(seed, i, out.polynomial.to_json(), _jsonable(out.witness)))
    return Report(check, trials, seed, _jsonable(params), failures, worst, tags)


def _image(theta, h, p, cfg):
    q = delta_theta(theta, h, p)
    return q, (find_roots(q, cfg) if q.degree >= 1 else None)


# ---------------------------------------------------------------- hyperbolic
def trial_simplicity(rng, thetas=DEFAULT_THETAS, steps=DEFAULT_STEPS, cfg=None,
                     ensemble=E.EnsembleConfig(), reality_tol=REALITY_TOL, sep_tol=SEPARATION_TOL):
    """Images of a hyperbolic polynomial are real-rooted with simple roots."""
    p, _ = E.hyperbolic(rng, ensemble)
    worst, bad = 0.0, []
    for theta in thetas:
        for h in steps:
            _, rs = _image(theta, h, p, cfg)
            if rs is None:
                continue
            imag = float(np.max(np.abs(rs.locations.imag))) / rs.scale
            sep = min_separation(rs) / rs.scale
            worst = max(worst, imag)
            if imag > reality_tol or sep <= sep_tol:
                bad.append({"theta": theta, "h": h, "max_imag": imag, "min_gap": sep})
    return TrialOutcome(worst, p, {"violations": bad} if bad else None)


def trial_extremal(rng, thetas=DEFAULT_THETAS, steps=DEFAULT_STEPS, cfg=None,
                   ensemble=E.EnsembleConfig(), tol=REALITY_TOL):
    """``mu_max(Delta p) <= mu_max(p) + h mu_max(Q_n)`` and the mirrored lower bound."""
    p, roots = E.hyperbolic(rng, ensemble)
    n = p.degree
    lo, hi = min(roots), max(roots)
    worst, bad = -math.inf, []
    for theta in thetas:
        for h in steps:
            _, rs = _image(theta, h, p, cfg)
            if rs is None:
                continue
            qmin, qmax = extremal_qn_roots(n, theta)
            x = rs.locations.real
            viol = max(float(x.max()) - (hi + h * qmax), (lo + h * qmin) - float(x.min())) / rs.scale
            worst = max(worst, viol)
            if viol > tol:
                bad.append({"theta": theta, "h": h, "violation": viol})
    return TrialOutcome(worst, p, {"violations": bad} if bad else None)


def _mesh_of_roots(roots: Sequence[float]) -> float:
    x = np.sort(np.asarray(roots, dtype=float))
    return float(np.min(np.diff(x))) if x.size > 1 else math.inf


def trial_mesh(rng, thetas=DEFAULT_THETAS, steps=DEFAULT_STEPS, cfg=None,
               ensemble=E.EnsembleConfig(), tol=REALITY_TOL):
    """``mesh(Delta p) >= max(mesh p, mesh Delta(x^n))``; n >= 3 when theta = 0."""
    p, roots = E.hyperbolic(rng, ensemble)
    n = p.degree
    mp = _mesh_of_roots(roots)
    worst, bad, tags = -math.inf, [], {"doubled_root": int(mp == 0.0)}
    for theta in thetas:
        for h in steps:
            try:
                bound = max(mp, min_mesh_formula(n, theta, h))
            except OutOfRange:
                continue   # theta = 0 with n = 2 lies outside the statement
            _, rs = _image(theta, h, p, cfg)
            m = mesh(rs)
            viol = (bound - m) / rs.scale
            worst = max(worst, viol)
            if viol > tol:
                bad.append({"theta": theta, "h": h, "mesh": m, "bound": bound})
    return TrialOutcome(worst, p, {"violations": bad} if bad else None, tags)


def trial_riesz(rng, cfg=None, ensemble=E.EnsembleConfig(), tol=REALITY_TOL):
    """Differentiation does not shrink the mesh."""
    p, roots = E.hyperbolic(rng, ensemble)
    mp = _mesh_of_roots(roots)
    rs = find_roots(p.derivative(), cfg) if p.degree >= 2 else None
    md = mesh(rs) if rs is not None else math.inf
    viol = (mp - md) / (rs.scale if rs is not None else 1.0) if math.isfinite(md) else -math.inf
    return TrialOutcome(viol, p, {"mesh_p": mp, "mesh_dp": md} if viol > tol else None)


# ------------------------------------------------------------ lines, strips
def predicted_lines(T: FiniteDifferenceOperator, line_in: Line, tol: float = 1e-9) -> Tuple[Line, Line]:
    """Image line of ``T`` for roots on ``line_in``, in both orientations.

    Each factor moves the line by half the step, and ``S_h^l`` by ``l h``; the
    normal displacement is ``(l + m)/2 * Im(e^{-i phi} h)``.  The second line is
    the opposite orientation.  The step must be normal to the line.
    """
    e = np.exp(-1j * line_in.phi) * T.step
    if T.m > T.l and abs(e.real) > tol * abs(T.step):
        raise InvalidOperator("step is not perpendicular to the line")
    shift = (T.l + T.m) / 2 * float(e.imag)
    return line_in.shifted(shift), line_in.shifted(-shift)


def trial_line(rng, T: FiniteDifferenceOperator, line_in: Line, cfg=None,
               ensemble=E.EnsembleConfig(), tol=REALITY_TOL, sep_tol=SEPARATION_TOL):
    p, _ = E.line_rooted(rng, line_in.phi, line_in.offset, ensemble)
    signed, flipped = predicted_lines(T, line_in)
    q = apply(T, p)
    if q.degree < 1:
        return TrialOutcome(0.0, p, None, {"no_roots": 1})
    rs = find_roots(q, cfg)
    z = rs.locations
    d_signed = float(np.max(signed.distance(z))) / rs.scale
    d_flip = float(np.max(flipped.distance(z))) / rs.scale
    dev = min(d_signed, d_flip)
    tags = {"orientation_signed": int(d_signed <= tol), "orientation_flipped": int(d_flip <= tol)}
    bad = {}
    if dev > tol:
        bad["line"] = {"deviation_signed": d_signed, "deviation_flipped": d_flip,
                       "expected_offset": signed.offset}
    if T.m > T.l and min_separation(rs) <= sep_tol * rs.scale:
        bad["simplicity"] = {"min_gap": min_separation(rs)}
    return TrialOutcome(dev, p, bad or None, tags)


def verify_line_preservation(T: FiniteDifferenceOperator, line_in: Line, trials: int = 100,
                             cfg: Optional[SolverConfig] = None, seed: int = 0, workers: int = 1,
                             ensemble: E.EnsembleConfig = E.EnsembleConfig()) -> Report:
    """Images of polynomials rooted on ``line_in`` are rooted on the predicted line, simply."""
    factor_into_shifts(T)        # raises NotUnitCircle for operators that cannot preserve lines
    predicted_lines(T, line_in)  # raises when the step is not normal to the line
    return run_trials("line", trial_line, trials, seed,
                      {"T": T, "line_in": line_in, "cfg": cfg, "ensemble": ensemble}, workers)


def trial_strip(rng, theta, h, r, simplicity_width=None, cfg=None,
                ensemble=E.EnsembleConfig(max_degree=10), tol=REALITY_TOL, sep_tol=SEPARATION_TOL):
    p, _ = E.strip_rooted(rng, r, ensemble)
    _, rs = _image(theta, h, p, cfg)
    if rs is None:
        return TrialOutcome(-math.inf, p, None)
    excess = strip_excess(rs, Strip.horizontal(r)) / rs.scale
    bad = {}
    if excess > tol:
        bad["containment"] = {"excess": excess}
    width = abs(h) / 2 if simplicity_width is None else simplicity_width
    simple_asserted = 2 * r <= width
    if simple_asserted and min_separation(rs) <= sep_tol * rs.scale:
        bad["simplicity"] = {"min_gap": min_separation(rs)}
    return TrialOutcome(excess, p, bad or None, {"simplicity_asserted": int(simple_asserted)})


def verify_strip_preservation(theta: float, h: float, r: float, trials: int = 100,
                              cfg: Optional[SolverConfig] = None, seed: int = 0, workers: int = 1,
                              simplicity_width: Optional[float] = None,
                              ensemble: E.EnsembleConfig = E.EnsembleConfig(max_degree=10)) -> Report:
    """Roots in ``|Im z| <= r`` stay there; simplicity checked while ``2r <= simplicity_width``.

    ``simplicity_width`` defaults to ``h/2``; raising it probes beyond the proven regime.
    """
    if h <= 0 or r < 0:
        raise ValueError("need h > 0 and r >= 0")
    return run_trials("strip", trial_strip, trials, seed,
                      {"theta": theta, "h": h, "r": r, "simplicity_width": simplicity_width,
                       "cfg": cfg, "ensemble": ensemble}, workers)


# ----------------------------------------------------- counts, interlacing
def trial_czd(rng, cfg=None, ensemble=E.EnsembleConfig(), reality_tol=REALITY_TOL):
    """The image never has more non-real roots than ``p`` (real step, any theta).

    Most trials use real polynomials mixing real roots and conjugate pairs, the
    case where the count can actually move; the rest have generic complex
    coefficients.
    """
    if rng.random() < 0.8:
        p, roots = E.mixed_real(rng, ensemble)
        kind = "real_mixed"
    else:
        p, roots = E.random_coefficients(rng, ensemble)
        roots = None
        kind = "complex_generic"
    theta = float(rng.uniform(0, 2 * math.pi))
    h = float(10 ** rng.uniform(-1, 1))
    if roots is None:
        before = count_nonreal(find_roots(p, cfg), reality_tol)
    else:
        before = sum(1 for z in roots if abs(complex(z).imag) > 0)
    _, rs = _image(theta, h, p, cfg)
    after = count_nonreal(rs, reality_tol) if rs is not None else 0
    witness = {"theta": theta, "h": h, "before": before, "after": after} if after > before else None
    return TrialOutcome(float(after - before), p, witness, {kind: 1})


def trial_self_interlacing(rng, cfg=None, ensemble=E.EnsembleConfig()):
    """Self-interlacing survives ``Delta_{0,h}``."""
    p, _ = E.self_interlacing(rng, ensemble)
    h = float(10 ** rng.uniform(-1, 1))
    q = delta_theta(0.0, h, p)
    before = is_self_interlacing(p, cfg)
    after = is_self_interlacing(q, cfg) if q.degree >= 1 else True
    witness = None if (before and after) else {"h": h, "input_si": before, "image_si": after}
    return TrialOutcome(0.0 if witness is None else 1.0, p, witness)


# ------------------------------------------------------------------- walsh
def trial_walsh(rng, cfg=None, ensemble=E.EnsembleConfig(max_degree=10), tol=REALITY_TOL,
                comm_tol=1e-11, residual_tol=1e-10):
    """Convolution identity for the operator, commutativity, and the mesh inequality."""
    bad = {}
    g, _ = E.random_coefficients(rng, E.EnsembleConfig(1, 12))
    theta = float(rng.uniform(0, 2 * math.pi))
    h = float(10 ** rng.uniform(-1, 1))
    resid = delta_as_convolution_residual(g, theta, h)
    if resid > residual_tol:
        bad["convolution_identity"] = {"theta": theta, "h": h, "residual": resid,
                                       "polynomial": g.to_json()}
    p, rp = E.hyperbolic(rng, ensemble)
    q, rq = E.hyperbolic(rng, replace(ensemble, min_degree=p.degree, max_degree=p.degree))
    pq, qp = walsh_convolve(p, q), walsh_convolve(q, p)
    comm = pq.coefficient_distance(qp) / pq.norm
    if comm > comm_tol:
        bad["commutativity"] = {"distance": comm}
    rs = find_roots(pq, cfg)
    m = mesh(rs)
    bound = max(_mesh_of_roots(rp), _mesh_of_roots(rq))
    viol = (bound - m) / rs.scale
    if viol > tol:
        bad["mesh"] = {"mesh": m, "bound": bound}
    if bad:
        bad["q"] = q.to_json()
    return TrialOutcome(max(viol, resid, comm), p, bad or None)


def trial_oishi(rng, cfg=None, ensemble=E.EnsembleConfig(max_degree=10), tol=REALITY_TOL):
    """Zeros of ``p [+] q`` are real and lie in ``[alpha + gamma, beta + delta]``."""
    p, _ = E.hyperbolic(rng, ensemble)
    q, _ = E.hyperbolic(rng, replace(ensemble, min_degree=p.degree, max_degree=p.degree))
    chk = verify_oishi_bounds(p, q, cfg, tol)
    witness = None if chk.ok else {"q": q.to_json(), "interval": chk.interval,
                                   "excess": chk.excess, "max_imag": chk.max_imag}
    return TrialOutcome(chk.excess, p, witness)


CHECKS = {
    "simplicity": trial_simplicity,
    "extremal": trial_extremal,
    "mesh": trial_mesh,
    "riesz": trial_riesz,
    "czd": trial_czd,
    "si": trial_self_interlacing,
    "walsh": trial_walsh,
    "oishi": trial_oishi,
}


def verify_ensemble(check: str, trials: int, seed: int = 0, workers: int = 1, **params) -> Report:
    """Run one of the ensemble checks in ``CHECKS``."""
    if check not in CHECKS:
        raise ValueError(f"unknown check {check!r}")
    return run_trials(check, CHECKS[check], trials, seed, params, workers)
