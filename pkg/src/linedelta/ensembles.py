"""Random polynomial families used by the Monte-Carlo verifiers.

Every sampler takes a ``numpy.random.Generator`` and returns the polynomial
together with the roots it was built from.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .poly import Polynomial


@dataclass(frozen=True)
class EnsembleConfig:
    min_degree: int = 2
    max_degree: int = 12
    low: float = -3.0
    high: float = 3.0
    double_root_prob: float = 0.1
    # other roots keep this distance from a doubled one; closer neighbours let
    # coefficient rounding split the double root into a complex pair
    double_root_gap: float = 0.05


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for trial ``index`` of a run seeded with ``seed``."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(index)]))


def _degree(rng, cfg: EnsembleConfig) -> int:
    return int(rng.integers(cfg.min_degree, cfg.max_degree + 1))


def _abscissas(rng, n: int, cfg: EnsembleConfig) -> np.ndarray:
    """Uniform points on ``[low, high]``, sometimes with the first one doubled."""
    x = rng.uniform(cfg.low, cfg.high, size=n)
    if n >= 2 and rng.random() < cfg.double_root_prob:
        x[1] = x[0]
        for j in range(2, n):
            while abs(x[j] - x[0]) < cfg.double_root_gap:
                x[j] = rng.uniform(cfg.low, cfg.high)
    return x


def hyperbolic(rng, cfg: EnsembleConfig = EnsembleConfig()) -> Tuple[Polynomial, List[complex]]:
    """Real roots uniform on ``[low, high]``; some trials get one doubled root."""
    n = _degree(rng, cfg)
    x = _abscissas(rng, n, cfg)
    roots = sorted(float(v) for v in x)
    return Polynomial.from_roots(roots).realified(), roots


def line_rooted(rng, phi: float, offset: float, cfg: EnsembleConfig = EnsembleConfig()):
    """Roots ``a e^{i phi} + i offset e^{i phi}`` with ``a`` uniform on ``[low, high]``."""
    n = _degree(rng, cfg)
    a = _abscissas(rng, n, cfg)
    e = np.exp(1j * phi)
    roots = [complex((v + 1j * offset) * e) for v in np.sort(a)]
    lead = complex(np.exp(1j * rng.uniform(0, 2 * np.pi)))
    return Polynomial.from_roots(roots, lead), roots


def strip_rooted(rng, r: float, cfg: EnsembleConfig = EnsembleConfig()):
    """Complex roots with real part uniform on ``[low, high]`` and ``|Im| <= r``."""
    n = _degree(rng, cfg)
    roots = [complex(x, y) for x, y in zip(rng.uniform(cfg.low, cfg.high, n), rng.uniform(-r, r, n))]
    return Polynomial.from_roots(roots), roots


def mixed_real(rng, cfg: EnsembleConfig = EnsembleConfig(), min_imag: float = 0.1,
               max_imag: float = 2.0):
    """Real polynomial with a random split into real roots and conjugate pairs."""
    n = _degree(rng, cfg)
    pairs = int(rng.integers(0, n // 2 + 1))
    roots: List[complex] = [float(v) for v in rng.uniform(cfg.low, cfg.high, n - 2 * pairs)]
    for _ in range(pairs):
        z = complex(rng.uniform(cfg.low, cfg.high), rng.uniform(min_imag, max_imag))
        roots += [z, z.conjugate()]
    return Polynomial.from_roots(roots).realified(), roots


def self_interlacing(rng, cfg: EnsembleConfig = EnsembleConfig(), min_gap: float = 0.1,
                     max_gap: float = 1.0):
    """Distinct magnitudes whose signs alternate in magnitude order.

    Sorting the roots of ``p`` and ``p(-z)`` together then alternates between
    the two sets, which is exactly strict self-interlacing.
    """
    n = _degree(rng, cfg)
    mags = np.cumsum(rng.uniform(min_gap, max_gap, size=n))
    sign = 1 if rng.random() < 0.5 else -1
    roots = [float(sign * (-1) ** j * m) for j, m in enumerate(mags)]
    return Polynomial.from_roots(roots).realified(), sorted(roots)


def random_coefficients(rng, cfg: EnsembleConfig = EnsembleConfig(), complex_: bool = True):
    n = _degree(rng, cfg)
    c = rng.normal(size=n + 1)
    if complex_:
        c = c + 1j * rng.normal(size=n + 1)
    return Polynomial.from_coefficients(list(c)), None
