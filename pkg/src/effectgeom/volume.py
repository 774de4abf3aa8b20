"""Monte Carlo compatibility probabilities under box priors on coordinates.

A `PriorSpec` puts an independent uniform distribution on a 3-tuple of
retained coordinates (the effect-interaction coordinate is dropped) in one of
the systems ``prob``, ``rr_op`` or ``rr_eta``.  `estimate` draws from the
box, applies the compatibility predicate for a chosen zero-interaction
target, and reports the fraction of compatible draws with its binomial
standard error.

Under the probability-scale unit cube the three probabilities also have
closed forms, exposed by `analytic_cube_probability`:

    rd  ->  2/3        P(0 < p10 + p01 - p00 < 1) = 1 - 1/6 - 1/6
    rr  ->  3/4        P(p10 p01 < p00)           = 1 - E[p10 p01]
    or  ->  1          the odds completion always lands inside (0, 1)

Estimates are bit-reproducible given (seed, n_samples) for any worker count;
see :mod:`effectgeom.mc`.  An estimate of exactly 1 reports a standard error
of 0 and carries ``n_compatible`` so that "no counterexample in n draws" is
distinguishable from a proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import mc
from .errors import DomainError, UnsupportedSystemError, UnsupportedTargetError
from .homogeneity import SUPPORTED_TARGETS, check_compatibility_batch

#: Default coordinate boxes.  The probability scale uses the unit cube; the
#: log-scale systems use moderate symmetric ranges around no effect.
DEFAULT_BOUNDS = {
    "prob": ((0.0, 1.0), (0.0, 1.0), (0.0, 1.0)),
    "rr_op": ((-2.0, 2.0), (-2.0, 2.0), (-2.0, 2.0)),
    "rr_eta": ((-1.5, 1.5), (-1.0, 1.0), (-1.0, 1.0)),
}

_COORD_NAMES = {
    "prob": ("p00", "p10", "p01"),
    "rr_op": ("alpha0", "gamma0", "gamma1"),
    "rr_eta": ("alpha0", "e0", "e1"),
}

Bounds = tuple[tuple[float, float], tuple[float, float], tuple[float, float]]


@dataclass(frozen=True)
class PriorSpec:
    """Uniform box prior on the retained coordinate 3-tuple of a system."""

    system: str
    n_samples: int
    seed: int
    bounds: Bounds | None = None

    def __post_init__(self) -> None:
        if self.system not in DEFAULT_BOUNDS:
            raise UnsupportedSystemError(
                f"system must be one of {tuple(DEFAULT_BOUNDS)}, got {self.system!r}"
            )
        if int(self.n_samples) < 1:
            raise DomainError(f"n_samples must be >= 1, got {self.n_samples}")
        object.__setattr__(self, "n_samples", int(self.n_samples))
        seed = int(self.seed)
        if not (0 <= seed < 2**64):
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed}")
        object.__setattr__(self, "seed", seed)
        bounds = self.bounds if self.bounds is not None else DEFAULT_BOUNDS[self.system]
        bounds = tuple((float(lo), float(hi)) for lo, hi in bounds)
        if len(bounds) != 3:
            raise DomainError(f"bounds must have 3 (low, high) pairs, got {len(bounds)}")
        for i, (lo, hi) in enumerate(bounds):
            name = _COORD_NAMES[self.system][i]
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise DomainError(f"bounds for {name} must satisfy low < high, got ({lo}, {hi})")
            if self.system == "prob" and not (0.0 <= lo and hi <= 1.0):
                raise DomainError(f"probability bounds for {name} must lie in [0, 1], got ({lo}, {hi})")
        object.__setattr__(self, "bounds", bounds)

    @property
    def coordinate_names(self) -> tuple[str, str, str]:
        return _COORD_NAMES[self.system]


@dataclass(frozen=True)
class VolumeEstimate:
    """Fraction of compatible draws with its Monte Carlo standard error."""

    probability: float
    std_error: float
    n_samples: int
    n_compatible: int


def _chunk_counts(prior: PriorSpec, target: str, index: int, size: int) -> np.ndarray:
    rng = mc.chunk_rng(prior.seed, index)
    u = rng.random((size, 3))
    lows = np.array([b[0] for b in prior.bounds])
    highs = np.array([b[1] for b in prior.bounds])
    points = lows + u * (highs - lows)
    ok = check_compatibility_batch(prior.system, points, target)
    return np.array([int(ok.sum())], dtype=np.int64)


def estimate(prior: PriorSpec, target: str, workers: int | None = None) -> VolumeEstimate:
    """Estimate the probability that the target interaction can be zeroed.

    Draws ``prior.n_samples`` points uniformly from the box, counts
    compatible ones, and returns the proportion with standard error
    ``sqrt(p(1-p)/n)``.  Identical specs give identical results for every
    worker count.
    """
    if target not in SUPPORTED_TARGETS[prior.system]:
        raise UnsupportedTargetError(
            f"target {target!r} not supported for system {prior.system!r}; "
            f"supported: {SUPPORTED_TARGETS[prior.system]}"
        )
    total = mc.run_chunked(_chunk_counts, (prior, target), prior.n_samples, workers)
    n_compatible = int(total[0])
    n = prior.n_samples
    p = n_compatible / n
    se = math.sqrt(p * (1.0 - p) / n)
    return VolumeEstimate(probability=p, std_error=se, n_samples=n, n_compatible=n_compatible)


def analytic_cube_probability(target: str) -> Fraction:
    """Exact compatibility probability under the unit-cube probability prior."""
    if target == "rd":
        return Fraction(2, 3)
    if target == "rr":
        return Fraction(3, 4)
    if target == "or":
        return Fraction(1, 1)
    raise UnsupportedTargetError(f"target must be one of ('rd', 'rr', 'or'), got {target!r}")


def is_unit_cube(prior: PriorSpec) -> bool:
    """Whether the prior is the probability-scale unit cube (analytic case)."""
    return prior.system == "prob" and all(b == (0.0, 1.0) for b in prior.bounds)
