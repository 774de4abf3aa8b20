"""Feasibility of measure homogeneity across the two strata.

Two related questions are answered here:

* Given three of the four risks ``(p00, p10, p01)``, is there a fourth risk
  ``p11`` inside (0, 1) making a chosen measure equal across strata?  The
  candidate completion is unique and in closed form for each measure; the
  informative outcome is whether it lands inside the open interval.

* Given a 3-tuple of coordinates in some system (the effect-interaction
  coordinate dropped), does ANY risk table match those coordinates while a
  chosen interaction is exactly zero?  This is the per-point predicate the
  Monte Carlo volume estimator integrates.

Compatibility semantics per system:

``prob``     the 3-tuple is ``(p00, p10, p01)``; delegate to the completion.
``rr_op``    the 3-tuple is ``(alpha0, gamma0, gamma1)``.  Both targets are
             always compatible; the check constructs the witness table
             (log-RR target via the quadratic stratum solver with the
             interaction pinned to zero; log-OR target by splitting the
             stratum-1 log odds product s and the stratum-0 log odds ratio o
             into logit p11 = (s + o)/2, logit p10 = (s - o)/2).
``rr_eta``   the 3-tuple is ``(alpha0, e0, e1)``.  The log-RR target needs
             the contrast level of each stratum to be attainable at the
             shared relative risk; the log-OR target needs some stratum-0
             solution whose log odds ratio is under ``c1 - log 1.5``, the
             supremum attainable on the stratum-1 contrast level curve.

All checks are pure; the batch forms accept numpy arrays and make the exact
same decisions as the scalar forms (the scalar path calls them with
singleton arrays).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coords import (
    LOG_1P5,
    eta_attainable_vec,
    eta_min_log_odds_ratio_vec,
)
from .errors import DomainError, UnsupportedSystemError, UnsupportedTargetError
from .table import DEFAULT_EPS, MEASURES, _check_prob

#: Systems usable as a compatibility-query coordinate prior.
COMPATIBILITY_SYSTEMS = ("prob", "rr_op", "rr_eta")

#: Interaction targets supported per system ("rd" needs the probability scale).
SUPPORTED_TARGETS = {
    "prob": ("rd", "rr", "or"),
    "rr_op": ("rr", "or"),
    "rr_eta": ("rr", "or"),
}


@dataclass(frozen=True)
class HomogeneityQuery:
    """Three known risks plus the measure whose homogeneity is in question."""

    measure: str
    p00: float
    p10: float
    p01: float

    def __post_init__(self) -> None:
        if self.measure not in MEASURES:
            raise DomainError(f"measure must be one of {MEASURES}, got {self.measure!r}")
        for name in ("p00", "p10", "p01"):
            object.__setattr__(self, name, _check_prob(name, getattr(self, name), DEFAULT_EPS))


@dataclass(frozen=True)
class CompatibilityQuery:
    """A 3-point in a coordinate system plus the interaction pinned to zero."""

    system: str
    point: tuple[float, float, float]
    target: str

    def __post_init__(self) -> None:
        if self.system not in COMPATIBILITY_SYSTEMS:
            raise UnsupportedSystemError(
                f"system must be one of {COMPATIBILITY_SYSTEMS}, got {self.system!r}"
            )
        if self.target not in SUPPORTED_TARGETS[self.system]:
            raise UnsupportedTargetError(
                f"target {self.target!r} not supported for system {self.system!r}; "
                f"supported: {SUPPORTED_TARGETS[self.system]}"
            )
        point = tuple(float(x) for x in self.point)
        if len(point) != 3:
            raise DomainError(f"point must have 3 coordinates, got {len(point)}")
        if not all(math.isfinite(x) for x in point):
            raise DomainError(f"point must be finite, got {point!r}")
        object.__setattr__(self, "point", point)


def completion_candidate(q: HomogeneityQuery) -> float:
    """The unique p11 that equalizes the measure across strata (closed form).

    ``p10 + p01 - p00`` for the risk difference, ``p10 p01 / p00`` for the
    relative risk, and ``odds/(1 + odds)`` with ``odds = odds10 odds01 /
    odds00`` for the odds ratio (evaluated in logit space, which keeps the
    implied odds ratio accurate even when the completion sits within a few
    ulps of 1).  May fall outside (0, 1); feasibility is judged by
    `complete_table`.
    """
    if q.measure == "rd":
        return q.p10 + q.p01 - q.p00
    if q.measure == "rr":
        return q.p10 * q.p01 / q.p00
    logit = lambda p: math.log(p) - math.log1p(-p)
    x = logit(q.p10) + logit(q.p01) - logit(q.p00)
    if x >= 0.0:
        return 1.0 / (1.0 + math.exp(-x))
    z = math.exp(x)
    return z / (1.0 + z)


def complete_table(q: HomogeneityQuery) -> float | None:
    """The completion from `completion_candidate`, if strictly inside (0, 1).

    A candidate within the guard of 0 or 1 counts as infeasible
    (open-interval model).
    """
    candidate = completion_candidate(q)
    if DEFAULT_EPS < candidate < 1.0 - DEFAULT_EPS:
        return candidate
    return None


def is_feasible(q: HomogeneityQuery) -> bool:
    """True iff `complete_table` finds an interior completion."""
    return complete_table(q) is not None


# ---------------------------------------------------------------------------
# batch predicates, one per (system, target)
# ---------------------------------------------------------------------------


def _interior(x: np.ndarray) -> np.ndarray:
    return (x > DEFAULT_EPS) & (x < 1.0 - DEFAULT_EPS)


def _prob_batch(points: np.ndarray, target: str) -> np.ndarray:
    p00, p10, p01 = points[:, 0], points[:, 1], points[:, 2]
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if target == "rd":
            cand = p10 + p01 - p00
        elif target == "rr":
            cand = p10 * p01 / p00
        else:
            logit = lambda p: np.log(p) - np.log1p(-p)
            x = logit(p10) + logit(p01) - logit(p00)
            z = np.exp(-np.abs(x))
            cand = np.where(x >= 0.0, 1.0 / (1.0 + z), z / (1.0 + z))
        out = _interior(cand)
    out &= _interior(p00) & _interior(p10) & _interior(p01)
    return out


def _rr_op_batch(points: np.ndarray, target: str) -> np.ndarray:
    alpha0, gamma0, gamma1 = points[:, 0], points[:, 1], points[:, 2]
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        if target == "rr":
            ok = np.ones(points.shape[0], dtype=bool)
            # both strata share theta = alpha0; solve each stratum's quadratic
            for phi in (gamma0, gamma0 + gamma1):
                r = np.exp(alpha0)
                w = np.exp(phi)
                one_minus_r = -np.expm1(alpha0)
                disc = w * (w * one_minus_r * one_minus_r + 4.0 * r)
                p0 = 2.0 * w / (w * (1.0 + r) + np.sqrt(disc))
                p1 = r * p0
                ok &= _interior(p0) & _interior(p1)
            return ok
        # target "or": stratum 0 from (alpha0, gamma0); stratum 1 on its
        # odds-product level with the matching log odds ratio
        r = np.exp(alpha0)
        w = np.exp(gamma0)
        one_minus_r = -np.expm1(alpha0)
        disc = w * (w * one_minus_r * one_minus_r + 4.0 * r)
        p0 = 2.0 * w / (w * (1.0 + r) + np.sqrt(disc))
        p1 = r * p0
        log_or0 = (np.log(p1) - np.log1p(-p1)) - (np.log(p0) - np.log1p(-p0))
        s = gamma0 + gamma1
        with np.errstate(over="ignore"):
            p11 = 1.0 / (1.0 + np.exp(-(s + log_or0) / 2.0))
            p10 = 1.0 / (1.0 + np.exp(-(s - log_or0) / 2.0))
        return _interior(p0) & _interior(p1) & _interior(p10) & _interior(p11)


def _rr_eta_batch(points: np.ndarray, target: str) -> np.ndarray:
    alpha0, e0, e1 = points[:, 0], points[:, 1], points[:, 2]
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        c0 = np.exp(e0)
        c1 = np.exp(e0 + e1)
        if target == "rr":
            return eta_attainable_vec(alpha0, c0) & eta_attainable_vec(alpha0, c1)
        best = eta_min_log_odds_ratio_vec(alpha0, c0)
        return best < c1 - LOG_1P5


_BATCH = {"prob": _prob_batch, "rr_op": _rr_op_batch, "rr_eta": _rr_eta_batch}


def check_compatibility_batch(system: str, points: np.ndarray, target: str) -> np.ndarray:
    """Vectorized compatibility verdicts for an (n, 3) array of points."""
    if system not in COMPATIBILITY_SYSTEMS:
        raise UnsupportedSystemError(
            f"system must be one of {COMPATIBILITY_SYSTEMS}, got {system!r}"
        )
    if target not in SUPPORTED_TARGETS[system]:
        raise UnsupportedTargetError(
            f"target {target!r} not supported for system {system!r}"
        )
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[1] != 3:
        raise DomainError(f"points must have shape (n, 3), got {points.shape}")
    return _BATCH[system](points, target)


def check_compatibility(q: CompatibilityQuery) -> bool:
    """Whether a valid risk table matches the point with the interaction zero."""
    verdict = check_compatibility_batch(q.system, np.array([q.point]), q.target)
    return bool(verdict[0])
