"""Saturated coordinate systems for the 2x2 risk table.

Four alternative 4-parameter coordinate systems, each a different split into
an effect coordinate pair and a nuisance coordinate pair:

``poisson``    log baseline risk / log relative risk::

                   beta0  = log p00            alpha0 = log p01 - log p00
                   beta1  = log p10 - beta0    alpha1 = log p11 - log p10 - alpha0

``rr_op``      log odds product / log relative risk.  ``alpha0``/``alpha1``
               as above; ``gamma0`` is the log odds product of stratum 0 and
               ``gamma1`` the log odds-product ratio across strata.  Every
               real 4-tuple corresponds to exactly one table: the odds
               product is variation independent of the relative risk.

``logistic``   log odds / log odds ratio.  ``b0`` is the baseline log odds of
               stratum 0, ``b1`` the cross-stratum baseline log-odds shift,
               ``a0`` the log odds ratio of stratum 0 and ``a1`` the log
               odds-ratio interaction.  A bijection with all real 4-tuples.

``rr_eta``     log shifted-odds contrast / log relative risk.  ``e0`` is
               ``log eta`` of stratum 0 and ``e1`` the cross-stratum log-eta
               shift.  Inversion is set valued (eta is an absolute value) and
               can be empty: at fixed relative risk r > 1 the contrast is
               bounded below by a positive minimum, computed in closed form
               here (`eta_infimum`).

The ``poisson`` system is variation dependent: exponentiating can push a
risk past 1, in which case `from_poisson` raises ``OutOfDomainError`` naming
the offending cell.  That failure mode is the point of the whole exercise,
not an edge case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, OutOfDomainError
from .table import (
    DEFAULT_EPS,
    RiskTable,
    StratumPair,
    eta,
    odds_product,
    relative_risk,
)

#: Coordinate-system identifiers accepted by the CLI and the prior machinery.
SYSTEMS = ("prob", "poisson", "rr_op", "logistic", "rr_eta")

LOG_1P5 = math.log(1.5)

# Anchors for root bracketing, as fractions of the open parameter interval.
_U_LO = 1e-18
_U_HI_MARGIN = 1e-13
_BISECT_ITERS = 80


def _check_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class PoissonCoords:
    """Log-linear coordinates (log baseline risk, log relative risk)."""

    beta0: float
    beta1: float
    alpha0: float
    alpha1: float

    def __post_init__(self) -> None:
        for name in ("beta0", "beta1", "alpha0", "alpha1"):
            object.__setattr__(self, name, _check_finite(name, getattr(self, name)))


@dataclass(frozen=True)
class RrOpCoords:
    """Variation-independent coordinates (log relative risk, log odds product)."""

    alpha0: float
    alpha1: float
    gamma0: float
    gamma1: float

    def __post_init__(self) -> None:
        for name in ("alpha0", "alpha1", "gamma0", "gamma1"):
            object.__setattr__(self, name, _check_finite(name, getattr(self, name)))


@dataclass(frozen=True)
class LogisticCoords:
    """Saturated log-odds coordinates (log odds, log odds ratio)."""

    b0: float
    b1: float
    a0: float
    a1: float

    def __post_init__(self) -> None:
        for name in ("b0", "b1", "a0", "a1"):
            object.__setattr__(self, name, _check_finite(name, getattr(self, name)))


@dataclass(frozen=True)
class RrEtaCoords:
    """Coordinates (log relative risk, log shifted-odds contrast)."""

    alpha0: float
    alpha1: float
    e0: float
    e1: float

    def __post_init__(self) -> None:
        for name in ("alpha0", "alpha1", "e0", "e1"):
            object.__setattr__(self, name, _check_finite(name, getattr(self, name)))


@dataclass(frozen=True)
class StratumSolutionSet:
    """Finite set of stratum pairs, sorted by baseline risk.

    Entries are distinct to within 1e-9 in ``p0``.  Empty sets are a normal
    outcome (the requested contrast level is unattainable at that relative
    risk), not an error.
    """

    solutions: tuple[StratumPair, ...]

    def __len__(self) -> int:
        return len(self.solutions)

    def __iter__(self):
        return iter(self.solutions)

    def __bool__(self) -> bool:
        return bool(self.solutions)


# ---------------------------------------------------------------------------
# small numeric helpers
# ---------------------------------------------------------------------------


def _exp_or_inf(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def _logit(p: float) -> float:
    return math.log(p / (1.0 - p))


def _expit(x: float) -> float:
    # overflow-safe logistic
    if x >= 0.0:
        return 1.0 / (1.0 + math.exp(-x))
    z = math.exp(x)
    return z / (1.0 + z)


def _risk_from(component: str, value: float, eps: float = DEFAULT_EPS) -> float:
    if value >= 1.0 - eps:
        raise OutOfDomainError(component, value, ">= 1")
    if value <= eps:
        raise OutOfDomainError(component, value, "<= 0")
    return value


# ---------------------------------------------------------------------------
# poisson system
# ---------------------------------------------------------------------------


def to_poisson(t: RiskTable) -> PoissonCoords:
    """Forward map to log baseline-risk and log relative-risk coordinates."""
    beta0 = math.log(t.p00)
    beta1 = math.log(t.p10) - math.log(t.p00)
    alpha0 = math.log(t.p01) - math.log(t.p00)
    alpha1 = math.log(t.p11) - math.log(t.p10) - alpha0
    return PoissonCoords(beta0, beta1, alpha0, alpha1)


def from_poisson(c: PoissonCoords) -> RiskTable:
    """Invert the log-linear map; fails when an implied risk leaves (0, 1).

    Raises:
        OutOfDomainError: naming the first cell whose exponentiated risk is
            outside the open unit interval.  This variation dependence is a
            structural property of the system, not a numerical artifact.
    """
    cells = (
        ("p00", c.beta0),
        ("p01", c.beta0 + c.alpha0),
        ("p10", c.beta0 + c.beta1),
        ("p11", c.beta0 + c.beta1 + c.alpha0 + c.alpha1),
    )
    values = {name: _risk_from(name, _exp_or_inf(logp)) for name, logp in cells}
    return RiskTable(**values)


# ---------------------------------------------------------------------------
# rr_op system
# ---------------------------------------------------------------------------


def solve_stratum_from_rr_op(theta: float, phi: float) -> StratumPair:
    """Unique stratum pair with log relative risk theta and log odds product phi.

    With r = e^theta, w = e^phi and p1 = r p0, the odds-product equation is
    the quadratic

        r (1 - w) p0^2 + w (1 + r) p0 - w = 0 ,

    which has exactly one root in (0, min(1, 1/r)).  That root is always the
    smaller-magnitude one, computed cancellation-free as

        p0 = 2 w / ( w (1 + r) + sqrt(w [w (1 - r)^2 + 4 r]) ) ,

    where the discriminant form ``w [w (1-r)^2 + 4 r]`` is positive by
    construction (no subtraction).  The w = 1 degenerate (linear) case lands
    on the same formula: p0 = 1 / (1 + r).
    """
    theta = _check_finite("theta", theta)
    phi = _check_finite("phi", phi)
    r = math.exp(theta)
    w = math.exp(phi)
    one_minus_r = -math.expm1(theta)  # 1 - r without cancellation
    disc = w * (w * one_minus_r * one_minus_r + 4.0 * r)
    p0 = 2.0 * w / (w * (1.0 + r) + math.sqrt(disc))
    return StratumPair(p0, r * p0)


def to_rr_op(t: RiskTable) -> RrOpCoords:
    """Forward map to log relative-risk and log odds-product coordinates."""
    s0, s1 = t.stratum(0), t.stratum(1)
    alpha0 = math.log(relative_risk(s0))
    alpha1 = math.log(relative_risk(s1)) - alpha0
    gamma0 = math.log(odds_product(s0))
    gamma1 = math.log(odds_product(s1)) - gamma0
    return RrOpCoords(alpha0, alpha1, gamma0, gamma1)


def from_rr_op(c: RrOpCoords) -> RiskTable:
    """Invert stratum-wise; defined for every real 4-tuple."""
    s0 = solve_stratum_from_rr_op(c.alpha0, c.gamma0)
    s1 = solve_stratum_from_rr_op(c.alpha0 + c.alpha1, c.gamma0 + c.gamma1)
    return RiskTable.from_strata(s0, s1)


# ---------------------------------------------------------------------------
# logistic system
# ---------------------------------------------------------------------------


def to_logistic(t: RiskTable) -> LogisticCoords:
    """Forward map to saturated log-odds coordinates."""
    l00, l01 = _logit(t.p00), _logit(t.p01)
    l10, l11 = _logit(t.p10), _logit(t.p11)
    return LogisticCoords(
        b0=l00,
        b1=l10 - l00,
        a0=l01 - l00,
        a1=l11 - l10 - (l01 - l00),
    )


def from_logistic(c: LogisticCoords) -> RiskTable:
    """Invert via the logistic function; a bijection with real 4-tuples.

    In float arithmetic, coefficient sums beyond about +-27.6 produce risks
    outside the open-interval guard and raise ``OutOfDomainError``.
    """
    cells = (
        ("p00", c.b0),
        ("p01", c.b0 + c.a0),
        ("p10", c.b0 + c.b1),
        ("p11", c.b0 + c.b1 + c.a0 + c.a1),
    )
    values = {name: _risk_from(name, _expit(x)) for name, x in cells}
    return RiskTable(**values)


# ---------------------------------------------------------------------------
# rr_eta system: the signed contrast g and its exact inversion
# ---------------------------------------------------------------------------
#
# With p1 = r p0 the signed contrast is
#
#     g(p0; r) = log[(1 - p0)(r p0 + 0.5)] - log[(1 - r p0) p0]
#
# on the open interval (0, B), B = min(1, 1/r), and eta = |g|.
#
# Shape of g (all verifiable by elementary calculus; the derivative's
# numerator collapses to the quadratic  (r^2 - 1.5 r) p0^2 + r p0 - 0.5):
#
#   r < 1 : strictly decreasing, +inf -> -inf.  Every level is hit once per
#           sign branch, so eta attains all of (0, inf) and 0 itself at
#           p0 = 0.5 / (1.5 - r).
#   r = 1 : strictly decreasing, +inf -> log 1.5.  Infimum log 1.5, open.
#   r > 1 : +inf at both ends with a single interior minimum at
#           p0* = 1 / (r + sqrt(3 r (r - 1)))  (positive root of the
#           derivative quadratic, written in its stable form), so eta is
#           bounded below by m(r) = g(p0*) > log 1.5 and g = c has two
#           roots for c > m(r), one on each side of p0*.
#
# Consequently eta is NOT attainable below m(r) once r >= 1: the contrast is
# variation dependent on the relative risk in that regime.  `eta_infimum`
# and `eta_attainable` expose this boundary; the solvers below enumerate the
# complete root set exactly (one bisection per monotone piece).


def _g(p0: float, r: float) -> float:
    p1 = r * p0
    return math.log1p(-p0) + math.log(p1 + 0.5) - math.log1p(-p1) - math.log(p0)


def _g_vec(p0: np.ndarray, r: np.ndarray) -> np.ndarray:
    p1 = r * p0
    return np.log1p(-p0) + np.log(p1 + 0.5) - np.log1p(-p1) - np.log(p0)


def _interval_sup(r: float) -> float:
    return min(1.0, 1.0 / r)


def _anchor_lo(B: float, c: float) -> float:
    # far enough left that g > c there; adaptive for very large targets
    u = min(_U_LO, math.exp(-min(c + 3.0, 700.0)))
    return B * max(u, 1e-300)


def _anchor_hi(B: float) -> float:
    return B * (1.0 - _U_HI_MARGIN)


def _critical_point(r: float) -> float:
    # interior minimum of g for r > 1; stable root of the derivative quadratic
    return 1.0 / (r + math.sqrt(3.0 * r * (r - 1.0)))


def eta_infimum(theta: float) -> float:
    """Greatest lower bound of the shifted-odds contrast at fixed log RR.

    Zero for theta < 0 (attained), log 1.5 for theta = 0 (not attained), and
    the interior minimum m(r) = g(p0*) for theta > 0 (attained).
    """
    theta = _check_finite("theta", theta)
    if theta < 0.0:
        return 0.0
    if theta == 0.0:
        return LOG_1P5
    r = math.exp(theta)
    return _g(_critical_point(r), r)


def eta_attainable(theta: float, c: float) -> bool:
    """Whether some stratum pair has log RR ``theta`` and contrast ``c > 0``."""
    theta = _check_finite("theta", theta)
    if not c > 0.0:
        raise DomainError(f"contrast level must be > 0, got {c!r}")
    if theta < 0.0:
        return True
    if theta == 0.0:
        return c > LOG_1P5
    return c >= eta_infimum(theta)


def _bisect_g(r: float, target: float, lo: float, hi: float) -> float | None:
    """Root of g = target on [lo, hi], assuming g is monotone there.

    Returns None when the bracket does not straddle the target (level not
    attained on this piece, or only at float-unrepresentable endpoints).
    """
    glo, ghi = _g(lo, r), _g(hi, r)
    if not (min(glo, ghi) < target < max(glo, ghi)):
        return None
    increasing = ghi > glo
    for _ in range(_BISECT_ITERS):
        mid = 0.5 * (lo + hi)
        if (_g(mid, r) < target) == increasing:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def solve_stratum_from_rr_eta(theta: float, c: float) -> StratumSolutionSet:
    """All stratum pairs with log relative risk ``theta`` and contrast ``c``.

    Roots of g = +c and g = -c are enumerated exactly using the monotone
    structure of g (see the shape notes above): one bisection per sign branch
    when the contrast is monotone (r <= 1), and one per side of the interior
    minimum when r > 1.  Pairs whose baseline risk falls outside the
    open-interval guard are dropped.

    Raises:
        DomainError: if ``c <= 0`` (a log-scale coordinate never hits 0).
    """
    theta = _check_finite("theta", theta)
    if not (isinstance(c, (int, float)) and c > 0.0):
        raise DomainError(f"contrast level must be > 0, got {c!r}")
    if math.isinf(c):
        return StratumSolutionSet(())
    r = math.exp(theta)
    B = _interval_sup(r)
    hi = _anchor_hi(B)
    roots: list[float] = []
    if theta <= 0.0:
        for target in (c, -c):
            root = _bisect_g(r, target, _anchor_lo(B, c), hi)
            if root is not None:
                roots.append(root)
    else:
        p0s = _critical_point(r)
        m = _g(p0s, r)
        if c == m:
            roots.append(p0s)
        elif c > m:
            left = _bisect_g(r, c, _anchor_lo(B, c), p0s)
            right = _bisect_g(r, c, p0s, hi)
            roots.extend(p for p in (left, right) if p is not None)
    roots.sort()
    deduped: list[float] = []
    for p in roots:
        if not deduped or p - deduped[-1] > 1e-9:
            deduped.append(p)
    pairs = []
    for p0 in deduped:
        try:
            pairs.append(StratumPair(p0, r * p0))
        except DomainError:
            continue  # root exists but lies outside the open-interval guard
    return StratumSolutionSet(tuple(pairs))


def to_rr_eta(t: RiskTable) -> RrEtaCoords:
    """Forward map; undefined (raises) when a stratum contrast is exactly 0."""
    s0, s1 = t.stratum(0), t.stratum(1)
    eta0, eta1 = eta(s0), eta(s1)
    if eta0 <= 0.0:
        raise OutOfDomainError("eta0", eta0, "= 0 has no log coordinate")
    if eta1 <= 0.0:
        raise OutOfDomainError("eta1", eta1, "= 0 has no log coordinate")
    alpha0 = math.log(relative_risk(s0))
    alpha1 = math.log(relative_risk(s1)) - alpha0
    e0 = math.log(eta0)
    return RrEtaCoords(alpha0, alpha1, e0, math.log(eta1) - e0)


def from_rr_eta(c: RrEtaCoords) -> list[RiskTable]:
    """Every risk table matching the coordinates (possibly none).

    The Cartesian product of the two per-stratum solution sets, ordered by
    (p00, p10).  An empty list means at least one stratum's contrast level is
    unattainable at its implied relative risk.
    """
    c0 = _exp_or_inf(c.e0)
    c1 = _exp_or_inf(c.e0 + c.e1)
    if c0 == 0.0 or c1 == 0.0:  # log target underflowed past float range
        return []
    set0 = solve_stratum_from_rr_eta(c.alpha0, c0)
    if not set0:
        return []
    set1 = solve_stratum_from_rr_eta(c.alpha0 + c.alpha1, c1)
    return [RiskTable.from_strata(s0, s1) for s0 in set0 for s1 in set1]


# ---------------------------------------------------------------------------
# vectorized kernels (consumed by the volume estimator)
# ---------------------------------------------------------------------------


def eta_attainable_vec(theta: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Vectorized `eta_attainable` (identical decisions, element-wise)."""
    theta = np.asarray(theta, dtype=float)
    c = np.asarray(c, dtype=float)
    out = np.ones(theta.shape, dtype=bool)
    pos = theta > 0.0
    if pos.any():
        r = np.exp(theta[pos])
        p0s = 1.0 / (r + np.sqrt(3.0 * r * (r - 1.0)))
        out[pos] = c[pos] >= _g_vec(p0s, r)
    zero = theta == 0.0
    if zero.any():
        out[zero] = c[zero] > LOG_1P5
    return out


def _bisect_g_vec(
    r: np.ndarray, target: np.ndarray, lo: np.ndarray, hi: np.ndarray
) -> np.ndarray:
    """Vectorized monotone bisection; NaN where the bracket fails to straddle."""
    glo = _g_vec(lo, r)
    ghi = _g_vec(hi, r)
    valid = np.minimum(glo, ghi) < target
    valid &= target < np.maximum(glo, ghi)
    increasing = ghi > glo
    lo = lo.copy()
    hi = hi.copy()
    for _ in range(_BISECT_ITERS):
        mid = 0.5 * (lo + hi)
        move_lo = (_g_vec(mid, r) < target) == increasing
        lo = np.where(move_lo, mid, lo)
        hi = np.where(move_lo, hi, mid)
    root = 0.5 * (lo + hi)
    return np.where(valid, root, np.nan)


def _log_or_of_root(p0: np.ndarray, r: np.ndarray) -> np.ndarray:
    p1 = r * p0
    return (np.log(p1) - np.log1p(-p1)) - (np.log(p0) - np.log1p(-p0))


def eta_min_log_odds_ratio_vec(theta: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Smallest log odds ratio over the stratum pairs solving (theta, c).

    +inf where the solution set is empty.  Used by the compatibility batch
    check: the level curve of the contrast at level c1 attains exactly the
    log odds ratios below ``c1 - log 1.5``, so a match for a second stratum
    exists iff this minimum is under that bound.

    Only the roots that can realize the minimum are computed: for r > 1 the
    two roots share the +c branch and the left one (smaller treated risk)
    always has the smaller odds ratio.
    """
    theta = np.asarray(theta, dtype=float)
    c = np.asarray(c, dtype=float)
    n = theta.shape[0]
    r = np.exp(theta)
    B = np.minimum(1.0, 1.0 / r)
    lo = B * np.maximum(np.minimum(_U_LO, np.exp(-np.minimum(c + 3.0, 700.0))), 1e-300)
    hi = B * (1.0 - _U_HI_MARGIN)
    best = np.full(n, np.inf)

    dec = theta <= 0.0  # g monotone decreasing: one root per sign branch
    if dec.any():
        rd, cd, lod, hid = r[dec], c[dec], lo[dec], hi[dec]
        vals = np.full(rd.shape, np.inf)
        for sign in (1.0, -1.0):
            root = _bisect_g_vec(rd, sign * cd, lod, hid)
            ok = ~np.isnan(root)
            if ok.any():
                vals[ok] = np.minimum(vals[ok], _log_or_of_root(root[ok], rd[ok]))
        best[dec] = vals

    up = ~dec
    if up.any():
        ru, cu, lou = r[up], c[up], lo[up]
        p0s = 1.0 / (ru + np.sqrt(3.0 * ru * (ru - 1.0)))
        m = _g_vec(p0s, ru)
        vals = np.full(ru.shape, np.inf)
        at_min = cu == m
        if at_min.any():
            vals[at_min] = _log_or_of_root(p0s[at_min], ru[at_min])
        solvable = cu > m
        if solvable.any():
            root = _bisect_g_vec(ru[solvable], cu[solvable], lou[solvable], p0s[solvable])
            ok = ~np.isnan(root)
            sub = np.full(root.shape, np.inf)
            sub[ok] = _log_or_of_root(root[ok], ru[solvable][ok])
            vals[solvable] = sub
        best[up] = vals
    return best
