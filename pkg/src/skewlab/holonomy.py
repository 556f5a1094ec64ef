"""Stable/unstable holonomies as truncated limits, with diagnostics.

Non-linear holonomies are limits of (f^n_y)^{-1} o f^n_x along stable
pairs; linear holonomies are the analogous limits for the derivative
cocycle.  Unstable holonomies reuse the same code path on the inverted
dynamics.  Truncation stops once successive increments fall below the
query tolerance (two in a row for smooth families, where a single
increment can vanish by accident; one suffices for locally constant
families, which stabilize exactly).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import fiber_maps as fm
from .base_shift import distance, sample_sequence
from .errors import ConfigurationError, NonConvergenceError
from .rng import derive_seed
from .skew import random_fiber_point

_OVERFLOW_GUARD = 1e120


@dataclass
class BunchingReport:
    beta: float
    worst_margin: float
    satisfied: bool
    sample_counts: dict = field(default_factory=dict)


@dataclass
class ConvergenceDiagnostics:
    increments: list
    fitted_theta: float
    stopped_at: int
    holder_ratio: float = 0.0


@dataclass(frozen=True)
class HolonomyQuery:
    direction: str  # "stable" | "unstable"
    x: object
    y: object
    tol: float = 1e-9
    n_max: int = 256

    def __post_init__(self):
        if self.direction not in ("stable", "unstable"):
            raise ConfigurationError("direction must be 'stable' or 'unstable'")
        horizon = self.x.space.metric_horizon
        rng = range(0, horizon + 1) if self.direction == "stable" else range(-horizon, 1)
        for j in rng:
            if self.x.symbol(j) != self.y.symbol(j):
                raise ConfigurationError(
                    "query pair is not on the same local %s set (index %d)"
                    % (self.direction, j)
                )


def _fit_theta(increments):
    """Least-squares decay rate of the positive increments."""
    pts = [(n, math.log(v)) for n, v in enumerate(increments) if v > 0.0]
    if len(pts) < 2:
        return 0.0
    ns = np.array([p[0] for p in pts], dtype=float)
    ls = np.array([p[1] for p in pts], dtype=float)
    slope = np.polyfit(ns, ls, 1)[0]
    return float(math.exp(slope))


def fiber_bunching_margin(sys, beta, n_base=50, n_fiber=200, grid=16, seed=0):
    """Evaluate both fiber-bunching inequalities over sampled points.

    The margin at a base point is (sup_t ||Df(t)|| / sup_t m(Df(t))) *
    lambda^beta, and the analogue for the inverted generator; the report
    carries the worst margin over all samples.
    """
    if beta <= 0:
        raise ConfigurationError("beta must be positive")
    lam = sys.space.metric_base
    if sys.is_locally_constant:
        from .base_shift import BaseSequence

        words = sys.admissible_words(sys.family.depth)
        base_points = []
        for w in words:
            base_points.append(
                BaseSequence(sys.space, lambda j, w=w: w[min(max(j, 0), len(w) - 1)])
            )
    else:
        base_points = [
            sample_sequence(sys.space, sys.measure, derive_seed(seed, 23), i)
            for i in range(n_base)
        ]
    pts = [((i + 0.5) / grid, (j + 0.5) / grid) for i in range(grid) for j in range(grid)]
    pts.extend(random_fiber_point(seed, i, stream=3) for i in range(n_fiber))
    worst = 0.0
    for x in base_points:
        for f in (sys.fiber_map_at(x), sys.inverse_fiber_map_at(x)):
            sup_norm = 0.0
            sup_conorm = 0.0
            for t in pts:
                _, d = f.apply(t)
                sup_norm = max(sup_norm, fm.mat_norm(d))
                sup_conorm = max(sup_conorm, fm.mat_conorm(d))
            margin = sup_norm / sup_conorm * lam ** beta
            if margin > worst:
                worst = margin
    return BunchingReport(
        beta=beta,
        worst_margin=worst,
        satisfied=worst < 1.0,
        sample_counts={
            "n_base": len(base_points),
            "n_fiber": len(pts),
        },
    )


def _truncation_point(sys, x, y, t, n, backward):
    """h^n(t) = (f^n_y)^{-1}(f^n_x(t)), or the mirrored backward version."""
    s = t
    if backward:
        for k in range(n):
            s = sys.inverse_fiber_map_at(x.shift(-k - 1)).apply(s)[0]
        for k in range(n - 1, -1, -1):
            s = sys.fiber_map_at(y.shift(-k - 1)).apply(s)[0]
    else:
        for k in range(n):
            s = sys.fiber_map_at(x.shift(k)).apply(s)[0]
        for k in range(n - 1, -1, -1):
            s = sys.inverse_fiber_map_at(y.shift(k)).apply(s)[0]
    return s


def _stop_ok(sys, increments, tol):
    """Whether the truncation may stop at the latest increment.

    Locally constant truncations stabilize exactly, so the first sub-tol
    increment is final.  Smooth families can produce a spuriously tiny
    first increment (e.g. when a symmetry of the fiber point annihilates
    the leading parameter difference), so two consecutive sub-tol
    increments are required before trusting the limit.
    """
    if increments[-1] >= tol:
        return False
    if sys.is_locally_constant:
        return True
    return len(increments) >= 2 and increments[-2] < tol


def stable_holonomy_point(sys, q, t):
    """Holonomy image of a fiber point, with convergence diagnostics."""
    backward = q.direction == "unstable"
    increments = []
    prev = t
    for n in range(1, q.n_max + 1):
        cur = _truncation_point(sys, q.x, q.y, t, n, backward)
        inc = fm.torus_distance(cur, prev)
        increments.append(inc)
        prev = cur
        if _stop_ok(sys, increments, q.tol):
            diag = ConvergenceDiagnostics(increments, _fit_theta(increments), n)
            d = distance(q.x, q.y)
            if d > 0.0:
                diag.holder_ratio = fm.torus_distance(cur, t) / d ** sys.holder_alpha
            return cur, diag
    raise NonConvergenceError(
        "holonomy truncation did not converge within n_max=%d" % q.n_max,
        ConvergenceDiagnostics(increments, _fit_theta(increments), q.n_max),
    )


def linear_stable_holonomy(sys, q, t):
    """Linear holonomy at (x, t), paired with (y, h^s(t)) on the strong set."""
    t_y, _ = stable_holonomy_point(sys, q, t)
    backward = q.direction == "unstable"
    px = fm.IDENTITY
    py = fm.IDENTITY
    tx, ty = t, t_y
    prev = fm.IDENTITY
    increments = []
    best = None
    for n in range(1, q.n_max + 1):
        if backward:
            fx = sys.inverse_fiber_map_at(q.x.shift(-n))
            fy = sys.inverse_fiber_map_at(q.y.shift(-n))
        else:
            fx = sys.fiber_map_at(q.x.shift(n - 1))
            fy = sys.fiber_map_at(q.y.shift(n - 1))
        tx, dx = fx.apply(tx)
        ty, dy = fy.apply(ty)
        px = fm.mat_mul(dx, px)
        py = fm.mat_mul(dy, py)
        if fm.mat_norm(px) > _OVERFLOW_GUARD or fm.mat_norm(py) > _OVERFLOW_GUARD:
            break
        cur = fm.mat_mul(fm.mat_inv_det1(py), px)
        inc = fm.mat_sub_norm(cur, prev)
        increments.append(inc)
        prev = cur
        best = cur
        if _stop_ok(sys, increments, q.tol):
            diag = ConvergenceDiagnostics(increments, _fit_theta(increments), n)
            d = distance(q.x, q.y)
            if d > 0.0:
                diag.holder_ratio = (
                    fm.mat_sub_norm(cur, fm.IDENTITY) / d ** sys.holder_alpha
                )
            return cur, diag
    raise NonConvergenceError(
        "linear holonomy truncation did not converge within n_max=%d" % q.n_max,
        ConvergenceDiagnostics(increments, _fit_theta(increments), len(increments)),
    )


def unstable_holonomy_point(sys, q, t):
    if q.direction != "unstable":
        raise ConfigurationError("query direction must be 'unstable'")
    return stable_holonomy_point(sys, q, t)


def holonomy_cocycle_check(sys, q, t, envelope_constant=None):
    """Defect of the equivariance axiom plus any Holder-bound excess.

    The equivariance defect compares h^s over shifted pairs with the
    conjugated holonomy for j in {1, 2, 3}.  When an envelope constant is
    supplied (or fitted from the increments), the excess of
    d(h(t), t) <= L d(x, y)^alpha adds to the defect.
    """
    sign = -1 if q.direction == "unstable" else 1
    h_t, diag = stable_holonomy_point(sys, q, t)
    defect = 0.0
    point = t
    image = h_t
    for j in range(1, 4):
        if sign > 0:
            point = sys.fiber_map_at(q.x.shift(j - 1)).apply(point)[0]
            image = sys.fiber_map_at(q.y.shift(j - 1)).apply(image)[0]
        else:
            point = sys.inverse_fiber_map_at(q.x.shift(-j)).apply(point)[0]
            image = sys.inverse_fiber_map_at(q.y.shift(-j)).apply(image)[0]
        qj = HolonomyQuery(q.direction, q.x.shift(sign * j), q.y.shift(sign * j), q.tol, q.n_max)
        direct, _ = stable_holonomy_point(sys, qj, point)
        defect = max(defect, fm.torus_distance(direct, image))
    d = distance(q.x, q.y)
    if envelope_constant is None:
        head = [v for v in diag.increments[:3] if v > 0.0]
        theta = diag.fitted_theta
        if head and 0.0 < theta < 1.0 and d > 0.0:
            c = max(v / theta ** n for n, v in enumerate(head))
            envelope_constant = c / (1.0 - theta) / d ** sys.holder_alpha
    if envelope_constant is not None and d > 0.0:
        excess = fm.torus_distance(h_t, t) - envelope_constant * d ** sys.holder_alpha
        if excess > 0.0:
            defect += excess
    return defect


def strong_stable_contraction_rate(sys, q, t, n=20):
    """Fitted exponential rate of the fiber distance along the forward orbit.

    Only the initial decreasing segment above the truncation noise floor is
    fitted: once the distance reaches the holonomy tolerance, cocycle
    expansion amplifies the truncation error and the tail grows again.
    """
    t_y, _ = stable_holonomy_point(sys, q, t)
    sign = -1 if q.direction == "unstable" else 1
    dists = []
    a, b = t, t_y
    for k in range(n + 1):
        d = fm.torus_distance(a, b)
        if dists and (d >= dists[-1] or d < 100.0 * q.tol):
            break
        dists.append(d)
        if sign > 0:
            a = sys.fiber_map_at(q.x.shift(k)).apply(a)[0]
            b = sys.fiber_map_at(q.y.shift(k)).apply(b)[0]
        else:
            a = sys.inverse_fiber_map_at(q.x.shift(-k - 1)).apply(a)[0]
            b = sys.inverse_fiber_map_at(q.y.shift(-k - 1)).apply(b)[0]
    if len(dists) >= 4:
        dists = dists[1:]  # drop the transient step; fit the asymptotic rate
    pts = [(k, math.log(v)) for k, v in enumerate(dists) if v > 1e-14]
    if len(pts) < 2:
        return 0.0
    ks = np.array([p[0] for p in pts], dtype=float)
    ls = np.array([p[1] for p in pts], dtype=float)
    slope = np.polyfit(ks, ls, 1)[0]
    return float(math.exp(slope))
