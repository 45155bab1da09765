"""Empirical estimation of the modulus of continuity.

All strategies produce lower bounds on the true modulus
``sup {|f(x)-f(y)| : |x-y| <= delta}`` that converge from below as the
budget grows.  The dense one-dimensional grid mixes a uniform mesh of step
``delta / step_divisor`` (budget permitting) with geometric clusters at
both interval ends, so logarithmic behaviour like ``delta |log delta|``
stays resolved down to very small ``delta``, and adds a ``+delta``-shifted
copy of every node so that pairs at exactly the target distance are always
present.  Radial functions on the ball reduce to the profile: for a radial
function the extremal pair lies on a single ray (an antipodal pair at radii
r1 + r2 <= delta is also a same-ray pair at distance |r1 - r2| <= delta),
and a seeded random-pair sweep cross-checks the reduction.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import InvalidParameterError
from .norms import DomainKind, DomainSpec, TestFunction

_GEOM_PER_DECADE = 24


class ModulusStrategy(enum.Enum):
    DENSE_GRID_1D = "dense-grid"
    RADIAL_PROFILE = "radial-profile"
    RANDOM_PAIRS = "random-pairs"


@dataclass
class ModulusEstimate:
    delta: float
    value: float
    strategy: ModulusStrategy
    pair_count: int


@njit(cache=True)
def _window_pair_gap(xs: np.ndarray, fs: np.ndarray, delta: float) -> float:
    """Exact max of |f_i - f_j| over sorted grid pairs with x_j - x_i <= delta."""
    n = xs.shape[0]
    qmax = np.empty(n, np.int64)
    qmin = np.empty(n, np.int64)
    hmax = tmax = hmin = tmin = 0
    left = 0
    best = 0.0
    for j in range(n):
        while tmax > hmax and fs[qmax[tmax - 1]] <= fs[j]:
            tmax -= 1
        qmax[tmax] = j
        tmax += 1
        while tmin > hmin and fs[qmin[tmin - 1]] >= fs[j]:
            tmin -= 1
        qmin[tmin] = j
        tmin += 1
        while xs[j] - xs[left] > delta:
            left += 1
        while qmax[hmax] < left:
            hmax += 1
        while qmin[hmin] < left:
            hmin += 1
        up = fs[qmax[hmax]] - fs[j]
        dn = fs[j] - fs[qmin[hmin]]
        if up > best:
            best = up
        if dn > best:
            best = dn
    return best


def _grid_nodes(a: float, b: float, delta: float, budget: int,
                step_divisor: int, focus: tuple[float, ...]) -> np.ndarray:
    span = b - a
    n_uniform = int(min(budget // 2, math.ceil(step_divisor * span / delta) + 1))
    n_uniform = max(n_uniform, 33)
    parts = [np.linspace(a, b, n_uniform)]

    floor = max(delta * 1e-3, span * 1e-15)
    decades = max(1.0, math.log10(span / floor))
    ks = np.arange(1, int(_GEOM_PER_DECADE * decades) + 1)
    offsets = span * np.exp(-ks * (math.log(10.0) / _GEOM_PER_DECADE))
    parts.append(a + offsets)
    parts.append(b - offsets)
    for x0 in focus:
        parts.append(x0 + offsets)
        parts.append(x0 - offsets)
        parts.append(np.array([x0]))
    parts.append(np.array([a, b, a + delta, b - delta]))

    xs = np.concatenate(parts)
    xs = xs[(xs >= a) & (xs <= b)]
    shifted = xs + delta
    xs = np.concatenate([xs, shifted[shifted <= b]])
    return np.unique(xs)


def _dense_grid_estimate(f: TestFunction, a: float, b: float, delta: float,
                         budget: int, step_divisor: int,
                         focus: tuple[float, ...]) -> tuple[float, int]:
    xs = _grid_nodes(a, b, delta, budget, step_divisor, focus)
    fs = np.asarray(f.value(xs), dtype=float)
    # tiny inflation keeps the x vs x+delta pairs inside the window despite
    # floating-point rounding of the shift
    val = float(_window_pair_gap(xs, fs, delta * (1.0 + 1e-12)))
    return val, len(xs)


def _profile_grid_estimate(profile, delta, budget, step_divisor, focus):
    fn = TestFunction(lambda r: profile(r))
    return _dense_grid_estimate(fn, 0.0, 1.0, delta, budget, step_divisor, focus)


def _random_pairs_estimate(f: TestFunction, D: DomainSpec, delta: float,
                           budget: int, seed: int) -> tuple[float, int]:
    rng = np.random.default_rng(seed)
    n = budget
    if D.is_interval:
        a, b = D.interval_bounds
        x = rng.uniform(a, b, n)
        r = rng.uniform(0.0, delta, n)
        sign = rng.choice(np.array([-1.0, 1.0]), n)
        y = np.clip(x + sign * r, a, b)
        vals = np.abs(np.asarray(f.value(x)) - np.asarray(f.value(y)))
        return float(np.max(vals)), n
    if D.kind is DomainKind.UNIT_BALL:
        d = D.dimension
        pts = rng.uniform(-1.0, 1.0, (2 * n, d))
        pts = pts[np.linalg.norm(pts, axis=1) <= 1.0][:n]
        dirs = rng.normal(size=(len(pts), d))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        other = pts + dirs * rng.uniform(0.0, delta, (len(pts), 1))
        keep = np.linalg.norm(other, axis=1) <= 1.0
        pts, other = pts[keep], other[keep]
        if not len(pts):
            return 0.0, 0
        vals = np.abs(np.asarray(f.value(pts)) - np.asarray(f.value(other)))
        return float(np.max(vals)), len(pts)
    raise InvalidParameterError("random pairs support interval and ball domains")


def empirical_modulus(f: TestFunction, D: DomainSpec, delta: float,
                      strategy: ModulusStrategy | None = None,
                      budget: int = 200_000, seed: int = 0,
                      step_divisor: int = 16,
                      focus: tuple[float, ...] = ()) -> ModulusEstimate:
    """Estimate the modulus of continuity of f at scale delta.

    The estimate never exceeds the true modulus; doubling the grid density
    or the budget can only increase it.
    """
    if not delta > 0.0:
        raise InvalidParameterError("delta must be positive")
    if budget < 1_000:
        raise InvalidParameterError("budget must be at least 1000 evaluations")

    if strategy is None:
        if D.is_interval:
            strategy = ModulusStrategy.DENSE_GRID_1D
        elif D.kind is DomainKind.UNIT_BALL and f.radial_profile is not None:
            strategy = ModulusStrategy.RADIAL_PROFILE
        else:
            strategy = ModulusStrategy.RANDOM_PAIRS

    if strategy is ModulusStrategy.DENSE_GRID_1D:
        if not D.is_interval:
            raise InvalidParameterError("dense grid needs an interval domain")
        val, count = _dense_grid_estimate(f, *D.interval_bounds, delta,
                                          budget, step_divisor, focus)
        return ModulusEstimate(delta, val, strategy, count)

    if strategy is ModulusStrategy.RADIAL_PROFILE:
        if D.kind is not DomainKind.UNIT_BALL or f.radial_profile is None:
            raise InvalidParameterError(
                "radial strategy needs a unit-ball domain and a radial profile")
        val, count = _profile_grid_estimate(f.radial_profile, delta,
                                            budget, step_divisor, focus)
        # random pairs in the full ball cross-check the ray reduction
        rv, rc = _random_pairs_estimate(f, D, delta, max(budget // 8, 1_000), seed)
        return ModulusEstimate(delta, max(val, rv), strategy, count + rc)

    if strategy is ModulusStrategy.RANDOM_PAIRS:
        val, count = _random_pairs_estimate(f, D, delta, budget, seed)
        return ModulusEstimate(delta, val, strategy, count)

    raise InvalidParameterError(f"unknown strategy {strategy!r}")


def piecewise_linear_modulus(breakpoints: np.ndarray, values: np.ndarray,
                             delta: float) -> float:
    """Exact modulus of a piecewise-linear function, from its breakpoints.

    The window maximum and minimum are piecewise linear in the window
    position, with breaks only where a window edge crosses a breakpoint, so
    scanning windows anchored at ``x_i`` and ``x_i - delta`` is exhaustive.
    """
    xs = np.asarray(breakpoints, dtype=float)
    ys = np.asarray(values, dtype=float)
    if xs.ndim != 1 or xs.shape != ys.shape or len(xs) < 2:
        raise InvalidParameterError("need matching 1-D breakpoint and value arrays")
    if np.any(np.diff(xs) <= 0):
        raise InvalidParameterError("breakpoints must be strictly increasing")
    a, b = xs[0], xs[-1]
    if delta >= b - a:
        return float(ys.max() - ys.min())

    def window_extrema(t: float) -> tuple[float, float]:
        t = min(max(t, a), b - delta)
        u = t + delta
        fe = np.interp([t, u], xs, ys)
        inside = ys[(xs > t) & (xs < u)]
        return (max(fe.max(), inside.max() if len(inside) else -np.inf),
                min(fe.min(), inside.min() if len(inside) else np.inf))

    best = 0.0
    anchors = np.concatenate([xs, xs - delta, [a, b - delta]])
    anchors = np.unique(anchors[(anchors >= a) & (anchors <= b - delta)])
    for t in anchors:
        hi, lo = window_extrema(float(t))
        best = max(best, hi - lo)
    return best
